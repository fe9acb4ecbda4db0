#ifndef RMM_SOLVER_HPP
#define RMM_SOLVER_HPP

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rmm/decomposition.hpp"
#include "rmm/instance.hpp"

namespace rmm {

/// Why an edge was removed during the phase algorithm.
enum class DeletionRule {
  kHigherRankOnCritical,  // rank > i edge incident on O_i ∪ U_i
  kOddOdd,                // edge joining O_i to O_i ∪ U_i
};

struct DeletedEdge {
  int applicant;
  int post;
  int rank;
  int phase;
  DeletionRule rule;
};

/// State of one phase i: the graph G'_i in which M_i was computed, the
/// matching M_i, and the Even/Odd/Unreachable labels on G'_i.
struct PhaseRecord {
  int phase = 0;
  WorkGraph graph;
  Matching matching;
  EouLabels labels;
};

struct SolverTrace {
  PreferenceInstance augmented;     // instance with last resorts added
  std::vector<PhaseRecord> phases;  // one per rank 1..max_rank (incl. last-resort rank)
  WorkGraph reduced;                // final pruned graph G'
  std::vector<DeletedEdge> deleted;

  int num_phases() const { return static_cast<int>(phases.size()); }

  /// Posts even in every phase's labeling.
  std::vector<bool> all_even_posts() const {
    std::vector<bool> out(augmented.num_posts(), true);
    for (const auto& ph : phases)
      for (int p = 0; p < augmented.num_posts(); ++p)
        if (ph.labels.post[p] != VertexLabel::Even) out[p] = false;
    return out;
  }
};

struct SolveOptions {
  // Permutes edge insertion order; the resulting matching may differ but the
  // per-phase graphs and labels must not.
  std::optional<unsigned> tie_break_seed;
};

/// Phase algorithm for rank-maximal matchings. Adds last resorts when absent,
/// so the returned matching is always A-complete on the augmented instance.
inline std::pair<Matching, SolverTrace> solve(const PreferenceInstance& inst,
                                              const SolveOptions& opts = {}) {
  SolverTrace trace;
  trace.augmented = inst.has_last_resorts() ? inst : add_last_resorts(inst);
  const PreferenceInstance& aug = trace.augmented;
  const int num_ranks = aug.max_rank();

  std::vector<std::vector<std::pair<int, int>>> by_rank(num_ranks + 1);
  for (auto [a, p, r] : aug.edges()) by_rank[r].emplace_back(a, p);
  if (opts.tie_break_seed) {
    std::mt19937 rng(*opts.tie_break_seed);
    for (auto& bucket : by_rank) std::shuffle(bucket.begin(), bucket.end(), rng);
  }

  WorkGraph g(aug.num_applicants(), aug.num_posts());
  Matching m(aug.num_applicants(), aug.num_posts());
  std::vector<std::vector<bool>> applicant_critical;  // per phase
  std::vector<std::vector<bool>> post_critical;

  for (int i = 1; i <= num_ranks; ++i) {
    for (auto [a, p] : by_rank[i]) {
      bool dead = false;
      for (int j = 0; j < static_cast<int>(applicant_critical.size()); ++j) {
        if (applicant_critical[j][a] || post_critical[j][p]) {
          trace.deleted.push_back(
              {a, p, i, j + 1, DeletionRule::kHigherRankOnCritical});
          dead = true;
          break;
        }
      }
      if (!dead) g.add_edge(a, p, i);
    }

    m = maximum_matching(g, std::move(m));
    EouLabels labels = eou_labels(g, m);

    PhaseRecord rec;
    rec.phase = i;
    rec.graph = g;
    rec.matching = m;
    rec.labels = labels;
    trace.phases.push_back(std::move(rec));

    // Rule 3: drop edges joining an odd vertex to an odd or unreachable one.
    std::vector<std::tuple<int, int, int>> doomed;
    for (auto [a, p, r] : g.edges()) {
      bool a_odd = labels.applicant[a] == VertexLabel::Odd;
      bool p_odd = labels.post[p] == VertexLabel::Odd;
      bool a_crit = labels.applicant_critical(a);
      bool p_crit = labels.post_critical(p);
      if ((a_odd && p_crit) || (p_odd && a_crit)) doomed.emplace_back(a, p, r);
    }
    for (auto [a, p, r] : doomed) {
      g.remove_edge(a, p);
      trace.deleted.push_back({a, p, r, i, DeletionRule::kOddOdd});
    }

    std::vector<bool> ac(aug.num_applicants());
    std::vector<bool> pc(aug.num_posts());
    for (int a = 0; a < aug.num_applicants(); ++a)
      ac[a] = labels.applicant_critical(a);
    for (int p = 0; p < aug.num_posts(); ++p) pc[p] = labels.post_critical(p);
    applicant_critical.push_back(std::move(ac));
    post_critical.push_back(std::move(pc));
  }

  trace.reduced = std::move(g);
  return {std::move(m), std::move(trace)};
}

/// Independently re-checks the phase-algorithm invariants on a trace.
/// Returns human-readable violations; empty means the trace is consistent.
inline std::vector<std::string> verify_trace(const PreferenceInstance& inst,
                                             const SolverTrace& trace) {
  std::vector<std::string> violations;
  const PreferenceInstance& aug = trace.augmented;
  auto complain = [&](const std::string& s) { violations.push_back(s); };

  if (trace.num_phases() != aug.max_rank())
    complain("trace has " + std::to_string(trace.num_phases()) +
             " phases, expected " + std::to_string(aug.max_rank()));
  if (!inst.has_last_resorts() && aug.num_applicants() != inst.num_applicants())
    complain("augmented instance does not match input");

  Signature final_sig;
  if (!trace.phases.empty())
    final_sig = signature_of(aug, trace.phases.back().matching);

  for (int idx = 0; idx < trace.num_phases(); ++idx) {
    const PhaseRecord& ph = trace.phases[idx];
    const std::string tag = "phase " + std::to_string(ph.phase) + ": ";

    try {
      ph.matching.validate(aug);
    } catch (const InvalidMatching& e) {
      complain(tag + e.what());
      continue;
    }
    for (auto [a, p] : ph.matching.pairs())
      if (!ph.graph.has_edge(a, p))
        complain(tag + "matched pair (" + aug.applicant_id(a) + "," +
                 aug.post_id(p) + ") is not an edge of G'_i");

    {
      std::vector<int> dist;
      if (detail::hk_bfs(ph.graph, ph.matching, dist))
        complain(tag + "augmenting path exists: M_i is not maximum in G'_i");
    }

    // Structure of maximum matchings: |O| + |U|/2 = |M_i|.
    int odd = 0, unreachable = 0;
    auto tally = [&](const std::vector<VertexLabel>& side) {
      for (VertexLabel l : side) {
        odd += l == VertexLabel::Odd;
        unreachable += l == VertexLabel::Unreachable;
      }
    };
    tally(ph.labels.applicant);
    tally(ph.labels.post);
    if (odd + unreachable / 2 != ph.matching.size())
      complain(tag + "|O| + |U|/2 != |M_i|");

    // No Even-Even or Even-Unreachable edge in G'_i.
    for (auto [a, p, r] : ph.graph.edges()) {
      VertexLabel la = ph.labels.applicant[a];
      VertexLabel lp = ph.labels.post[p];
      bool even_even = la == VertexLabel::Even && lp == VertexLabel::Even;
      bool even_unreach =
          (la == VertexLabel::Even && lp == VertexLabel::Unreachable) ||
          (lp == VertexLabel::Even && la == VertexLabel::Unreachable);
      if (even_even || even_unreach)
        complain(tag + "forbidden " +
                 std::string(even_even ? "even-even" : "even-unreachable") +
                 " edge (" + aug.applicant_id(a) + "," + aug.post_id(p) + ")");
    }

    // I3: prefix of the final signature.
    Signature sig = signature_of(aug, ph.matching);
    for (int r = 1; r <= ph.phase; ++r)
      if (sig.at(r) != final_sig.at(r)) {
        complain(tag + "signature prefix differs from final signature at rank " +
                 std::to_string(r));
        break;
      }

    // Deletion rules applied exhaustively: check every later graph and the
    // reduced graph against this phase's labels.
    auto check_survivors = [&](const WorkGraph& later, const std::string& where) {
      for (auto [a, p, r] : later.edges()) {
        if (r > ph.phase && (ph.labels.applicant_critical(a) ||
                             ph.labels.post_critical(p)))
          complain(tag + "rank-" + std::to_string(r) + " edge (" +
                   aug.applicant_id(a) + "," + aug.post_id(p) +
                   ") touches O∪U but survives in " + where);
        bool a_odd = ph.labels.applicant[a] == VertexLabel::Odd;
        bool p_odd = ph.labels.post[p] == VertexLabel::Odd;
        if ((a_odd && ph.labels.post_critical(p)) ||
            (p_odd && ph.labels.applicant_critical(a)))
          complain(tag + "odd-odd/odd-unreachable edge (" + aug.applicant_id(a) +
                   "," + aug.post_id(p) + ") survives in " + where);
      }
    };
    for (int later = idx + 1; later < trace.num_phases(); ++later)
      check_survivors(trace.phases[later].graph,
                      "G'_" + std::to_string(trace.phases[later].phase));
    check_survivors(trace.reduced, "reduced graph");
  }

  return violations;
}

/// Convenience: rank-maximal matching restricted to the real posts of `inst`.
inline Matching solve_restricted(const PreferenceInstance& inst) {
  auto [m, trace] = solve(inst);
  if (inst.has_last_resorts()) return m;
  return strip_last_resorts(trace.augmented, inst, m);
}

}  // namespace rmm

#endif  // RMM_SOLVER_HPP
