#ifndef RMM_POPULARITY_HPP
#define RMM_POPULARITY_HPP

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "rmm/switching.hpp"

namespace rmm {

/// Votes of the applicants between two matchings of `inst`: how many prefer
/// m1 and how many prefer m2. Matched beats unmatched; otherwise lower rank
/// wins; equal ranks (ties) and both-unmatched contribute to neither side.
inline std::pair<int, int> vote_count(const PreferenceInstance& inst,
                                      const Matching& m1, const Matching& m2) {
  m1.validate(inst);
  m2.validate(inst);
  constexpr int kUnmatched = std::numeric_limits<int>::max();
  auto rank_in = [&](const Matching& m, int a) {
    int p = m.post_of(a);
    if (p < 0) return kUnmatched;
    if (inst.is_last_resort(p)) return kUnmatched;
    return *inst.rank_of(a, p);
  };
  int prefer1 = 0, prefer2 = 0;
  for (int a = 0; a < inst.num_applicants(); ++a) {
    int r1 = rank_in(m1, a);
    int r2 = rank_in(m2, a);
    prefer1 += r1 < r2;
    prefer2 += r2 < r1;
  }
  return {prefer1, prefer2};
}

/// Switching graph with weights squashed to their sign, pruned to
/// rank-maximal-pair arcs, plus one source/sink terminal pair per sink
/// component.
struct ReweightedGraph {
  struct Arc {
    int from;
    int to;
    int weight;                 // -1, 0, or +1 for post-post arcs; 0 terminals
    const SwitchingArc* origin;  // null for terminal arcs
  };

  int num_posts = 0;
  std::vector<Arc> arcs;
  // Parallel vectors over sink components: terminal vertex ids, numbered
  // from num_posts upward.
  std::vector<int> sources;
  std::vector<int> sinks;
  std::vector<int> component_of_terminal;  // switching-graph component id
  // One arbitrary source vertex per non-sink component (post id).
  std::vector<int> free_sources;

  int num_vertices() const {
    return num_posts + 2 * static_cast<int>(sources.size());
  }
};

inline ReweightedGraph build_reweighted(const SwitchingGraph& sg) {
  ReweightedGraph g;
  g.num_posts = sg.num_vertices();

  std::set<std::pair<int, int>> pairs = rmm_pair_set(sg);
  for (int p = 0; p < sg.num_vertices(); ++p)
    for (const SwitchingArc& arc : sg.arcs_from(p)) {
      if (!pairs.contains({arc.witness, arc.to})) continue;
      int sign = (arc.weight > 0) - (arc.weight < 0);
      g.arcs.push_back({arc.from, arc.to, sign, &arc});
    }

  std::vector<bool> comp_seen(sg.num_components(), false);
  int next_vertex = g.num_posts;
  for (int c = 0; c < sg.num_components(); ++c) {
    if (sg.component_kind(c) == ComponentKind::kSink) {
      int s = next_vertex++;
      int t = next_vertex++;
      g.sources.push_back(s);
      g.sinks.push_back(t);
      g.component_of_terminal.push_back(c);
      for (int p = 0; p < sg.num_vertices(); ++p) {
        if (sg.component_of(p) != c) continue;
        if (sg.is_sink(p))
          g.arcs.push_back({p, t, 0, nullptr});
        else if (sg.all_even(p))
          g.arcs.push_back({s, p, 0, nullptr});
      }
    } else if (!comp_seen[c]) {
      // Arbitrary source: first post of the component.
      for (int p = 0; p < sg.num_vertices(); ++p)
        if (sg.component_of(p) == c) {
          g.free_sources.push_back(p);
          break;
        }
      comp_seen[c] = true;
    }
  }
  return g;
}

/// Either the matching is popular among rank-maximal matchings, or a strictly
/// more popular rank-maximal matching exists and is reported with its switch.
struct PopularityVerdict {
  bool popular = true;
  std::optional<SwitchSequence> witness;
  std::optional<Matching> better;  // over the input instance's coordinates
  std::pair<int, int> tally{0, 0};  // (#prefer better, #prefer original)
};

namespace detail {

constexpr int kDistInf = std::numeric_limits<int>::max() / 2;

// Bellman-Ford relaxation rounds; returns a vertex still relaxable after
// |V| rounds (on a negative cycle's tail) or -1.
inline int bellman_ford(const ReweightedGraph& g, std::vector<int>& dist,
                        std::vector<int>& pred) {
  const int n = g.num_vertices();
  pred.assign(n, -1);
  for (int round = 0; round <= n; ++round) {
    int relaxed = -1;
    for (const auto& arc : g.arcs) {
      if (dist[arc.from] >= kDistInf) continue;
      if (dist[arc.from] + arc.weight < dist[arc.to]) {
        dist[arc.to] = dist[arc.from] + arc.weight;
        pred[arc.to] = arc.from;
        relaxed = arc.to;
      }
    }
    if (relaxed == -1) return -1;
    if (round == n) return relaxed;
  }
  return -1;
}

// Walks predecessor links n steps to land inside the cycle, then traces it.
inline std::vector<int> extract_cycle(const std::vector<int>& pred, int start) {
  int v = start;
  for (std::size_t i = 0; i < pred.size(); ++i) v = pred[v];
  std::vector<int> cycle;
  for (int u = v;; u = pred[u]) {
    cycle.push_back(u);
    if (u == v && cycle.size() > 1) break;
  }
  cycle.pop_back();                           // drop repeated start
  std::reverse(cycle.begin(), cycle.end());  // follow arc direction
  return cycle;
}

}  // namespace detail

/// Decides popularity of a rank-maximal matching among all rank-maximal
/// matchings (shortest-path search for a vote-negative switching path or
/// cycle in the re-weighted graph). Throws NotRankMaximal when `m` is not
/// rank-maximal.
inline PopularityVerdict check_popular(const PreferenceInstance& inst,
                                       const Matching& m) {
  auto [solved, trace] = solve(inst);
  (void)solved;
  SwitchingGraph sg = build_switching_graph(inst, m, trace);
  ReweightedGraph g = build_reweighted(sg);

  std::optional<SwitchSequence> witness;

  // Negative cycles anywhere: virtual source to every vertex.
  {
    std::vector<int> dist(g.num_vertices(), 0), pred;
    int tail = detail::bellman_ford(g, dist, pred);
    if (tail >= 0) {
      std::vector<int> cycle = detail::extract_cycle(pred, tail);
      witness = SwitchSequence{SwitchSequence::Kind::kCycle, cycle, 0};
    }
  }

  // Negative source-to-terminal paths per sink component.
  if (!witness) {
    for (std::size_t i = 0; i < g.sources.size(); ++i) {
      std::vector<int> dist(g.num_vertices(), detail::kDistInf), pred;
      dist[g.sources[i]] = 0;
      detail::bellman_ford(g, dist, pred);
      if (dist[g.sinks[i]] < 0) {
        std::vector<int> path;
        for (int v = g.sinks[i]; v >= 0; v = pred[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        // Strip the s_i and t_i terminals.
        path.erase(path.begin());
        path.pop_back();
        witness = SwitchSequence{SwitchSequence::Kind::kPath, path, 0};
        break;
      }
    }
  }

  PopularityVerdict verdict;
  if (!witness) return verdict;

  validate_sequence(sg, *witness);  // zero weight in the original graph
  Matching better_aug = apply_switch(sg, *witness);
  Matching better = inst.has_last_resorts()
                        ? better_aug
                        : strip_last_resorts(trace.augmented, inst, better_aug);
  Matching original = inst.has_last_resorts()
                          ? sg.matching()
                          : strip_last_resorts(trace.augmented, inst,
                                               sg.matching());
  auto tally = vote_count(inst, better, original);
  if (tally.first <= tally.second)
    throw InternalInconsistency("witness switch does not win the vote");

  verdict.popular = false;
  verdict.witness = std::move(*witness);
  verdict.better = std::move(better);
  verdict.tally = tally;
  return verdict;
}

}  // namespace rmm

#endif  // RMM_POPULARITY_HPP
