#ifndef RMM_SWITCHING_HPP
#define RMM_SWITCHING_HPP

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmm/solver.hpp"

namespace rmm {

class NotRankMaximal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SwitchingArc {
  int from;     // post holding the witness applicant under M
  int to;       // alternative post of the witness in the reduced graph
  int weight;   // rank(a,to) - rank(a,from)
  int witness;  // applicant a with M(a) = from
};

enum class ComponentKind { kSink, kNonSink };

/// Completes `m` (given over `original`) to an A-complete matching on the
/// augmented instance by sending unmatched applicants to their last resorts.
inline Matching complete_matching(const PreferenceInstance& augmented,
                                  const PreferenceInstance& original,
                                  const Matching& m) {
  Matching out(augmented.num_applicants(), augmented.num_posts());
  for (auto [a, p] : m.pairs()) {
    auto aa = augmented.applicant_index(original.applicant_id(a));
    auto ap = augmented.post_index(original.post_id(p));
    if (!aa || !ap) throw InvalidMatching("matching does not fit instance");
    out.match(*aa, *ap);
  }
  for (int a = 0; a < augmented.num_applicants(); ++a)
    if (!out.applicant_matched(a)) {
      auto lr = augmented.post_index(last_resort_id(augmented.applicant_id(a)));
      if (!lr) throw InvalidMatching("augmented instance lacks last resorts");
      out.match(a, *lr);
    }
  return out;
}

/// Directed weighted graph on the posts of the reduced graph, relative to a
/// rank-maximal matching. Immutable after construction.
class SwitchingGraph {
 public:
  SwitchingGraph(const SolverTrace& trace, Matching matching)
      : trace_(&trace), matching_(std::move(matching)) {
    const PreferenceInstance& aug = trace.augmented;
    const int np = aug.num_posts();
    out_.resize(np);
    in_.resize(np);

    // Reject a matching whose signature differs from the solver's.
    Signature ours = signature_of(aug, matching_);
    Signature best = signature_of(aug, trace.phases.back().matching);
    if (compare_signatures(ours, best) != std::strong_ordering::equal)
      throw NotRankMaximal("matching has signature " + ours.to_string() +
                           ", rank-maximal signature is " + best.to_string());
    for (auto [a, p] : matching_.pairs())
      if (!trace.reduced.has_edge(a, p))
        throw NotRankMaximal("matched edge (" + aug.applicant_id(a) + "," +
                             aug.post_id(p) + ") is outside the reduced graph");

    all_even_ = trace.all_even_posts();

    for (int pi = 0; pi < np; ++pi) {
      int a = matching_.applicant_of(pi);
      if (a < 0) continue;
      int rank_from = *aug.rank_of(a, pi);
      for (const auto& e : trace.reduced.neighbors_of_applicant(a)) {
        if (e.to == pi) continue;
        SwitchingArc arc{pi, e.to, e.rank - rank_from, a};
        out_[pi].push_back(arc);
        in_[e.to].push_back(arc);
      }
    }

    is_sink_.resize(np);
    for (int p = 0; p < np; ++p)
      is_sink_[p] = out_[p].empty() && all_even_[p];
    for (int p = 0; p < np; ++p)
      if (!matching_.post_matched(p) && !is_sink_[p])
        throw InternalInconsistency("unmatched post " + aug.post_id(p) +
                                    " is not a sink");

    build_components();
  }

  const PreferenceInstance& instance() const { return trace_->augmented; }
  const SolverTrace& trace() const { return *trace_; }
  const Matching& matching() const { return matching_; }
  int num_vertices() const { return static_cast<int>(out_.size()); }
  const std::vector<SwitchingArc>& arcs_from(int p) const { return out_[p]; }
  const std::vector<SwitchingArc>& arcs_into(int p) const { return in_[p]; }
  bool is_sink(int p) const { return is_sink_[p]; }
  bool all_even(int p) const { return all_even_[p]; }
  int component_of(int p) const { return component_id_[p]; }
  int num_components() const { return static_cast<int>(component_kind_.size()); }
  ComponentKind component_kind(int c) const { return component_kind_[c]; }

  const SwitchingArc* find_arc(int from, int to) const {
    for (const auto& arc : out_[from])
      if (arc.to == to) return &arc;
    return nullptr;
  }

  std::vector<SwitchingArc> arcs() const {
    std::vector<SwitchingArc> all;
    for (const auto& bucket : out_)
      all.insert(all.end(), bucket.begin(), bucket.end());
    return all;
  }

  /// Strongly connected components (Tarjan), as an id per vertex.
  std::vector<int> strongly_connected_components() const {
    const int n = num_vertices();
    std::vector<int> index(n, -1), low(n, 0), scc(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0, next_scc = 0;

    // Iterative Tarjan: frame = (vertex, next arc position).
    std::vector<std::pair<int, std::size_t>> frames;
    for (int root = 0; root < n; ++root) {
      if (index[root] != -1) continue;
      frames.emplace_back(root, 0);
      while (!frames.empty()) {
        auto& [v, pos] = frames.back();
        if (pos == 0) {
          index[v] = low[v] = next_index++;
          stack.push_back(v);
          on_stack[v] = true;
        }
        bool descended = false;
        while (pos < out_[v].size()) {
          int w = out_[v][pos].to;
          ++pos;
          if (index[w] == -1) {
            frames.emplace_back(w, 0);
            descended = true;
            break;
          }
          if (on_stack[w]) low[v] = std::min(low[v], index[w]);
        }
        if (descended) continue;
        if (low[v] == index[v]) {
          for (;;) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            scc[w] = next_scc;
            if (w == v) break;
          }
          ++next_scc;
        }
        int finished = v;
        frames.pop_back();
        if (!frames.empty()) {
          int parent = frames.back().first;
          low[parent] = std::min(low[parent], low[finished]);
        }
      }
    }
    return scc;
  }

  /// Vertices reachable from any all-even post (forward, including sources).
  std::vector<bool> reachable_from_all_even() const {
    std::vector<bool> seen(num_vertices(), false);
    std::deque<int> queue;
    for (int p = 0; p < num_vertices(); ++p)
      if (all_even_[p]) {
        seen[p] = true;
        queue.push_back(p);
      }
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (const auto& arc : out_[v])
        if (!seen[arc.to]) {
          seen[arc.to] = true;
          queue.push_back(arc.to);
        }
    }
    return seen;
  }

  /// Vertices with a directed path to some sink (including the sinks).
  std::vector<bool> can_reach_sink() const {
    std::vector<bool> seen(num_vertices(), false);
    std::deque<int> queue;
    for (int p = 0; p < num_vertices(); ++p)
      if (is_sink_[p]) {
        seen[p] = true;
        queue.push_back(p);
      }
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (const auto& arc : in_[v])
        if (!seen[arc.from]) {
          seen[arc.from] = true;
          queue.push_back(arc.from);
        }
    }
    return seen;
  }

 private:
  void build_components() {
    const int n = num_vertices();
    component_id_.assign(n, -1);
    int next = 0;
    for (int start = 0; start < n; ++start) {
      if (component_id_[start] != -1) continue;
      int c = next++;
      std::deque<int> queue{start};
      component_id_[start] = c;
      while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        auto visit = [&](int w) {
          if (component_id_[w] == -1) {
            component_id_[w] = c;
            queue.push_back(w);
          }
        };
        for (const auto& arc : out_[v]) visit(arc.to);
        for (const auto& arc : in_[v]) visit(arc.from);
      }
    }
    component_kind_.assign(next, ComponentKind::kNonSink);
    for (int p = 0; p < n; ++p)
      if (is_sink_[p]) component_kind_[component_id_[p]] = ComponentKind::kSink;
  }

  const SolverTrace* trace_;
  Matching matching_;
  std::vector<std::vector<SwitchingArc>> out_;
  std::vector<std::vector<SwitchingArc>> in_;
  std::vector<bool> is_sink_;
  std::vector<bool> all_even_;
  std::vector<int> component_id_;
  std::vector<ComponentKind> component_kind_;
};

/// Builds the switching graph for a rank-maximal matching `m` of `inst`.
/// `m` may be given over `inst` (unmatched applicants are sent to their
/// last resorts) or over the augmented instance directly.
inline SwitchingGraph build_switching_graph(const PreferenceInstance& inst,
                                            const Matching& m,
                                            const SolverTrace& trace) {
  Matching full = inst.has_last_resorts() ||
                          m.num_post_slots() == trace.augmented.num_posts()
                      ? m
                      : complete_matching(trace.augmented, inst, m);
  return SwitchingGraph(trace, std::move(full));
}

/// Component labeling with a consistency check: a component containing a
/// sink must consist of final-phase even posts, one without of unreachable
/// posts.
struct ComponentLabeling {
  std::vector<int> component_of;
  std::vector<ComponentKind> kind;
};

inline ComponentLabeling classify_components(const SwitchingGraph& sg) {
  ComponentLabeling out;
  out.component_of.resize(sg.num_vertices());
  for (int p = 0; p < sg.num_vertices(); ++p)
    out.component_of[p] = sg.component_of(p);
  out.kind.resize(sg.num_components());
  for (int c = 0; c < sg.num_components(); ++c) out.kind[c] = sg.component_kind(c);

  const EouLabels& last = sg.trace().phases.back().labels;
  for (int p = 0; p < sg.num_vertices(); ++p) {
    bool in_sink_comp = out.kind[out.component_of[p]] == ComponentKind::kSink;
    bool even_last = last.post[p] == VertexLabel::Even;
    bool unreach_last = last.post[p] == VertexLabel::Unreachable;
    if (in_sink_comp != even_last || (!in_sink_comp && !unreach_last))
      throw InternalInconsistency(
          "component kind of post " + sg.instance().post_id(p) +
          " disagrees with the final-phase labels");
  }
  return out;
}

struct SwitchSequence {
  enum class Kind { kPath, kCycle };
  Kind kind;
  std::vector<int> posts;  // a cycle implicitly closes back to posts.front()
  int total_weight = 0;
};

/// Checks that seq is a switching sequence of sg; throws otherwise.
inline void validate_sequence(const SwitchingGraph& sg,
                              const SwitchSequence& seq) {
  if (seq.posts.empty()) throw std::invalid_argument("empty switch sequence");
  int weight = 0;
  auto step = [&](int u, int v) {
    const SwitchingArc* arc = sg.find_arc(u, v);
    if (!arc)
      throw std::invalid_argument("no switching-graph arc " +
                                  sg.instance().post_id(u) + " -> " +
                                  sg.instance().post_id(v));
    weight += arc->weight;
  };
  for (std::size_t i = 0; i + 1 < seq.posts.size(); ++i)
    step(seq.posts[i], seq.posts[i + 1]);
  if (seq.kind == SwitchSequence::Kind::kCycle) {
    if (seq.posts.size() < 2)
      throw std::invalid_argument("cycle must have at least two posts");
    step(seq.posts.back(), seq.posts.front());
  } else if (!sg.is_sink(seq.posts.back())) {
    throw std::invalid_argument("switching path must end at a sink");
  }
  if (weight != 0)
    throw std::invalid_argument("sequence has nonzero weight " +
                                std::to_string(weight));
}

/// Applies a switching path or cycle: each matched applicant along the
/// sequence moves one post forward.
inline Matching apply_switch(const SwitchingGraph& sg,
                             const SwitchSequence& seq) {
  validate_sequence(sg, seq);
  const Matching& m = sg.matching();
  Matching out = m;
  const auto& posts = seq.posts;
  std::size_t movers = seq.kind == SwitchSequence::Kind::kCycle
                           ? posts.size()
                           : posts.size() - 1;
  for (std::size_t i = 0; i < movers; ++i) out.unmatch(m.applicant_of(posts[i]));
  for (std::size_t i = 0; i < movers; ++i) {
    int a = m.applicant_of(posts[i]);
    out.match(a, posts[(i + 1) % posts.size()]);
  }
  return out;
}

/// Rank-maximal pairs in augmented coordinates: matched pairs, pairs on a
/// switching cycle (strongly connected component arcs), and pairs on a
/// switching path (arc reachable from an all-even post whose head reaches a
/// sink).
inline std::set<std::pair<int, int>> rmm_pair_set(const SwitchingGraph& sg) {
  std::set<std::pair<int, int>> pairs;
  for (auto [a, p] : sg.matching().pairs()) pairs.emplace(a, p);

  std::vector<int> scc = sg.strongly_connected_components();
  std::vector<bool> from_even = sg.reachable_from_all_even();
  std::vector<bool> to_sink = sg.can_reach_sink();
  for (const SwitchingArc& arc : sg.arcs()) {
    bool on_cycle = scc[arc.from] == scc[arc.to];
    bool on_switching_path = from_even[arc.from] && to_sink[arc.to];
    if (on_cycle || on_switching_path) pairs.emplace(arc.witness, arc.to);
  }
  return pairs;
}

/// All rank-maximal pairs of `inst`, as (applicant, post) index pairs over
/// `inst` itself (last-resort pairs are filtered out for an un-augmented
/// input).
inline std::set<std::pair<int, int>> rmm_pairs(const PreferenceInstance& inst) {
  auto [m, trace] = solve(inst);
  const PreferenceInstance& aug = trace.augmented;
  SwitchingGraph sg(trace, m);
  std::set<std::pair<int, int>> pairs = rmm_pair_set(sg);

  if (inst.has_last_resorts()) return pairs;
  std::set<std::pair<int, int>> out;
  for (auto [a, p] : pairs) {
    if (aug.is_last_resort(p)) continue;
    out.emplace(*inst.applicant_index(aug.applicant_id(a)),
                *inst.post_index(aug.post_id(p)));
  }
  return out;
}

namespace detail {

// All simple directed cycles, canonicalized to start at their smallest
// vertex. Bounded by `cap`; exceeding it throws.
inline std::vector<SwitchSequence> simple_cycles(const SwitchingGraph& sg,
                                                 std::size_t cap) {
  std::vector<SwitchSequence> cycles;
  const int n = sg.num_vertices();
  std::vector<bool> on_path(n, false);
  std::vector<int> path;
  int weight = 0;

  auto dfs = [&](auto&& self, int root, int v) -> void {
    on_path[v] = true;
    path.push_back(v);
    for (const auto& arc : sg.arcs_from(v)) {
      if (arc.to == root) {
        if (cycles.size() >= cap)
          throw std::length_error("switching-cycle cap exceeded");
        cycles.push_back(SwitchSequence{SwitchSequence::Kind::kCycle, path,
                                        weight + arc.weight});
      } else if (arc.to > root && !on_path[arc.to]) {
        weight += arc.weight;
        self(self, root, arc.to);
        weight -= arc.weight;
      }
    }
    path.pop_back();
    on_path[v] = false;
  };
  for (int root = 0; root < n; ++root) dfs(dfs, root, root);
  return cycles;
}

// All simple zero-weight paths from an all-even post to a sink.
inline std::vector<SwitchSequence> simple_switching_paths(
    const SwitchingGraph& sg, std::size_t cap) {
  std::vector<SwitchSequence> found;
  const int n = sg.num_vertices();
  std::vector<bool> on_path(n, false);
  std::vector<int> path;
  int weight = 0;

  auto dfs = [&](auto&& self, int v) -> void {
    on_path[v] = true;
    path.push_back(v);
    if (sg.is_sink(v) && path.size() > 1) {
      if (weight != 0)
        throw InternalInconsistency(
            "path from an all-even post to a sink has nonzero weight");
      if (found.size() >= cap)
        throw std::length_error("switching-path cap exceeded");
      found.push_back(SwitchSequence{SwitchSequence::Kind::kPath, path, weight});
    }
    for (const auto& arc : sg.arcs_from(v)) {
      if (on_path[arc.to]) continue;
      weight += arc.weight;
      self(self, arc.to);
      weight -= arc.weight;
    }
    path.pop_back();
    on_path[v] = false;
  };
  for (int p = 0; p < n; ++p)
    if (sg.all_even(p) && !sg.is_sink(p)) dfs(dfs, p);
  return found;
}

}  // namespace detail

struct EnumerateResult {
  std::vector<Matching> matchings;  // over the input instance's coordinates
  bool truncated = false;
};

struct EnumerateOptions {
  std::size_t sequence_cap = 1u << 20;  // per-matching path/cycle budget
};

/// Breadth-first closure under single switching paths and cycles, starting
/// from the solver's matching. Complete when not truncated.
inline EnumerateResult enumerate_rmms(const PreferenceInstance& inst,
                                      std::size_t limit,
                                      const EnumerateOptions& opts = {}) {
  if (limit == 0) throw std::invalid_argument("limit must be positive");
  auto [m0, trace] = solve(inst);
  const PreferenceInstance& aug = trace.augmented;

  auto key_of = [&](const Matching& m) {
    std::vector<int> key(aug.num_applicants());
    for (int a = 0; a < aug.num_applicants(); ++a) key[a] = m.post_of(a);
    return key;
  };

  std::set<std::vector<int>> seen;
  std::deque<Matching> queue;
  std::vector<Matching> accepted;
  bool truncated = false;

  seen.insert(key_of(m0));
  queue.push_back(m0);
  accepted.push_back(m0);

  while (!queue.empty() && !truncated) {
    Matching m = std::move(queue.front());
    queue.pop_front();
    SwitchingGraph sg(trace, m);

    std::vector<SwitchSequence> moves = detail::simple_cycles(sg, opts.sequence_cap);
    auto paths = detail::simple_switching_paths(sg, opts.sequence_cap);
    moves.insert(moves.end(), paths.begin(), paths.end());

    for (const SwitchSequence& seq : moves) {
      Matching next = apply_switch(sg, seq);
      if (!seen.insert(key_of(next)).second) continue;
      if (accepted.size() >= limit) {
        truncated = true;
        break;
      }
      accepted.push_back(next);
      queue.push_back(next);
    }
  }

  EnumerateResult result;
  result.truncated = truncated;
  for (const Matching& m : accepted)
    result.matchings.push_back(
        inst.has_last_resorts() ? m : strip_last_resorts(aug, inst, m));

  // Canonical order: by matched-pair vector.
  std::sort(result.matchings.begin(), result.matchings.end(),
            [](const Matching& x, const Matching& y) { return x.pairs() < y.pairs(); });
  return result;
}

}  // namespace rmm

#endif  // RMM_SWITCHING_HPP
