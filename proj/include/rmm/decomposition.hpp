#ifndef RMM_DECOMPOSITION_HPP
#define RMM_DECOMPOSITION_HPP

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rmm/instance.hpp"

namespace rmm {

/// Bipartite graph over a subset of instance edges, each carrying its rank.
class WorkGraph {
 public:
  WorkGraph() = default;
  WorkGraph(int num_applicants, int num_posts)
      : adj_a_(num_applicants), adj_p_(num_posts) {}

  int num_applicants() const { return static_cast<int>(adj_a_.size()); }
  int num_posts() const { return static_cast<int>(adj_p_.size()); }

  void add_edge(int a, int p, int rank) {
    adj_a_[a].push_back({p, rank});
    adj_p_[p].push_back({a, rank});
    ++num_edges_;
  }

  bool has_edge(int a, int p) const {
    for (const auto& e : adj_a_[a])
      if (e.to == p) return true;
    return false;
  }

  void remove_edge(int a, int p) {
    auto drop = [](auto& vec, int to) {
      auto it = std::find_if(vec.begin(), vec.end(),
                             [to](const auto& e) { return e.to == to; });
      if (it == vec.end()) throw std::logic_error("edge not present");
      vec.erase(it);
    };
    drop(adj_a_[a], p);
    drop(adj_p_[p], a);
    --num_edges_;
  }

  struct Arc {
    int to;
    int rank;
  };
  const std::vector<Arc>& neighbors_of_applicant(int a) const { return adj_a_[a]; }
  const std::vector<Arc>& neighbors_of_post(int p) const { return adj_p_[p]; }
  int num_edges() const { return num_edges_; }

  std::vector<std::tuple<int, int, int>> edges() const {
    std::vector<std::tuple<int, int, int>> out;
    out.reserve(num_edges_);
    for (int a = 0; a < num_applicants(); ++a)
      for (const auto& e : adj_a_[a]) out.emplace_back(a, e.to, e.rank);
    return out;
  }

 private:
  std::vector<std::vector<Arc>> adj_a_;
  std::vector<std::vector<Arc>> adj_p_;
  int num_edges_ = 0;
};

enum class VertexLabel { Even, Odd, Unreachable };

inline const char* to_string(VertexLabel l) {
  switch (l) {
    case VertexLabel::Even: return "even";
    case VertexLabel::Odd: return "odd";
    default: return "unreachable";
  }
}

/// Even/Odd/Unreachable partition of both vertex sides relative to a
/// maximum matching.
struct EouLabels {
  std::vector<VertexLabel> applicant;
  std::vector<VertexLabel> post;

  bool applicant_critical(int a) const {  // in O ∪ U, matched in every RMM
    return applicant[a] != VertexLabel::Even;
  }
  bool post_critical(int p) const { return post[p] != VertexLabel::Even; }
};

namespace detail {

// One BFS phase of Hopcroft-Karp: layers even vertices from all unmatched
// applicants. Returns false when no augmenting path exists.
inline bool hk_bfs(const WorkGraph& g, const Matching& m,
                   std::vector<int>& dist_a) {
  constexpr int kInf = std::numeric_limits<int>::max();
  dist_a.assign(g.num_applicants(), kInf);
  std::deque<int> queue;
  for (int a = 0; a < g.num_applicants(); ++a)
    if (!m.applicant_matched(a)) {
      dist_a[a] = 0;
      queue.push_back(a);
    }
  bool found = false;
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (const auto& e : g.neighbors_of_applicant(a)) {
      int b = m.applicant_of(e.to);
      if (b < 0) {
        found = true;
      } else if (dist_a[b] == kInf) {
        dist_a[b] = dist_a[a] + 1;
        queue.push_back(b);
      }
    }
  }
  return found;
}

inline bool hk_dfs(const WorkGraph& g, Matching& m, std::vector<int>& dist_a,
                   std::vector<std::size_t>& iter, int a) {
  for (auto& i = iter[a]; i < g.neighbors_of_applicant(a).size(); ++i) {
    int p = g.neighbors_of_applicant(a)[i].to;
    int b = m.applicant_of(p);
    if (b < 0 || (dist_a[b] == dist_a[a] + 1 && hk_dfs(g, m, dist_a, iter, b))) {
      // A successful recursion re-matched b elsewhere, freeing p.
      m.unmatch(a);
      m.match(a, p);
      return true;
    }
  }
  dist_a[a] = std::numeric_limits<int>::max();
  return false;
}

}  // namespace detail

/// Grows `seed` to a maximum matching of g by augmenting paths only
/// (Hopcroft-Karp layering). Existing pairs are never torn apart except
/// along augmentations.
inline Matching maximum_matching(const WorkGraph& g, Matching seed) {
  for (auto [a, p] : seed.pairs())
    if (!g.has_edge(a, p))
      throw InvalidMatching("seed pair is not an edge of the graph");
  std::vector<int> dist_a;
  std::vector<std::size_t> iter;
  while (detail::hk_bfs(g, seed, dist_a)) {
    iter.assign(g.num_applicants(), 0);
    for (int a = 0; a < g.num_applicants(); ++a)
      if (!seed.applicant_matched(a)) detail::hk_dfs(g, seed, dist_a, iter, a);
  }
  return seed;
}

inline Matching maximum_matching(const WorkGraph& g) {
  return maximum_matching(g, Matching(g.num_applicants(), g.num_posts()));
}

/// Even/Odd/Unreachable labels for a maximum matching. Alternating BFS from
/// every unmatched vertex on both sides; anything never reached is
/// Unreachable. Rejects a non-maximum matching.
inline EouLabels eou_labels(const WorkGraph& g, const Matching& mm) {
  {
    std::vector<int> dist_a;
    if (detail::hk_bfs(g, mm, dist_a))
      throw InvalidMatching("matching is not maximum: augmenting path found");
  }
  enum State { kUnseen, kEven, kOdd };
  std::vector<State> sa(g.num_applicants(), kUnseen);
  std::vector<State> sp(g.num_posts(), kUnseen);

  // (vertex, side): side 0 = applicant, 1 = post. All even vertices expand
  // over non-matching edges; the odd endpoint then follows its matched edge.
  std::deque<std::pair<int, int>> queue;
  for (int a = 0; a < g.num_applicants(); ++a)
    if (!mm.applicant_matched(a)) {
      sa[a] = kEven;
      queue.emplace_back(a, 0);
    }
  for (int p = 0; p < g.num_posts(); ++p)
    if (!mm.post_matched(p)) {
      sp[p] = kEven;
      queue.emplace_back(p, 1);
    }

  auto reach_odd = [&](State& state, int matched_partner, State& partner_state,
                       auto enqueue_partner) {
    if (state != kUnseen) return;
    state = kOdd;
    if (matched_partner < 0)
      throw InvalidMatching("matching is not maximum: augmenting path found");
    if (partner_state == kUnseen) {
      partner_state = kEven;
      enqueue_partner();
    }
  };

  while (!queue.empty()) {
    auto [v, side] = queue.front();
    queue.pop_front();
    if (side == 0) {
      for (const auto& e : g.neighbors_of_applicant(v)) {
        if (mm.post_of(v) == e.to) continue;
        int partner = mm.applicant_of(e.to);
        reach_odd(sp[e.to], partner, partner >= 0 ? sa[partner] : sp[e.to],
                  [&] { queue.emplace_back(partner, 0); });
      }
    } else {
      for (const auto& e : g.neighbors_of_post(v)) {
        if (mm.applicant_of(v) == e.to) continue;
        int partner = mm.post_of(e.to);
        reach_odd(sa[e.to], partner, partner >= 0 ? sp[partner] : sa[e.to],
                  [&] { queue.emplace_back(partner, 1); });
      }
    }
  }

  EouLabels out;
  out.applicant.resize(g.num_applicants());
  out.post.resize(g.num_posts());
  auto to_label = [](State s) {
    switch (s) {
      case kEven: return VertexLabel::Even;
      case kOdd: return VertexLabel::Odd;
      default: return VertexLabel::Unreachable;
    }
  };
  for (int a = 0; a < g.num_applicants(); ++a) out.applicant[a] = to_label(sa[a]);
  for (int p = 0; p < g.num_posts(); ++p) out.post[p] = to_label(sp[p]);
  return out;
}

}  // namespace rmm

#endif  // RMM_DECOMPOSITION_HPP
