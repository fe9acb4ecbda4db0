#ifndef RMM_ORACLE_HPP
#define RMM_ORACLE_HPP

#include <set>
#include <stdexcept>
#include <vector>

#include "rmm/counting.hpp"
#include "rmm/popularity.hpp"

// Brute-force reference implementations. These deliberately share no code
// with the solver / switching-graph paths they are used to check.

namespace rmm::oracle {

class OverSizeLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Limits {
  int max_applicants = 8;
};

namespace detail {

struct Search {
  const PreferenceInstance& inst;
  Matching current;
  std::vector<int> counts;          // rank histogram of `current`
  std::vector<std::vector<int>> min_rank_suffix;  // optimistic completions
  Signature best;
  std::vector<Matching> found;

  explicit Search(const PreferenceInstance& inst)
      : inst(inst),
        current(inst.num_applicants(), inst.num_posts()),
        counts(inst.max_rank() + 1, 0) {
    // min_rank_suffix[a][r] = how many applicants a..end have min rank r.
    int n = inst.num_applicants();
    min_rank_suffix.assign(n + 1,
                           std::vector<int>(inst.max_rank() + 1, 0));
    for (int a = n - 1; a >= 0; --a) {
      min_rank_suffix[a] = min_rank_suffix[a + 1];
      if (!inst.prefs(a).empty())
        ++min_rank_suffix[a][inst.prefs(a).front().rank - 1];
    }
  }

  // Lexicographic compare of (counts + optimistic rest) against best.
  bool can_beat_or_tie(int next_applicant) const {
    const auto& opt = min_rank_suffix[next_applicant];
    for (std::size_t r = 0; r < counts.size(); ++r) {
      int have = counts[r] + opt[r];
      int want = r < best.counts.size() ? best.counts[r] : 0;
      if (have != want) return have > want;
    }
    return true;  // tie still collects
  }

  void run(int a) {
    if (!best.counts.empty() && !can_beat_or_tie(a)) return;
    if (a == inst.num_applicants()) {
      Signature sig{counts};
      auto cmp = best.counts.empty() ? std::strong_ordering::greater
                                     : compare_signatures(sig, best);
      if (cmp == std::strong_ordering::greater) {
        best = sig;
        found.clear();
      }
      if (cmp != std::strong_ordering::less) found.push_back(current);
      return;
    }
    run(a + 1);  // leave a unmatched
    for (const auto& g : inst.prefs(a))
      for (int p : g.posts) {
        if (current.post_matched(p)) continue;
        current.match(a, p);
        ++counts[g.rank - 1];
        run(a + 1);
        --counts[g.rank - 1];
        current.unmatch(a);
      }
  }
};

}  // namespace detail

/// Every matching achieving the lexicographic-maximum signature, by
/// exhaustive recursion over applicant assignments.
inline std::vector<Matching> all_max_signature_matchings(
    const PreferenceInstance& inst, const Limits& limits = {}) {
  if (inst.num_applicants() > limits.max_applicants)
    throw OverSizeLimit("instance exceeds the brute-force limit of " +
                        std::to_string(limits.max_applicants) + " applicants");
  detail::Search search(inst);
  search.run(0);
  return search.found;
}

inline BigCount brute_count_rmms(const PreferenceInstance& inst,
                                 const Limits& limits = {}) {
  return BigCount(
      static_cast<unsigned long>(all_max_signature_matchings(inst, limits).size()));
}

inline std::set<std::pair<int, int>> brute_rmm_pairs(
    const PreferenceInstance& inst, const Limits& limits = {}) {
  std::set<std::pair<int, int>> pairs;
  for (const Matching& m : all_max_signature_matchings(inst, limits))
    for (auto [a, p] : m.pairs())
      if (!inst.is_last_resort(p)) pairs.emplace(a, p);
  return pairs;
}

/// Pairwise vote count of `m` against every rank-maximal matching; returns
/// the first strict winner, if any.
inline PopularityVerdict brute_popular(const PreferenceInstance& inst,
                                       const Matching& m,
                                       const Limits& limits = {}) {
  PopularityVerdict verdict;
  for (const Matching& rival : all_max_signature_matchings(inst, limits)) {
    auto [theirs, ours] = vote_count(inst, rival, m);
    if (theirs > ours) {
      verdict.popular = false;
      verdict.better = rival;
      verdict.tally = {theirs, ours};
      return verdict;
    }
  }
  return verdict;
}

/// Exhaustive perfect-matching count of a balanced bipartite graph
/// (independent of the Ryser path).
inline BigCount brute_count_perfect_matchings(const BpmInstance& g) {
  const int n = g.size();
  std::vector<bool> used(n, false);
  BigCount total = 0;
  auto rec = [&](auto&& self, int row) -> void {
    if (row == n) {
      ++total;
      return;
    }
    for (int j = 0; j < n; ++j)
      if (!used[j] && (g.rows[row] >> j & 1)) {
        used[j] = true;
        self(self, row + 1);
        used[j] = false;
      }
  };
  rec(rec, 0);
  return total;
}

/// Perfect matchings of an edge-list bipartite graph, counted directly.
inline BigCount brute_count_perfect_matchings(const BipartiteGraph& h) {
  BpmInstance g;
  g.left_ids = h.left_ids;
  g.right_ids = h.right_ids;
  g.rows.assign(h.left_ids.size(), 0);
  for (std::size_t x = 0; x < h.adj.size(); ++x)
    for (int y : h.adj[x]) g.rows[x] |= std::uint64_t{1} << y;
  return brute_count_perfect_matchings(g);
}

}  // namespace rmm::oracle

#endif  // RMM_ORACLE_HPP
