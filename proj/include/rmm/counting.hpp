#ifndef RMM_COUNTING_HPP
#define RMM_COUNTING_HPP

#include <gmpxx.h>

#include <bit>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmm/solver.hpp"
#include "rmm/switching.hpp"

namespace rmm {

using BigCount = mpz_class;

class CountLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Balanced bipartite graph for perfect-matching counting; rows are
/// applicants, columns posts, stored as column bitmasks per row.
struct BpmInstance {
  std::vector<std::string> left_ids;
  std::vector<std::string> right_ids;
  std::vector<std::uint64_t> rows;  // rows[i] bit j set iff edge (i,j)

  int size() const { return static_cast<int>(rows.size()); }
};

/// Exact permanent of the 0/1 biadjacency matrix via Ryser's
/// inclusion-exclusion with Gray-code column toggling.
inline BigCount count_perfect_matchings(const BpmInstance& g,
                                        int exact_limit = 30) {
  const int n = g.size();
  if (static_cast<int>(g.right_ids.size()) != n)
    throw std::invalid_argument("bipartite sides have different sizes");
  if (n > exact_limit || n > 63)
    throw CountLimitExceeded("instance too large for exact counting (" +
                             std::to_string(n) + " > " +
                             std::to_string(std::min(exact_limit, 63)) +
                             " per side)");
  if (n == 0) return 1;

  std::vector<long> row_sum(n, 0);
  BigCount total = 0;
  BigCount product;
  std::uint64_t subset = 0;
  const std::uint64_t end = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < end; ++k) {
    int j = std::countr_zero(k);  // Gray code: toggle column j
    std::uint64_t bit = std::uint64_t{1} << j;
    subset ^= bit;
    long delta = (subset & bit) ? 1 : -1;
    for (int i = 0; i < n; ++i)
      if (g.rows[i] & bit) row_sum[i] += delta;

    product = 1;
    for (int i = 0; i < n; ++i) {
      if (row_sum[i] == 0) {
        product = 0;
        break;
      }
      product *= row_sum[i];
    }
    if ((n - std::popcount(subset)) % 2 == 0)
      total += product;
    else
      total -= product;
  }
  if (total < 0)
    throw InternalInconsistency("Ryser sum is negative");
  return total;
}

struct BpmReduction {
  PreferenceInstance h;  // instance with last resorts and dummy applicants
  BpmInstance graph;     // reduced graph of h as a balanced bipartite graph
  int num_unmatched_posts = 0;  // k
};

/// Dummy-applicant construction: k applicants, one per post left unmatched
/// by a rank-maximal matching, each ranking every always-even post of the
/// reduced graph in one tie below the last-resort rank.
inline BpmReduction reduce_to_bpm(const PreferenceInstance& inst,
                                  int exact_limit = 30) {
  auto [m, trace] = solve(inst);
  const PreferenceInstance& aug = trace.augmented;

  int k = 0;
  for (int p = 0; p < aug.num_posts(); ++p) k += !m.post_matched(p);
  // m is A-complete, so k is matching-independent; cross-check.
  if (k != aug.num_posts() - aug.num_applicants())
    throw InternalInconsistency(
        "unmatched-post count is not matching-independent");

  std::vector<bool> all_even = trace.all_even_posts();
  std::vector<int> even_posts;
  for (int p = 0; p < aug.num_posts(); ++p)
    if (all_even[p]) even_posts.push_back(p);

  PreferenceInstance::Builder b;
  for (int p = 0; p < aug.num_posts(); ++p) b.add_post(aug.post_id(p));
  for (int a = 0; a < aug.num_applicants(); ++a) {
    int idx = b.add_applicant(aug.applicant_id(a));
    for (const auto& g : aug.prefs(a)) b.add_group(idx, g.rank, g.posts);
  }
  int dummy_rank = aug.max_rank() + 1;
  for (int i = 1; i <= k; ++i) {
    int idx = b.add_applicant("%ad" + std::to_string(i));
    b.add_group(idx, dummy_rank, even_posts);
  }
  int first_lr = aug.num_posts();
  for (int p = 0; p < aug.num_posts(); ++p)
    if (aug.is_last_resort(p)) {
      first_lr = p;
      break;
    }
  b.mark_last_resorts_from(first_lr);

  BpmReduction out;
  out.h = b.build();
  out.num_unmatched_posts = k;

  auto [mh, trace_h] = solve(out.h);

  const PreferenceInstance& h = trace_h.augmented;
  BpmInstance& bpm = out.graph;
  for (int a = 0; a < h.num_applicants(); ++a)
    bpm.left_ids.push_back(h.applicant_id(a));
  for (int p = 0; p < h.num_posts(); ++p)
    bpm.right_ids.push_back(h.post_id(p));
  if (bpm.left_ids.size() != bpm.right_ids.size())
    throw InternalInconsistency("reduction produced an unbalanced graph");
  if (bpm.left_ids.size() > 63)
    throw CountLimitExceeded("instance too large for exact counting (" +
                             std::to_string(bpm.left_ids.size()) +
                             " per side)");
  bpm.rows.assign(bpm.left_ids.size(), 0);
  for (auto [a, p, r] : trace_h.reduced.edges())
    bpm.rows[a] |= std::uint64_t{1} << p;
  (void)exact_limit;
  return out;
}

inline BigCount factorial(int k) {
  BigCount f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// Exact number of rank-maximal matchings of `inst`:
/// perfect matchings of the reduced graph divided by k!.
inline BigCount count_rmms(const PreferenceInstance& inst,
                           int exact_limit = 30) {
  BpmReduction red = reduce_to_bpm(inst, exact_limit);
  BigCount pm = count_perfect_matchings(red.graph, exact_limit);
  BigCount kfact = factorial(red.num_unmatched_posts);
  BigCount q, rem;
  mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), pm.get_mpz_t(),
              kfact.get_mpz_t());
  if (rem != 0)
    throw InternalInconsistency(
        "perfect-matching count is not divisible by k!");
  return q;
}

/// Undirected bipartite graph given as an edge list, for the hardness-gadget
/// generator. Vertex ids keep their first-appearance order.
struct BipartiteGraph {
  std::vector<std::string> left_ids;
  std::vector<std::string> right_ids;
  std::vector<std::vector<int>> adj;  // per left vertex, right indices
};

/// Parses lines "<left> <right>", one edge per line; '#' comments.
inline BipartiteGraph parse_bipartite_graph(std::istream& in) {
  BipartiteGraph g;
  std::unordered_map<std::string, int> left, right;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string x, y, extra;
    if (!(ls >> x)) continue;
    if (!(ls >> y) || (ls >> extra))
      throw ParseError(lineno, "expected '<left> <right>'");
    auto lx = left.emplace(x, static_cast<int>(g.left_ids.size()));
    if (lx.second) {
      g.left_ids.push_back(x);
      g.adj.emplace_back();
    }
    auto ry = right.emplace(y, static_cast<int>(g.right_ids.size()));
    if (ry.second) g.right_ids.push_back(y);
    for (int nb : g.adj[lx.first->second])
      if (nb == ry.first->second)
        throw ParseError(lineno, "duplicate edge " + x + " " + y);
    g.adj[lx.first->second].push_back(ry.first->second);
  }
  return g;
}

/// Strict-list instance whose rank-maximal matchings are in bijection with
/// the perfect matchings of a 3-regular bipartite graph. Real agents rank
/// their three neighbors at the neighbors' positions and fill the remaining
/// ranks with dummy posts; each dummy agent demands its own dummy post at
/// rank one.
inline PreferenceInstance hardness_gadget(const BipartiteGraph& h) {
  const int n = static_cast<int>(h.left_ids.size());
  if (static_cast<int>(h.right_ids.size()) != n)
    throw std::invalid_argument("graph sides are unbalanced");
  std::vector<int> right_degree(n, 0);
  for (const auto& nbs : h.adj)
    for (int y : nbs) ++right_degree[y];
  for (int x = 0; x < n; ++x)
    if (static_cast<int>(h.adj[x].size()) != 3 || right_degree[x] != 3)
      throw std::invalid_argument("graph is not 3-regular");

  PreferenceInstance::Builder b;
  std::vector<int> real_posts(n), dummy_posts(n - 3);
  for (int y = 0; y < n; ++y) real_posts[y] = b.add_post("p_" + h.right_ids[y]);
  for (int i = 0; i < n - 3; ++i)
    dummy_posts[i] = b.add_post("pd" + std::to_string(i + 1));

  for (int x = 0; x < n; ++x) {
    int a = b.add_applicant("a_" + h.left_ids[x]);
    std::vector<int> neighbor_ranks = h.adj[x];  // rank of p_y is order(y)
    std::sort(neighbor_ranks.begin(), neighbor_ranks.end());
    int next_dummy = 0;
    std::size_t ni = 0;
    for (int rank = 1; rank <= n; ++rank) {
      if (ni < neighbor_ranks.size() && neighbor_ranks[ni] == rank - 1) {
        b.add_group(a, rank, {real_posts[neighbor_ranks[ni]]});
        ++ni;
      } else {
        b.add_group(a, rank, {dummy_posts[next_dummy++]});
      }
    }
  }
  for (int i = 0; i < n - 3; ++i) {
    int a = b.add_applicant("ad" + std::to_string(i + 1));
    b.add_group(a, 1, {dummy_posts[i]});
  }
  return b.build();
}

/// Tie variant of the reduction: the graph itself with every edge at rank 1.
inline PreferenceInstance hardness_gadget_ties(const BipartiteGraph& h) {
  PreferenceInstance::Builder b;
  std::vector<int> posts;
  for (const auto& id : h.right_ids) posts.push_back(b.add_post("p_" + id));
  for (std::size_t x = 0; x < h.left_ids.size(); ++x) {
    int a = b.add_applicant("a_" + h.left_ids[x]);
    std::vector<int> group;
    for (int y : h.adj[x]) group.push_back(posts[y]);
    if (!group.empty()) b.add_group(a, 1, group);
  }
  return b.build();
}

}  // namespace rmm

#endif  // RMM_COUNTING_HPP
