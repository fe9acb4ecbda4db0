#ifndef RMM_GENERATOR_HPP
#define RMM_GENERATOR_HPP

#include <random>
#include <string>
#include <vector>

#include "rmm/counting.hpp"
#include "rmm/instance.hpp"

namespace rmm {

struct GenOptions {
  int num_applicants = 5;
  int num_posts = 5;
  int max_rank = 3;
  double tie_probability = 0.3;
  unsigned seed = 1;
};

/// Seeded random instance: each applicant draws a random permutation prefix
/// of the posts and splits it into tie groups.
inline PreferenceInstance generate_instance(const GenOptions& opts) {
  std::mt19937 rng(opts.seed);
  PreferenceInstance::Builder b;
  std::vector<int> posts;
  for (int p = 0; p < opts.num_posts; ++p)
    posts.push_back(b.add_post("p" + std::to_string(p + 1)));

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int a = 0; a < opts.num_applicants; ++a) {
    int idx = b.add_applicant("a" + std::to_string(a + 1));
    std::vector<int> shuffled = posts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    int list_len = std::uniform_int_distribution<int>(
        1, static_cast<int>(shuffled.size()))(rng);
    shuffled.resize(list_len);

    int rank = 0;
    std::size_t i = 0;
    while (i < shuffled.size() && rank < opts.max_rank) {
      ++rank;
      std::vector<int> group{shuffled[i++]};
      while (i < shuffled.size() && coin(rng) < opts.tie_probability)
        group.push_back(shuffled[i++]);
      b.add_group(idx, rank, std::move(group));
    }
  }
  return b.build();
}

/// Random 3-regular bipartite graph on n+n vertices: three random perfect
/// matchings, resampled until edge-disjoint. Requires n >= 3.
inline BipartiteGraph generate_cubic_bipartite(int n, unsigned seed) {
  if (n < 3) throw std::invalid_argument("3-regular graphs need n >= 3");
  std::mt19937 rng(seed);
  std::vector<std::vector<bool>> adj;
  for (;;) {
    adj.assign(n, std::vector<bool>(n, false));
    bool clash = false;
    for (int round = 0; round < 3 && !clash; ++round) {
      std::vector<int> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int x = 0; x < n; ++x) {
        if (adj[x][perm[x]]) {
          clash = true;
          break;
        }
        adj[x][perm[x]] = true;
      }
    }
    if (!clash) break;
  }
  BipartiteGraph g;
  for (int i = 0; i < n; ++i) {
    g.left_ids.push_back("x" + std::to_string(i + 1));
    g.right_ids.push_back("y" + std::to_string(i + 1));
  }
  g.adj.resize(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (adj[x][y]) g.adj[x].push_back(y);
  return g;
}

}  // namespace rmm

#endif  // RMM_GENERATOR_HPP
