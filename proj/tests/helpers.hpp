#ifndef RMM_TESTS_HELPERS_HPP
#define RMM_TESTS_HELPERS_HPP

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "rmm/rmm.hpp"

namespace rmm::test {

inline std::string fixture_path(const std::string& name) {
  return std::string(RMM_DATA_DIR) + "/" + name;
}

inline PreferenceInstance load_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  return parse_instance(in);
}

inline Matching load_matching_fixture(const PreferenceInstance& inst,
                                      const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  return parse_matching(inst, in);
}

inline BipartiteGraph load_graph_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  return parse_bipartite_graph(in);
}

/// Index pairs -> id pairs, for assertions that survive index reordering.
inline std::set<std::pair<std::string, std::string>> pair_ids(
    const PreferenceInstance& inst, const std::set<std::pair<int, int>>& pairs) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [a, p] : pairs)
    out.emplace(inst.applicant_id(a), inst.post_id(p));
  return out;
}

/// Canonical text key for a matching over `inst`, ignoring last-resort pairs.
inline std::string matching_key(const PreferenceInstance& inst,
                                const Matching& m) {
  std::string key;
  for (int a = 0; a < inst.num_applicants(); ++a) {
    int p = a < m.num_applicant_slots() ? m.post_of(a) : -1;
    if (p >= 0 && !inst.is_last_resort(p)) {
      key += inst.applicant_id(a);
      key += '=';
      key += inst.post_id(p);
      key += ';';
    } else {
      key += ';';
    }
  }
  return key;
}

inline std::set<std::string> matching_keys(const PreferenceInstance& inst,
                                           const std::vector<Matching>& ms) {
  std::set<std::string> out;
  for (const Matching& m : ms) out.insert(matching_key(inst, m));
  return out;
}

/// The shared randomized corpus: small instances with ties.
inline std::vector<GenOptions> corpus_options(int count) {
  std::vector<GenOptions> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    GenOptions o;
    o.seed = 1000 + i;
    o.num_applicants = 1 + i % 7;
    o.num_posts = 1 + (i / 7) % 7;
    o.max_rank = 1 + i % 4;
    o.tie_probability = 0.3;
    out.push_back(o);
  }
  return out;
}

/// Every preference list over `posts` posts with at most two rank groups.
inline std::vector<std::vector<RankGroup>> tiny_lists(int posts) {
  std::vector<std::vector<RankGroup>> out;
  int full = (1 << posts) - 1;
  for (int s1 = 1; s1 <= full; ++s1) {
    auto group = [&](int mask, int rank) {
      RankGroup g;
      g.rank = rank;
      for (int p = 0; p < posts; ++p)
        if (mask & (1 << p)) g.posts.push_back(p);
      return g;
    };
    out.push_back({group(s1, 1)});
    int rest = full & ~s1;
    for (int s2 = rest; s2; s2 = (s2 - 1) & rest)
      out.push_back({group(s1, 1), group(s2, 2)});
  }
  return out;
}

/// Exhaustive family of instances with `applicants` applicants over `posts`
/// posts, every list nonempty with at most two rank groups.
inline std::vector<PreferenceInstance> tiny_instances(int applicants,
                                                      int posts) {
  std::vector<std::vector<RankGroup>> lists = tiny_lists(posts);
  std::vector<PreferenceInstance> out;
  std::vector<int> pick(applicants, 0);
  for (;;) {
    PreferenceInstance::Builder b;
    for (int p = 0; p < posts; ++p) b.add_post("p" + std::to_string(p + 1));
    for (int a = 0; a < applicants; ++a) {
      int idx = b.add_applicant("a" + std::to_string(a + 1));
      for (const RankGroup& g : lists[pick[a]]) b.add_group(idx, g.rank, g.posts);
    }
    out.push_back(b.build());
    int i = applicants - 1;
    while (i >= 0 && pick[i] + 1 == static_cast<int>(lists.size())) pick[i--] = 0;
    if (i < 0) break;
    ++pick[i];
  }
  return out;
}

/// Calls fn(start, weight) for every simple directed path ending at a sink,
/// starting anywhere (including single-vertex paths at sinks, weight 0).
template <typename Fn>
void for_each_simple_path_to_sink(const SwitchingGraph& sg, Fn&& fn) {
  const int n = sg.num_vertices();
  std::vector<bool> on_path(n, false);
  std::vector<int> stack;
  auto dfs = [&](auto&& self, int v, int weight) -> void {
    stack.push_back(v);
    on_path[v] = true;
    if (sg.is_sink(v)) fn(stack.front(), weight);
    for (const SwitchingArc& arc : sg.arcs_from(v))
      if (!on_path[arc.to]) self(self, arc.to, weight + arc.weight);
    on_path[v] = false;
    stack.pop_back();
  };
  for (int p = 0; p < n; ++p) dfs(dfs, p, 0);
}

/// Calls fn(weight) for every simple directed cycle (each cycle once).
template <typename Fn>
void for_each_simple_cycle(const SwitchingGraph& sg, Fn&& fn) {
  const int n = sg.num_vertices();
  std::vector<bool> on_path(n, false);
  auto dfs = [&](auto&& self, int root, int v, int weight) -> void {
    on_path[v] = true;
    for (const SwitchingArc& arc : sg.arcs_from(v)) {
      if (arc.to == root)
        fn(weight + arc.weight);
      else if (arc.to > root && !on_path[arc.to])
        self(self, root, arc.to, weight + arc.weight);
    }
    on_path[v] = false;
  };
  for (int root = 0; root < n; ++root) dfs(dfs, root, root, 0);
}

}  // namespace rmm::test

#endif
