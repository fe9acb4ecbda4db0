// Command-line front end: solve | pairs | enumerate | count | gadget |
// popular | gen over the instance file format described in the README.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "rmm/rmm.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;  // not popular / truncated enumeration
constexpr int kExitError = 2;

rmm::PreferenceInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return rmm::parse_instance(in);
}

rmm::Matching load_matching(const rmm::PreferenceInstance& inst,
                            const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return rmm::parse_matching(inst, in);
}

ordered_json matching_json(const rmm::PreferenceInstance& inst,
                           const rmm::Matching& m) {
  ordered_json out = ordered_json::object();
  for (int a = 0; a < inst.num_applicants(); ++a) {
    int p = m.post_of(a);
    if (p >= 0 && !inst.is_last_resort(p))
      out[inst.applicant_id(a)] = inst.post_id(p);
  }
  return out;
}

void print_matching(const rmm::PreferenceInstance& inst,
                    const rmm::Matching& m) {
  for (int a = 0; a < inst.num_applicants(); ++a) {
    int p = m.post_of(a);
    if (p >= 0 && !inst.is_last_resort(p))
      std::cout << inst.applicant_id(a) << " " << inst.post_id(p) << "\n";
  }
}

json trace_json(const rmm::SolverTrace& trace) {
  const rmm::PreferenceInstance& aug = trace.augmented;
  json out;
  out["phases"] = json::array();
  for (const auto& ph : trace.phases) {
    json j;
    j["phase"] = ph.phase;
    j["edges"] = json::array();
    for (auto [a, p, r] : ph.graph.edges())
      j["edges"].push_back({aug.applicant_id(a), aug.post_id(p), r});
    j["matching"] = matching_json(aug, ph.matching);
    json labels;
    for (int a = 0; a < aug.num_applicants(); ++a)
      labels["applicants"][aug.applicant_id(a)] =
          rmm::to_string(ph.labels.applicant[a]);
    for (int p = 0; p < aug.num_posts(); ++p)
      labels["posts"][aug.post_id(p)] = rmm::to_string(ph.labels.post[p]);
    j["labels"] = labels;
    out["phases"].push_back(std::move(j));
  }
  out["reduced"] = json::array();
  for (auto [a, p, r] : trace.reduced.edges())
    out["reduced"].push_back({aug.applicant_id(a), aug.post_id(p), r});
  out["deleted"] = json::array();
  for (const auto& d : trace.deleted)
    out["deleted"].push_back(
        {{"applicant", aug.applicant_id(d.applicant)},
         {"post", aug.post_id(d.post)},
         {"rank", d.rank},
         {"phase", d.phase},
         {"rule", d.rule == rmm::DeletionRule::kHigherRankOnCritical
                      ? "higher-rank-on-critical"
                      : "odd-odd"}});
  return out;
}

struct CommonOpts {
  std::string instance_path;
  bool json_out = false;
  bool brute = false;
  int brute_limit = 8;
};

int run_solve(const CommonOpts& o, const std::string& trace_path) {
  rmm::PreferenceInstance inst = load_instance(o.instance_path);
  auto [m, trace] = rmm::solve(inst);
  rmm::Matching real = rmm::strip_last_resorts(trace.augmented, inst, m);
  rmm::Signature sig = rmm::signature_of(inst, real);
  if (o.json_out) {
    ordered_json out;
    out["matching"] = matching_json(inst, real);
    out["signature"] = sig.counts;
    std::cout << out.dump(2) << "\n";
  } else {
    print_matching(inst, real);
    std::cout << "signature: " << sig.to_string() << "\n";
  }
  if (!trace_path.empty()) {
    std::ofstream tf(trace_path);
    if (!tf) throw std::runtime_error("cannot write " + trace_path);
    tf << trace_json(trace).dump(2) << "\n";
  }
  return kExitOk;
}

int run_pairs(const CommonOpts& o) {
  rmm::PreferenceInstance inst = load_instance(o.instance_path);
  std::set<std::pair<int, int>> pairs =
      o.brute ? rmm::oracle::brute_rmm_pairs(inst, {o.brute_limit})
              : rmm::rmm_pairs(inst);
  if (o.json_out) {
    ordered_json out;
    out["pairs"] = json::array();
    for (auto [a, p] : pairs)
      out["pairs"].push_back({{"applicant", inst.applicant_id(a)},
                              {"post", inst.post_id(p)},
                              {"rank", *inst.rank_of(a, p)}});
    std::cout << out.dump(2) << "\n";
  } else {
    for (auto [a, p] : pairs)
      std::cout << inst.applicant_id(a) << " " << inst.post_id(p) << " "
                << *inst.rank_of(a, p) << "\n";
  }
  return kExitOk;
}

int run_enumerate(const CommonOpts& o, std::size_t limit) {
  rmm::PreferenceInstance inst = load_instance(o.instance_path);
  rmm::EnumerateResult result;
  if (o.brute) {
    result.matchings =
        rmm::oracle::all_max_signature_matchings(inst, {o.brute_limit});
    std::sort(result.matchings.begin(), result.matchings.end(),
              [](const rmm::Matching& x, const rmm::Matching& y) {
                return x.pairs() < y.pairs();
              });
    if (result.matchings.size() > limit) {
      result.matchings.resize(limit);
      result.truncated = true;
    }
  } else {
    result = rmm::enumerate_rmms(inst, limit);
  }
  if (o.json_out) {
    ordered_json out;
    out["matchings"] = json::array();
    for (const auto& m : result.matchings)
      out["matchings"].push_back(matching_json(inst, m));
    out["count"] = result.matchings.size();
    out["truncated"] = result.truncated;
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& m : result.matchings) {
      bool first = true;
      for (auto [a, p] : m.pairs()) {
        if (inst.is_last_resort(p)) continue;
        std::cout << (first ? "" : " ") << inst.applicant_id(a) << ":"
                  << inst.post_id(p);
        first = false;
      }
      std::cout << "\n";
    }
  }
  return result.truncated ? kExitNegative : kExitOk;
}

int run_count(const CommonOpts& o, int exact_limit) {
  rmm::PreferenceInstance inst = load_instance(o.instance_path);
  rmm::BigCount count = o.brute
                            ? rmm::oracle::brute_count_rmms(inst, {o.brute_limit})
                            : rmm::count_rmms(inst, exact_limit);
  if (o.json_out) {
    ordered_json out;
    out["count"] = count.get_str();
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << count.get_str() << "\n";
  }
  return kExitOk;
}

int run_gadget(const std::string& path, bool ties) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  rmm::BipartiteGraph h = rmm::parse_bipartite_graph(in);
  rmm::PreferenceInstance inst =
      ties ? rmm::hardness_gadget_ties(h) : rmm::hardness_gadget(h);
  rmm::serialize_instance(inst, std::cout);
  return kExitOk;
}

int run_popular(const CommonOpts& o, const std::string& matching_path,
                bool search, std::size_t enum_limit) {
  rmm::PreferenceInstance inst = load_instance(o.instance_path);

  if (search) {
    // Desk-scale exhaustive mode: test every rank-maximal matching.
    rmm::EnumerateResult all = rmm::enumerate_rmms(inst, enum_limit);
    for (const auto& m : all.matchings) {
      rmm::PopularityVerdict v =
          o.brute ? rmm::oracle::brute_popular(inst, m, {o.brute_limit})
                  : rmm::check_popular(inst, m);
      if (v.popular) {
        if (o.json_out) {
          ordered_json out;
          out["verdict"] = "popular";
          out["matching"] = matching_json(inst, m);
          std::cout << out.dump(2) << "\n";
        } else {
          std::cout << "popular rank-maximal matching found:\n";
          print_matching(inst, m);
        }
        return kExitOk;
      }
    }
    std::cout << (all.truncated ? "no popular rank-maximal matching among the "
                                  "first " +
                                      std::to_string(all.matchings.size()) +
                                      " enumerated\n"
                                : "no popular rank-maximal matching exists\n");
    return kExitNegative;
  }

  rmm::Matching m = matching_path.empty()
                        ? rmm::solve_restricted(inst)
                        : load_matching(inst, matching_path);
  rmm::PopularityVerdict verdict =
      o.brute ? rmm::oracle::brute_popular(inst, m, {o.brute_limit})
              : rmm::check_popular(inst, m);

  if (o.json_out) {
    ordered_json out;
    out["verdict"] = verdict.popular ? "popular" : "not-popular";
    out["matching"] = matching_json(inst, m);
    if (!verdict.popular) {
      out["better"] = matching_json(inst, *verdict.better);
      out["votes"] = {{"better", verdict.tally.first},
                      {"original", verdict.tally.second}};
      if (verdict.witness) {
        // Witness posts live in the augmented instance; last resorts keep
        // their "~" prefix.
        ordered_json seq = ordered_json::array();
        rmm::PreferenceInstance aug =
            inst.has_last_resorts() ? inst : rmm::add_last_resorts(inst);
        for (int p : verdict.witness->posts) seq.push_back(aug.post_id(p));
        out["witness"] = {{"kind", verdict.witness->kind ==
                                           rmm::SwitchSequence::Kind::kCycle
                                       ? "cycle"
                                       : "path"},
                          {"posts", seq}};
      }
    }
    std::cout << out.dump(2) << "\n";
  } else if (verdict.popular) {
    std::cout << "popular\n";
  } else {
    std::cout << "not popular: " << verdict.tally.first
              << " applicants prefer the following matching, "
              << verdict.tally.second << " prefer the input\n";
    if (verdict.witness) {
      rmm::PreferenceInstance aug =
          inst.has_last_resorts() ? inst : rmm::add_last_resorts(inst);
      std::cout << "witness "
                << (verdict.witness->kind == rmm::SwitchSequence::Kind::kCycle
                        ? "cycle:"
                        : "path:");
      for (int p : verdict.witness->posts) std::cout << " " << aug.post_id(p);
      std::cout << "\n";
    }
    print_matching(inst, *verdict.better);
  }
  return verdict.popular ? kExitOk : kExitNegative;
}

int run_gen(const rmm::GenOptions& opts) {
  rmm::serialize_instance(rmm::generate_instance(opts), std::cout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank-maximal matchings: solver, switching-graph analysis, "
               "counting, and popularity checks"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string trace_path, matching_path, graph_path;
  std::size_t enum_limit = 10000;
  int exact_limit = 30;
  bool ties = false, search = false;
  rmm::GenOptions gen_opts;

  auto add_common = [&](CLI::App* cmd, bool with_brute = true) {
    cmd->add_option("instance", common.instance_path, "instance file")
        ->required();
    cmd->add_flag("--json", common.json_out, "JSON output");
    if (with_brute) {
      cmd->add_flag("--brute", common.brute,
                    "use the brute-force oracle instead of the fast path");
      cmd->add_option("--brute-limit", common.brute_limit,
                      "applicant cap for --brute")
          ->envname("RMM_BRUTE_LIMIT");
    }
  };

  auto* solve_cmd = app.add_subcommand("solve", "compute a rank-maximal matching");
  add_common(solve_cmd, false);
  solve_cmd->add_option("--trace", trace_path, "dump the solver trace as JSON");

  auto* pairs_cmd = app.add_subcommand("pairs", "compute all rank-maximal pairs");
  add_common(pairs_cmd);

  auto* enum_cmd =
      app.add_subcommand("enumerate", "enumerate all rank-maximal matchings");
  add_common(enum_cmd);
  enum_cmd->add_option("--limit", enum_limit, "stop after this many matchings")
      ->envname("RMM_ENUM_LIMIT");

  auto* count_cmd = app.add_subcommand("count", "count rank-maximal matchings");
  add_common(count_cmd);
  count_cmd
      ->add_option("--exact-limit", exact_limit,
                   "largest side size accepted by the exact counter")
      ->envname("RMM_EXACT_LIMIT");

  auto* gadget_cmd = app.add_subcommand(
      "gadget", "build a hard counting instance from a 3-regular bipartite graph");
  gadget_cmd->add_option("graph", graph_path, "edge-list graph file")->required();
  gadget_cmd->add_flag("--ties", ties, "rank-1 tie variant of the reduction");

  auto* popular_cmd = app.add_subcommand(
      "popular", "check popularity of a rank-maximal matching");
  add_common(popular_cmd);
  popular_cmd->add_option("--matching", matching_path,
                          "matching file (default: solver output)");
  popular_cmd->add_flag("--search", search,
                        "exhaustively search for a popular rank-maximal matching");
  popular_cmd
      ->add_option("--limit", enum_limit, "enumeration cap for --search")
      ->envname("RMM_ENUM_LIMIT");

  auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  gen_cmd->add_option("--applicants", gen_opts.num_applicants);
  gen_cmd->add_option("--posts", gen_opts.num_posts);
  gen_cmd->add_option("--max-rank", gen_opts.max_rank);
  gen_cmd->add_option("--tie-prob", gen_opts.tie_probability);
  gen_cmd->add_option("--seed", gen_opts.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (app.got_subcommand(solve_cmd)) return run_solve(common, trace_path);
    if (app.got_subcommand(pairs_cmd)) return run_pairs(common);
    if (app.got_subcommand(enum_cmd)) return run_enumerate(common, enum_limit);
    if (app.got_subcommand(count_cmd)) return run_count(common, exact_limit);
    if (app.got_subcommand(gadget_cmd)) return run_gadget(graph_path, ties);
    if (app.got_subcommand(popular_cmd))
      return run_popular(common, matching_path, search, enum_limit);
    if (app.got_subcommand(gen_cmd)) return run_gen(gen_opts);
  } catch (const rmm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
