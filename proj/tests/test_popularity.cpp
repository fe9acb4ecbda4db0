#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace rmm;
using rmm::test::load_fixture;
using rmm::test::load_matching_fixture;

TEST_CASE("vote counting compares matchings pointwise") {
  PreferenceInstance inst = parse_instance("a1: p1 p2\na2: p1 p2\n");
  Matching m1(2, 2), m2(2, 2);
  m1.match(0, 0);
  m1.match(1, 1);
  m2.match(0, 1);
  m2.match(1, 0);
  REQUIRE(vote_count(inst, m1, m1) == std::pair{0, 0});
  REQUIRE(vote_count(inst, m1, m2) == std::pair{1, 1});

  // Being unmatched loses to any post on the list.
  Matching partial(2, 2);
  partial.match(0, 0);
  REQUIRE(vote_count(inst, m1, partial) == std::pair{1, 0});
  REQUIRE(vote_count(inst, partial, m1) == std::pair{0, 1});
}

TEST_CASE("vote counting validates its arguments") {
  PreferenceInstance inst = parse_instance("a1: p1\na2: p2\n");
  Matching off(2, 2);
  off.match(0, 1);  // (a1,p2) is not an edge
  REQUIRE_THROWS_AS(vote_count(inst, off, Matching(2, 2)), InvalidMatching);
}

TEST_CASE("fixture matching loses two votes to one after a cycle switch") {
  PreferenceInstance inst = load_fixture("fig1.txt");
  Matching m = load_matching_fixture(inst, "fig1_M.txt");
  PopularityVerdict v = check_popular(inst, m);
  REQUIRE_FALSE(v.popular);
  REQUIRE(v.tally == std::pair{2, 1});
  REQUIRE(v.witness);
  REQUIRE(v.witness->kind == SwitchSequence::Kind::kCycle);
  REQUIRE(v.witness->posts.size() == 3);

  // The better matching rotates a4,a5,a6 across p5,p6,p7.
  REQUIRE(v.better);
  REQUIRE(signature_of(inst, *v.better).counts == std::vector<int>{2, 2, 2});
  REQUIRE(v.better->post_of(*inst.applicant_index("a4")) ==
          *inst.post_index("p6"));
  REQUIRE(v.better->post_of(*inst.applicant_index("a5")) ==
          *inst.post_index("p7"));
  REQUIRE(v.better->post_of(*inst.applicant_index("a6")) ==
          *inst.post_index("p5"));
}

TEST_CASE("no rank-maximal matching of the fixture instance is popular") {
  // Three identical strict lists over p5,p6,p7 yield a voting cycle: every
  // assignment is beaten by a rotation, so popularity fails everywhere.
  PreferenceInstance inst = load_fixture("fig1.txt");
  EnumerateResult all = enumerate_rmms(inst, 100);
  REQUIRE(all.matchings.size() == 12);
  for (const Matching& m : all.matchings) {
    PopularityVerdict v = check_popular(inst, m);
    REQUIRE_FALSE(v.popular);
    REQUIRE(v.tally.first > v.tally.second);
  }
}

TEST_CASE("a two-applicant swap instance is popular everywhere") {
  PreferenceInstance inst = parse_instance("a1: p1 p2\na2: p1 p2\n");
  for (const Matching& m : enumerate_rmms(inst, 10).matchings)
    REQUIRE(check_popular(inst, m).popular);
}

TEST_CASE("trivial instances are popular") {
  PreferenceInstance inst = parse_instance("a1: p1\n");
  REQUIRE(check_popular(inst, solve_restricted(inst)).popular);
  PreferenceInstance contested = parse_instance("a1: p1\na2: p1\n");
  REQUIRE(check_popular(contested, solve_restricted(contested)).popular);
}

TEST_CASE("popularity check rejects non-rank-maximal matchings") {
  PreferenceInstance inst = load_fixture("fig1.txt");
  Matching worse(inst.num_applicants(), inst.num_posts());
  worse.match(*inst.applicant_index("a1"), *inst.post_index("p1"));
  REQUIRE_THROWS_AS(check_popular(inst, worse), NotRankMaximal);
}

TEST_CASE("reweighted graph uses sign weights over rank-maximal arcs only") {
  for (const GenOptions& o : rmm::test::corpus_options(120)) {
    PreferenceInstance inst = generate_instance(o);
    auto [m, trace] = solve(inst);
    SwitchingGraph sg(trace, m);
    ReweightedGraph g = build_reweighted(sg);
    auto pairs = rmm_pair_set(sg);
    for (const auto& arc : g.arcs) {
      REQUIRE(arc.weight >= -1);
      REQUIRE(arc.weight <= 1);
      if (arc.from < g.num_posts && arc.to < g.num_posts) {
        const SwitchingArc* orig = sg.find_arc(arc.from, arc.to);
        REQUIRE(orig != nullptr);
        REQUIRE(pairs.contains({orig->witness, orig->to}));
        REQUIRE(((orig->weight > 0) - (orig->weight < 0)) == arc.weight);
      } else {
        REQUIRE(arc.weight == 0);  // terminal wiring
      }
    }
    REQUIRE(g.sources.size() == g.sinks.size());
  }
}

TEST_CASE("popularity verdicts match the brute-force oracle on the corpus") {
  for (const GenOptions& o : rmm::test::corpus_options(250)) {
    PreferenceInstance inst = generate_instance(o);
    Matching m = solve_restricted(inst);
    INFO(serialize_instance(inst));
    PopularityVerdict fast = check_popular(inst, m);
    PopularityVerdict brute = oracle::brute_popular(inst, m, {7});
    REQUIRE(fast.popular == brute.popular);
    if (!fast.popular) {
      // Witness soundness: the better matching is rank-maximal and wins.
      REQUIRE(fast.better);
      Signature best = signature_of(inst, solve_restricted(inst));
      REQUIRE(signature_of(inst, *fast.better).counts == best.counts);
      auto tally = vote_count(inst, *fast.better, m);
      REQUIRE(tally.first > tally.second);
      REQUIRE(fast.tally == tally);
    }
  }
}
