#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "helpers.hpp"

using namespace rmm;
using rmm::test::load_fixture;

TEST_CASE("parses the bundled six-applicant fixture") {
  PreferenceInstance inst = load_fixture("fig1.txt");
  REQUIRE(inst.num_applicants() == 6);
  REQUIRE(inst.num_posts() == 7);
  REQUIRE(inst.max_rank() == 3);
  REQUIRE(inst.dense_ranks());
  REQUIRE_FALSE(inst.has_last_resorts());

  int a1 = *inst.applicant_index("a1");
  int a3 = *inst.applicant_index("a3");
  REQUIRE(*inst.rank_of(a1, *inst.post_index("p3")) == 3);
  REQUIRE(*inst.rank_of(a3, *inst.post_index("p1")) == 1);
  REQUIRE_FALSE(inst.rank_of(a3, *inst.post_index("p2")));
  REQUIRE(inst.prefs(a3).size() == 1);
  REQUIRE(inst.edges().size() == 16);
}

TEST_CASE("tie groups and explicit ranks") {
  PreferenceInstance inst = parse_instance(
      "a1: ( p1 p2 ) p3@5 p4\n"
      "a2: p2 ( p3 p4 )@7\n");
  int a1 = *inst.applicant_index("a1");
  int a2 = *inst.applicant_index("a2");
  REQUIRE(*inst.rank_of(a1, *inst.post_index("p1")) == 1);
  REQUIRE(*inst.rank_of(a1, *inst.post_index("p2")) == 1);
  REQUIRE(*inst.rank_of(a1, *inst.post_index("p3")) == 5);
  // Implicit rank continues from the previous explicit one.
  REQUIRE(*inst.rank_of(a1, *inst.post_index("p4")) == 6);
  REQUIRE(*inst.rank_of(a2, *inst.post_index("p3")) == 7);
  REQUIRE(inst.max_rank() == 7);
  REQUIRE_FALSE(inst.dense_ranks());
}

TEST_CASE("posts header declares isolated posts") {
  PreferenceInstance inst = parse_instance(
      "posts: q1 q2\n"
      "# a comment line\n"
      "a1: q2\n");
  REQUIRE(inst.num_posts() == 2);
  REQUIRE(inst.post_index("q1"));
  REQUIRE(inst.edges().size() == 1);
}

TEST_CASE("parse errors carry line numbers") {
  auto expect_error = [](const std::string& text, int line) {
    try {
      parse_instance(text);
      FAIL("expected ParseError for: " << text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_error("a1: p1\nno colon here\n", 2);
  expect_error("a1: p1\na1: p2\n", 2);       // duplicate applicant
  expect_error("a1: p1 p1\n", 1);            // duplicate post in list
  expect_error("a1: p1 ( p2\n", 1);          // unterminated tie group
  expect_error("a1: ( )\n", 1);              // empty tie group
  expect_error("a1: p1 )\n", 1);             // stray paren
  expect_error("a1:\n", 1);                  // empty list
  expect_error("a1: p1@0\n", 1);             // non-positive rank
  expect_error("a1: p1@2 p2@1\n", 1);        // ranks must increase
  expect_error("a1: p1@x\n", 1);             // malformed rank
  expect_error(": p1\n", 1);                 // missing id
  expect_error("posts: ( p1 )\n", 1);        // group in posts header
}

TEST_CASE("serialize/parse round trip on random instances") {
  for (unsigned seed = 1; seed <= 120; ++seed) {
    GenOptions o;
    o.seed = seed;
    o.num_applicants = 1 + seed % 6;
    o.num_posts = 1 + (seed / 2) % 6;
    o.max_rank = 1 + seed % 4;
    PreferenceInstance inst = generate_instance(o);
    PreferenceInstance back = parse_instance(serialize_instance(inst));
    REQUIRE(back.num_applicants() == inst.num_applicants());
    REQUIRE(back.num_posts() == inst.num_posts());
    // Post indices may be renumbered by list order; compare by id.
    auto by_id = [](const PreferenceInstance& x) {
      std::set<std::tuple<std::string, std::string, int>> out;
      for (auto [a, p, r] : x.edges())
        out.emplace(x.applicant_id(a), x.post_id(p), r);
      return out;
    };
    REQUIRE(by_id(back) == by_id(inst));
    for (int a = 0; a < inst.num_applicants(); ++a)
      REQUIRE(back.applicant_id(a) == inst.applicant_id(a));
    for (int p = 0; p < inst.num_posts(); ++p)
      REQUIRE(back.post_index(inst.post_id(p)));
  }
}

TEST_CASE("sparse explicit ranks survive a round trip") {
  PreferenceInstance inst = parse_instance("a1: p1 p2@4 ( p3 p4 )@9\n");
  PreferenceInstance back = parse_instance(serialize_instance(inst));
  REQUIRE(back.edges() == inst.edges());
  REQUIRE(back.max_rank() == 9);
}

TEST_CASE("signature of the fixture matching is (2,2,2)") {
  PreferenceInstance inst = load_fixture("fig1.txt");
  Matching m = rmm::test::load_matching_fixture(inst, "fig1_M.txt");
  Signature sig = signature_of(inst, m);
  REQUIRE(sig.counts == std::vector<int>{2, 2, 2});
  REQUIRE(sig.to_string() == "(2,2,2)");
  REQUIRE(sig.total() == 6);
  REQUIRE(sig.at(2) == 2);
  REQUIRE(sig.at(9) == 0);
}

TEST_CASE("signature comparison is lexicographic with zero padding") {
  auto sig = [](std::vector<int> v) { return Signature{std::move(v)}; };
  REQUIRE(compare_signatures(sig({2, 2, 2}), sig({2, 2, 1, 5})) ==
          std::strong_ordering::greater);
  REQUIRE(compare_signatures(sig({1}), sig({1, 0})) ==
          std::strong_ordering::equal);
  REQUIRE(compare_signatures(sig({0, 9}), sig({1})) ==
          std::strong_ordering::less);
  REQUIRE(sig({3}) == sig({3, 0, 0}));
}

TEST_CASE("signature comparison is a total order on random signatures") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(0, 4), val(0, 2);
  std::vector<Signature> sigs;
  for (int i = 0; i < 40; ++i) {
    Signature s;
    int n = len(rng);
    for (int j = 0; j < n; ++j) s.counts.push_back(val(rng));
    sigs.push_back(std::move(s));
  }
  for (const auto& x : sigs)
    for (const auto& y : sigs) {
      auto xy = compare_signatures(x, y);
      auto yx = compare_signatures(y, x);
      if (xy == std::strong_ordering::less)
        REQUIRE(yx == std::strong_ordering::greater);
      else if (xy == std::strong_ordering::greater)
        REQUIRE(yx == std::strong_ordering::less);
      else
        REQUIRE(yx == std::strong_ordering::equal);
      for (const auto& z : sigs)
        if (xy == std::strong_ordering::less &&
            compare_signatures(y, z) == std::strong_ordering::less)
          REQUIRE(compare_signatures(x, z) == std::strong_ordering::less);
    }
}

TEST_CASE("last-resort augmentation and stripping") {
  PreferenceInstance inst = parse_instance("a1: p1\na2: p1\n");
  PreferenceInstance aug = add_last_resorts(inst);
  REQUIRE(aug.num_posts() == 3);
  REQUIRE(aug.max_rank() == 2);
  REQUIRE(aug.has_last_resorts());
  REQUIRE(aug.post_index("~a1"));
  REQUIRE(aug.is_last_resort(*aug.post_index("~a2")));
  REQUIRE_FALSE(aug.is_last_resort(*aug.post_index("p1")));
  REQUIRE_THROWS_AS(add_last_resorts(aug), std::invalid_argument);

  Matching m(aug.num_applicants(), aug.num_posts());
  m.match(*aug.applicant_index("a1"), *aug.post_index("p1"));
  m.match(*aug.applicant_index("a2"), *aug.post_index("~a2"));
  Matching stripped = strip_last_resorts(aug, inst, m);
  REQUIRE(stripped.size() == 1);
  REQUIRE(stripped.post_of(*inst.applicant_index("a1")) ==
          *inst.post_index("p1"));
  REQUIRE_FALSE(stripped.applicant_matched(*inst.applicant_index("a2")));
}

TEST_CASE("matching parser validates its input") {
  PreferenceInstance inst = load_fixture("fig1.txt");
  REQUIRE_THROWS_AS(parse_matching(inst, "zz p1\n"), ParseError);
  REQUIRE_THROWS_AS(parse_matching(inst, "a1 zz\n"), ParseError);
  REQUIRE_THROWS_AS(parse_matching(inst, "a3 p2\n"), ParseError);   // non-edge
  REQUIRE_THROWS_AS(parse_matching(inst, "a1 p1\na2 p1\n"), ParseError);
  REQUIRE_THROWS_AS(parse_matching(inst, "a1 p1 p2\n"), ParseError);
  Matching ok = parse_matching(inst, "# comment\na1 p1\n\na4 p5\n");
  REQUIRE(ok.size() == 2);
}

TEST_CASE("matching rejects double assignment") {
  Matching m(2, 2);
  m.match(0, 1);
  REQUIRE_THROWS_AS(m.match(1, 1), InvalidMatching);
  m.unmatch(0);
  m.match(1, 1);
  REQUIRE(m.applicant_of(1) == 1);
}
