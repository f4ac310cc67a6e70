#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rwtrack/errors.hpp"
#include "rwtrack/projections.hpp"

using namespace rwtrack;

namespace {

GroupElement elem(const Group& g, const char* word) { return g.normalize(g.parse_word(word)); }

PeripheralCoset coset(const Group& g, const char* prefix, std::uint32_t factor) {
  return PeripheralCoset::through(elem(g, prefix), factor);
}

}  // namespace

TEST_CASE("project_point examples") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto x = elem(g, "a1 b1 a2");
  auto r = project_point(g, coset(g, "", 0), x);
  CHECK(r.point == elem(g, "a1"));
  CHECK(r.distance == 2);

  auto in = elem(g, "a1^2 a2");
  r = project_point(g, coset(g, "", 0), in);
  CHECK(r.point == in);
  CHECK(r.distance == 0);

  r = project_point(g, coset(g, "a1", 1), {});
  CHECK(r.point == elem(g, "a1"));
  CHECK(r.distance == 1);
}

TEST_CASE("coset_distance examples") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto A = coset(g, "", 0);
  CHECK(coset_distance(g, A, elem(g, "a1 b1"), elem(g, "a2^2")) == 3);
  CHECK(coset_distance(g, A, elem(g, "b1 a2"), elem(g, "b1 a2")) == 0);
  CHECK(coset_distance(g, A, elem(g, "b1"), elem(g, "b2")) == 0);
}

TEST_CASE("project_coset examples") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto A = coset(g, "", 0);
  CHECK(project_coset(g, A, coset(g, "a1", 1)) == elem(g, "a1"));
  CHECK(project_coset(g, A, coset(g, "", 1)).is_identity());
  CHECK(project_coset(g, coset(g, "b1", 0), A) == elem(g, "b1"));
  CHECK_THROWS_AS(project_coset(g, A, coset(g, "a2^3", 0)), InvalidArgument);

  // The gate is a single point: every point of Q projects to it.
  auto Q = coset(g, "a1 b1 a2", 1);
  auto gate = project_coset(g, A, Q);
  for (const char* a : {"", "b1", "b2^-3", "b1 b2"}) {
    auto q = g.multiply(Q.prefix, elem(g, a));
    CHECK(project_point(g, A, q).point == gate);
  }
}

TEST_CASE("behrstock_min examples") {
  Group g(parse_group_spec("Z^2*Z^2"));
  CHECK(behrstock_min(g, elem(g, "a1 b1 a2"), coset(g, "", 0), coset(g, "a1", 1)) == 0);
  CHECK(behrstock_min(g, {}, coset(g, "b2", 0), coset(g, "a1 b1", 0)) == 0);
  CHECK_THROWS_AS(behrstock_min(g, {}, coset(g, "", 0), coset(g, "a1", 0)), InvalidArgument);
}

TEST_CASE("max_projection examples") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto m = max_projection(g, elem(g, "a1^2 b2^3 a1^-1"));
  CHECK(m.value == 3);
  REQUIRE(m.coset.has_value());
  CHECK(*m.coset == coset(g, "a1^2", 1));
  CHECK(render_coset(g, *m.coset) == "a1^2·B");
  auto e = max_projection(g, {});
  CHECK(e.value == 0);
  CHECK_FALSE(e.coset.has_value());
}

TEST_CASE("projection distance is the exact coset distance") {
  for (const char* spec : {"Z^2*Z^2", "F_2", "Z^2*Z/3"}) {
    Group g(parse_group_spec(spec));
    auto ball = oracle::ball(g.spec(), 3);
    std::vector<std::vector<oracle::Word>> fwords;
    for (std::uint32_t f = 0; f < g.factor_count(); ++f) {
      fwords.push_back(oracle::factor_ball(g.spec(), f, 7));
    }
    auto small = oracle::ball(g.spec(), 1);
    for (const auto& e : ball) {
      auto x = g.normalize(e.word);
      for (const auto& p : small) {
        for (std::uint32_t f = 0; f < g.factor_count(); ++f) {
          auto P = PeripheralCoset::through(g.normalize(p.word), f);
          auto r = project_point(g, P, x);
          auto prefix = g.canonical_letters(P.prefix);
          auto best = oracle::nearest_in_coset(g.spec(), e.word, prefix, fwords[f]);
          CHECK(r.distance == best.distance);
          CHECK(best.ties == 1);
          CHECK(g.normalize(best.point) == r.point);
        }
      }
    }
  }
}

TEST_CASE("syllable distance formula and counting bound") {
  Group g(parse_group_spec("Z^2*F_2*Z/5"));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, g.generators().size() - 1);
  for (int t = 0; t < 500; ++t) {
    std::vector<Letter> w;
    for (int i = 0; i < 25; ++i) w.push_back(g.generators()[pick(rng)]);
    auto x = g.normalize(w);
    // Cosets that can see x: those of its syllables plus every coset
    // through a vertex of the canonical geodesic.
    std::set<std::pair<std::string, std::uint32_t>> seen;
    std::int64_t total = 0;
    std::int64_t nonzero = 0;
    for (const auto& v : g.path_vertices(g.canonical_geodesic({}, x))) {
      for (const auto& H : cosets_through(g, v)) {
        if (!seen.insert({g.render(H.prefix), H.factor}).second) continue;
        auto d = coset_distance(g, H, {}, x);
        total += d;
        nonzero += d > 0;
      }
    }
    CHECK(total == g.word_length(x));
    CHECK(nonzero <= g.word_length(x));
  }
}
