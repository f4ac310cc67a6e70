#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rwtrack/errors.hpp"
#include "rwtrack/geometry.hpp"

using namespace rwtrack;

namespace {

GroupElement elem(const Group& g, const char* word) { return g.normalize(g.parse_word(word)); }

oracle::Word word_of(const Group& g, const GroupElement& x) { return g.canonical_letters(x); }

std::vector<oracle::Word> words_of(const Group& g, std::span<const GroupElement> xs) {
  std::vector<oracle::Word> out;
  for (const auto& x : xs) out.push_back(word_of(g, x));
  return out;
}

GroupElement random_element(const Group& g, std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, g.generators().size() - 1);
  std::vector<Letter> w;
  for (int i = len(rng); i > 0; --i) w.push_back(g.generators()[pick(rng)]);
  return g.normalize(w);
}

}  // namespace

TEST_CASE("transient decomposition examples") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto path = g.canonical_geodesic({}, elem(g, "a1^5 b2 a1^3 a2^3"));
  auto d = transient_decomposition(g, path, {1});
  REQUIRE(d.deep_components.size() == 2);
  CHECK(d.deep_components[0].first == 2);
  CHECK(d.deep_components[0].last == 3);
  CHECK(d.deep_components[0].coset == PeripheralCoset::through({}, 0));
  CHECK(d.deep_components[1].first == 8);
  CHECK(d.deep_components[1].last == 10);
  CHECK(render_coset(g, d.deep_components[1].coset) == "a1^5 b2·A");
  CHECK(d.transient_vertices == std::vector<std::size_t>{0, 1, 4, 5, 6, 7, 11, 12});
  CHECK(render_decomposition(g, d) ==
        "deep 1·A vertices 2..3\ndeep a1^5 b2·A vertices 8..10\ntransient 0 1 4 5 6 7 11 12\n");

  auto shallow = transient_decomposition(g, g.canonical_geodesic({}, elem(g, "a1^2 b1 b2")), {1});
  CHECK(shallow.deep_components.empty());
  CHECK(shallow.transient_vertices.size() == 5);

  auto r0 = transient_decomposition(g, g.canonical_geodesic({}, elem(g, "a1^3")), {0});
  REQUIRE(r0.deep_components.size() == 1);
  CHECK(r0.deep_components[0].first == 1);
  CHECK(r0.deep_components[0].last == 2);
  CHECK(r0.transient_vertices == std::vector<std::size_t>{0, 3});
  CHECK_THROWS_AS(transient_decomposition(g, path, {-1}), InvalidArgument);
}

TEST_CASE("deep component sizes") {
  Group g(parse_group_spec("Z^2*F_2*Z/9"));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    auto x = random_element(g, rng, 30);
    for (int R : {0, 1, 2, 3}) {
      auto d = transient_decomposition(g, g.canonical_geodesic({}, x), {R});
      std::size_t expected = 0;
      std::size_t deep = 0;
      for (const auto& s : x.syllables) {
        auto L = g.factor(s.factor).length(s.value);
        if (L > 2 * R + 1) expected += 1;
      }
      CHECK(d.deep_components.size() == expected);
      for (const auto& c : d.deep_components) deep += c.last - c.first + 1;
      CHECK(deep + d.transient_vertices.size() == d.geodesic.vertex_count());
    }
  }
}

TEST_CASE("point to geodesic examples") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto path = g.canonical_geodesic({}, elem(g, "a1^3"));
  CHECK(dist_point_to_geodesic(g, elem(g, "a1^2"), path) == 0);
  CHECK(dist_point_to_geodesic(g, elem(g, "a2"), path) == 1);
  CHECK(sup_dist_point_over_geodesics(g, elem(g, "b1"), elem(g, "b1"), elem(g, "a1 a2")) == 0);
  CHECK(sup_dist_point_over_geodesics(g, elem(g, "a1 a2"), {}, elem(g, "a1^2 a2^2")) == 1);
  CHECK(sup_dist_point_over_geodesics(g, {}, elem(g, "a1"), elem(g, "a2")) == 1);
  std::vector<GroupElement> ends{GroupElement{}, elem(g, "a1^2 a2^2")};
  CHECK(sup_dist_hull_to_set(g, {}, elem(g, "a1^2 a2^2"), ends) == 2);
  auto hull_pts = std::vector<GroupElement>{};
  for (const char* w : {"", "a1", "a2", "a1 a2"}) hull_pts.push_back(elem(g, w));
  CHECK(sup_dist_hull_to_set(g, {}, elem(g, "a1 a2"), hull_pts) == 0);
  CHECK_THROWS_AS(sup_dist_point_over_geodesics(g, {}, {}, elem(g, "a1^1200 a2^1200")),
                  ResourceError);
}

TEST_CASE("point to geodesic against vertex scan") {
  for (const char* spec : {"Z^2*Z^2", "F_2*Z/4", "Z^3*Z/5"}) {
    Group g(parse_group_spec(spec));
    std::mt19937_64 rng(8);
    for (int t = 0; t < 400; ++t) {
      auto s = random_element(g, rng, 8);
      auto x = random_element(g, rng, 8);
      auto y = random_element(g, rng, 8);
      auto path = g.canonical_geodesic(x, y);
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (const auto& v : g.path_vertices(path)) best = std::min(best, g.distance(s, v));
      CHECK(dist_point_to_geodesic(g, s, path) == best);
    }
  }
}

TEST_CASE("sup over geodesics against enumeration") {
  for (const char* spec : {"Z^2*Z^2", "Z^2*Z/4", "F_2*Z^1"}) {
    Group g(parse_group_spec(spec));
    std::mt19937_64 rng(21);
    for (int t = 0; t < 60; ++t) {
      auto x = random_element(g, rng, 4);
      auto y = random_element(g, rng, 6);
      auto s = random_element(g, rng, 5);
      auto all = oracle::geodesics(g.spec(), word_of(g, x), word_of(g, y));
      std::int64_t sup = 0, inf = std::numeric_limits<std::int64_t>::max();
      std::int64_t hull_sup = 0;
      std::vector<GroupElement> set{s, random_element(g, rng, 5)};
      auto set_words = words_of(g, set);
      for (const auto& gamma : all) {
        auto d = oracle::dist_to_set(g.spec(), word_of(g, s), gamma);
        sup = std::max(sup, d);
        for (const auto& v : gamma) {
          hull_sup = std::max(hull_sup, oracle::dist_to_set(g.spec(), v, set_words));
        }
        inf = std::min(inf, oracle::dist_to_set(g.spec(), {}, gamma));
      }
      CHECK(sup_dist_point_over_geodesics(g, s, x, y) == sup);
      CHECK(sup_dist_hull_to_set(g, x, y, set) == hull_sup);
      std::int64_t gsup = 0;
      for (const auto& gamma : all) gsup = std::max(gsup, oracle::dist_to_set(g.spec(), {}, gamma));
      auto go = gromov_offset(g, x, y);
      CHECK(go.lower == inf);
      CHECK(go.upper == gsup);
    }
  }
}

TEST_CASE("hausdorff tracking examples") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto y = elem(g, "a1^5");
  auto verts = g.path_vertices(g.canonical_geodesic({}, y));
  auto b = hausdorff_tracking(g, verts, {}, y, {1}, TrackingTarget::Transient);
  CHECK(b.lower == 1);
  CHECK(b.upper == 1);
  CHECK(b.exact);
  std::vector<GroupElement> one{GroupElement{}};
  auto z = hausdorff_tracking(g, one, {}, {}, {1}, TrackingTarget::Geodesic);
  CHECK(z.lower == 0);
  CHECK(z.upper == 0);
  CHECK(z.exact);
  CHECK_THROWS_AS(hausdorff_tracking(g, std::vector<GroupElement>{}, {}, y, {1},
                                     TrackingTarget::Geodesic),
                  InvalidArgument);
}

TEST_CASE("hausdorff bounds bracket the sup over geodesics") {
  for (const char* spec : {"Z^2*Z^2", "Z^2*Z/4"}) {
    Group g(parse_group_spec(spec));
    auto m = simple_measure(g);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto walk = sample_trajectory(g, m, 14, seed);
      auto states = walk.states();
      auto all = oracle::geodesics(g.spec(), {}, word_of(g, walk.endpoint()));
      auto s_words = words_of(g, states);
      auto canon = words_of(g, g.path_vertices(g.canonical_geodesic({}, walk.endpoint())));
      for (int R : {0, 1, 2}) {
        for (auto target : {TrackingTarget::Geodesic, TrackingTarget::Transient}) {
          auto pick = [&](const std::vector<oracle::Word>& path) {
            return target == TrackingTarget::Geodesic ? path
                                                      : oracle::transient_vertices(path, R);
          };
          std::int64_t sup = 0;
          for (const auto& gamma : all) {
            sup = std::max(sup, oracle::hausdorff(g.spec(), s_words, pick(gamma)));
          }
          auto canon_value = oracle::hausdorff(g.spec(), s_words, pick(canon));
          auto b = hausdorff_tracking(g, walk, {R}, target);
          auto e = hausdorff_tracking(g, states, {}, walk.endpoint(), {R}, target);
          CHECK(b.lower == canon_value);
          CHECK(b.upper == sup);
          CHECK(b.lower == e.lower);
          CHECK(b.upper == e.upper);
          CHECK(b.exact == (b.lower == b.upper));
          // Swapping the ends leaves the worst-case value unchanged.
          auto r = hausdorff_tracking(g, states, walk.endpoint(), {}, {R}, target);
          CHECK(r.upper == b.upper);
        }
      }
    }
  }
}

TEST_CASE("hausdorff falls back to bounds beyond the hull guard") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto y = elem(g, "a1^30 a2^30 b1");
  std::vector<GroupElement> set{GroupElement{}, y};
  auto exact = hausdorff_tracking(g, set, {}, y, {1}, TrackingTarget::Geodesic);
  auto capped = hausdorff_tracking(g, set, {}, y, {1}, TrackingTarget::Geodesic, 100);
  CHECK_FALSE(capped.exact);
  CHECK(capped.lower == exact.lower);
  CHECK(capped.upper >= exact.upper);
  CHECK(capped.lower <= capped.upper);
}

TEST_CASE("transient log closeness") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto y = elem(g, "a1^3 b2^4");
  auto verts = g.path_vertices(g.canonical_geodesic({}, y));
  CHECK(transient_log_closeness(g, verts, {}, y, {1}).max_detour == 0);
  std::vector<GroupElement> detour{GroupElement{}, elem(g, "b1"), GroupElement{}, elem(g, "a1")};
  auto r = transient_log_closeness(g, detour, {}, elem(g, "a1"), {1});
  CHECK(r.max_detour == 0);
  CHECK(r.ratio == 0.0);
  CHECK_THROWS_AS(transient_log_closeness(g, detour, {}, elem(g, "a2"), {1}), InvalidArgument);
  std::vector<GroupElement> jump{GroupElement{}, elem(g, "a1^2")};
  CHECK_THROWS_AS(transient_log_closeness(g, jump, {}, elem(g, "a1^2"), {1}), InvalidArgument);

  auto m = simple_measure(g);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto walk = sample_trajectory(g, m, 200, seed);
    auto states = walk.states();
    auto a = transient_log_closeness(g, walk, {1});
    auto b = transient_log_closeness(g, states, {}, walk.endpoint(), {1});
    CHECK(a.max_detour == b.max_detour);
    CHECK(a.ratio == doctest::Approx(a.max_detour / std::log2(201.0)));
  }
}

TEST_CASE("triangle thinness examples and enumeration") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto x = elem(g, "a1 b2");
  auto same = triangle_thinness(g, x, x, x);
  CHECK(same.lower == 0);
  CHECK(same.upper == 0);
  auto t = triangle_thinness(g, {}, elem(g, "a1^2"), elem(g, "b1^2"));
  CHECK(t.upper == 0);
  CHECK(t.exact);

  Group f(parse_group_spec("F_2"));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    auto tt = triangle_thinness(f, random_element(f, rng, 9), random_element(f, rng, 9),
                                random_element(f, rng, 9));
    CHECK(tt.upper == 0);
  }

  for (const char* spec : {"Z^2*Z^2", "Z^2*Z/4"}) {
    Group h(parse_group_spec(spec));
    std::mt19937_64 r2(13);
    for (int i = 0; i < 25; ++i) {
      std::array<GroupElement, 3> xs{random_element(h, r2, 4), random_element(h, r2, 4),
                                     random_element(h, r2, 4)};
      std::array<std::vector<std::vector<oracle::Word>>, 3> sides;
      for (int k = 0; k < 3; ++k) {
        sides[k] = oracle::geodesics(h.spec(), word_of(h, xs[k]), word_of(h, xs[(k + 1) % 3]));
      }
      // Thinness of a fixed triangle, maximized over all side choices.
      std::int64_t sup = 0;
      for (int k = 0; k < 3; ++k) {
        for (const auto& side : sides[k]) {
          for (const auto& p : side) {
            std::int64_t worst_other = std::numeric_limits<std::int64_t>::max();
            std::int64_t a = 0, b = 0;
            for (const auto& o : sides[(k + 1) % 3]) a = std::max(a, oracle::dist_to_set(h.spec(), p, o));
            for (const auto& o : sides[(k + 2) % 3]) b = std::max(b, oracle::dist_to_set(h.spec(), p, o));
            worst_other = std::min(a, b);
            sup = std::max(sup, worst_other);
          }
        }
      }
      auto tb = triangle_thinness(h, xs[0], xs[1], xs[2]);
      CHECK(tb.upper == sup);
      CHECK(tb.lower <= tb.upper);
    }
  }
}

TEST_CASE("gromov offset examples") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto z = gromov_offset(g, {}, {});
  CHECK(z.lower == 0);
  CHECK(z.upper == 0);
  auto line = gromov_offset(g, elem(g, "a1^-1"), elem(g, "a1"));
  CHECK(line.upper == 0);
  auto corner = gromov_offset(g, elem(g, "a1"), elem(g, "a2"));
  CHECK(corner.lower == 0);
  CHECK(corner.upper == 1);
  CHECK_FALSE(corner.exact);
}

TEST_CASE("relative rips gap is at most R on small instances") {
  Group g(parse_group_spec("Z^2*Z^2"));
  std::mt19937_64 rng(6);
  for (int t = 0; t < 2000; ++t) {
    auto x = random_element(g, rng, 10);
    auto y = random_element(g, rng, 10);
    auto z = random_element(g, rng, 10);
    for (int R : {0, 1, 2}) CHECK(relative_rips_gap(g, x, y, z, {R}) <= R);
  }
}
