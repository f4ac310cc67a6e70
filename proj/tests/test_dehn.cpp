#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "rwtrack/dehn.hpp"
#include "rwtrack/errors.hpp"

using namespace rwtrack;

namespace {

std::vector<Letter> word(const Group& g, const char* w) { return g.parse_word(w); }
GroupElement elem(const Group& g, const char* w) { return g.normalize(g.parse_word(w)); }

FactorLoop z2_loop(const Group& g, const char* w) {
  auto letters = word(g, w);
  FactorLoop out{letters.empty() ? 0u : letters.front().factor, letters, {}};
  for (std::size_t i = 0; i < letters.size(); ++i) out.positions.push_back(i);
  return out;
}

std::vector<LatticeStep> steps_of(const std::vector<Letter>& w) {
  std::vector<LatticeStep> out;
  for (const auto& s : w) out.push_back(s.generator == 0 ? LatticeStep{s.sign, 0} : LatticeStep{0, s.sign});
  return out;
}

// Random product of conjugated commutators in Z^2, letters in factor 0.
std::vector<Letter> random_commutator_product(std::mt19937_64& rng, std::size_t max_len) {
  std::vector<Letter> out;
  std::uniform_int_distribution<int> coin(0, 1), conj_len(0, 4);
  for (;;) {
    std::vector<Letter> g;
    for (int i = conj_len(rng); i > 0; --i) {
      g.push_back({0, static_cast<std::uint16_t>(coin(rng)), static_cast<std::int8_t>(coin(rng) ? 1 : -1)});
    }
    std::vector<Letter> c{{0, 0, 1}, {0, 1, 1}, {0, 0, -1}, {0, 1, -1}};
    if (coin(rng)) c = oracle::inverse(c);
    auto piece = oracle::concat(oracle::concat(g, c), oracle::inverse(g));
    if (out.size() + piece.size() > max_len) return out;
    out = oracle::concat(out, piece);
  }
}

// Letters kept after free reduction of a one-factor word.
std::size_t free_length(const std::vector<Letter>& w) {
  std::vector<Letter> st;
  for (const auto& s : w) {
    if (!st.empty() && st.back() == s.inverse()) {
      st.pop_back();
    } else {
      st.push_back(s);
    }
  }
  return st.size();
}

}  // namespace

TEST_CASE("combing word examples") {
  Group g(parse_group_spec("Z^2*Z^2"));
  CHECK(combing_word(g, elem(g, "a2 a1")) == word(g, "a1 a2"));
  CHECK(combing_word(g, {}).empty());
  CHECK(combing_word(g, elem(g, "a1 b2^2")) == word(g, "a1 b2 b2"));
}

TEST_CASE("loop of trajectory") {
  Group g(parse_group_spec("Z^2*Z^2"));
  Trajectory t(g, word(g, "a1 a2 a2^-1"), 0, StorageMode::Full);
  CHECK(loop_of_trajectory(g, t).letters() == word(g, "a1 a2 a2^-1 a1^-1"));
  Trajectory empty(g, {}, 0, StorageMode::Full);
  CHECK(loop_of_trajectory(g, empty).size() == 0);
  auto measure = simple_measure(g);
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto walk = sample_trajectory(g, measure, 60, s, StorageMode::Streaming);
    auto loop = loop_of_trajectory(g, walk);
    CHECK(g.normalize(loop.letters()).is_identity());
    CHECK(loop.size() == 60 + static_cast<std::size_t>(g.word_length(walk.endpoint())));
  }
  CHECK_THROWS_AS(LoopWord(g, word(g, "a1")), InvalidArgument);
}

TEST_CASE("decomposition examples") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto one = decompose_factor_loops(g, LoopWord(g, word(g, "a1 a2 a1^-1 a2^-1")));
  REQUIRE(one.size() == 1);
  CHECK(one[0].factor == 0);
  CHECK(one[0].letters == word(g, "a1 a2 a1^-1 a2^-1"));

  auto nested = decompose_factor_loops(g, LoopWord(g, word(g, "b1 a1 a2 a1^-1 a2^-1 b1^-1")));
  REQUIRE(nested.size() == 2);
  CHECK(nested[0].letters == word(g, "a1 a2 a1^-1 a2^-1"));
  CHECK(nested[1].letters == word(g, "b1 b1^-1"));

  auto inner = decompose_factor_loops(g, LoopWord(g, word(g, "a1 b1 b1^-1 a1^-1")));
  REQUIRE(inner.size() == 2);
  CHECK(inner[0].letters == word(g, "b1 b1^-1"));
  CHECK(inner[1].letters == word(g, "a1 a1^-1"));
}

TEST_CASE("decomposition replay over random trajectories") {
  for (const char* spec : {"Z^2*Z^2", "Z^2*F_2*Z/3", "Z/2*Z/3"}) {
    Group g(parse_group_spec(spec));
    auto measure = simple_measure(g);
    for (std::uint64_t s = 0; s < 40; ++s) {
      auto loop = loop_of_trajectory(g, sample_trajectory(g, measure, 80, s, StorageMode::Streaming));
      auto pieces = decompose_factor_loops(g, loop);
      std::vector<Letter> replay(loop.size());
      std::vector<char> filled(loop.size(), 0);
      std::size_t total = 0;
      for (const auto& p : pieces) {
        REQUIRE(p.letters.size() == p.positions.size());
        const auto& kind = g.factor(p.factor);
        auto v = kind.identity();
        for (std::size_t i = 0; i < p.letters.size(); ++i) {
          CHECK(p.letters[i].factor == p.factor);
          kind.apply(v, p.letters[i].generator, p.letters[i].sign);
          CHECK(filled[p.positions[i]] == 0);
          filled[p.positions[i]] = 1;
          replay[p.positions[i]] = p.letters[i];
        }
        CHECK(kind.is_identity(v));
        total += p.letters.size();
      }
      CHECK(total == loop.size());
      CHECK(replay == loop.letters());
    }
  }
}

TEST_CASE("factor area examples") {
  Group g(parse_group_spec("Z^2*Z/4*F_2*Z^1"));
  auto r = factor_area(g, z2_loop(g, "a1 a2 a1^-1 a2^-1"));
  CHECK(r.lower == 1);
  CHECK(r.upper == 1);
  CHECK(r.exact);
  r = factor_area(g, z2_loop(g, "a1^2 a2^2 a1^-2 a2^-2"));
  CHECK(r.lower == 4);
  CHECK(r.upper == 4);
  CHECK(r.exact);
  r = factor_area(g, z2_loop(g, "b1^4"));
  CHECK(r.lower == 1);
  CHECK(r.upper == 1);
  CHECK(r.exact);
  r = factor_area(g, z2_loop(g, "b1^-8"));
  CHECK(r.lower == 2);
  CHECK(r.exact);
  r = factor_area(g, z2_loop(g, "c1 c2 c2^-1 c1^-1"));
  CHECK(r.upper == 0);
  CHECK(r.exact);
  r = factor_area(g, z2_loop(g, "d1 d1^-1"));
  CHECK(r.upper == 0);
  CHECK(r.exact);
  CHECK(factor_area(g, z2_loop(g, "a1 a1^-1")).upper == 0);
}

TEST_CASE("Z^3 has no area oracle") {
  Group g(parse_group_spec("Z^3*Z^2"));
  CHECK_THROWS_AS(factor_area(g, z2_loop(g, "a1 a1^-1")), UnsupportedFactor);
  CHECK_THROWS_AS(require_area_oracles(g), UnsupportedFactor);
  CHECK_THROWS_AS(average_dehn_estimate(g, 10, 5, 1), UnsupportedFactor);
  CHECK_NOTHROW(factor_area(g, z2_loop(g, "b1 b1^-1")));
}

TEST_CASE("winding area of rectangles and lattice loops") {
  for (int w = 1; w <= 5; ++w) {
    for (int h = 1; h <= 5; ++h) {
      std::vector<LatticeStep> rect;
      for (int i = 0; i < w; ++i) rect.push_back({1, 0});
      for (int i = 0; i < h; ++i) rect.push_back({0, 1});
      for (int i = 0; i < w; ++i) rect.push_back({-1, 0});
      for (int i = 0; i < h; ++i) rect.push_back({0, -1});
      CHECK(winding_area(rect) == w * h);
      CHECK(peeling_area(rect) == w * h);
      CHECK(inversion_area(rect) == w * h);
    }
  }
  // Figure eight: two unit squares with opposite orientation.
  std::vector<LatticeStep> eight{{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {-1, 0}, {0, -1}, {1, 0}, {0, 1}};
  CHECK(winding_area(eight) == 2);
  CHECK(peeling_area(eight) == 2);
  // A square traversed twice.
  std::vector<LatticeStep> twice{{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  CHECK(winding_area(twice) == 2);
  CHECK(peeling_area(twice) == 2);
}

TEST_CASE("Z^2 oracle bounds on random loops") {
  Group g(parse_group_spec("Z^2*Z^2"));
  std::mt19937_64 rng(7);
  int exact = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto w = random_commutator_product(rng, 40);
    auto steps = steps_of(w);
    auto lower = winding_area(steps);
    auto peel = peeling_area(steps);
    CHECK(lower <= peel);
    CHECK(peel <= inversion_area(steps));
    exact += factor_area(g, FactorLoop{0, w, {}}).exact;
  }
  MESSAGE("exact on " << exact << " of 1000 commutator products");
}

TEST_CASE("area subadditivity") {
  Group g(parse_group_spec("Z^2*Z^2"));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto w1 = random_commutator_product(rng, 20);
    auto w2 = random_commutator_product(rng, 20);
    auto u1 = factor_area(g, FactorLoop{0, w1, {}}).upper;
    auto u2 = factor_area(g, FactorLoop{0, w2, {}}).upper;
    auto u12 = factor_area(g, FactorLoop{0, oracle::concat(w1, w2), {}}).upper;
    CHECK(u12 <= u1 + u2);
  }
}

TEST_CASE("loop area is a sum over pieces") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto r = loop_area(g, LoopWord(g, word(g, "b1 a1 a2 a1^-1 a2^-1 b1^-1 b1 b2 b1^-1 b2^-1")));
  CHECK(r.lower == 2);
  CHECK(r.upper == 2);
  CHECK(r.exact);
}

TEST_CASE("average Dehn estimate") {
  Group free(parse_group_spec("F_2"));
  auto f = average_dehn_estimate(free, 200, 20, 3);
  CHECK(f.upper.mean == 0.0);
  CHECK(f.exact_trials == 20);
  Group g(parse_group_spec("Z^2*Z^2"));
  auto one = average_dehn_estimate(g, 1, 20, 3);
  CHECK(one.upper.mean == 0.0);
  CHECK(one.lower.mean == 0.0);
  auto a = average_dehn_estimate(g, 256, 30, 9, 1);
  auto b = average_dehn_estimate(g, 256, 30, 9, 4);
  CHECK(a.upper.mean == b.upper.mean);
  CHECK(a.lower.mean == b.lower.mean);
  CHECK(a.lower.mean <= a.upper.mean);
  CHECK(a.upper.mean > 0.0);
}
