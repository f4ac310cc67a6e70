#include <cmath>
#include <map>

#include "doctest.h"
#include "rwtrack/errors.hpp"
#include "rwtrack/walk.hpp"

using namespace rwtrack;

namespace {

Trajectory forced(const Group& g, const char* word) {
  return Trajectory(g, g.parse_word(word), 0, StorageMode::Full);
}

}  // namespace

TEST_CASE("seed derivation is fixed") {
  // Reference values of the published splitmix64 finalizer.
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(1) == 0x910A2DEC89025CC1ULL);
  CHECK(derive_seed(7, 3) == splitmix64(7 ^ splitmix64(3)));
}

TEST_CASE("simple measure") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto m = simple_measure(g);
  CHECK(m.letters().size() == 8);
  for (const auto& s : m.letters()) CHECK(m.probability(s) == doctest::Approx(0.125));
  Group f(parse_group_spec("F_2"));
  auto mf = simple_measure(f);
  CHECK(mf.letters().size() == 4);
  auto a1 = f.parse_letter("a1");
  CHECK(mf.probability(a1) == mf.probability(a1.inverse()));
}

TEST_CASE("measure validation") {
  Group g(parse_group_spec("F_2"));
  auto a1 = g.parse_letter("a1");
  auto a2 = g.parse_letter("a2");
  CHECK_THROWS_AS(StepMeasure(g, {{a1, 1}}), InvalidArgument);
  CHECK_THROWS_AS(StepMeasure(g, {{a1, 1}, {a1.inverse(), 1}}), InvalidArgument);
  CHECK_THROWS_AS(StepMeasure(g, {{a1, 2}, {a1.inverse(), 1}, {a2, 1}, {a2.inverse(), 1}}),
                  InvalidArgument);
  CHECK_THROWS_AS(StepMeasure(g, {{a1, 0}, {a1.inverse(), 0}, {a2, 1}, {a2.inverse(), 1}}),
                  InvalidArgument);
  StepMeasure lazy(g, {{a1, 3}, {a1.inverse(), 3}, {a2, 1}, {a2.inverse(), 1}});
  CHECK(lazy.probability(a1) == doctest::Approx(0.375));

  // In Z/2 the generator is its own inverse, so one signed letter suffices.
  Group c(parse_group_spec("Z/2*Z/3"));
  auto t = c.parse_letter("a1");
  auto u = c.parse_letter("b1");
  CHECK_NOTHROW(StepMeasure(c, {{t, 2}, {u, 1}, {u.inverse(), 1}}));
}

TEST_CASE("sampling basics") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto m = simple_measure(g);
  auto t0 = sample_trajectory(g, m, 0, 1);
  CHECK(t0.states().size() == 1);
  CHECK(t0.state(0).is_identity());

  auto a = sample_trajectory(g, m, 500, 42);
  auto b = sample_trajectory(g, m, 500, 42);
  CHECK(a.increments() == b.increments());
  CHECK(a.states() == b.states());
  auto s = sample_trajectory(g, m, 500, 42, StorageMode::Streaming);
  CHECK(s.endpoint() == a.endpoint());
  CHECK_FALSE(s.stores_states());
  CHECK_THROWS_AS(s.state(1), InvalidArgument);

  auto states = a.states();
  REQUIRE(states.size() == 501);
  GroupElement x;
  for (std::size_t i = 0; i < a.steps(); ++i) {
    g.right_multiply(x, a.increments()[i]);
    CHECK(states[i + 1] == x);
    CHECK(a.state_length(i + 1) == g.word_length(x));
  }
}

TEST_CASE("letter frequencies are uniform within 3 sigma") {
  Group g(parse_group_spec("Z^2*Z^2"));
  auto m = simple_measure(g);
  const std::size_t n = 100000;
  auto inc = sample_increments(m, n, 2024);
  std::map<Letter, std::size_t> counts;
  for (const auto& s : inc) ++counts[s];
  const double p = 1.0 / 8;
  const double sigma = std::sqrt(n * p * (1 - p));
  for (const auto& s : m.letters()) {
    CHECK(std::abs(static_cast<double>(counts[s]) - n * p) <= 3 * sigma);
  }
}

TEST_CASE("full storage guard") {
  Group g(parse_group_spec("F_2"));
  auto m = simple_measure(g);
  CHECK_THROWS_AS(sample_trajectory(g, m, Trajectory::kMaxStoredSteps + 1, 1), ResourceError);
  CHECK_NOTHROW(
      sample_trajectory(g, m, Trajectory::kMaxStoredSteps + 1, 1, StorageMode::Streaming));
}

TEST_CASE("distances_from matches direct computation") {
  for (const char* spec : {"Z^2*Z^2", "F_2*Z/3", "Z/4*Z^1", "F_1*F_1"}) {
    Group g(parse_group_spec(spec));
    auto m = simple_measure(g);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      auto t = sample_trajectory(g, m, 300, seed);
      auto states = t.states();
      for (std::size_t i = 0; i <= t.steps(); i += 7) {
        auto d = t.distances_from(g, i);
        for (std::size_t j = i + 1; j <= t.steps(); ++j) {
          CHECK(d[j] == g.distance(states[i], states[j]));
          CHECK(t.distance(g, i, j) == d[j]);
          CHECK(t.distance(g, j, i) == d[j]);
        }
      }
    }
  }
}

TEST_CASE("drift") {
  Group f(parse_group_spec("F_2"));
  auto est = drift_estimate(f, simple_measure(f), 4000, 30, 9);
  CHECK(est.mean == doctest::Approx(0.5).epsilon(0.1));
  CHECK(est.ci_low <= est.mean);
  CHECK(est.mean <= est.ci_high);
  auto par = drift_estimate(f, simple_measure(f), 4000, 30, 9, 4);
  CHECK(par.mean == est.mean);
  CHECK(par.ci_low == est.ci_low);
  CHECK_THROWS_AS(drift_estimate(f, simple_measure(f), 0, 30, 9), InvalidArgument);
  CHECK_THROWS_AS(drift_estimate(f, simple_measure(f), 10, 1, 9), InvalidArgument);
}

TEST_CASE("subwalk progress violations") {
  Group g(parse_group_spec("Z^2*Z^2"));
  std::string straight;
  for (int i = 0; i < 64; ++i) straight += "a1 ";
  auto t = forced(g, straight.c_str());
  CHECK(subwalk_progress_violations(g, t, 1.0).empty());
  CHECK_FALSE(has_progress_violation(g, t, 1.0));

  std::string back_forth;
  for (int i = 0; i < 64; ++i) back_forth += "a1 a1^-1 ";
  auto z = forced(g, back_forth.c_str());
  for (double c3 : {1.0, 2.0, 4.0}) {
    auto v = subwalk_progress_violations(g, z, c3);
    CHECK_FALSE(v.empty());
    CHECK(has_progress_violation(g, z, c3));
    for (auto [i, j] : v) CHECK(static_cast<double>(j - i) >= c3 * std::log(128.0));
  }
  CHECK_THROWS_AS(subwalk_progress_violations(g, z, 0.0), InvalidArgument);
}

TEST_CASE("violation scan agrees with every pair") {
  for (const char* spec : {"Z^2*Z^2", "F_2*Z/3", "Z/2*Z/3"}) {
    Group g(parse_group_spec(spec));
    auto m = simple_measure(g);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      auto t = sample_trajectory(g, m, 400, seed);
      for (double c3 : {1.5, 3.0, 5.0, 8.0}) {
        std::vector<std::pair<std::size_t, std::size_t>> brute;
        const double min_gap = c3 * std::log(400.0);
        for (std::size_t i = 0; i <= t.steps(); ++i) {
          auto d = t.distances_from(g, i);
          for (std::size_t j = i + 1; j <= t.steps(); ++j) {
            const auto gap = static_cast<double>(j - i);
            if (gap >= min_gap && static_cast<double>(d[j]) < gap / c3) brute.emplace_back(i, j);
          }
        }
        CHECK(subwalk_progress_violations(g, t, c3) == brute);
        CHECK(has_progress_violation(g, t, c3) == !brute.empty());
      }
    }
  }
}

TEST_CASE("projection tail sample") {
  Group g(parse_group_spec("Z^2*Z^2"));
  CHECK(projection_tail_sample(g, forced(g, "")) == 0);
  CHECK(projection_tail_sample(g, forced(g, "a1^5")) == 5);
  CHECK(projection_tail_sample(g, forced(g, "a1 b2^3 b1 a1")) == 4);
}

TEST_CASE("increments of a walk restart as a fresh walk") {
  // d(X_i, X_j) has the law of d(1, X_{j-i}); compare means over many walks.
  Group g(parse_group_spec("Z^2*Z^2"));
  auto m = simple_measure(g);
  double shifted = 0, fresh = 0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    auto w = sample_trajectory(g, m, 60, derive_seed(1, t));
    shifted += static_cast<double>(w.distances_from(g, 20)[60]);
    auto v = sample_trajectory(g, m, 40, derive_seed(2, t), StorageMode::Streaming);
    fresh += static_cast<double>(g.word_length(v.endpoint()));
  }
  CHECK(shifted / trials == doctest::Approx(fresh / trials).epsilon(0.05));
}
