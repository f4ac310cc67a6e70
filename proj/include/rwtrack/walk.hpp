#pragma once

// Seeded random walks driven by symmetric finitely supported step measures.
//
// Seed derivation (bit-exact, part of the output format):
//   splitmix64(z): z += 0x9E3779B97F4A7C15;
//                  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//                  z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//                  return z ^ (z >> 31);
//   derive_seed(master, index) = splitmix64(master ^ splitmix64(index))
// A trajectory with seed s draws its increments from std::mt19937_64(s); each
// step takes one 64-bit output u, maps it to floor(u * W / 2^64) where W is
// the total integer weight, and picks the support letter whose cumulative
// weight interval contains that value.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "rwtrack/group.hpp"

namespace rwtrack {

std::uint64_t splitmix64(std::uint64_t z);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Symmetric probability measure with finite support, weights given as
/// positive integers (probability = weight / total_weight).
class StepMeasure {
 public:
  StepMeasure(const Group& group, std::vector<std::pair<Letter, std::uint64_t>> support);

  const std::vector<Letter>& letters() const { return letters_; }
  const std::vector<std::uint64_t>& weights() const { return weights_; }
  std::uint64_t total_weight() const { return total_; }
  double probability(Letter s) const;

 private:
  std::vector<Letter> letters_;
  std::vector<std::uint64_t> weights_;
  std::vector<std::uint64_t> cumulative_;
  std::uint64_t total_ = 0;

  friend class StepSampler;
};

/// Uniform measure on S union S^-1.
StepMeasure simple_measure(const Group& group);

/// Draws i.i.d. letters from a measure according to the documented scheme.
class StepSampler {
 public:
  StepSampler(const StepMeasure& measure, std::uint64_t seed);
  Letter next();

 private:
  const StepMeasure* measure_;
  std::mt19937_64 engine_;
};

enum class StorageMode { Full, Streaming };

/// Sample path X_0 = 1, ..., X_n. In Full mode every state is kept in a
/// prefix trie of syllable stacks (one node per distinct element, so memory
/// is linear in n). Streaming mode keeps only the increments and X_n.
class Trajectory {
 public:
  struct Node {
    std::uint32_t parent = 0;
    std::uint32_t depth = 0;
    std::uint32_t factor = 0;
    FactorElement value;
    std::int64_t length = 0;  // word length of the element this node spells
  };

  static constexpr std::size_t kMaxStoredSteps = std::size_t{1} << 18;

  Trajectory(const Group& group, std::vector<Letter> increments, std::uint64_t seed,
             StorageMode mode);

  std::size_t steps() const { return increments_.size(); }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Letter>& increments() const { return increments_; }
  const GroupElement& endpoint() const { return endpoint_; }
  bool stores_states() const { return !state_nodes_.empty(); }

  GroupElement state(std::size_t i) const;
  std::vector<GroupElement> states() const;
  std::int64_t state_length(std::size_t i) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& state_nodes() const { return state_nodes_; }

  /// Word length of X_i^-1 X_j for every j > i, by walking the trie.
  std::vector<std::int64_t> distances_from(const Group& group, std::size_t i) const;

  /// Word length of X_i^-1 X_j for one pair, in O(log n) trie steps.
  std::int64_t distance(const Group& group, std::size_t i, std::size_t j) const;

 private:
  std::vector<Letter> increments_;
  std::uint64_t seed_ = 0;
  GroupElement endpoint_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> state_nodes_;
  std::vector<std::uint32_t> enter_, exit_;  // Euler tour for ancestor tests
  std::vector<std::vector<std::uint32_t>> up_;  // up_[k][v]: 2^k-th ancestor of v

  bool is_ancestor(std::uint32_t a, std::uint32_t b) const {
    return enter_[a] <= enter_[b] && exit_[b] <= exit_[a];
  }
  std::uint32_t ancestor_at(std::uint32_t v, std::uint32_t depth) const;
  std::int64_t node_distance(const Group& group, std::uint32_t lca, std::uint32_t side_i,
                             std::uint32_t side_j, std::uint32_t vi, std::uint32_t vj) const;
};

std::vector<Letter> sample_increments(const StepMeasure& measure, std::size_t n,
                                      std::uint64_t seed);

Trajectory sample_trajectory(const Group& group, const StepMeasure& measure, std::size_t n,
                             std::uint64_t seed, StorageMode mode = StorageMode::Full);

struct Estimate {
  double mean = 0;
  double ci_low = 0;
  double ci_high = 0;
};

/// Mean of d(1, X_n)/n over `trials` walks with a 95% bootstrap interval.
/// Trial t uses derive_seed(seed, t).
Estimate drift_estimate(const Group& group, const StepMeasure& measure, std::size_t n,
                        std::size_t trials, std::uint64_t seed, std::size_t workers = 1);

/// Pairs i < j with j - i >= C3 * ln(n) and d(X_i, X_j) < (j - i) / C3. The
/// strict inequality keeps a geodesic walk violation-free at C3 = 1.
std::vector<std::pair<std::size_t, std::size_t>> subwalk_progress_violations(
    const Group& group, const Trajectory& t, double c3);

/// True as soon as one violating pair exists.
bool has_progress_violation(const Group& group, const Trajectory& t, double c3);

/// max_projection(X_n).value.
std::int64_t projection_tail_sample(const Group& group, const Trajectory& t);

}  // namespace rwtrack
