#include "rwtrack/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "rwtrack/errors.hpp"
#include "rwtrack/parallel.hpp"
#include "rwtrack/projections.hpp"
#include "rwtrack/stats.hpp"

namespace rwtrack {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct ChildKey {
  std::uint32_t parent;
  std::uint32_t factor;
  FactorElement value;
  bool operator==(const ChildKey&) const = default;
};

struct ChildKeyHash {
  std::size_t operator()(const ChildKey& k) const noexcept {
    std::size_t h = FactorElementHash{}(k.value);
    h ^= (static_cast<std::size_t>(k.parent) << 7) + k.factor + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
    return h;
  }
};

}  // namespace

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

StepMeasure::StepMeasure(const Group& group,
                         std::vector<std::pair<Letter, std::uint64_t>> support) {
  if (support.empty()) throw InvalidArgument("step measure has empty support");
  // Symmetry is checked on the induced measure on group elements, so for Z/2
  // a generator and its formal inverse count as the same element.
  std::map<std::pair<std::uint32_t, FactorElement>, std::uint64_t> mass;
  std::map<std::pair<std::uint32_t, int>, bool> seen_generator;
  for (const auto& [letter, weight] : support) {
    group.validate(letter);
    if (weight == 0) throw InvalidArgument("step measure weights must be positive");
    if (std::find(letters_.begin(), letters_.end(), letter) != letters_.end()) {
      throw InvalidArgument("duplicate letter " + group.letter_name(letter) + " in step measure");
    }
    if (total_ > std::numeric_limits<std::uint64_t>::max() - weight) {
      throw InvalidArgument("step measure total weight overflows");
    }
    letters_.push_back(letter);
    weights_.push_back(weight);
    total_ += weight;
    cumulative_.push_back(total_);
    const auto& kind = group.factor(letter.factor);
    mass[{letter.factor, kind.generator_element(letter.generator, letter.sign)}] += weight;
    seen_generator[{letter.factor, letter.generator}] = true;
  }
  for (const auto& [key, weight] : mass) {
    const auto& kind = group.factor(key.first);
    auto it = mass.find({key.first, kind.inverse(key.second)});
    if (it == mass.end() || it->second != weight) {
      throw InvalidArgument("step measure is not symmetric");
    }
  }
  for (std::size_t f = 0; f < group.factor_count(); ++f) {
    for (int g = 0; g < group.factor(f).generator_count(); ++g) {
      if (!seen_generator.count({static_cast<std::uint32_t>(f), g})) {
        throw InvalidArgument("step measure support does not generate the group");
      }
    }
  }
}

double StepMeasure::probability(Letter s) const {
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i] == s) return static_cast<double>(weights_[i]) / static_cast<double>(total_);
  }
  return 0.0;
}

StepMeasure simple_measure(const Group& group) {
  std::vector<std::pair<Letter, std::uint64_t>> support;
  for (const auto& s : group.generators()) support.emplace_back(s, 1);
  return StepMeasure(group, std::move(support));
}

StepSampler::StepSampler(const StepMeasure& measure, std::uint64_t seed)
    : measure_(&measure), engine_(seed) {}

Letter StepSampler::next() {
  const auto u = engine_();
  const auto target = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(u) * measure_->total_) >> 64);
  const auto& cum = measure_->cumulative_;
  auto it = std::upper_bound(cum.begin(), cum.end(), target);
  return measure_->letters_[static_cast<std::size_t>(it - cum.begin())];
}

Trajectory::Trajectory(const Group& group, std::vector<Letter> increments, std::uint64_t seed,
                       StorageMode mode)
    : increments_(std::move(increments)), seed_(seed) {
  for (const auto& s : increments_) group.validate(s);
  if (mode == StorageMode::Streaming) {
    for (const auto& s : increments_) group.right_multiply(endpoint_, s);
    return;
  }
  if (increments_.size() > kMaxStoredSteps) {
    throw ResourceError("full storage is limited to 2^18 steps; use streaming mode");
  }

  nodes_.push_back(Node{});
  std::unordered_map<ChildKey, std::uint32_t, ChildKeyHash> children;
  auto get_child = [&](std::uint32_t parent, std::uint32_t factor, FactorElement value) {
    ChildKey key{parent, factor, std::move(value)};
    auto it = children.find(key);
    if (it != children.end()) return it->second;
    Node node;
    node.parent = parent;
    node.depth = nodes_[parent].depth + 1;
    node.factor = factor;
    node.value = key.value;
    node.length = nodes_[parent].length + group.factor(factor).length(node.value);
    auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(std::move(node));
    children.emplace(std::move(key), id);
    return id;
  };

  state_nodes_.reserve(increments_.size() + 1);
  std::uint32_t v = 0;
  state_nodes_.push_back(v);
  for (const auto& s : increments_) {
    const auto& kind = group.factor(s.factor);
    if (v != 0 && nodes_[v].factor == s.factor) {
      FactorElement value = nodes_[v].value;
      kind.apply(value, s.generator, s.sign);
      const auto parent = nodes_[v].parent;
      v = kind.is_identity(value) ? parent : get_child(parent, s.factor, std::move(value));
    } else {
      v = get_child(v, s.factor, kind.generator_element(s.generator, s.sign));
    }
    state_nodes_.push_back(v);
  }

  // Euler tour over the trie; parents always precede their children.
  std::vector<std::vector<std::uint32_t>> kids(nodes_.size());
  for (std::uint32_t i = 1; i < nodes_.size(); ++i) kids[nodes_[i].parent].push_back(i);
  enter_.assign(nodes_.size(), 0);
  exit_.assign(nodes_.size(), 0);
  std::uint32_t clock = 0;
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
  enter_[0] = clock++;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < kids[node].size()) {
      auto child = kids[node][next++];
      enter_[child] = clock++;
      stack.emplace_back(child, 0);
    } else {
      exit_[node] = clock++;
      stack.pop_back();
    }
  }
  up_.push_back(std::vector<std::uint32_t>(nodes_.size()));
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) up_[0][i] = nodes_[i].parent;
  for (std::size_t k = 1; (std::size_t{1} << k) < nodes_.size(); ++k) {
    const auto& prev = up_[k - 1];
    std::vector<std::uint32_t> level(nodes_.size());
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) level[i] = prev[prev[i]];
    up_.push_back(std::move(level));
  }
  endpoint_ = state(increments_.size());
}

std::uint32_t Trajectory::ancestor_at(std::uint32_t v, std::uint32_t depth) const {
  for (std::uint32_t diff = nodes_[v].depth - depth, k = 0; diff != 0; diff >>= 1, ++k) {
    if (diff & 1) v = up_[k][v];
  }
  return v;
}

GroupElement Trajectory::state(std::size_t i) const {
  if (!stores_states()) throw InvalidArgument("trajectory was sampled in streaming mode");
  if (i >= state_nodes_.size()) throw InvalidArgument("state index out of range");
  GroupElement x;
  for (auto v = state_nodes_[i]; v != 0; v = nodes_[v].parent) {
    x.syllables.push_back(Syllable{nodes_[v].factor, nodes_[v].value});
  }
  std::reverse(x.syllables.begin(), x.syllables.end());
  return x;
}

std::vector<GroupElement> Trajectory::states() const {
  std::vector<GroupElement> out;
  out.reserve(state_nodes_.size());
  for (std::size_t i = 0; i < state_nodes_.size(); ++i) out.push_back(state(i));
  return out;
}

std::int64_t Trajectory::state_length(std::size_t i) const {
  if (!stores_states()) throw InvalidArgument("trajectory was sampled in streaming mode");
  return nodes_.at(state_nodes_.at(i)).length;
}

std::int64_t Trajectory::node_distance(const Group& group, std::uint32_t lca,
                                       std::uint32_t side_i, std::uint32_t side_j,
                                       std::uint32_t vi, std::uint32_t vj) const {
  const auto li = nodes_[vi].length;
  const auto lj = nodes_[vj].length;
  if (side_i != kNone && side_j != kNone && nodes_[side_i].factor == nodes_[side_j].factor) {
    const auto& a = nodes_[side_i];
    const auto& b = nodes_[side_j];
    const auto local = group.factor(a.factor).distance(a.value, b.value);
    return (li - a.length) + (lj - b.length) + local;
  }
  return li + lj - 2 * nodes_[lca].length;
}

std::vector<std::int64_t> Trajectory::distances_from(const Group& group, std::size_t i) const {
  if (!stores_states()) throw InvalidArgument("trajectory was sampled in streaming mode");
  if (i >= state_nodes_.size()) throw InvalidArgument("state index out of range");
  const auto vi = state_nodes_[i];
  std::vector<std::uint32_t> path(nodes_[vi].depth + 1);
  for (auto v = vi;; v = nodes_[v].parent) {
    path[nodes_[v].depth] = v;
    if (v == 0) break;
  }
  std::vector<std::int64_t> out(state_nodes_.size(), 0);
  std::uint32_t lca = vi;
  std::uint32_t side_j = kNone;
  for (std::size_t j = i + 1; j < state_nodes_.size(); ++j) {
    const auto v_old = state_nodes_[j - 1];
    const auto v_new = state_nodes_[j];
    if (is_ancestor(v_new, vi)) {
      lca = v_new;
      side_j = kNone;
    } else if (is_ancestor(lca, v_new)) {
      if (nodes_[v_new].parent == lca) side_j = v_new;
    } else {
      lca = nodes_[v_old].parent;
      side_j = v_new;
    }
    const auto depth = nodes_[lca].depth;
    const auto side_i = depth < nodes_[vi].depth ? path[depth + 1] : kNone;
    out[j] = node_distance(group, lca, side_i, side_j, vi, v_new);
  }
  return out;
}

std::int64_t Trajectory::distance(const Group& group, std::size_t i, std::size_t j) const {
  if (!stores_states()) throw InvalidArgument("trajectory was sampled in streaming mode");
  if (i >= state_nodes_.size() || j >= state_nodes_.size()) {
    throw InvalidArgument("state index out of range");
  }
  const auto vi = state_nodes_[i];
  const auto vj = state_nodes_[j];
  std::uint32_t lca = vi;
  if (is_ancestor(vj, vi)) {
    lca = vj;
  } else if (!is_ancestor(vi, vj)) {
    for (auto k = up_.size(); k-- > 0;) {
      if (!is_ancestor(up_[k][lca], vj)) lca = up_[k][lca];
    }
    lca = nodes_[lca].parent;
  }
  const auto depth = nodes_[lca].depth + 1;
  const auto side_i = lca == vi ? kNone : ancestor_at(vi, depth);
  const auto side_j = lca == vj ? kNone : ancestor_at(vj, depth);
  return node_distance(group, lca, side_i, side_j, vi, vj);
}

std::vector<Letter> sample_increments(const StepMeasure& measure, std::size_t n,
                                      std::uint64_t seed) {
  StepSampler sampler(measure, seed);
  std::vector<Letter> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.next());
  return out;
}

Trajectory sample_trajectory(const Group& group, const StepMeasure& measure, std::size_t n,
                             std::uint64_t seed, StorageMode mode) {
  return Trajectory(group, sample_increments(measure, n, seed), seed, mode);
}

Estimate drift_estimate(const Group& group, const StepMeasure& measure, std::size_t n,
                        std::size_t trials, std::uint64_t seed, std::size_t workers) {
  if (n < 1) throw InvalidArgument("drift_estimate needs n >= 1");
  if (trials < 2) throw InvalidArgument("drift_estimate needs trials >= 2");
  std::vector<double> rates(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    auto walk = sample_trajectory(group, measure, n, derive_seed(seed, t), StorageMode::Streaming);
    rates[t] = static_cast<double>(group.word_length(walk.endpoint())) / static_cast<double>(n);
  });
  auto s = summarize(rates);
  return {s.mean, s.ci_low, s.ci_high};
}

namespace {

template <typename OnViolation>
void scan_violations(const Group& group, const Trajectory& t, double c3, OnViolation&& on) {
  if (!(c3 > 0)) throw InvalidArgument("C3 must be positive");
  const std::size_t n = t.steps();
  if (n == 0) return;
  const double min_gap = c3 * std::log(static_cast<double>(n));
  const auto first_gap = static_cast<std::size_t>(std::max(1.0, std::ceil(min_gap)));
  // d(X_i, X_j) moves by at most 1 per step while the threshold moves by
  // 1/C3, so a margin m at j rules out every j' with j' - j <= m / (1 + 1/C3).
  const double slope = 1.0 + 1.0 / c3;
  for (std::size_t i = 0; i + first_gap <= n; ++i) {
    for (std::size_t j = i + first_gap; j <= n;) {
      const double margin =
          static_cast<double>(t.distance(group, i, j)) - static_cast<double>(j - i) / c3;
      if (margin < 0) {
        if (!on(i, j)) return;
        ++j;
        continue;
      }
      const double step = std::floor(margin / slope - 1e-9) + 1;
      j += step < 1 ? 1 : static_cast<std::size_t>(step);
    }
  }
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> subwalk_progress_violations(
    const Group& group, const Trajectory& t, double c3) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  scan_violations(group, t, c3, [&](std::size_t i, std::size_t j) {
    out.emplace_back(i, j);
    return true;
  });
  return out;
}

bool has_progress_violation(const Group& group, const Trajectory& t, double c3) {
  bool found = false;
  scan_violations(group, t, c3, [&](std::size_t, std::size_t) {
    found = true;
    return false;
  });
  return found;
}

std::int64_t projection_tail_sample(const Group& group, const Trajectory& t) {
  return max_projection(group, t.endpoint()).value;
}

}  // namespace rwtrack
