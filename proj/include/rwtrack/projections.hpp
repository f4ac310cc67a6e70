#pragma once

// Peripheral cosets g*A_j of the free factors and their closest-point
// projections. The Cayley graph of a free product is tree-graded over these
// cosets, so every projection is an exact, single-valued gate.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rwtrack/group.hpp"

namespace rwtrack {

/// Canonical handle of the coset prefix * A_factor: the prefix never ends
/// with a syllable of `factor`, so equal cosets have equal handles.
struct PeripheralCoset {
  GroupElement prefix;
  std::uint32_t factor = 0;

  static PeripheralCoset through(GroupElement g, std::uint32_t factor);

  bool operator==(const PeripheralCoset&) const = default;
};

struct PeripheralCosetHash {
  std::size_t operator()(const PeripheralCoset& c) const noexcept;
};

struct ProjectionResult {
  GroupElement point;
  std::int64_t distance = 0;
};

ProjectionResult project_point(const Group& group, const PeripheralCoset& coset,
                               const GroupElement& x);

/// d(pi_P(x), pi_P(y)).
std::int64_t coset_distance(const Group& group, const PeripheralCoset& coset,
                            const GroupElement& x, const GroupElement& y);

/// The gate pi_P(Q) of a distinct coset Q on P (a single point).
GroupElement project_coset(const Group& group, const PeripheralCoset& p,
                           const PeripheralCoset& q);

/// min{ d(pi_P(x), pi_P(Q)), d(pi_Q(x), pi_Q(P)) }.
std::int64_t behrstock_min(const Group& group, const GroupElement& x, const PeripheralCoset& p,
                           const PeripheralCoset& q);

struct MaxProjection {
  std::int64_t value = 0;
  std::optional<PeripheralCoset> coset;
};

/// Largest projection distance d_H(1, x) over all peripheral cosets H. Only
/// the cosets of the syllables of x contribute, so this is the longest
/// syllable (first one on ties).
MaxProjection max_projection(const Group& group, const GroupElement& x);

/// Cosets containing x, one per factor.
std::vector<PeripheralCoset> cosets_through(const Group& group, const GroupElement& x);

/// `<prefix word>·<factor name>`, with `1` for the empty prefix.
std::string render_coset(const Group& group, const PeripheralCoset& coset);

}  // namespace rwtrack
