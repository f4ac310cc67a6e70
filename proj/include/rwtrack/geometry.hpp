#pragma once

// Transient/deep decompositions of geodesics and the geodesic-comparison
// statistics built on them.
//
// Quantities defined as a sup over all geodesics are computed per syllable:
// the geodesics from x to y are exactly the concatenations of independent
// factor geodesics inside each syllable, and every such factor geodesic is a
// path through the syllable's hull DAG. A point's worst-case distance to the
// geodesic is therefore a max-min dynamic program over each hull.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rwtrack/group.hpp"
#include "rwtrack/projections.hpp"
#include "rwtrack/walk.hpp"

namespace rwtrack {

inline constexpr std::size_t kHullGuard = 1'000'000;

struct TransientParams {
  int R = 1;  // deep points are farther than R from both ends of their syllable
};

struct DeepComponent {
  PeripheralCoset coset;
  std::size_t first = 0;  // vertex indices on the geodesic, inclusive
  std::size_t last = 0;
};

struct TransientDecomposition {
  GeodesicPath geodesic;
  std::vector<DeepComponent> deep_components;
  std::vector<std::size_t> transient_vertices;
};

TransientDecomposition transient_decomposition(const Group& group, const GeodesicPath& path,
                                               TransientParams params);

/// One line per deep component, then one line listing transient vertices.
std::string render_decomposition(const Group& group, const TransientDecomposition& d);

/// Certified bounds on a sup-over-geodesics statistic. `exact` means the
/// two bounds agree and equal the true value.
struct BoundPair {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  bool exact = false;
};

std::int64_t dist_point_to_geodesic(const Group& group, const GroupElement& s,
                                    const GeodesicPath& path);

/// sup over geodesics g from x to y of d(s, g). Throws ResourceError when a
/// syllable hull exceeds `guard` points.
std::int64_t sup_dist_point_over_geodesics(const Group& group, const GroupElement& s,
                                           const GroupElement& x, const GroupElement& y,
                                           std::size_t guard = kHullGuard);

/// max over points p lying on some geodesic from x to y of d(p, S).
std::int64_t sup_dist_hull_to_set(const Group& group, const GroupElement& x,
                                  const GroupElement& y, std::span<const GroupElement> set,
                                  std::size_t guard = kHullGuard);

enum class TrackingTarget { Transient, Geodesic };

/// Hausdorff distance between S and trans([x,y]) or [x,y]. `lower` uses the
/// canonical geodesic, `upper` the worst geodesic. When a hull exceeds the
/// guard the upper bound falls back to gate estimates and exact is false.
BoundPair hausdorff_tracking(const Group& group, std::span<const GroupElement> set,
                             const GroupElement& x, const GroupElement& y,
                             TransientParams params, TrackingTarget target,
                             std::size_t guard = kHullGuard);

/// Same with S = {X_0, ..., X_n}, x = 1 and y = X_n, using the trajectory's
/// state trie instead of materialized states.
BoundPair hausdorff_tracking(const Group& group, const Trajectory& walk, TransientParams params,
                             TrackingTarget target, std::size_t guard = kHullGuard);

struct LogCloseness {
  std::int64_t max_detour = 0;
  double ratio = 0;  // max_detour / log2(l(alpha) + 1)
};

/// Largest distance from a transient vertex of the canonical [x,y] to the
/// path alpha, which must run from x to y through adjacent points.
LogCloseness transient_log_closeness(const Group& group, std::span<const GroupElement> alpha,
                                     const GroupElement& x, const GroupElement& y,
                                     TransientParams params);

LogCloseness transient_log_closeness(const Group& group, const Trajectory& walk,
                                     TransientParams params);

BoundPair triangle_thinness(const Group& group, const GroupElement& x1, const GroupElement& x2,
                            const GroupElement& x3, std::size_t guard = kHullGuard);

/// d(1, g) over geodesics g from x to y: lower is the min, upper the max.
BoundPair gromov_offset(const Group& group, const GroupElement& x, const GroupElement& y,
                        std::size_t guard = kHullGuard);

/// Largest distance from a transient vertex of the canonical [x,y] to
/// trans([x,z]) union trans([z,y]) (both canonical).
std::int64_t relative_rips_gap(const Group& group, const GroupElement& x, const GroupElement& y,
                               const GroupElement& z, TransientParams params);

}  // namespace rwtrack
