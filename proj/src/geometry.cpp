#include "rwtrack/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "rwtrack/errors.hpp"

namespace rwtrack {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

enum class Hulls { Canonical, CanonicalReversed, Full };

struct SegKey {
  std::size_t seg;
  FactorElement u;
  bool operator==(const SegKey&) const = default;
};

struct SegKeyHash {
  std::size_t operator()(const SegKey& k) const noexcept {
    return FactorElementHash{}(k.u) * 1000003u + k.seg;
  }
};

// A geodesic from `origin` to origin * target, stored per syllable. Segment j
// runs through origin * c_j * dags[j].points, where c_j multiplies the first
// j syllables of `target`. masks[j] marks the points that belong to the
// compared set (all of them, or only the transient ones).
struct Frame {
  GroupElement origin;
  std::vector<Syllable> target;
  std::vector<std::int64_t> cum;
  std::vector<HullDag> dags;
  std::vector<std::vector<char>> masks;
  std::unordered_map<SegKey, std::int64_t, SegKeyHash> cache;

  std::size_t k() const { return target.size(); }
};

// Where a point sits relative to a frame. In-coset: the point projects into
// the coset of segment `seg` at local point u and lies `offset` beyond it.
// Gate: the point branches off at c_seg, `offset` away from it.
struct Location {
  bool in_coset = false;
  std::size_t seg = 0;
  FactorElement u;
  std::int64_t offset = 0;
};

std::vector<std::int64_t> cumulative(const Group& g, std::span<const Syllable> syllables) {
  std::vector<std::int64_t> cum{0};
  for (const auto& s : syllables) cum.push_back(cum.back() + g.factor(s.factor).length(s.value));
  return cum;
}

// Canonical chain of the segment read backwards: the points of the canonical
// factor geodesic from `value` to the identity, listed from the identity.
HullDag reversed_chain(const FactorKind& kind, const FactorElement& value) {
  auto pts = kind.canonical_points(kind.inverse(value));
  std::vector<FactorElement> out;
  out.reserve(pts.size());
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) out.push_back(kind.multiply(value, *it));
  return HullDag::chain(std::move(out));
}

void check_params(TransientParams params) {
  if (params.R < 0) throw InvalidArgument("R must be nonnegative");
}

void set_masks(Frame& f, const TransientParams* transient) {
  f.masks.clear();
  for (std::size_t j = 0; j < f.k(); ++j) {
    const auto& dag = f.dags[j];
    const auto len = f.cum[j + 1] - f.cum[j];
    std::vector<char> mask(dag.size(), 1);
    if (transient != nullptr) {
      for (std::size_t i = 0; i < dag.size(); ++i) {
        mask[i] = dag.position[i] <= transient->R || len - dag.position[i] <= transient->R;
      }
    }
    f.masks.push_back(std::move(mask));
  }
}

Frame make_frame(const Group& g, GroupElement origin, std::vector<Syllable> target, Hulls hulls,
                 const TransientParams* transient, std::size_t guard) {
  Frame f;
  f.origin = std::move(origin);
  f.target = std::move(target);
  f.cum = cumulative(g, f.target);
  for (const auto& s : f.target) {
    const auto& kind = g.factor(s.factor);
    switch (hulls) {
      case Hulls::Canonical:
        f.dags.push_back(HullDag::chain(kind.canonical_points(s.value)));
        break;
      case Hulls::CanonicalReversed:
        f.dags.push_back(reversed_chain(kind, s.value));
        break;
      case Hulls::Full:
        f.dags.push_back(kind.geodesic_hull(s.value, guard));
        break;
    }
  }
  set_masks(f, transient);
  return f;
}

Frame frame_between(const Group& g, const GroupElement& x, const GroupElement& y, Hulls hulls,
                    const TransientParams* transient, std::size_t guard) {
  return make_frame(g, x, g.multiply(g.invert(x), y).syllables, hulls, transient, guard);
}

Frame frame_of_path(const Group& g, const GeodesicPath& path) {
  Frame f;
  f.origin = path.start;
  for (const auto& seg : path.segments) {
    f.target.push_back({seg.factor, seg.value()});
    f.dags.push_back(HullDag::chain(seg.points));
  }
  f.cum = cumulative(g, f.target);
  set_masks(f, nullptr);
  return f;
}

std::size_t common_prefix(std::span<const Syllable> a, std::span<const Syllable> b) {
  std::size_t q = 0;
  while (q < a.size() && q < b.size() && a[q] == b[q]) ++q;
  return q;
}

Location locate(const Group& g, const Frame& f, const GroupElement& s) {
  const auto rel = g.multiply(g.invert(f.origin), s).syllables;
  const std::size_t p = common_prefix(rel, f.target);
  auto tail_from = [&](std::size_t i) {
    std::int64_t t = 0;
    for (; i < rel.size(); ++i) t += g.factor(rel[i].factor).length(rel[i].value);
    return t;
  };
  Location loc;
  loc.seg = p;
  if (p < f.k() && p < rel.size() && rel[p].factor == f.target[p].factor) {
    loc.in_coset = true;
    loc.u = rel[p].value;
    loc.offset = tail_from(p + 1);
  } else {
    loc.offset = tail_from(p);
  }
  return loc;
}

// Locates point w of segment j of a geodesic with syllables `ft` (prefix
// lengths `fcum`) inside frame b, which has the same origin; q is the number
// of leading syllables the two share.
Location locate_side_point(const Group& g, std::span<const Syllable> ft,
                           std::span<const std::int64_t> fcum, std::size_t q, std::size_t j,
                           const FactorElement& w, const Frame& b) {
  Location loc;
  const auto wlen = g.factor(ft[j].factor).length(w);
  if (j < q) {
    loc = {true, j, w, 0};
  } else if (j == q) {
    if (q < b.k() && b.target[q].factor == ft[j].factor) {
      loc = {true, q, w, 0};
    } else {
      loc = {false, q, {}, wlen};
    }
  } else if (q < b.k() && b.target[q].factor == ft[q].factor) {
    loc = {true, q, ft[q].value, fcum[j] - fcum[q + 1] + wlen};
  } else {
    loc = {false, q, {}, fcum[j] - fcum[q] + wlen};
  }
  return loc;
}

// max over paths of the segment DAG of the min over masked path points of
// d(u, point). On a chain this is the plain minimum.
std::int64_t segment_maxmin(const Group& g, Frame& f, std::size_t seg, const FactorElement& u) {
  SegKey key{seg, u};
  if (auto it = f.cache.find(key); it != f.cache.end()) return it->second;
  const auto& dag = f.dags[seg];
  const auto& mask = f.masks[seg];
  const auto& kind = g.factor(f.target[seg].factor);
  std::vector<std::int64_t> val(dag.size());
  for (std::size_t i = 0; i < dag.size(); ++i) {
    std::int64_t through = i == 0 ? kInf : 0;
    for (auto p : dag.preds[i]) through = std::max(through, val[p]);
    const auto own = mask[i] ? kind.distance(u, dag.points[i]) : kInf;
    val[i] = std::min(own, through);
  }
  f.cache.emplace(std::move(key), val.back());
  return val.back();
}

std::int64_t segment_min(const Group& g, const Frame& f, std::size_t seg, const FactorElement& u) {
  const auto& kind = g.factor(f.target[seg].factor);
  std::int64_t best = kInf;
  for (std::size_t i = 0; i < f.dags[seg].size(); ++i) {
    if (f.masks[seg][i]) best = std::min(best, kind.distance(u, f.dags[seg].points[i]));
  }
  return best;
}

std::int64_t distance_to(const Group& g, Frame& f, const Location& loc) {
  if (!loc.in_coset) return loc.offset;
  return loc.offset + segment_maxmin(g, f, loc.seg, loc.u);
}

// Gate-only upper bound: both ends of every segment lie on every geodesic and
// are always transient.
std::int64_t gate_bound(const Group& g, const Frame& f, const Location& loc) {
  if (!loc.in_coset) return loc.offset;
  const auto& kind = g.factor(f.target[loc.seg].factor);
  return loc.offset + std::min(kind.length(loc.u), kind.distance(loc.u, f.target[loc.seg].value));
}

// Distances from frame points to a located set S. before[j] is the best
// d(c_j, s) - cum[j] over points reached backwards from c_j, after[j] the best
// d(c_j, s) + cum[j] over points reached forwards, and anchors[j] keeps the
// points projecting into segment j.
struct SetProfile {
  std::vector<std::int64_t> before;
  std::vector<std::int64_t> after;
  std::vector<std::unordered_map<FactorElement, std::int64_t, FactorElementHash>> anchors;

  std::int64_t gate_distance(const Frame& f, std::size_t j) const {
    return std::min(f.cum[j] + before[j], after[j] - f.cum[j]);
  }
};

SetProfile build_profile(const Group& g, const Frame& f, std::span<const Location> locs) {
  const std::size_t k = f.k();
  SetProfile prof;
  prof.before.assign(k + 1, kInf);
  prof.after.assign(k + 1, kInf);
  prof.anchors.resize(k);
  for (const auto& loc : locs) {
    const auto p = loc.seg;
    if (!loc.in_coset) {
      prof.before[p] = std::min(prof.before[p], loc.offset - f.cum[p]);
      prof.after[p] = std::min(prof.after[p], f.cum[p] + loc.offset);
      continue;
    }
    const auto& kind = g.factor(f.target[p].factor);
    const auto to_end = loc.offset + kind.distance(loc.u, f.target[p].value);
    prof.before[p + 1] = std::min(prof.before[p + 1], to_end - f.cum[p + 1]);
    prof.after[p] = std::min(prof.after[p], f.cum[p] + kind.length(loc.u) + loc.offset);
    auto [it, inserted] = prof.anchors[p].try_emplace(loc.u, loc.offset);
    if (!inserted) it->second = std::min(it->second, loc.offset);
  }
  for (std::size_t j = 1; j <= k; ++j) prof.before[j] = std::min(prof.before[j], prof.before[j - 1]);
  for (std::size_t j = k; j-- > 0;) prof.after[j] = std::min(prof.after[j], prof.after[j + 1]);
  return prof;
}

// max over masked frame points of the distance to the profiled set.
std::int64_t max_set_distance(const Group& g, const Frame& f, const SetProfile& prof) {
  if (f.k() == 0) return prof.gate_distance(f, 0);
  std::int64_t worst = 0;
  for (std::size_t j = 0; j < f.k(); ++j) {
    const auto& kind = g.factor(f.target[j].factor);
    const auto& h = f.target[j].value;
    const auto via_start = f.cum[j] + prof.before[j];
    const auto via_end = prof.after[j + 1] - f.cum[j + 1];
    const auto& dag = f.dags[j];
    for (std::size_t i = 0; i < dag.size(); ++i) {
      if (!f.masks[j][i]) continue;
      const auto& w = dag.points[i];
      auto d = std::min(kind.length(w) + via_start, kind.distance(w, h) + via_end);
      for (const auto& [u, rest] : prof.anchors[j]) d = std::min(d, kind.distance(w, u) + rest);
      worst = std::max(worst, d);
    }
  }
  return worst;
}

// Upper bound on max_set_distance for the full hulls using only gate
// distances: a hull point at level t is within t + d(c_j, S) and
// (L - t) + d(c_{j+1}, S), and every level is attained.
std::int64_t max_set_distance_bound(const Frame& f, const SetProfile& prof,
                                    const TransientParams* transient) {
  if (f.k() == 0) return prof.gate_distance(f, 0);
  std::int64_t worst = 0;
  for (std::size_t j = 0; j < f.k(); ++j) {
    const auto len = f.cum[j + 1] - f.cum[j];
    const auto a = prof.gate_distance(f, j);
    const auto b = prof.gate_distance(f, j + 1);
    for (std::int64_t t = 0; t <= len; ++t) {
      if (transient != nullptr && t > transient->R && len - t > transient->R) continue;
      worst = std::max(worst, std::min(t + a, len - t + b));
    }
  }
  return worst;
}

std::int64_t evaluate_tracking(const Group& g, Frame& f, std::span<const Location> locs) {
  std::int64_t worst = 0;
  for (const auto& loc : locs) worst = std::max(worst, distance_to(g, f, loc));
  return std::max(worst, max_set_distance(g, f, build_profile(g, f, locs)));
}

BoundPair tracking_bounds(const Group& g, const GroupElement& x,
                          const std::vector<Syllable>& target, std::span<const Location> locs,
                          TransientParams params, TrackingTarget which, std::size_t guard) {
  const TransientParams* tp = which == TrackingTarget::Transient ? &params : nullptr;
  Frame canon = make_frame(g, x, target, Hulls::Canonical, tp, guard);
  BoundPair r;
  r.lower = evaluate_tracking(g, canon, locs);
  try {
    Frame hull = make_frame(g, x, target, Hulls::Full, tp, guard);
    r.upper = evaluate_tracking(g, hull, locs);
    r.exact = r.lower == r.upper;
  } catch (const ResourceError&) {
    std::int64_t worst = 0;
    for (const auto& loc : locs) worst = std::max(worst, gate_bound(g, canon, loc));
    auto prof = build_profile(g, canon, locs);
    r.upper = std::max(worst, max_set_distance_bound(canon, prof, tp));
    r.exact = false;
  }
  return r;
}

// Locations of every trie node of a stored trajectory relative to the frame
// from the identity to its endpoint. Every node is a visited state.
std::vector<Location> trajectory_locations(const Trajectory& walk,
                                           std::vector<Syllable>& target) {
  const auto& nodes = walk.nodes();
  const auto n = nodes.size();
  std::vector<char> on_path(n, 0);
  target.clear();
  for (auto v = walk.state_nodes().back();; v = nodes[v].parent) {
    on_path[v] = 1;
    if (v == 0) break;
    target.push_back({nodes[v].factor, nodes[v].value});
  }
  std::reverse(target.begin(), target.end());
  const std::size_t k = target.size();

  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> anchor(n, 0), branch(n, kNone);
  std::vector<Location> locs(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto& node = nodes[v];
    if (on_path[v]) {
      anchor[v] = v;
      locs[v] = {false, node.depth, {}, 0};
      continue;
    }
    const auto parent = node.parent;
    if (on_path[parent]) {
      anchor[v] = parent;
      branch[v] = v;
    } else {
      anchor[v] = anchor[parent];
      branch[v] = branch[parent];
    }
    const auto& a = nodes[anchor[v]];
    const auto& c = nodes[branch[v]];
    const std::size_t p = a.depth;
    if (p < k && c.factor == target[p].factor) {
      locs[v] = {true, p, c.value, node.length - c.length};
    } else {
      locs[v] = {false, p, {}, node.length - a.length};
    }
  }
  return locs;
}

void require_states(const Trajectory& walk) {
  if (!walk.stores_states()) {
    throw InvalidArgument("this statistic needs a trajectory with stored states");
  }
}

}  // namespace

TransientDecomposition transient_decomposition(const Group& group, const GeodesicPath& path,
                                               TransientParams params) {
  check_params(params);
  TransientDecomposition d;
  d.geodesic = path;
  std::vector<char> deep(path.vertex_count(), 0);
  GroupElement prefix;
  std::size_t start = 0;
  for (const auto& seg : path.segments) {
    const auto len = static_cast<std::int64_t>(seg.length());
    const std::int64_t first = params.R + 1;
    const std::int64_t last = len - params.R - 1;
    if (first <= last) {
      auto base = group.multiply(path.start, prefix);
      d.deep_components.push_back({PeripheralCoset::through(std::move(base), seg.factor),
                                   start + static_cast<std::size_t>(first),
                                   start + static_cast<std::size_t>(last)});
      for (auto o = first; o <= last; ++o) deep[start + static_cast<std::size_t>(o)] = 1;
    }
    prefix.syllables.push_back({seg.factor, seg.value()});
    start += seg.length();
  }
  for (std::size_t i = 0; i < deep.size(); ++i) {
    if (!deep[i]) d.transient_vertices.push_back(i);
  }
  return d;
}

std::string render_decomposition(const Group& group, const TransientDecomposition& d) {
  std::string out;
  for (const auto& c : d.deep_components) {
    out += "deep " + render_coset(group, c.coset) + " vertices " + std::to_string(c.first) +
           ".." + std::to_string(c.last) + "\n";
  }
  out += "transient";
  for (auto v : d.transient_vertices) out += " " + std::to_string(v);
  out += "\n";
  return out;
}

std::int64_t dist_point_to_geodesic(const Group& group, const GroupElement& s,
                                    const GeodesicPath& path) {
  Frame f = frame_of_path(group, path);
  return distance_to(group, f, locate(group, f, s));
}

std::int64_t sup_dist_point_over_geodesics(const Group& group, const GroupElement& s,
                                           const GroupElement& x, const GroupElement& y,
                                           std::size_t guard) {
  Frame f = frame_between(group, x, y, Hulls::Full, nullptr, guard);
  return distance_to(group, f, locate(group, f, s));
}

std::int64_t sup_dist_hull_to_set(const Group& group, const GroupElement& x,
                                  const GroupElement& y, std::span<const GroupElement> set,
                                  std::size_t guard) {
  if (set.empty()) throw InvalidArgument("the compared set must be nonempty");
  Frame f = frame_between(group, x, y, Hulls::Full, nullptr, guard);
  std::vector<Location> locs;
  for (const auto& s : set) locs.push_back(locate(group, f, s));
  return max_set_distance(group, f, build_profile(group, f, locs));
}

BoundPair hausdorff_tracking(const Group& group, std::span<const GroupElement> set,
                             const GroupElement& x, const GroupElement& y,
                             TransientParams params, TrackingTarget target, std::size_t guard) {
  check_params(params);
  if (set.empty()) throw InvalidArgument("the compared set must be nonempty");
  auto offset = group.multiply(group.invert(x), y).syllables;
  Frame probe = make_frame(group, x, offset, Hulls::Canonical, nullptr, guard);
  std::vector<Location> locs;
  for (const auto& s : set) locs.push_back(locate(group, probe, s));
  return tracking_bounds(group, x, offset, locs, params, target, guard);
}

BoundPair hausdorff_tracking(const Group& group, const Trajectory& walk, TransientParams params,
                             TrackingTarget target, std::size_t guard) {
  check_params(params);
  require_states(walk);
  std::vector<Syllable> offset;
  auto locs = trajectory_locations(walk, offset);
  return tracking_bounds(group, GroupElement{}, offset, locs, params, target, guard);
}

LogCloseness transient_log_closeness(const Group& group, std::span<const GroupElement> alpha,
                                     const GroupElement& x, const GroupElement& y,
                                     TransientParams params) {
  check_params(params);
  if (alpha.size() < 2) throw InvalidArgument("the path needs at least one step");
  if (alpha.front() != x || alpha.back() != y) {
    throw InvalidArgument("the path must start at x and end at y");
  }
  for (std::size_t i = 1; i < alpha.size(); ++i) {
    if (group.distance(alpha[i - 1], alpha[i]) > 1) {
      throw InvalidArgument("consecutive path points must be adjacent");
    }
  }
  Frame f = frame_between(group, x, y, Hulls::Canonical, &params, kHullGuard);
  std::vector<Location> locs;
  for (const auto& s : alpha) locs.push_back(locate(group, f, s));
  LogCloseness r;
  r.max_detour = max_set_distance(group, f, build_profile(group, f, locs));
  r.ratio = static_cast<double>(r.max_detour) / std::log2(static_cast<double>(alpha.size()));
  return r;
}

LogCloseness transient_log_closeness(const Group& group, const Trajectory& walk,
                                     TransientParams params) {
  check_params(params);
  require_states(walk);
  if (walk.steps() < 1) throw InvalidArgument("the path needs at least one step");
  std::vector<Syllable> offset;
  auto locs = trajectory_locations(walk, offset);
  Frame f = make_frame(group, GroupElement{}, offset, Hulls::Canonical, &params, kHullGuard);
  LogCloseness r;
  r.max_detour = max_set_distance(group, f, build_profile(group, f, locs));
  r.ratio = static_cast<double>(r.max_detour) / std::log2(static_cast<double>(walk.steps() + 1));
  return r;
}

namespace {

struct ReversedView {
  std::vector<Syllable> target;
  std::vector<std::int64_t> cum;
};

ReversedView reverse_view(const Group& g, const Frame& f) {
  ReversedView r;
  for (std::size_t j = f.k(); j-- > 0;) {
    const auto& kind = g.factor(f.target[j].factor);
    r.target.push_back({f.target[j].factor, kind.inverse(f.target[j].value)});
  }
  r.cum = cumulative(g, r.target);
  return r;
}

// max over masked points p of side f of min(d(p, b), d(p, c)), where b starts
// at f's origin and c starts at f's end.
std::int64_t side_gap(const Group& g, const Frame& f, Frame& b, Frame& c) {
  const std::size_t k = f.k();
  if (k == 0) return 0;
  const auto rev = reverse_view(g, f);
  const auto qb = common_prefix(f.target, b.target);
  const auto qc = common_prefix(rev.target, c.target);
  std::int64_t worst = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const auto& kind = g.factor(f.target[j].factor);
    const auto hinv = kind.inverse(f.target[j].value);
    const auto& dag = f.dags[j];
    for (std::size_t i = 0; i < dag.size(); ++i) {
      if (!f.masks[j][i]) continue;
      const auto& w = dag.points[i];
      auto lb = locate_side_point(g, f.target, f.cum, qb, j, w, b);
      auto d = distance_to(g, b, lb);
      if (d <= worst) continue;
      auto lc = locate_side_point(g, rev.target, rev.cum, qc, k - 1 - j, kind.multiply(hinv, w), c);
      d = std::min(d, distance_to(g, c, lc));
      worst = std::max(worst, d);
    }
  }
  return worst;
}

}  // namespace

BoundPair triangle_thinness(const Group& group, const GroupElement& x1, const GroupElement& x2,
                            const GroupElement& x3, std::size_t guard) {
  const std::array<const GroupElement*, 3> xs{&x1, &x2, &x3};
  BoundPair r;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& a = *xs[i];
    const auto& b = *xs[(i + 1) % 3];
    const auto& c = *xs[(i + 2) % 3];
    // Canonical triangle: sides canonical(x_i, x_{i+1}) for i = 0, 1, 2.
    Frame side = frame_between(group, a, b, Hulls::Canonical, nullptr, guard);
    Frame prev = frame_between(group, a, c, Hulls::CanonicalReversed, nullptr, guard);
    Frame next = frame_between(group, b, c, Hulls::Canonical, nullptr, guard);
    r.lower = std::max(r.lower, side_gap(group, side, prev, next));

    Frame hside = frame_between(group, a, b, Hulls::Full, nullptr, guard);
    Frame hprev = frame_between(group, a, c, Hulls::Full, nullptr, guard);
    Frame hnext = frame_between(group, b, c, Hulls::Full, nullptr, guard);
    r.upper = std::max(r.upper, side_gap(group, hside, hprev, hnext));
  }
  r.exact = r.lower == r.upper;
  return r;
}

BoundPair gromov_offset(const Group& group, const GroupElement& x, const GroupElement& y,
                        std::size_t guard) {
  Frame f = frame_between(group, x, y, Hulls::Full, nullptr, guard);
  const auto loc = locate(group, f, GroupElement{});
  BoundPair r;
  r.lower = loc.in_coset ? loc.offset + segment_min(group, f, loc.seg, loc.u) : loc.offset;
  r.upper = distance_to(group, f, loc);
  r.exact = r.lower == r.upper;
  return r;
}

std::int64_t relative_rips_gap(const Group& group, const GroupElement& x, const GroupElement& y,
                               const GroupElement& z, TransientParams params) {
  check_params(params);
  Frame side = frame_between(group, x, y, Hulls::Canonical, &params, kHullGuard);
  Frame xz = frame_between(group, x, z, Hulls::Canonical, &params, kHullGuard);
  Frame zy = frame_between(group, y, z, Hulls::CanonicalReversed, &params, kHullGuard);
  return side_gap(group, side, xz, zy);
}

}  // namespace rwtrack
