#include "rwtrack/projections.hpp"

#include "rwtrack/errors.hpp"

namespace rwtrack {

PeripheralCoset PeripheralCoset::through(GroupElement g, std::uint32_t factor) {
  if (!g.syllables.empty() && g.syllables.back().factor == factor) g.syllables.pop_back();
  return {std::move(g), factor};
}

std::size_t PeripheralCosetHash::operator()(const PeripheralCoset& c) const noexcept {
  return GroupElementHash{}(c.prefix) * 31 + c.factor;
}

ProjectionResult project_point(const Group& group, const PeripheralCoset& coset,
                               const GroupElement& x) {
  GroupElement h = group.multiply(group.invert(coset.prefix), x);
  GroupElement lead;
  std::size_t skip = 0;
  if (!h.syllables.empty() && h.syllables.front().factor == coset.factor) {
    lead.syllables.push_back(h.syllables.front());
    skip = 1;
  }
  std::int64_t distance = 0;
  for (std::size_t i = skip; i < h.syllables.size(); ++i) {
    distance += group.factor(h.syllables[i].factor).length(h.syllables[i].value);
  }
  return {group.multiply(coset.prefix, lead), distance};
}

std::int64_t coset_distance(const Group& group, const PeripheralCoset& coset,
                            const GroupElement& x, const GroupElement& y) {
  auto px = project_point(group, coset, x).point;
  auto py = project_point(group, coset, y).point;
  return group.distance(px, py);
}

GroupElement project_coset(const Group& group, const PeripheralCoset& p,
                           const PeripheralCoset& q) {
  if (p == q) throw InvalidArgument("project_coset needs two distinct cosets");
  return project_point(group, p, q.prefix).point;
}

std::int64_t behrstock_min(const Group& group, const GroupElement& x, const PeripheralCoset& p,
                           const PeripheralCoset& q) {
  if (p == q) throw InvalidArgument("behrstock_min needs two distinct cosets");
  auto on_p = group.distance(project_point(group, p, x).point, project_coset(group, p, q));
  if (on_p == 0) return 0;
  auto on_q = group.distance(project_point(group, q, x).point, project_coset(group, q, p));
  return std::min(on_p, on_q);
}

MaxProjection max_projection(const Group& group, const GroupElement& x) {
  MaxProjection best;
  GroupElement prefix;
  for (const auto& syl : x.syllables) {
    auto len = group.factor(syl.factor).length(syl.value);
    if (len > best.value) {
      best.value = len;
      best.coset = PeripheralCoset{prefix, syl.factor};
    }
    prefix.syllables.push_back(syl);
  }
  return best;
}

std::vector<PeripheralCoset> cosets_through(const Group& group, const GroupElement& x) {
  std::vector<PeripheralCoset> out;
  for (std::size_t f = 0; f < group.factor_count(); ++f) {
    out.push_back(PeripheralCoset::through(x, static_cast<std::uint32_t>(f)));
  }
  return out;
}

std::string render_coset(const Group& group, const PeripheralCoset& coset) {
  return group.render(coset.prefix) + "·" + group.factor_name(coset.factor);
}

}  // namespace rwtrack
