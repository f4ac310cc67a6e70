#include "rwtrack/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <limits>

#include "rwtrack/errors.hpp"

namespace rwtrack {

namespace {

constexpr std::size_t kMix = 0x9e3779b97f4a7c15ULL;

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + kMix + (seed << 6) + (seed >> 2));
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

int sign_of(std::int64_t v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

void reduce_append(std::vector<std::int64_t>& word, std::int64_t code) {
  if (!word.empty() && word.back() == -code) {
    word.pop_back();
  } else {
    word.push_back(code);
  }
}

}  // namespace

std::size_t FactorElementHash::operator()(const FactorElement& e) const noexcept {
  std::size_t h = e.data.size();
  for (auto v : e.data) h = hash_combine(h, std::hash<std::int64_t>{}(v));
  return h;
}

std::size_t GroupElementHash::operator()(const GroupElement& g) const noexcept {
  std::size_t h = g.syllables.size();
  FactorElementHash fh;
  for (const auto& s : g.syllables) {
    h = hash_combine(h, s.factor);
    h = hash_combine(h, fh(s.value));
  }
  return h;
}

HullDag HullDag::chain(std::vector<FactorElement> points) {
  HullDag dag;
  dag.position.resize(points.size());
  dag.preds.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    dag.position[i] = static_cast<std::int64_t>(i);
    if (i > 0) dag.preds[i].push_back(static_cast<std::uint32_t>(i - 1));
  }
  dag.points = std::move(points);
  return dag;
}

// ---------------------------------------------------------------------------
// FactorKind

FactorKind FactorKind::free_abelian(int rank) {
  if (rank < 1) throw InvalidArgument("free abelian rank must be at least 1");
  return {FactorType::FreeAbelian, rank};
}

FactorKind FactorKind::cyclic(int modulus) {
  if (modulus < 2) throw InvalidArgument("cyclic modulus must be at least 2");
  return {FactorType::FiniteCyclic, modulus};
}

FactorKind FactorKind::free(int rank) {
  if (rank < 1) throw InvalidArgument("free rank must be at least 1");
  return {FactorType::Free, rank};
}

int FactorKind::generator_count() const {
  return type == FactorType::FiniteCyclic ? 1 : param;
}

std::string FactorKind::to_string() const {
  switch (type) {
    case FactorType::FreeAbelian:
      return "Z^" + std::to_string(param);
    case FactorType::FiniteCyclic:
      return "Z/" + std::to_string(param);
    case FactorType::Free:
      return "F_" + std::to_string(param);
  }
  return {};
}

FactorElement FactorKind::identity() const {
  switch (type) {
    case FactorType::FreeAbelian:
      return {std::vector<std::int64_t>(static_cast<std::size_t>(param), 0)};
    case FactorType::FiniteCyclic:
      return {{0}};
    case FactorType::Free:
      return {};
  }
  return {};
}

bool FactorKind::is_identity(const FactorElement& e) const {
  return std::all_of(e.data.begin(), e.data.end(), [](std::int64_t v) { return v == 0; });
}

bool FactorKind::is_valid(const FactorElement& e) const {
  switch (type) {
    case FactorType::FreeAbelian:
      return e.data.size() == static_cast<std::size_t>(param);
    case FactorType::FiniteCyclic:
      return e.data.size() == 1 && e.data[0] >= 0 && e.data[0] < param;
    case FactorType::Free:
      for (std::size_t i = 0; i < e.data.size(); ++i) {
        auto c = e.data[i];
        if (c == 0 || std::llabs(c) > param) return false;
        if (i > 0 && e.data[i - 1] == -c) return false;
      }
      return true;
  }
  return false;
}

void FactorKind::apply(FactorElement& e, int generator, int sign) const {
  switch (type) {
    case FactorType::FreeAbelian:
      e.data[static_cast<std::size_t>(generator)] += sign;
      break;
    case FactorType::FiniteCyclic:
      e.data[0] = mod(e.data[0] + sign, param);
      break;
    case FactorType::Free:
      reduce_append(e.data, static_cast<std::int64_t>(sign) * (generator + 1));
      break;
  }
}

FactorElement FactorKind::generator_element(int generator, int sign) const {
  FactorElement e = identity();
  apply(e, generator, sign);
  return e;
}

FactorElement FactorKind::multiply(const FactorElement& a, const FactorElement& b) const {
  FactorElement out = a;
  switch (type) {
    case FactorType::FreeAbelian:
      for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
      break;
    case FactorType::FiniteCyclic:
      out.data[0] = mod(a.data[0] + b.data[0], param);
      break;
    case FactorType::Free:
      for (auto c : b.data) reduce_append(out.data, c);
      break;
  }
  return out;
}

FactorElement FactorKind::inverse(const FactorElement& a) const {
  FactorElement out;
  switch (type) {
    case FactorType::FreeAbelian:
      out = a;
      for (auto& v : out.data) v = -v;
      break;
    case FactorType::FiniteCyclic:
      out.data = {mod(-a.data[0], param)};
      break;
    case FactorType::Free:
      out.data.assign(a.data.rbegin(), a.data.rend());
      for (auto& v : out.data) v = -v;
      break;
  }
  return out;
}

std::int64_t FactorKind::length(const FactorElement& e) const {
  switch (type) {
    case FactorType::FreeAbelian: {
      std::int64_t s = 0;
      for (auto v : e.data) s += std::llabs(v);
      return s;
    }
    case FactorType::FiniteCyclic:
      return std::min<std::int64_t>(e.data[0], param - e.data[0]);
    case FactorType::Free:
      return static_cast<std::int64_t>(e.data.size());
  }
  return 0;
}

std::int64_t FactorKind::distance(const FactorElement& a, const FactorElement& b) const {
  switch (type) {
    case FactorType::FreeAbelian: {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < a.data.size(); ++i) s += std::llabs(a.data[i] - b.data[i]);
      return s;
    }
    case FactorType::FiniteCyclic: {
      std::int64_t k = mod(b.data[0] - a.data[0], param);
      return std::min<std::int64_t>(k, param - k);
    }
    case FactorType::Free: {
      std::size_t common = 0;
      while (common < a.data.size() && common < b.data.size() &&
             a.data[common] == b.data[common]) {
        ++common;
      }
      return static_cast<std::int64_t>(a.data.size() + b.data.size() - 2 * common);
    }
  }
  return 0;
}

std::vector<std::pair<int, int>> FactorKind::canonical_letters(const FactorElement& e) const {
  std::vector<std::pair<int, int>> out;
  switch (type) {
    case FactorType::FreeAbelian:
      for (std::size_t i = 0; i < e.data.size(); ++i) {
        for (std::int64_t k = 0; k < std::llabs(e.data[i]); ++k) {
          out.emplace_back(static_cast<int>(i), sign_of(e.data[i]));
        }
      }
      break;
    case FactorType::FiniteCyclic: {
      std::int64_t k = e.data[0];
      if (k <= param - k) {
        out.assign(static_cast<std::size_t>(k), {0, 1});
      } else {
        out.assign(static_cast<std::size_t>(param - k), {0, -1});
      }
      break;
    }
    case FactorType::Free:
      for (auto c : e.data) out.emplace_back(static_cast<int>(std::llabs(c) - 1), sign_of(c));
      break;
  }
  return out;
}

std::vector<FactorElement> FactorKind::canonical_points(const FactorElement& e) const {
  std::vector<FactorElement> points{identity()};
  for (auto [g, s] : canonical_letters(e)) {
    points.push_back(points.back());
    apply(points.back(), g, s);
  }
  return points;
}

std::size_t FactorKind::hull_volume(const FactorElement& e) const {
  switch (type) {
    case FactorType::FreeAbelian: {
      std::size_t volume = 1;
      for (auto v : e.data) {
        auto side = static_cast<std::size_t>(std::llabs(v)) + 1;
        if (volume > std::numeric_limits<std::size_t>::max() / side) {
          return std::numeric_limits<std::size_t>::max();
        }
        volume *= side;
      }
      return volume;
    }
    case FactorType::FiniteCyclic: {
      auto k = e.data[0];
      if (2 * k == param && param > 2) return static_cast<std::size_t>(param);
      return static_cast<std::size_t>(length(e)) + 1;
    }
    case FactorType::Free:
      return e.data.size() + 1;
  }
  return 0;
}

HullDag FactorKind::geodesic_hull(const FactorElement& e, std::size_t guard) const {
  const std::size_t volume = hull_volume(e);
  if (volume > guard) {
    throw ResourceError("geodesic hull of " + std::to_string(volume) +
                        " points exceeds guard " + std::to_string(guard));
  }
  if (type == FactorType::Free) return HullDag::chain(canonical_points(e));
  if (type == FactorType::FiniteCyclic) {
    const std::int64_t k = e.data[0];
    if (!(2 * k == param && param > 2)) return HullDag::chain(canonical_points(e));
    // Antipodal element: both arcs are geodesics.
    HullDag dag;
    const std::int64_t half = param / 2;
    dag.points.push_back(identity());
    dag.position.push_back(0);
    dag.preds.emplace_back();
    for (std::int64_t step = 1; step < half; ++step) {
      for (int s : {1, -1}) {
        dag.points.push_back({{mod(s * step, param)}});
        dag.position.push_back(step);
        // Previous node on the same arc sits two slots back (or is the origin).
        auto prev = step == 1 ? 0U : static_cast<std::uint32_t>(dag.points.size() - 3);
        dag.preds.push_back({prev});
      }
    }
    dag.points.push_back(e);
    dag.position.push_back(half);
    auto n = static_cast<std::uint32_t>(dag.points.size());
    dag.preds.push_back({n - 3, n - 2});
    return dag;
  }

  // FreeAbelian: the integer box between 0 and e, mixed-radix on |q_i|.
  const std::size_t d = e.data.size();
  std::vector<std::size_t> stride(d);
  std::size_t acc = 1;
  for (std::size_t i = 0; i < d; ++i) {
    stride[i] = acc;
    acc *= static_cast<std::size_t>(std::llabs(e.data[i])) + 1;
  }
  HullDag dag;
  dag.points.resize(volume);
  dag.position.resize(volume);
  dag.preds.resize(volume);
  for (std::size_t idx = 0; idx < volume; ++idx) {
    FactorElement q{std::vector<std::int64_t>(d, 0)};
    std::size_t rest = idx;
    std::int64_t pos = 0;
    for (std::size_t i = d; i-- > 0;) {
      auto mag = static_cast<std::int64_t>(rest / stride[i]);
      rest %= stride[i];
      q.data[i] = sign_of(e.data[i]) * mag;
      pos += mag;
      if (mag > 0) dag.preds[idx].push_back(static_cast<std::uint32_t>(idx - stride[i]));
    }
    dag.points[idx] = std::move(q);
    dag.position[idx] = pos;
  }
  return dag;
}

// ---------------------------------------------------------------------------
// GroupSpec

std::string GroupSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i > 0) out += '*';
    out += factors[i].to_string();
  }
  return out;
}

std::string GroupSpec::nontrivial_rh_violation() const {
  if (factors.size() < 2) {
    return "at least 2 peripheral sets are required (the group has a single factor)";
  }
  for (const auto& f : factors) {
    if (!f.is_infinite()) {
      return "all peripheral subgroups have infinite index and unbounded orbits; factor " +
             f.to_string() + " is finite";
    }
  }
  return {};
}

GroupSpec parse_group_spec(std::string_view text) {
  constexpr long kMaxParam = 64;
  GroupSpec spec;
  std::size_t pos = 0;
  if (text.empty()) throw ParseError("empty group spec", 0);
  while (true) {
    const std::size_t token_start = pos;
    if (pos >= text.size()) throw ParseError("expected factor token", pos);
    char head = text[pos];
    FactorType type;
    if (head == 'Z') {
      ++pos;
      if (pos >= text.size() || (text[pos] != '^' && text[pos] != '/')) {
        throw ParseError("expected '^' or '/' after 'Z'", pos);
      }
      type = text[pos] == '^' ? FactorType::FreeAbelian : FactorType::FiniteCyclic;
      ++pos;
    } else if (head == 'F') {
      ++pos;
      if (pos >= text.size() || text[pos] != '_') throw ParseError("expected '_' after 'F'", pos);
      type = FactorType::Free;
      ++pos;
    } else {
      throw ParseError(std::string("unknown factor token '") + head + "'", pos);
    }
    const std::size_t number_start = pos;
    long value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + (text[pos] - '0');
      if (value > 1'000'000) throw ParseError("parameter too large", number_start);
      ++pos;
    }
    if (pos == number_start) throw ParseError("expected a number", pos);
    const long min_value = type == FactorType::FiniteCyclic ? 2 : 1;
    if (value < min_value || value > kMaxParam) {
      throw ParseError("parameter " + std::to_string(value) + " out of range [" +
                           std::to_string(min_value) + ", " + std::to_string(kMaxParam) +
                           "] in factor starting at " + std::to_string(token_start),
                       number_start);
    }
    spec.factors.push_back({type, static_cast<int>(value)});
    if (pos == text.size()) break;
    if (text[pos] != '*') throw ParseError("expected '*' between factors", pos);
    ++pos;
  }
  if (spec.factors.size() > 26) throw ParseError("at most 26 factors are supported", 0);
  return spec;
}

std::size_t GeodesicPath::segment_start(std::size_t j) const {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < j; ++i) pos += segments[i].length();
  return pos;
}

// ---------------------------------------------------------------------------
// Group

Group::Group(GroupSpec spec) : spec_(std::move(spec)) {
  if (spec_.factors.empty()) throw InvalidArgument("group needs at least one factor");
  for (std::size_t f = 0; f < spec_.factors.size(); ++f) {
    for (int g = 0; g < spec_.factors[f].generator_count(); ++g) {
      for (int s : {1, -1}) {
        generators_.push_back({static_cast<std::uint16_t>(f), static_cast<std::uint16_t>(g),
                               static_cast<std::int8_t>(s)});
      }
    }
  }
}

void Group::validate(Letter s) const {
  if (s.factor >= factor_count() || s.generator >= factor(s.factor).generator_count() ||
      (s.sign != 1 && s.sign != -1)) {
    throw InvalidArgument("letter does not belong to group " + spec_.to_string());
  }
}

void Group::validate(const GroupElement& x) const {
  for (std::size_t i = 0; i < x.syllables.size(); ++i) {
    const auto& syl = x.syllables[i];
    if (syl.factor >= factor_count() || !factor(syl.factor).is_valid(syl.value) ||
        factor(syl.factor).is_identity(syl.value) ||
        (i > 0 && x.syllables[i - 1].factor == syl.factor)) {
      throw InvalidArgument("element is not a normal form over group " + spec_.to_string());
    }
  }
}

void Group::right_multiply(GroupElement& x, Letter s) const {
  const auto& kind = factor(s.factor);
  if (!x.syllables.empty() && x.syllables.back().factor == s.factor) {
    auto& value = x.syllables.back().value;
    kind.apply(value, s.generator, s.sign);
    if (kind.is_identity(value)) x.syllables.pop_back();
  } else {
    x.syllables.push_back({s.factor, kind.generator_element(s.generator, s.sign)});
  }
}

GroupElement Group::normalize(std::span<const Letter> word) const {
  GroupElement x;
  for (auto s : word) {
    validate(s);
    right_multiply(x, s);
  }
  return x;
}

GroupElement Group::multiply(const GroupElement& x, const GroupElement& y) const {
  validate(x);
  validate(y);
  GroupElement out = x;
  std::size_t i = 0;
  // Cancel and merge across the boundary until it stabilizes.
  while (i < y.syllables.size() && !out.syllables.empty() &&
         out.syllables.back().factor == y.syllables[i].factor) {
    const auto& kind = factor(y.syllables[i].factor);
    auto merged = kind.multiply(out.syllables.back().value, y.syllables[i].value);
    ++i;
    if (kind.is_identity(merged)) {
      out.syllables.pop_back();
    } else {
      out.syllables.back().value = std::move(merged);
      break;
    }
  }
  out.syllables.insert(out.syllables.end(), y.syllables.begin() + static_cast<std::ptrdiff_t>(i),
                       y.syllables.end());
  return out;
}

GroupElement Group::invert(const GroupElement& x) const {
  GroupElement out;
  out.syllables.reserve(x.syllables.size());
  for (auto it = x.syllables.rbegin(); it != x.syllables.rend(); ++it) {
    out.syllables.push_back({it->factor, factor(it->factor).inverse(it->value)});
  }
  return out;
}

std::int64_t Group::word_length(const GroupElement& x) const {
  std::int64_t total = 0;
  for (const auto& s : x.syllables) total += factor(s.factor).length(s.value);
  return total;
}

std::int64_t Group::distance(const GroupElement& x, const GroupElement& y) const {
  return word_length(multiply(invert(x), y));
}

std::vector<Letter> Group::canonical_letters(const GroupElement& x) const {
  std::vector<Letter> out;
  for (const auto& s : x.syllables) {
    for (auto [g, sign] : factor(s.factor).canonical_letters(s.value)) {
      out.push_back({static_cast<std::uint16_t>(s.factor), static_cast<std::uint16_t>(g),
                     static_cast<std::int8_t>(sign)});
    }
  }
  return out;
}

GeodesicPath Group::canonical_geodesic(const GroupElement& x, const GroupElement& y) const {
  GeodesicPath path;
  path.start = x;
  path.offset = multiply(invert(x), y);
  std::size_t pos = 0;
  for (const auto& syl : path.offset.syllables) {
    const auto& kind = factor(syl.factor);
    if (pos > 0) path.transition_indices.push_back(pos);
    path.segments.push_back({syl.factor, kind.canonical_points(syl.value)});
    for (auto [g, sign] : kind.canonical_letters(syl.value)) {
      path.letters.push_back({static_cast<std::uint16_t>(syl.factor),
                              static_cast<std::uint16_t>(g), static_cast<std::int8_t>(sign)});
    }
    pos = path.letters.size();
  }
  return path;
}

GeodesicPath Group::geodesic_from_letters(const GroupElement& start,
                                          std::span<const Letter> letters) const {
  GeodesicPath path;
  path.start = start;
  path.letters.assign(letters.begin(), letters.end());
  path.offset = normalize(letters);
  if (word_length(path.offset) != static_cast<std::int64_t>(letters.size())) {
    throw InvalidArgument("letters do not spell a geodesic");
  }
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const auto& kind = factor(letters[i].factor);
    if (i == 0 || letters[i].factor != letters[i - 1].factor) {
      if (i > 0) path.transition_indices.push_back(i);
      path.segments.push_back({letters[i].factor, {kind.identity()}});
    }
    auto& pts = path.segments.back().points;
    pts.push_back(pts.back());
    kind.apply(pts.back(), letters[i].generator, letters[i].sign);
  }
  return path;
}

GroupElement Group::path_vertex(const GeodesicPath& path, std::size_t i) const {
  if (i >= path.vertex_count()) throw InvalidArgument("vertex index out of range");
  GroupElement rel;
  std::size_t pos = 0;
  for (const auto& seg : path.segments) {
    if (i <= pos + seg.length()) {
      const auto& local = seg.points[i - pos];
      if (!factor(seg.factor).is_identity(local)) rel.syllables.push_back({seg.factor, local});
      break;
    }
    rel.syllables.push_back({seg.factor, seg.value()});
    pos += seg.length();
  }
  return multiply(path.start, rel);
}

std::vector<GroupElement> Group::path_vertices(const GeodesicPath& path) const {
  std::vector<GroupElement> out;
  out.reserve(path.vertex_count());
  GroupElement current = path.start;
  out.push_back(current);
  for (auto s : path.letters) {
    right_multiply(current, s);
    out.push_back(current);
  }
  return out;
}

HullDag Group::factor_geodesic_hull(std::size_t f, const FactorElement& e,
                                    std::size_t guard) const {
  return factor(f).geodesic_hull(e, guard);
}

Ball Group::enumerate_ball(int radius, std::size_t guard) const {
  if (radius < 0) throw InvalidArgument("radius must be non-negative");
  Ball ball;
  ball.elements.push_back({});
  ball.distance.push_back(0);
  ball.index.emplace(GroupElement{}, 0);
  std::size_t head = 0;
  while (head < ball.elements.size()) {
    const int d = ball.distance[head];
    if (d == radius) break;
    for (auto s : generators_) {
      GroupElement next = ball.elements[head];
      right_multiply(next, s);
      if (ball.index.contains(next)) continue;
      if (ball.elements.size() >= guard) {
        throw ResourceError("ball of radius " + std::to_string(radius) + " exceeds " +
                            std::to_string(guard) + " elements");
      }
      ball.index.emplace(next, ball.elements.size());
      ball.elements.push_back(std::move(next));
      ball.distance.push_back(d + 1);
    }
    ++head;
  }
  return ball;
}

// ---------------------------------------------------------------------------
// Names

std::string Group::factor_name(std::size_t f) const {
  if (f < 26) return std::string(1, static_cast<char>('A' + f));
  return "G" + std::to_string(f + 1);
}

std::string Group::letter_name(Letter s) const {
  std::string base = std::string(1, static_cast<char>('a' + s.factor)) +
                     std::to_string(s.generator + 1);
  return s.sign < 0 ? base + "^-1" : base;
}

Letter Group::parse_letter(std::string_view token) const {
  auto fail = [&] { throw MalformedInput("unknown letter '" + std::string(token) + "'"); };
  std::string_view body = token;
  int sign = 1;
  for (std::string_view suffix : {std::string_view("^-1"), std::string_view("⁻¹")}) {
    if (body.size() > suffix.size() && body.substr(body.size() - suffix.size()) == suffix) {
      body.remove_suffix(suffix.size());
      sign = -1;
      break;
    }
  }
  std::size_t f = 0;
  std::string_view digits;
  if (body.size() >= 2 && body[0] == 'g') {
    auto underscore = body.find('_');
    if (underscore == std::string_view::npos || underscore < 2) fail();
    auto fdigits = body.substr(1, underscore - 1);
    if (!std::all_of(fdigits.begin(), fdigits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) fail();
    f = static_cast<std::size_t>(std::stoul(std::string(fdigits)));
    if (f == 0) fail();
    f -= 1;
    digits = body.substr(underscore + 1);
  } else if (body.size() >= 2 && body[0] >= 'a' && body[0] <= 'z') {
    f = static_cast<std::size_t>(body[0] - 'a');
    digits = body.substr(1);
  } else {
    fail();
  }
  if (digits.empty() || digits.size() > 6 ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    fail();
  }
  auto g = std::stoul(std::string(digits));
  if (f >= factor_count() || g == 0 || g > static_cast<unsigned long>(factor(f).generator_count())) {
    fail();
  }
  return {static_cast<std::uint16_t>(f), static_cast<std::uint16_t>(g - 1),
          static_cast<std::int8_t>(sign)};
}

std::vector<Letter> Group::parse_word(std::string_view text) const {
  std::vector<Letter> word;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == ',' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    auto end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != ',' && text[end] != '\t') ++end;
    auto token = text.substr(pos, end - pos);
    // Allow a power suffix such as a1^3 or a1^-2.
    int power = 1;
    auto caret = token.find('^');
    if (caret != std::string_view::npos && token.substr(caret) != "^-1") {
      auto exponent = token.substr(caret + 1);
      char* parse_end = nullptr;
      std::string exp_str(exponent);
      long value = std::strtol(exp_str.c_str(), &parse_end, 10);
      if (exp_str.empty() || *parse_end != '\0' || value == 0 || std::labs(value) > 1'000'000) {
        throw MalformedInput("bad exponent in '" + std::string(token) + "'");
      }
      power = static_cast<int>(value);
      token = token.substr(0, caret);
    }
    Letter s = parse_letter(token);
    if (power < 0) {
      s = s.inverse();
      power = -power;
    }
    for (int i = 0; i < power; ++i) word.push_back(s);
    pos = end;
  }
  return word;
}

std::string Group::render_word(std::span<const Letter> word) const {
  std::string out;
  std::size_t i = 0;
  while (i < word.size()) {
    std::size_t j = i;
    while (j < word.size() && word[j] == word[i]) ++j;
    if (!out.empty()) out += ' ';
    std::string base = std::string(1, static_cast<char>('a' + word[i].factor)) +
                       std::to_string(word[i].generator + 1);
    auto power = static_cast<long>(j - i) * word[i].sign;
    out += base;
    if (power != 1) out += "^" + std::to_string(power);
    i = j;
  }
  return out;
}

std::string Group::render(const GroupElement& x) const {
  if (x.is_identity()) return "1";
  auto letters = canonical_letters(x);
  return render_word(letters);
}

}  // namespace rwtrack
