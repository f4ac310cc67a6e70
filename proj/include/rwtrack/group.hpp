#pragma once

// Free products of elementary factors (Z^d, Z/m, F_r): normal forms, word
// metric, canonical geodesics and the breadth-first ball used as an oracle.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rwtrack {

enum class FactorType : std::uint8_t { FreeAbelian, FiniteCyclic, Free };

/// Element of a single factor.
///   FreeAbelian(d): coordinate vector of length d.
///   FiniteCyclic(m): one residue in [0, m).
///   Free(r): freely reduced word, letter k (0-based) stored as +(k+1) or -(k+1).
struct FactorElement {
  std::vector<std::int64_t> data;

  bool operator==(const FactorElement&) const = default;
  auto operator<=>(const FactorElement&) const = default;
};

struct FactorElementHash {
  std::size_t operator()(const FactorElement& e) const noexcept;
};

/// Generator letter of the free product: generator `generator` of factor
/// `factor`, raised to `sign` (+1 or -1).
struct Letter {
  std::uint16_t factor = 0;
  std::uint16_t generator = 0;
  std::int8_t sign = 1;

  Letter inverse() const { return {factor, generator, static_cast<std::int8_t>(-sign)}; }

  bool operator==(const Letter&) const = default;
  auto operator<=>(const Letter&) const = default;
};

/// Local geodesic structure of one factor element: every point lying on some
/// factor geodesic from the identity to the element, ordered by distance from
/// the identity. Paths from node 0 to the last node along `preds` edges are
/// exactly the factor geodesics.
struct HullDag {
  std::vector<FactorElement> points;
  std::vector<std::int64_t> position;
  std::vector<std::vector<std::uint32_t>> preds;

  std::size_t size() const { return points.size(); }
  static HullDag chain(std::vector<FactorElement> points);
};

struct FactorKind {
  FactorType type = FactorType::FreeAbelian;
  int param = 1;  // rank d, modulus m or free rank r

  static FactorKind free_abelian(int rank);
  static FactorKind cyclic(int modulus);
  static FactorKind free(int rank);

  int generator_count() const;
  bool is_infinite() const { return type != FactorType::FiniteCyclic; }
  std::string to_string() const;

  FactorElement identity() const;
  bool is_identity(const FactorElement& e) const;
  bool is_valid(const FactorElement& e) const;
  void apply(FactorElement& e, int generator, int sign) const;
  FactorElement generator_element(int generator, int sign) const;
  FactorElement multiply(const FactorElement& a, const FactorElement& b) const;
  FactorElement inverse(const FactorElement& a) const;
  std::int64_t length(const FactorElement& e) const;
  std::int64_t distance(const FactorElement& a, const FactorElement& b) const;

  /// Canonical factor geodesic from the identity: coordinate order for Z^d,
  /// shorter arc (positive on ties) for Z/m, the reduced word for F_r.
  std::vector<std::pair<int, int>> canonical_letters(const FactorElement& e) const;
  std::vector<FactorElement> canonical_points(const FactorElement& e) const;

  /// Union of all factor geodesics from the identity to `e`. Throws
  /// ResourceError when the hull has more than `guard` points.
  HullDag geodesic_hull(const FactorElement& e, std::size_t guard = 1'000'000) const;
  std::size_t hull_volume(const FactorElement& e) const;

  bool operator==(const FactorKind&) const = default;
};

struct GroupSpec {
  std::vector<FactorKind> factors;

  std::string to_string() const;
  /// Empty when the group is a non-trivial relatively hyperbolic free product
  /// (at least two factors, all infinite); otherwise the failed hypothesis.
  std::string nontrivial_rh_violation() const;

  bool operator==(const GroupSpec&) const = default;
};

/// Parses `Z^d`, `Z/m`, `F_r` tokens joined by `*`.
GroupSpec parse_group_spec(std::string_view text);

struct Syllable {
  std::uint32_t factor = 0;
  FactorElement value;

  bool operator==(const Syllable&) const = default;
};

/// Alternating-syllable normal form. Adjacent syllables lie in distinct
/// factors and no syllable is trivial; the empty sequence is the identity.
struct GroupElement {
  std::vector<Syllable> syllables;

  bool is_identity() const { return syllables.empty(); }
  bool operator==(const GroupElement&) const = default;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept;
};

/// A geodesic stored per syllable segment: segment j runs inside the coset
/// start * c_j * A_{factor}, where c_j is the product of the earlier segment
/// values, through the local points `points` (points.front() is the identity).
struct GeodesicSegment {
  std::uint32_t factor = 0;
  std::vector<FactorElement> points;

  std::size_t length() const { return points.size() - 1; }
  const FactorElement& value() const { return points.back(); }
};

struct GeodesicPath {
  GroupElement start;
  GroupElement offset;  // start^-1 * end
  std::vector<GeodesicSegment> segments;
  std::vector<Letter> letters;
  /// Vertex indices (strictly inside the path) where the syllable changes.
  std::vector<std::size_t> transition_indices;

  std::size_t vertex_count() const { return letters.size() + 1; }
  /// Vertex index at which segment j begins.
  std::size_t segment_start(std::size_t j) const;
};

struct Ball {
  std::vector<GroupElement> elements;
  std::vector<int> distance;
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> index;
};

class Group {
 public:
  explicit Group(GroupSpec spec);

  const GroupSpec& spec() const { return spec_; }
  std::size_t factor_count() const { return spec_.factors.size(); }
  const FactorKind& factor(std::size_t i) const { return spec_.factors[i]; }

  /// S union S^-1 in a fixed order: factor, generator, then +1 before -1.
  const std::vector<Letter>& generators() const { return generators_; }

  GroupElement normalize(std::span<const Letter> word) const;
  void right_multiply(GroupElement& x, Letter s) const;
  GroupElement multiply(const GroupElement& x, const GroupElement& y) const;
  GroupElement invert(const GroupElement& x) const;
  std::int64_t word_length(const GroupElement& x) const;
  std::int64_t distance(const GroupElement& x, const GroupElement& y) const;

  /// Throws InvalidArgument unless `x` is a normal form over this group.
  void validate(const GroupElement& x) const;
  void validate(Letter s) const;

  std::vector<Letter> canonical_letters(const GroupElement& x) const;
  GeodesicPath canonical_geodesic(const GroupElement& x, const GroupElement& y) const;
  /// Builds a geodesic path from explicit letters; throws InvalidArgument if
  /// the letters do not spell a geodesic.
  GeodesicPath geodesic_from_letters(const GroupElement& start,
                                     std::span<const Letter> letters) const;
  GroupElement path_vertex(const GeodesicPath& path, std::size_t i) const;
  std::vector<GroupElement> path_vertices(const GeodesicPath& path) const;

  HullDag factor_geodesic_hull(std::size_t factor, const FactorElement& e,
                               std::size_t guard = 1'000'000) const;

  Ball enumerate_ball(int radius, std::size_t guard = 10'000'000) const;

  std::string letter_name(Letter s) const;
  std::string factor_name(std::size_t factor) const;
  Letter parse_letter(std::string_view token) const;
  std::vector<Letter> parse_word(std::string_view text) const;
  std::string render_word(std::span<const Letter> word) const;
  std::string render(const GroupElement& x) const;

 private:
  GroupSpec spec_;
  std::vector<Letter> generators_;
};

}  // namespace rwtrack
