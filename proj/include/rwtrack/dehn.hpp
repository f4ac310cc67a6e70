#pragma once

// Filling areas of null-homotopic loops in free products.
//
// Presentations are fixed per factor: <a1, a2 | [a1, a2]> for Z^2, <t | t^m>
// for Z/m, and no relators for Z^1 and F_r. A loop is cut into factor loops
// by the stack decomposition below and each piece is filled inside its
// factor; the sum of piece areas bounds the area of the whole loop.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rwtrack/group.hpp"
#include "rwtrack/stats.hpp"
#include "rwtrack/walk.hpp"

namespace rwtrack {

class LoopWord {
 public:
  /// Throws InvalidArgument unless the letters multiply to the identity.
  LoopWord(const Group& group, std::vector<Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }

 private:
  std::vector<Letter> letters_;
};

struct FactorLoop {
  std::uint32_t factor = 0;
  std::vector<Letter> letters;
  std::vector<std::size_t> positions;  // index of each letter in the source loop
};

struct FillingReport {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  bool exact = false;

  FillingReport& operator+=(const FillingReport& o) {
    lower += o.lower;
    upper += o.upper;
    exact = exact && o.exact;
    return *this;
  }
};

std::vector<Letter> combing_word(const Group& group, const GroupElement& x);

/// The increments followed by the inverse of the combing word of X_n.
LoopWord loop_of_trajectory(const Group& group, const Trajectory& walk);

/// Scans the loop keeping a stack of open syllables. A letter of the top
/// syllable's factor is merged into it; otherwise it opens a new syllable.
/// A syllable whose value returns to the identity is popped and emitted with
/// all letters it absorbed.
std::vector<FactorLoop> decompose_factor_loops(const Group& group, const LoopWord& loop);

/// Throws UnsupportedFactor if some factor has no area oracle (Z^d, d >= 3).
void require_area_oracles(const Group& group);

FillingReport factor_area(const Group& group, const FactorLoop& loop);

/// Sum of factor_area over the decomposition.
FillingReport loop_area(const Group& group, const LoopWord& loop);

/// Z^2 loops given as unit steps (dx, dy).
struct LatticeStep {
  int dx = 0;
  int dy = 0;
};

/// Sum over unit squares of |winding number|.
std::int64_t winding_area(const std::vector<LatticeStep>& steps);

/// Cells of an explicit diagram. The loop is cut at its returns to the base
/// point; consecutive pieces are grouped into blocks (cheapest grouping by
/// dynamic programming) and each block is filled by the cheapest of: splitting
/// its free reduction into simple cycles, greedy corner peeling finished by
/// sorting, and plain sorting. Subadditive under concatenation at the base.
std::int64_t peeling_area(const std::vector<LatticeStep>& steps);

/// Cells needed to sort the letters so one generator's letters come first.
std::int64_t inversion_area(const std::vector<LatticeStep>& steps);

struct DehnEstimate {
  Summary lower;
  Summary upper;
  std::size_t exact_trials = 0;
};

/// Filling bounds of loop_of_trajectory over `trials` simple random walks of
/// length n; trial t uses derive_seed(seed, t).
DehnEstimate average_dehn_estimate(const Group& group, std::size_t n, std::size_t trials,
                                   std::uint64_t seed, std::size_t workers = 1);

}  // namespace rwtrack
