#include "rwtrack/dehn.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <unordered_map>

#include "rwtrack/errors.hpp"
#include "rwtrack/parallel.hpp"

namespace rwtrack {

namespace {

std::int64_t square_key(std::int64_t x, std::int64_t y) {
  return (x << 32) ^ (y & 0xffffffffLL);
}

// Winding numbers of all unit squares (lower-left corner (x, y)) under the
// convention w = sum of dx over horizontal edges crossed by the upward ray
// from the square's centre.
std::unordered_map<std::int64_t, std::int64_t> winding_numbers(
    const std::vector<LatticeStep>& steps, std::int64_t x0, std::int64_t y0) {
  std::map<std::int64_t, std::vector<std::pair<std::int64_t, int>>> columns;
  std::int64_t x = x0, y = y0;
  for (const auto& s : steps) {
    if (s.dx != 0) columns[std::min(x, x + s.dx)].emplace_back(y, s.dx);
    x += s.dx;
    y += s.dy;
  }
  std::unordered_map<std::int64_t, std::int64_t> w;
  for (auto& [col, edges] : columns) {
    std::sort(edges.begin(), edges.end());
    // Squares between consecutive edge heights see the edges above them.
    std::int64_t above = 0;
    for (const auto& e : edges) above += e.second;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      above -= edges[i].second;
      if (above == 0) continue;
      for (auto row = edges[i].first; row < edges[i + 1].first; ++row) {
        w[square_key(col, row)] = above;
      }
    }
  }
  return w;
}

bool is_inverse(LatticeStep a, LatticeStep b) { return a.dx == -b.dx && a.dy == -b.dy; }

// Removes backtracks, including across the seam, moving the base point so
// the traced loop stays the same up to spurs.
void cyclic_reduce(std::vector<LatticeStep>& steps, std::int64_t& x0, std::int64_t& y0) {
  std::vector<LatticeStep> out;
  for (const auto& s : steps) {
    if (!out.empty() && is_inverse(out.back(), s)) {
      out.pop_back();
    } else {
      out.push_back(s);
    }
  }
  std::size_t lo = 0, hi = out.size();
  while (hi - lo >= 2 && is_inverse(out[lo], out[hi - 1])) {
    x0 += out[lo].dx;
    y0 += out[lo].dy;
    ++lo;
    --hi;
  }
  steps.assign(out.begin() + static_cast<std::ptrdiff_t>(lo),
               out.begin() + static_cast<std::ptrdiff_t>(hi));
}

std::vector<LatticeStep> lattice_steps(const FactorLoop& loop) {
  std::vector<LatticeStep> out;
  for (const auto& s : loop.letters) {
    out.push_back(s.generator == 0 ? LatticeStep{s.sign, 0} : LatticeStep{0, s.sign});
  }
  return out;
}

}  // namespace

LoopWord::LoopWord(const Group& group, std::vector<Letter> letters)
    : letters_(std::move(letters)) {
  if (!group.normalize(letters_).is_identity()) {
    throw InvalidArgument("loop word is not null-homotopic");
  }
}

std::vector<Letter> combing_word(const Group& group, const GroupElement& x) {
  return group.canonical_letters(x);
}

LoopWord loop_of_trajectory(const Group& group, const Trajectory& walk) {
  auto letters = walk.increments();
  auto comb = combing_word(group, walk.endpoint());
  for (auto it = comb.rbegin(); it != comb.rend(); ++it) letters.push_back(it->inverse());
  return LoopWord(group, std::move(letters));
}

std::vector<FactorLoop> decompose_factor_loops(const Group& group, const LoopWord& loop) {
  struct Open {
    FactorElement value;
    FactorLoop piece;
  };
  std::vector<Open> stack;
  std::vector<FactorLoop> out;
  const auto& letters = loop.letters();
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const auto& s = letters[i];
    const auto& kind = group.factor(s.factor);
    if (stack.empty() || stack.back().piece.factor != s.factor) {
      stack.push_back({kind.identity(), FactorLoop{s.factor, {}, {}}});
    }
    auto& top = stack.back();
    kind.apply(top.value, s.generator, s.sign);
    top.piece.letters.push_back(s);
    top.piece.positions.push_back(i);
    if (kind.is_identity(top.value)) {
      out.push_back(std::move(top.piece));
      stack.pop_back();
    }
  }
  if (!stack.empty()) throw InvalidArgument("loop word is not null-homotopic");
  return out;
}

void require_area_oracles(const Group& group) {
  for (std::size_t f = 0; f < group.factor_count(); ++f) {
    const auto& k = group.factor(f);
    if (k.type == FactorType::FreeAbelian && k.param >= 3) {
      throw UnsupportedFactor("no area oracle for factor " + k.to_string());
    }
  }
}

std::int64_t winding_area(const std::vector<LatticeStep>& steps) {
  std::int64_t total = 0;
  for (const auto& [key, w] : winding_numbers(steps, 0, 0)) total += std::llabs(w);
  return total;
}

std::int64_t inversion_area(const std::vector<LatticeStep>& steps) {
  std::int64_t horizontal_before = 0, vertical_before = 0;
  std::int64_t v_then_h = 0, h_then_v = 0;
  for (const auto& s : steps) {
    if (s.dx != 0) {
      v_then_h += vertical_before;
      ++horizontal_before;
    } else {
      h_then_v += horizontal_before;
      ++vertical_before;
    }
  }
  return std::min(v_then_h, h_then_v);
}

// Greedy corner flips: each flip sweeps one square and must lower its
// |winding|; when none is left the rest is sorted.
static std::int64_t corner_flip_area(const std::vector<LatticeStep>& input) {
  std::vector<LatticeStep> steps = input;
  std::int64_t x0 = 0, y0 = 0;
  auto w = winding_numbers(steps, x0, y0);
  std::int64_t cells = 0;
  for (;;) {
    cyclic_reduce(steps, x0, y0);
    const std::size_t m = steps.size();
    if (m == 0) return cells;
    // Find a corner whose flip lowers |winding| of the square it sweeps.
    std::int64_t x = x0, y = y0;
    bool flipped = false;
    for (std::size_t k = 0; k < m && !flipped; ++k) {
      const auto a = steps[k];
      const auto b = steps[(k + 1) % m];
      const auto px = x, py = y;
      x += a.dx;
      y += a.dy;
      if ((a.dx != 0) == (b.dx != 0)) continue;
      // Swept square: old path p -> p+a -> p+a+b, new path p -> p+b -> p+a+b.
      // Its winding changes by the top horizontal edge of old-then-reversed-new.
      const auto sx = std::min(px, px + a.dx + b.dx);
      const auto sy = std::min(py, py + a.dy + b.dy);
      int c;
      if (a.dx != 0) {
        // Old horizontal edge at height py, new one at py + b.dy reversed.
        c = b.dy > 0 ? -a.dx : a.dx;
      } else {
        // Old horizontal edge at height py + a.dy, new one at py reversed.
        c = a.dy > 0 ? b.dx : -b.dx;
      }
      auto it = w.find(square_key(sx, sy));
      if (it == w.end() || it->second == 0 || (it->second > 0) != (c > 0)) continue;
      it->second -= c;
      std::swap(steps[k], steps[(k + 1) % m]);
      if (k + 1 == m) {
        // The flipped corner was the base point.
        x0 = px + b.dx;
        y0 = py + b.dy;
      }
      ++cells;
      flipped = true;
    }
    if (!flipped) return cells + inversion_area(steps);
  }
}

namespace {

// Erases loops in order of closure: whenever the path revisits a vertex the
// closed stretch since the earlier visit is cut off. Every piece is a simple
// cycle or a spur, so it bounds a disc whose cells are its winding area.
std::int64_t simple_cycle_area(const std::vector<LatticeStep>& steps) {
  std::vector<std::pair<std::int64_t, std::int64_t>> verts{{0, 0}};
  std::vector<LatticeStep> path;
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> index{{{0, 0}, 0}};
  std::int64_t cells = 0;
  for (const auto& s : steps) {
    const auto [x, y] = verts.back();
    const std::pair<std::int64_t, std::int64_t> next{x + s.dx, y + s.dy};
    path.push_back(s);
    auto it = index.find(next);
    if (it == index.end()) {
      index.emplace(next, verts.size());
      verts.push_back(next);
      continue;
    }
    const std::size_t k = it->second;
    std::vector<LatticeStep> cycle(path.begin() + static_cast<std::ptrdiff_t>(k), path.end());
    cells += winding_area(cycle);
    for (std::size_t i = k + 1; i < verts.size(); ++i) index.erase(verts[i]);
    verts.resize(k + 1);
    path.resize(k);
  }
  return cells;
}

std::vector<LatticeStep> free_reduce(const std::vector<LatticeStep>& steps) {
  std::vector<LatticeStep> out;
  for (const auto& s : steps) {
    if (!out.empty() && is_inverse(out.back(), s)) {
      out.pop_back();
    } else {
      out.push_back(s);
    }
  }
  return out;
}

std::int64_t direct_area(const std::vector<LatticeStep>& piece) {
  return std::min({simple_cycle_area(free_reduce(piece)), corner_flip_area(piece),
                   inversion_area(piece)});
}

}  // namespace

std::int64_t peeling_area(const std::vector<LatticeStep>& steps) {
  // Cut points: returns to the base point.
  std::vector<std::size_t> cuts{0};
  std::int64_t x = 0, y = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    x += steps[i].dx;
    y += steps[i].dy;
    if (x == 0 && y == 0) cuts.push_back(i + 1);
  }
  // best[j]: cheapest filling of steps[0, cuts[j]) as consecutive blocks.
  const std::size_t r = cuts.size();
  std::vector<std::int64_t> best(r, 0);
  for (std::size_t j = 1; j < r; ++j) {
    best[j] = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < j; ++i) {
      std::vector<LatticeStep> block(steps.begin() + static_cast<std::ptrdiff_t>(cuts[i]),
                                     steps.begin() + static_cast<std::ptrdiff_t>(cuts[j]));
      best[j] = std::min(best[j], best[i] + direct_area(block));
    }
  }
  return best[r - 1];
}

FillingReport factor_area(const Group& group, const FactorLoop& loop) {
  const auto& kind = group.factor(loop.factor);
  FillingReport r;
  switch (kind.type) {
    case FactorType::Free:
      r = {0, 0, true};
      break;
    case FactorType::FiniteCyclic: {
      std::int64_t sum = 0;
      for (const auto& s : loop.letters) sum += s.sign;
      if (sum % kind.param != 0) throw InvalidArgument("factor loop is not closed");
      const auto cells = std::llabs(sum) / kind.param;
      r = {cells, cells, true};
      break;
    }
    case FactorType::FreeAbelian: {
      if (kind.param >= 3) throw UnsupportedFactor("no area oracle for factor " + kind.to_string());
      if (kind.param == 1) {
        r = {0, 0, true};
        break;
      }
      auto steps = lattice_steps(loop);
      r.lower = winding_area(steps);
      r.upper = peeling_area(steps);
      r.exact = r.lower == r.upper;
      break;
    }
  }
  return r;
}

FillingReport loop_area(const Group& group, const LoopWord& loop) {
  FillingReport total{0, 0, true};
  for (const auto& piece : decompose_factor_loops(group, loop)) total += factor_area(group, piece);
  return total;
}

DehnEstimate average_dehn_estimate(const Group& group, std::size_t n, std::size_t trials,
                                   std::uint64_t seed, std::size_t workers) {
  require_area_oracles(group);
  if (trials < 1) throw InvalidArgument("average_dehn_estimate needs trials >= 1");
  const auto measure = simple_measure(group);
  std::vector<FillingReport> reports(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    auto walk = sample_trajectory(group, measure, n, derive_seed(seed, t), StorageMode::Streaming);
    reports[t] = loop_area(group, loop_of_trajectory(group, walk));
  });
  std::vector<double> lo, hi;
  DehnEstimate est;
  for (const auto& r : reports) {
    lo.push_back(static_cast<double>(r.lower));
    hi.push_back(static_cast<double>(r.upper));
    est.exact_trials += r.exact;
  }
  est.lower = summarize(lo);
  est.upper = summarize(hi);
  return est;
}

}  // namespace rwtrack
