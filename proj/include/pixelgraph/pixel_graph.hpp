#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pixelgraph/dyadic.hpp"
#include "pixelgraph/errors.hpp"

namespace pxg {

// A pixelated (m, n) graph: 2^m columns of width 2^-m, column k occupying row
// levels[k-1] of height 2^-n (rows are 1-based from the bottom). Adjacent
// columns' rows differ by at most 1, so the union of rectangles is connected.
// Immutable after construction; validate with new_graph.
struct PixelGraph {
  int m = 0;
  int n = 1;
  std::vector<std::uint32_t> levels;

  std::uint64_t width() const { return std::uint64_t(1) << m; }
};

// Closed axis-aligned rectangle with exact dyadic corners.
struct Rect {
  Dyadic x_lo, x_hi, y_lo, y_hi;
};

// The closed dyadic interval [(index-1)/2^depth, index/2^depth].
struct DyadicInterval {
  int depth = 0;
  std::int64_t index = 1;

  Dyadic lo() const { return Dyadic(BigInt(index - 1), depth); }
  Dyadic hi() const { return Dyadic(BigInt(index), depth); }
};

inline PixelGraph new_graph(int m, int n, std::vector<std::uint32_t> levels) {
  require(m >= 0 && n >= 1, Errc::invalid_param, "need m >= 0 and n >= 1");
  require(m <= 30 && n <= 30, Errc::resource_cap, "resolution exponent above 2^30");
  const std::uint64_t want = std::uint64_t(1) << m;
  if (levels.size() != want)
    fail(Errc::length_mismatch, "levels has " + std::to_string(levels.size()) + " entries, expected " + std::to_string(want));
  const std::uint64_t rows = std::uint64_t(1) << n;
  for (std::uint32_t l : levels)
    if (l < 1 || l > rows) fail(Errc::level_out_of_range, "level " + std::to_string(l) + " outside 1..2^" + std::to_string(n));
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    const std::int64_t d = std::int64_t(levels[k + 1]) - std::int64_t(levels[k]);
    if (d > 1 || d < -1)
      fail(Errc::disconnected, "columns " + std::to_string(k + 1) + "," + std::to_string(k + 2) + " differ by more than 1");
  }
  return PixelGraph{m, n, std::move(levels)};
}

// Column rectangle k (1-based): [(k-1)/2^m, k/2^m] x [(l_k-1)/2^n, l_k/2^n].
inline Rect column_rect(const PixelGraph& g, std::uint64_t k) {
  const std::uint32_t l = g.levels[k - 1];
  return Rect{Dyadic(BigInt(k - 1), g.m), Dyadic(BigInt(k), g.m), Dyadic(BigInt(l - 1), g.n), Dyadic(BigInt(l), g.n)};
}

inline std::vector<Rect> rectangles(const PixelGraph& g) {
  std::vector<Rect> out;
  out.reserve(g.levels.size());
  for (std::uint64_t k = 1; k <= g.width(); ++k) out.push_back(column_rect(g, k));
  return out;
}

// Smallest closed interval containing the y-section { y : (x, y) in g }.
// Interior x: one row, width 2^-n. Column boundary: hull of the two adjacent
// rows, width <= 2 * 2^-n by connectedness.
inline DyadicSpan value_interval(const PixelGraph& g, const BigRat& x) {
  require(x >= 0 && x <= 1, Errc::invalid_param, "x outside [0,1]");
  const BigRat scaled = x * pow2(g.m);
  const BigInt num = numerator(scaled), den = denominator(scaled);
  std::uint64_t k_lo, k_hi;
  if (den == 1) {
    // x lies on a column boundary j/2^m; take both adjacent columns.
    const std::uint64_t j = static_cast<std::uint64_t>(num);
    k_lo = j == 0 ? 1 : j;
    k_hi = j == g.width() ? g.width() : j + 1;
  } else {
    k_lo = k_hi = static_cast<std::uint64_t>(num / den) + 1;
  }
  std::uint32_t lmin = g.levels[k_lo - 1], lmax = lmin;
  for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
    lmin = std::min(lmin, g.levels[k - 1]);
    lmax = std::max(lmax, g.levels[k - 1]);
  }
  return DyadicSpan{Dyadic(BigInt(lmin - 1), g.n), Dyadic(BigInt(lmax), g.n)};
}

// True iff every rectangle of `fine` is contained in a rectangle of `coarse`.
// Requires the stage shape fine.n == coarse.n + 1, fine.m > coarse.m; child
// column j sits in parent column k = floor(j / 2^(fine.m - coarse.m)) and must
// pick one of the parent's two half-rows.
inline bool is_refinement(const PixelGraph& coarse, const PixelGraph& fine) {
  require(fine.n == coarse.n + 1 && fine.m > coarse.m, Errc::shape_mismatch,
          "refinement requires fine.n = coarse.n + 1 and fine.m > coarse.m");
  const int shift = fine.m - coarse.m;
  for (std::size_t j = 0; j < fine.levels.size(); ++j) {
    const std::uint32_t parent = coarse.levels[j >> shift];
    const std::uint32_t child = fine.levels[j];
    if (child != 2 * parent - 1 && child != 2 * parent) return false;
  }
  return true;
}

}  // namespace pxg
