#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "pixelgraph/errors.hpp"
#include "pixelgraph/pixel_graph.hpp"

namespace pxg {

struct Cell {
  std::int64_t col = 1;
  std::int64_t row = 1;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Finite union of closed dyadic cells [(col-1)/2^d, col/2^d] x
// [(row-1)/2^d, row/2^d]; cells kept sorted and unique.
struct CellSet {
  int depth = 0;
  std::vector<Cell> cells;
};

inline CellSet make_cellset(int depth, std::vector<Cell> cells) {
  require(depth >= 0 && depth <= 30, Errc::invalid_param, "cell depth outside 0..30");
  const std::int64_t side = std::int64_t(1) << depth;
  for (const Cell& c : cells)
    require(c.col >= 1 && c.col <= side && c.row >= 1 && c.row <= side, Errc::invalid_param,
            "cell index outside 1..2^depth");
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return CellSet{depth, std::move(cells)};
}

namespace detail {

// Columns k (1-based, width 2^-m) whose closed interval meets
// [(col-1)/2^d, col/2^d]; touching counts. Exact shifted-integer bounds.
inline std::pair<std::int64_t, std::int64_t> column_range(std::int64_t col, int d, int m) {
  std::int64_t k_lo, k_hi;
  if (m >= d) {
    k_lo = (col - 1) << (m - d);
    k_hi = (col << (m - d)) + 1;
  } else {
    const std::int64_t q = std::int64_t(1) << (d - m);
    k_lo = (col - 1 + q - 1) / q;
    k_hi = col / q + 1;
  }
  return {std::max<std::int64_t>(1, k_lo), std::min(std::int64_t(1) << m, k_hi)};
}

// Closed overlap of row `level` (height 2^-n) with cell row `row` (height 2^-d).
inline bool rows_overlap(std::int64_t level, int n, std::int64_t row, int d) {
  return ((level - 1) << d) <= (row << n) && ((row - 1) << n) <= (level << d);
}

}  // namespace detail

// True iff some closed cell meets some closed column rectangle of g; exact
// dyadic arithmetic, corner and edge touching count.
inline bool intersects(const CellSet& c, const PixelGraph& g) {
  for (const Cell& cell : c.cells) {
    const auto [k_lo, k_hi] = detail::column_range(cell.col, c.depth, g.m);
    for (std::int64_t k = k_lo; k <= k_hi; ++k)
      if (detail::rows_overlap(g.levels[k - 1], g.n, cell.row, c.depth)) return true;
  }
  return false;
}

}  // namespace pxg
