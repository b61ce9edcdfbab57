#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pixelgraph/cellset.hpp"
#include "pixelgraph/construction.hpp"
#include "pixelgraph/dyadic.hpp"
#include "pixelgraph/errors.hpp"
#include "pixelgraph/rng.hpp"

namespace pxg {

enum class ModelKind { horizontal, cantor_shift, percolation, function_graph };

inline const char* model_name(ModelKind k) {
  switch (k) {
    case ModelKind::horizontal: return "horizontal";
    case ModelKind::cantor_shift: return "cantor-shift";
    case ModelKind::percolation: return "percolation";
    case ModelKind::function_graph: return "function-graph";
  }
  return "?";
}

// Parsed model specification. Grammar: `horizontal:<h>` (h decimal or p/q),
// `cantor-shift`, `percolation:<p>:<dmax>`, `function-graph:<path>` where the
// file holds 2^j + 1 sample heights in [0,1].
struct ModelSpec {
  ModelKind kind = ModelKind::horizontal;
  BigRat h;                     // horizontal height
  double p = 1.0;               // percolation retention probability
  int d_max = 0;                // percolation depth
  std::vector<BigRat> heights;  // function-graph samples at i/2^j
  std::string text;             // original spec string
};

namespace detail {

inline BigRat parse_unit_rational(const std::string& s) {
  require(!s.empty(), Errc::invalid_param, "empty number");
  BigRat v;
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      v = BigRat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } else {
      const auto dot = s.find('.');
      if (dot == std::string::npos) {
        v = BigRat(BigInt(s));
      } else {
        const std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
        BigInt den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        v = BigRat(BigInt(whole.empty() ? "0" : whole) * den + BigInt(frac.empty() ? "0" : frac), den);
      }
    }
  } catch (const std::exception&) {
    fail(Errc::invalid_param, "cannot parse number '" + s + "'");
  }
  return v;
}

}  // namespace detail

inline ModelSpec make_horizontal(BigRat h) {
  require(h >= 0 && h <= 1, Errc::invalid_param, "horizontal height outside [0,1]");
  ModelSpec s;
  s.kind = ModelKind::horizontal;
  s.h = std::move(h);
  s.text = "horizontal";
  return s;
}

inline ModelSpec make_cantor_shift() {
  ModelSpec s;
  s.kind = ModelKind::cantor_shift;
  s.text = "cantor-shift";
  return s;
}

inline ModelSpec make_percolation(double p, int d_max) {
  require(p > 0.0 && p <= 1.0, Errc::invalid_param, "retention probability outside (0,1]");
  require(d_max >= 0 && d_max <= 14, Errc::invalid_param, "percolation depth outside 0..14");
  ModelSpec s;
  s.kind = ModelKind::percolation;
  s.p = p;
  s.d_max = d_max;
  s.text = "percolation";
  return s;
}

inline ModelSpec make_function_graph(std::vector<BigRat> heights) {
  require(heights.size() >= 2, Errc::invalid_param, "need at least 2 sample heights");
  const std::size_t segs = heights.size() - 1;
  require((segs & (segs - 1)) == 0, Errc::invalid_param, "need 2^j + 1 sample heights");
  for (const BigRat& y : heights)
    require(y >= 0 && y <= 1, Errc::invalid_param, "sample height outside [0,1]");
  ModelSpec s;
  s.kind = ModelKind::function_graph;
  s.heights = std::move(heights);
  s.text = "function-graph";
  return s;
}

namespace detail {

inline constexpr int kCantorStageLimit = 96;   // unresolved beyond this counts per the query's safe side
inline constexpr int kCantorSmallStage = 36;   // int64/u128 fast path bound

inline const BigInt& pow3_big(int j) {
  static const std::vector<BigInt> table = [] {
    std::vector<BigInt> t(kCantorStageLimit + 2);
    t[0] = 1;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * 3;
    return t;
  }();
  return table[j];
}

inline std::int64_t pow3_small(int j) {
  static const std::vector<std::int64_t> table = [] {
    std::vector<std::int64_t> t(kCantorSmallStage + 3);
    t[0] = 1;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * 3;
    return t;
  }();
  return table[j];
}

// The random set C/2 + U with U = u/2^65 in [0, 1/2). Stage-j pieces are the
// closed intervals [U + t/(2*3^j), U + (t+1)/(2*3^j)] with ternary index t;
// children of t are 3t and 3t+2. All interval queries compare the exact
// rationals u/2^65 + t/(2*3^j) against dyadics q/2^e by cross-multiplication.
class CantorShiftSet {
 public:
  explicit CantorShiftSet(std::uint64_t u) : u_(u) {}

  // Does S meet the closed dyadic interval [a/2^e, b/2^e]?
  bool meets_closed(std::int64_t a, std::int64_t b, int e) const { return meets_small(0, 0, a, b, e); }

  // Does the open dyadic interval (a/2^e, b/2^e) contain an entire stage
  // interval? Sufficient condition for an uncountable intersection; bounded
  // search, so an under-approximation.
  bool spans_stage_open(std::int64_t a, std::int64_t b, int e) const { return spans_small(0, 0, a, b, e); }

 private:
  // sign of (U + t/(2*3^j)) - q/2^e, valid for j <= kCantorSmallStage+1, e <= 40.
  int cmp_small(int j, std::int64_t t, std::int64_t q, int e) const {
    const unsigned __int128 p3 = static_cast<unsigned __int128>(pow3_small(j));
    const unsigned __int128 lhs =
        static_cast<unsigned __int128>(u_) * p3 + (static_cast<unsigned __int128>(t) << 64);
    const unsigned __int128 rhs = (static_cast<unsigned __int128>(q) << (65 - e)) * p3;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }

  int cmp_big(int j, const BigInt& t, std::int64_t q, int e) const {
    const BigInt lhs = BigInt(u_) * pow3_big(j) + (t << 64);
    const BigInt rhs = (BigInt(q) << (65 - e)) * pow3_big(j);
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }

  bool meets_small(int j, std::int64_t t, std::int64_t a, std::int64_t b, int e) const {
    if (cmp_small(j, t + 1, a, e) < 0 || cmp_small(j, t, b, e) > 0) return false;
    if (cmp_small(j, t, a, e) >= 0 && cmp_small(j, t + 1, b, e) <= 0) return true;
    if (j >= kCantorSmallStage) return meets_big(j + 1, BigInt(t) * 3, a, b, e) || meets_big(j + 1, BigInt(t) * 3 + 2, a, b, e);
    return meets_small(j + 1, 3 * t, a, b, e) || meets_small(j + 1, 3 * t + 2, a, b, e);
  }

  bool meets_big(int j, const BigInt& t, std::int64_t a, std::int64_t b, int e) const {
    if (cmp_big(j, t + 1, a, e) < 0 || cmp_big(j, t, b, e) > 0) return false;
    if (cmp_big(j, t, a, e) >= 0 && cmp_big(j, t + 1, b, e) <= 0) return true;
    if (j >= kCantorStageLimit) return true;  // unresolved straddle: keep the cell (outer cover)
    return meets_big(j + 1, t * 3, a, b, e) || meets_big(j + 1, t * 3 + 2, a, b, e);
  }

  bool spans_small(int j, std::int64_t t, std::int64_t a, std::int64_t b, int e) const {
    if (cmp_small(j, t + 1, a, e) <= 0 || cmp_small(j, t, b, e) >= 0) return false;
    if (cmp_small(j, t, a, e) > 0 && cmp_small(j, t + 1, b, e) < 0) return true;
    if (j >= kCantorSmallStage) return spans_big(j + 1, BigInt(t) * 3, a, b, e) || spans_big(j + 1, BigInt(t) * 3 + 2, a, b, e);
    return spans_small(j + 1, 3 * t, a, b, e) || spans_small(j + 1, 3 * t + 2, a, b, e);
  }

  bool spans_big(int j, const BigInt& t, std::int64_t a, std::int64_t b, int e) const {
    if (cmp_big(j, t + 1, a, e) <= 0 || cmp_big(j, t, b, e) >= 0) return false;
    if (cmp_big(j, t, a, e) > 0 && cmp_big(j, t + 1, b, e) < 0) return true;
    if (j >= kCantorStageLimit) return false;  // unresolved: do not claim thickness
    return spans_big(j + 1, t * 3, a, b, e) || spans_big(j + 1, t * 3 + 2, a, b, e);
  }

  std::uint64_t u_;
};

// Rows (1-based, height 2^-d) whose closed interval contains y; one row for
// interior y, two when y sits on a shared row boundary.
inline std::vector<std::int64_t> rows_containing(const BigRat& y, int d) {
  const std::int64_t nrows = std::int64_t(1) << d;
  const BigRat scaled = y * pow2(d);
  const BigInt num = numerator(scaled), den = denominator(scaled);
  std::vector<std::int64_t> rows;
  if (den == 1) {
    const std::int64_t j = static_cast<std::int64_t>(num);
    if (j >= 1) rows.push_back(j);
    if (j + 1 <= nrows) rows.push_back(j + 1);
  } else {
    rows.push_back(static_cast<std::int64_t>(num / den) + 1);
  }
  return rows;
}

// Piecewise-linear interpolant through heights[i] at x = i/2^J. Segments are
// x-monotone, so a closed cell meets the graph iff some segment's y-range over
// the clipped x-overlap meets the cell's y-interval.
class PiecewiseLinearGraph {
 public:
  explicit PiecewiseLinearGraph(const std::vector<BigRat>& heights) : hs_(heights) {
    std::size_t segs = heights.size() - 1;
    J_ = 0;
    while ((std::size_t(1) << J_) < segs) ++J_;
  }

  bool meets_cell(const BigRat& x_lo, const BigRat& x_hi, const BigRat& y_lo, const BigRat& y_hi) const {
    const std::int64_t segs = std::int64_t(1) << J_;
    const BigRat sa = x_lo * segs, sb = x_hi * segs;
    std::int64_t i_lo = denominator(sa) == 1 ? static_cast<std::int64_t>(numerator(sa)) - 1
                                             : static_cast<std::int64_t>(numerator(sa) / denominator(sa));
    std::int64_t i_hi = denominator(sb) == 1 ? static_cast<std::int64_t>(numerator(sb))
                                             : static_cast<std::int64_t>(numerator(sb) / denominator(sb));
    i_lo = std::max<std::int64_t>(0, i_lo);
    i_hi = std::min(segs - 1, i_hi);
    for (std::int64_t i = i_lo; i <= i_hi; ++i) {
      const BigRat x0(i, segs), x1(i + 1, segs);
      const BigRat xa = std::max(x_lo, x0), xb = std::min(x_hi, x1);
      if (xa > xb) continue;
      const BigRat slope = (hs_[i + 1] - hs_[i]) * segs;
      const BigRat ya = hs_[i] + slope * (xa - x0);
      const BigRat yb = hs_[i] + slope * (xb - x0);
      const BigRat y_min = std::min(ya, yb), y_max = std::max(ya, yb);
      if (y_min <= y_hi && y_lo <= y_max) return true;
    }
    return false;
  }

  BigRat value_at(const BigRat& x) const {
    const std::int64_t segs = std::int64_t(1) << J_;
    const BigRat s = x * segs;
    std::int64_t i = denominator(s) == 1 ? static_cast<std::int64_t>(numerator(s))
                                         : static_cast<std::int64_t>(numerator(s) / denominator(s));
    i = std::min(std::max<std::int64_t>(0, i), segs - 1);
    return hs_[i] + (hs_[i + 1] - hs_[i]) * segs * (x - BigRat(i, segs));
  }

 private:
  std::vector<BigRat> hs_;
  int J_;
};

}  // namespace detail

// One realization of a random compact set; immutable once sampled, all
// queries are pure.
struct SetSample {
  ModelSpec spec;
  std::uint64_t seed = 0;
  std::uint64_t shift_bits = 0;                // cantor-shift: U = shift_bits / 2^65
  std::uint64_t height_bits = 0;               // cantor-shift: V = height_bits / 2^64
  std::vector<std::vector<Cell>> retained;     // percolation: kept cells per depth 0..d_max

  BigRat shift_u() const { return BigRat(BigInt(shift_bits), pow2(65)); }
  BigRat height_v() const { return BigRat(BigInt(height_bits), pow2(64)); }
};

inline constexpr std::uint64_t kDefaultRejectionBudget = 1'000'000;

// Draw one realization. Deterministic in the stream key; percolation retries
// (rejection) until depth-d_max survival or the budget runs out.
inline SetSample sample(const ModelSpec& spec, const RngStream& rng,
                        std::uint64_t rejection_budget = kDefaultRejectionBudget, const Caps& caps = Caps{}) {
  SetSample s;
  s.spec = spec;
  s.seed = rng.key();
  switch (spec.kind) {
    case ModelKind::horizontal:
    case ModelKind::function_graph:
      break;
    case ModelKind::cantor_shift:
      s.shift_bits = rng.word(0);
      s.height_bits = rng.word(1);
      break;
    case ModelKind::percolation: {
      for (std::uint64_t attempt = 0; attempt < rejection_budget; ++attempt) {
        const RngStream a = rng.fork(attempt);
        std::vector<std::vector<Cell>> levels(spec.d_max + 1);
        levels[0] = {Cell{1, 1}};
        for (int d = 1; d <= spec.d_max && !levels[d - 1].empty(); ++d) {
          const RngStream layer = a.fork(d);
          for (const Cell& parent : levels[d - 1])
            for (std::int64_t dc = 0; dc < 2; ++dc)
              for (std::int64_t dr = 0; dr < 2; ++dr) {
                const Cell child{2 * parent.col - 1 + dc, 2 * parent.row - 1 + dr};
                const std::uint64_t ctr = (static_cast<std::uint64_t>(child.col) << 32) |
                                          static_cast<std::uint64_t>(child.row);
                if (layer.coin(spec.p, ctr)) levels[d].push_back(child);
              }
          require(levels[d].size() <= caps.max_items, Errc::resource_cap, "retained cells exceed the configured cap");
        }
        if (!levels[spec.d_max].empty()) {
          for (auto& lv : levels) std::sort(lv.begin(), lv.end());
          s.retained = std::move(levels);
          return s;
        }
      }
      fail(Errc::rejection_budget_exceeded,
           "no nonempty depth-" + std::to_string(spec.d_max) + " realization within the rejection budget");
    }
  }
  return s;
}

namespace detail {

inline void collect_cantor_columns(const CantorShiftSet& set, int target, int dd, std::int64_t col,
                                   std::vector<std::int64_t>& out) {
  if (!set.meets_closed(col - 1, col, dd)) return;
  if (dd == target) {
    out.push_back(col);
    return;
  }
  collect_cantor_columns(set, target, dd + 1, 2 * col - 1, out);
  collect_cantor_columns(set, target, dd + 1, 2 * col, out);
}

inline void collect_plg_cells(const PiecewiseLinearGraph& plg, int target, int dd, std::int64_t col,
                              std::int64_t row, std::vector<Cell>& out) {
  const BigInt den = pow2(dd);
  if (!plg.meets_cell(BigRat(BigInt(col - 1), den), BigRat(BigInt(col), den), BigRat(BigInt(row - 1), den),
                      BigRat(BigInt(row), den)))
    return;
  if (dd == target) {
    out.push_back(Cell{col, row});
    return;
  }
  for (std::int64_t dc = 0; dc < 2; ++dc)
    for (std::int64_t dr = 0; dr < 2; ++dr)
      collect_plg_cells(plg, target, dd + 1, 2 * col - 1 + dc, 2 * row - 1 + dr, out);
}

}  // namespace detail

// Outer approximation of K at depth d: exactly the closed cells meeting K for
// the analytic models, the retained cells for percolation.
inline CellSet cover(const SetSample& s, int d, const Caps& caps = Caps{}) {
  require(d >= 0, Errc::invalid_param, "negative depth");
  if (s.spec.kind == ModelKind::percolation)
    require(d <= s.spec.d_max, Errc::depth_exceeded, "cover depth exceeds percolation d_max");
  else
    require(d <= caps.max_exponent() && d <= 30, Errc::depth_exceeded, "cover depth exceeds the configured cap");

  std::vector<Cell> cells;
  switch (s.spec.kind) {
    case ModelKind::horizontal: {
      const auto rows = detail::rows_containing(s.spec.h, d);
      for (std::int64_t col = 1; col <= (std::int64_t(1) << d); ++col)
        for (std::int64_t r : rows) cells.push_back(Cell{col, r});
      break;
    }
    case ModelKind::cantor_shift: {
      const detail::CantorShiftSet set(s.shift_bits);
      std::vector<std::int64_t> cols;
      detail::collect_cantor_columns(set, d, 0, 1, cols);
      const auto rows = detail::rows_containing(s.height_v(), d);
      for (std::int64_t col : cols)
        for (std::int64_t r : rows) cells.push_back(Cell{col, r});
      break;
    }
    case ModelKind::percolation:
      cells = s.retained[d];
      break;
    case ModelKind::function_graph: {
      const detail::PiecewiseLinearGraph plg(s.spec.heights);
      detail::collect_plg_cells(plg, d, 0, 1, 1, cells);
      break;
    }
  }
  require(cells.size() <= caps.max_items, Errc::resource_cap, "cover size exceeds the configured cap");
  return make_cellset(d, std::move(cells));
}

// Columns whose open dyadic interval meets the projection in an
// uncountable-like way, per each model's documented proxy:
//   horizontal, function-graph: full projection, every column;
//   cantor-shift: the open interval contains an entire ternary stage interval
//     (sufficient condition, under-approximation);
//   percolation: the column contains a retained depth-d_max cell
//     (survival-to-depth proxy).
inline std::vector<std::int64_t> thick_columns(const SetSample& s, int m, const Caps& caps = Caps{}) {
  require(m >= 0, Errc::invalid_param, "negative exponent");
  if (s.spec.kind == ModelKind::percolation)
    require(m <= s.spec.d_max, Errc::depth_exceeded, "scale exceeds percolation d_max");
  else
    require(m <= caps.max_exponent() && m <= 30, Errc::depth_exceeded, "scale exceeds the configured cap");

  const std::int64_t ncols = std::int64_t(1) << m;
  std::vector<std::int64_t> out;
  switch (s.spec.kind) {
    case ModelKind::horizontal:
    case ModelKind::function_graph:
      for (std::int64_t k = 1; k <= ncols; ++k) out.push_back(k);
      break;
    case ModelKind::cantor_shift: {
      const detail::CantorShiftSet set(s.shift_bits);
      for (std::int64_t k = 1; k <= ncols; ++k)
        if (set.spans_stage_open(k - 1, k, m)) out.push_back(k);
      break;
    }
    case ModelKind::percolation: {
      const int shift = s.spec.d_max - m;
      std::int64_t last = 0;
      for (const Cell& c : s.retained[s.spec.d_max]) {
        const std::int64_t k = ((c.col - 1) >> shift) + 1;
        if (k != last) {
          out.push_back(k);
          last = k;
        }
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      break;
    }
  }
  return out;
}

// Deterministic thick profiles for the schedule planner. `horizontal` has a
// full projection (every column thick); `cantor` uses the unshifted
// realization U = 0, memoized per scale.
inline ThickProfileFn horizontal_profile() {
  return [](int m) -> std::optional<std::int64_t> {
    if (m < 0 || m > 62) return std::nullopt;
    return std::int64_t(1) << m;
  };
}

inline ThickProfileFn cantor_profile(const Caps& caps = Caps{}) {
  auto cache = std::make_shared<std::map<int, std::int64_t>>();
  return [cache, caps](int m) -> std::optional<std::int64_t> {
    if (m < 0 || m > caps.max_exponent()) return std::nullopt;
    const auto it = cache->find(m);
    if (it != cache->end()) return it->second;
    const detail::CantorShiftSet set(0);
    std::int64_t count = 0;
    for (std::int64_t k = 1; k <= (std::int64_t(1) << m); ++k)
      if (set.spans_stage_open(k - 1, k, m)) ++count;
    (*cache)[m] = count;
    return count;
  };
}

}  // namespace pxg
