#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "pixelgraph/cellset.hpp"
#include "pixelgraph/construction.hpp"
#include "pixelgraph/models.hpp"
#include "pixelgraph/pixel_graph.hpp"

namespace pxg {

// Standard Wilson score interval; well behaved at p near 0 and 1.
inline std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  require(trials >= 1 && hits <= trials, Errc::invalid_param, "need 0 <= hits <= trials, trials >= 1");
  require(z > 0.0, Errc::invalid_param, "z must be positive");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace detail {

// Per column k of an (m1, 1) graph: does row l in {1, 2} meet the cell set?
inline std::vector<std::array<bool, 2>> column_row_hits(const CellSet& cells, int m1) {
  std::vector<std::array<bool, 2>> hit(std::size_t(1) << m1, {false, false});
  for (const Cell& cell : cells.cells) {
    const bool r1 = rows_overlap(1, 1, cell.row, cells.depth);
    const bool r2 = rows_overlap(2, 1, cell.row, cells.depth);
    if (!r1 && !r2) continue;
    const auto [k_lo, k_hi] = column_range(cell.col, cells.depth, m1);
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
      hit[k - 1][0] = hit[k - 1][0] || r1;
      hit[k - 1][1] = hit[k - 1][1] || r2;
    }
  }
  return hit;
}

// Exhaustive count of hitting (m1, 1) graphs over an optionally end-pinned
// family; level bit b means row b + 1.
inline BigInt exact_hit_count(const CellSet& cells, int m1, bool ends_fixed) {
  const auto hit = column_row_hits(cells, m1);
  const std::uint64_t w = std::uint64_t(1) << m1;
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << w); ++mask) {
    if (ends_fixed && ((mask & 1) != 0 || (mask >> (w - 1)) != 0)) continue;
    for (std::uint64_t k = 0; k < w; ++k)
      if (hit[k][(mask >> k) & 1]) {
        ++count;
        break;
      }
  }
  return BigInt(count);
}

}  // namespace detail

// P(random (m1, 1) graph meets the cells), exact over all 2^(2^m1) graphs.
inline BigRat exact_hit_probability(const CellSet& cells, int m1, const Caps& caps = Caps{}) {
  require(m1 >= 0, Errc::invalid_param, "negative exponent");
  require(m1 <= 5 && (BigInt(1) << (std::int64_t(1) << m1)) <= caps.max_items, Errc::resource_cap,
          "2^(2^m1) exceeds the enumeration cap");
  return BigRat(detail::exact_hit_count(cells, m1, false), BigInt(1) << (std::int64_t(1) << m1));
}

struct Lemma23Report {
  int m1 = 1;
  std::int64_t i_m1 = 0;
  bool ends_fixed = false;
  BigRat bound;    // 1 - 2^-i, or 1 - 2^-(i-2) with ends fixed
  BigRat exact_p;  // exact hit probability over the matching graph family
  bool satisfied = false;
};

// Evaluate the thick-column lower bound against the exact hit probability of
// the outer cover. With ends_fixed, l_1 and l_{2^m1} are pinned to row 1 (the
// construction's lower-child convention) and the relaxed bound applies. The
// cover over-approximates K, so exact_p can only overstate hitting; the check
// is sharp for models whose cover tracks K tightly.
inline Lemma23Report check_lemma23(const SetSample& s, int m1, int cover_depth, bool ends_fixed,
                                   const Caps& caps = Caps{}) {
  require(m1 >= 0, Errc::invalid_param, "negative exponent");
  require(m1 <= 5 && (BigInt(1) << (std::int64_t(1) << m1)) <= caps.max_items, Errc::resource_cap,
          "2^(2^m1) exceeds the enumeration cap");
  Lemma23Report rep;
  rep.m1 = m1;
  rep.ends_fixed = ends_fixed;
  rep.i_m1 = static_cast<std::int64_t>(thick_columns(s, m1, caps).size());
  const CellSet cells = cover(s, cover_depth, caps);
  const std::int64_t family_bits = (std::int64_t(1) << m1) - (ends_fixed ? 2 : 0);
  rep.exact_p = BigRat(detail::exact_hit_count(cells, m1, ends_fixed), BigInt(1) << std::max<std::int64_t>(family_bits, 0));
  const std::int64_t e = ends_fixed ? rep.i_m1 - 2 : rep.i_m1;
  rep.bound = e >= 0 ? BigRat(1) - BigRat(1, pow2(static_cast<int>(e))) : BigRat(1) - BigRat(pow2(static_cast<int>(-e)), 1);
  rep.satisfied = rep.exact_p >= rep.bound;
  return rep;
}

// Monte Carlo hitting estimate across the nested stages.
struct EstimateResult {
  std::uint64_t trials = 0;
  double epsilon = 0.0;
  int depth_used = 0;
  double z = 2.576;
  std::vector<int> stage_ms;  // stage i has m = stage_ms[i], n = i + 1
  std::vector<std::uint64_t> hits_per_stage;
  std::vector<BigRat> p_hat_per_stage;
  std::vector<std::pair<double, double>> ci_per_stage;
};

// trials independent pairs (K_t, nested sequence_t); the two objects of one
// trial come from separately tagged substreams of fork(seed, trial), so the
// result is a pure function of the inputs regardless of worker count.
inline EstimateResult estimate_hits(const ModelSpec& model, const Schedule& schedule, std::size_t stages,
                                    std::uint64_t trials, int cover_depth, std::uint64_t seed,
                                    double epsilon = 0.0, double z = 2.576, unsigned workers = 1,
                                    const Caps& caps = Caps{}) {
  require(trials >= 100, Errc::trials_too_small, "need at least 100 trials");
  require(stages >= 1 && stages <= schedule.stages(), Errc::invalid_param, "stages outside 1..len(schedule)");
  require(cover_depth >= static_cast<int>(stages), Errc::invalid_param, "cover depth must be >= stage count");
  if (workers == 0) workers = 1;

  const RngStream root(seed);
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(stages, 0));
  auto run_range = [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
    auto& hits = partial[w];
    for (std::uint64_t t = lo; t < hi; ++t) {
      const RngStream trial = root.fork(t);
      const SetSample k = sample(model, trial.fork(kRoleSet), kDefaultRejectionBudget, caps);
      const CellSet cells = cover(k, cover_depth, caps);
      const NestedSequence seq = sample_nested(schedule, stages, trial.fork(kRoleGraph), caps);
      for (std::size_t i = 0; i < stages; ++i) {
        if (!intersects(cells, seq.graphs[i])) break;  // nested events: a miss stays a miss
        ++hits[i];
      }
    }
  };

  if (workers == 1) {
    run_range(0, 0, trials);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = std::min<std::uint64_t>(trials, w * chunk);
      const std::uint64_t hi = std::min<std::uint64_t>(trials, lo + chunk);
      pool.emplace_back(run_range, w, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  EstimateResult res;
  res.trials = trials;
  res.epsilon = epsilon;
  res.depth_used = cover_depth;
  res.z = z;
  res.stage_ms.assign(schedule.ms.begin(), schedule.ms.begin() + stages);
  res.hits_per_stage.assign(stages, 0);
  for (unsigned w = 0; w < workers; ++w)
    for (std::size_t i = 0; i < stages; ++i) res.hits_per_stage[i] += partial[w][i];
  for (std::size_t i = 0; i < stages; ++i) {
    res.p_hat_per_stage.push_back(BigRat(BigInt(res.hits_per_stage[i]), BigInt(trials)));
    res.ci_per_stage.push_back(wilson_interval(res.hits_per_stage[i], trials, z));
  }
  return res;
}

// Finite surrogate of the distance collapse: whenever the cover still meets
// G_n, some meeting (cell, column) pair must place the cell's y-interval
// within 2^-n + 2^-cover_depth of the last stage's section over that column's
// center.
inline bool verify_distance_bound(const SetSample& s, const NestedSequence& seq, int cover_depth,
                                  const Caps& caps = Caps{}) {
  require(cover_depth >= static_cast<int>(seq.graphs.size()), Errc::invalid_param,
          "cover depth must be >= stage count");
  const CellSet cells = cover(s, cover_depth, caps);
  const PixelGraph& last = seq.graphs.back();
  for (std::size_t i = 0; i < seq.graphs.size(); ++i) {
    const PixelGraph& g = seq.graphs[i];
    if (!intersects(cells, g)) continue;
    const int n = static_cast<int>(i) + 1;
    const BigRat slack = BigRat(1, pow2(n)) + BigRat(1, pow2(cover_depth));
    bool witness = false;
    for (const Cell& cell : cells.cells) {
      const auto [k_lo, k_hi] = detail::column_range(cell.col, cells.depth, g.m);
      for (std::int64_t k = k_lo; k <= k_hi && !witness; ++k) {
        if (!detail::rows_overlap(g.levels[k - 1], g.n, cell.row, cells.depth)) continue;
        const BigRat x_center(BigInt(2 * k - 1), pow2(g.m + 1));
        const DyadicSpan section = value_interval(last, x_center);
        const DyadicSpan cell_y{Dyadic(BigInt(cell.row - 1), cells.depth), Dyadic(BigInt(cell.row), cells.depth)};
        if (gap(cell_y, section) <= slack) witness = true;
      }
      if (witness) break;
    }
    if (!witness) return false;
  }
  return true;
}

}  // namespace pxg
