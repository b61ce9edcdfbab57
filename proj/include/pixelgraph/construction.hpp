#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "pixelgraph/counting.hpp"
#include "pixelgraph/errors.hpp"
#include "pixelgraph/pixel_graph.hpp"
#include "pixelgraph/rng.hpp"

namespace pxg {

// Strictly increasing x-resolution exponents m_1 < m_2 < ...; stage n uses
// ms[n-1] together with y-exponent n.
struct Schedule {
  std::vector<int> ms;

  std::size_t stages() const { return ms.size(); }
};

inline Schedule make_schedule(std::vector<int> ms) {
  require(!ms.empty(), Errc::invalid_param, "schedule must not be empty");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    require(ms[i] >= 1, Errc::invalid_param, "schedule exponents must be positive");
    if (i > 0) require(ms[i] > ms[i - 1], Errc::invalid_param, "schedule must be strictly increasing");
  }
  return Schedule{std::move(ms)};
}

// graphs[i] has (m = schedule.ms[i], n = i + 1), each refining the previous.
struct NestedSequence {
  std::uint64_t seed = 0;
  Schedule schedule;
  std::vector<PixelGraph> graphs;
};

// Uniform over all 2^(2^m1) graphs at (m1, 1): each level an independent fair
// choice of row 1 or 2.
inline PixelGraph sample_initial(int m1, const RngStream& rng) {
  require(m1 >= 1, Errc::invalid_param, "need m1 >= 1");
  require(m1 <= 30, Errc::resource_cap, "m1 above 2^30 columns");
  std::vector<std::uint32_t> levels(std::size_t(1) << m1);
  for (std::size_t k = 0; k < levels.size(); ++k) levels[k] = 1 + rng.bit(k);
  return PixelGraph{m1, 1, std::move(levels)};
}

// One refinement step: parent column k becomes a block of 2^(m_next - parent.m)
// child columns, each choosing one of the parent row's two half-rows
// (lower child 2*l_k - 1, upper child 2*l_k). Fixed bits keep connectedness:
//   - at the internal boundary of blocks k, k+1: if l_{k+1} = l_k + 1 the
//     touching children are (upper, lower); if l_{k+1} = l_k - 1, (lower,
//     upper); if equal, both lower;
//   - the global leftmost and rightmost children are lower.
// All remaining bits are fair coins drawn per child column index, so the
// output is a pure function of (rng key, column).
inline PixelGraph refine(const PixelGraph& parent, int m_next, const RngStream& rng) {
  require(m_next > parent.m, Errc::shape_mismatch, "m_next must exceed parent.m");
  require(m_next <= 30 && parent.n + 1 <= 30, Errc::resource_cap, "refinement beyond 2^30 cells");
  const int shift = m_next - parent.m;
  const std::uint64_t s = std::uint64_t(1) << shift;
  const std::uint64_t blocks = parent.width();
  std::vector<std::uint32_t> child(std::size_t(1) << m_next);

  for (std::uint64_t k = 0; k < blocks; ++k) {
    const std::uint32_t lower = 2 * parent.levels[k] - 1;
    for (std::uint64_t j = 0; j < s; ++j) {
      const std::uint64_t col = (k << shift) | j;
      child[col] = lower + rng.bit(col);
    }
  }
  child.front() = 2 * parent.levels.front() - 1;
  child.back() = 2 * parent.levels.back() - 1;
  for (std::uint64_t k = 0; k + 1 < blocks; ++k) {
    const std::uint32_t l = parent.levels[k], r = parent.levels[k + 1];
    const std::uint64_t left_end = (k << shift) | (s - 1);
    const std::uint64_t right_begin = (k + 1) << shift;
    if (r == l + 1) {
      child[left_end] = 2 * l;
      child[right_begin] = 2 * r - 1;
    } else if (r + 1 == l) {
      child[left_end] = 2 * l - 1;
      child[right_begin] = 2 * r;
    } else {
      child[left_end] = 2 * l - 1;
      child[right_begin] = 2 * r - 1;
    }
  }
  return PixelGraph{m_next, parent.n + 1, std::move(child)};
}

// Number of distinct refine outputs: 2 fixed bits per block leave
// 2^m_next - 2^(parent.m + 1) free coins, independent of the parent's levels.
inline BigInt count_refinements(const PixelGraph& parent, int m_next, const Caps& caps = Caps{}) {
  require(m_next > parent.m, Errc::shape_mismatch, "m_next must exceed parent.m");
  require(m_next <= caps.max_exponent(), Errc::resource_cap, "2^m_next exceeds the configured cap");
  const std::int64_t e = (std::int64_t(1) << m_next) - (std::int64_t(1) << (parent.m + 1));
  return BigInt(1) << e;
}

// Chain sample_initial and refine along the schedule. Stage i + 1 draws from
// the substream fork(i + 1), so stages are independent of evaluation order.
inline NestedSequence sample_nested(const Schedule& schedule, std::size_t stages, const RngStream& rng,
                                    const Caps& caps = Caps{}) {
  require(stages >= 1 && stages <= schedule.stages(), Errc::invalid_param, "stages outside 1..len(schedule)");
  require(schedule.ms[stages - 1] <= caps.max_exponent(), Errc::resource_cap, "requested width exceeds the configured cap");
  NestedSequence out;
  out.seed = rng.key();
  out.schedule.ms.assign(schedule.ms.begin(), schedule.ms.begin() + stages);
  out.graphs.reserve(stages);
  out.graphs.push_back(sample_initial(schedule.ms[0], rng.fork(1)));
  for (std::size_t i = 1; i < stages; ++i)
    out.graphs.push_back(refine(out.graphs.back(), schedule.ms[i], rng.fork(i + 1)));
  return out;
}

// Thick-column profile m -> i(m); nullopt marks the end of a finite table.
using ThickProfileFn = std::function<std::optional<std::int64_t>(int)>;

struct ThickProfile {
  std::map<int, std::int64_t> counts;

  ThickProfileFn fn() const {
    return [counts = counts](int m) -> std::optional<std::int64_t> {
      auto it = counts.find(m);
      if (it == counts.end()) return std::nullopt;
      return it->second;
    };
  }
};

namespace detail {

// Exact test 2^e <= x for double x in (0, 1).
inline bool pow2_leq(std::int64_t e, double x) {
  if (e >= 0) return double(1) <= x;
  if (e < -1074) return x > 0;
  return std::ldexp(1.0, static_cast<int>(e)) <= x;
}

}  // namespace detail

// Pick m_1 < ... < m_stages from the failure budget: m_1 is the least m with
// 2^-(i(m)-2) <= eps/2, and m_{j+1} the least m > m_j with
// 2^-(i(m - m_j)-2) <= eps/2^(j+2), rescaling the profile inside blocks.
inline Schedule plan_schedule(const ThickProfileFn& profile, double epsilon, std::size_t stages,
                              const Caps& caps = Caps{}) {
  require(epsilon > 0.0 && epsilon < 1.0, Errc::invalid_param, "epsilon must be in (0,1)");
  require(stages >= 1, Errc::invalid_param, "need at least one stage");
  const int cap_m = caps.max_exponent();
  Schedule out;
  int m_prev = 0;
  std::int64_t last_count = 0;
  for (std::size_t j = 1; j <= stages; ++j) {
    const std::int64_t budget_exp = j == 1 ? 1 : static_cast<std::int64_t>(j) + 1;  // eps / 2^budget_exp
    bool found = false;
    last_count = 0;
    for (int m = m_prev + 1; m <= cap_m; ++m) {
      const auto count = profile(m - m_prev);
      if (!count) break;
      require(*count >= last_count, Errc::invalid_param, "thick profile must be nondecreasing");
      last_count = *count;
      // 2^-(i-2) <= eps/2^b  <=>  2^(b - i + 2) <= eps
      if (detail::pow2_leq(budget_exp - *count + 2, epsilon)) {
        out.ms.push_back(m);
        m_prev = m;
        found = true;
        break;
      }
    }
    if (!found)
      fail(Errc::profile_exhausted,
           "no exponent within cap meets the stage-" + std::to_string(j) + " failure budget");
  }
  return out;
}

}  // namespace pxg
