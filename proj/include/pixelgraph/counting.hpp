#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pixelgraph/errors.hpp"
#include "pixelgraph/pixel_graph.hpp"

namespace pxg {
namespace detail {

// count = 1^T * T^(2^m - 1) * 1 by repeated tridiagonal application.
inline BigInt count_connected_iterate(int m, int n) {
  const std::uint64_t rows = std::uint64_t(1) << n;
  std::vector<BigInt> v(rows, BigInt(1)), w(rows);
  const std::uint64_t steps = (std::uint64_t(1) << m) - 1;
  for (std::uint64_t s = 0; s < steps; ++s) {
    for (std::uint64_t i = 0; i < rows; ++i) {
      w[i] = v[i];
      if (i > 0) w[i] += v[i - 1];
      if (i + 1 < rows) w[i] += v[i + 1];
    }
    v.swap(w);
  }
  BigInt total = 0;
  for (const BigInt& x : v) total += x;
  return total;
}

// Same product via binary powering of the dense transfer matrix; preferable
// when 2^m is huge but 2^n is small.
inline BigInt count_connected_matrix_power(int m, int n) {
  const std::size_t rows = std::size_t(1) << n;
  using Mat = std::vector<std::vector<BigInt>>;
  auto mul = [rows](const Mat& a, const Mat& b) {
    Mat c(rows, std::vector<BigInt>(rows, BigInt(0)));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < rows; ++k) {
        if (a[i][k] == 0) continue;
        for (std::size_t j = 0; j < rows; ++j) c[i][j] += a[i][k] * b[k][j];
      }
    return c;
  };
  Mat acc(rows, std::vector<BigInt>(rows, BigInt(0)));
  for (std::size_t i = 0; i < rows; ++i) acc[i][i] = 1;
  Mat base(rows, std::vector<BigInt>(rows, BigInt(0)));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j)
      if ((i > j ? i - j : j - i) <= 1) base[i][j] = 1;
  std::uint64_t e = (std::uint64_t(1) << m) - 1;
  while (e > 0) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  BigInt total = 0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j) total += acc[i][j];
  return total;
}

}  // namespace detail

// Exact number of connected level assignments at (m, n). The transfer matrix
// T is the 2^n x 2^n tridiagonal 0/1 matrix with T[a][b] = 1 iff |a - b| <= 1.
inline BigInt count_connected(int m, int n, const Caps& caps = Caps{}) {
  require(m >= 0 && n >= 1, Errc::invalid_param, "need m >= 0 and n >= 1");
  const int cap_e = caps.max_exponent();
  require(m <= cap_e && n <= cap_e, Errc::resource_cap, "2^m or 2^n exceeds the configured cap");
  if (m > 12 && n <= 6) return detail::count_connected_matrix_power(m, n);
  return detail::count_connected_iterate(m, n);
}

// Yields every connected graph at (m, n) exactly once, in lexicographic level
// order. Refuses to start when the total count exceeds the cap.
class ConnectedEnumerator {
 public:
  ConnectedEnumerator(int m, int n, const Caps& caps = Caps{}) : m_(m), n_(n) {
    require(count_connected(m, n, caps) <= caps.max_items, Errc::resource_cap,
            "connected count exceeds the enumeration cap");
    levels_.assign(std::size_t(1) << m, 1);
  }

  std::optional<PixelGraph> next() {
    if (done_) return std::nullopt;
    PixelGraph out{m_, n_, levels_};
    advance();
    return out;
  }

 private:
  void advance() {
    const std::uint32_t rows = std::uint32_t(1) << n_;
    for (std::size_t pos = levels_.size(); pos-- > 0;) {
      const std::uint32_t ub = pos == 0 ? rows : std::min(rows, levels_[pos - 1] + 1);
      const std::uint32_t lb = pos == 0 ? 1 : (levels_[pos - 1] > 1 ? levels_[pos - 1] - 1 : 1);
      std::uint32_t cand = std::max(levels_[pos] + 1, lb);
      if (cand <= ub) {
        levels_[pos] = cand;
        for (std::size_t j = pos + 1; j < levels_.size(); ++j)
          levels_[j] = levels_[j - 1] > 1 ? levels_[j - 1] - 1 : 1;
        return;
      }
    }
    done_ = true;
  }

  int m_, n_;
  std::vector<std::uint32_t> levels_;
  bool done_ = false;
};

template <typename Fn>
void for_each_connected(int m, int n, Fn&& fn, const Caps& caps = Caps{}) {
  ConnectedEnumerator e(m, n, caps);
  while (auto g = e.next()) fn(*g);
}

}  // namespace pxg
