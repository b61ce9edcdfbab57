#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "pixelgraph/errors.hpp"

namespace pxg {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt pow2(int e) { return BigInt(1) << e; }

// num / 2^exp, exp >= 0. The exact coordinate type for all lattice geometry;
// core predicates never round through floating point.
struct Dyadic {
  BigInt num;
  int exp = 0;

  Dyadic() = default;
  Dyadic(BigInt n, int e) : num(std::move(n)), exp(e) { require(e >= 0, Errc::invalid_param, "dyadic exponent must be >= 0"); }

  BigRat to_rational() const { return BigRat(num, pow2(exp)); }
  double to_double() const { return static_cast<double>(to_rational()); }
};

inline Dyadic dyadic(long long num, int exp) { return Dyadic(BigInt(num), exp); }

// Three-way compare after aligning exponents.
inline int cmp(const Dyadic& a, const Dyadic& b) {
  BigInt lhs = a.num, rhs = b.num;
  if (a.exp < b.exp) lhs <<= (b.exp - a.exp);
  if (b.exp < a.exp) rhs <<= (a.exp - b.exp);
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

inline bool operator<(const Dyadic& a, const Dyadic& b) { return cmp(a, b) < 0; }
inline bool operator<=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) <= 0; }
inline bool operator>(const Dyadic& a, const Dyadic& b) { return cmp(a, b) > 0; }
inline bool operator>=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) >= 0; }
inline bool operator==(const Dyadic& a, const Dyadic& b) { return cmp(a, b) == 0; }

inline Dyadic add(const Dyadic& a, const Dyadic& b) {
  int e = std::max(a.exp, b.exp);
  return Dyadic((a.num << (e - a.exp)) + (b.num << (e - b.exp)), e);
}

inline Dyadic sub(const Dyadic& a, const Dyadic& b) {
  int e = std::max(a.exp, b.exp);
  return Dyadic((a.num << (e - a.exp)) - (b.num << (e - b.exp)), e);
}

// Closed interval [lo, hi] with exact dyadic endpoints.
struct DyadicSpan {
  Dyadic lo, hi;
  Dyadic width() const { return sub(hi, lo); }
};

// Vertical/horizontal gap between two closed intervals; zero when they overlap.
inline BigRat gap(const DyadicSpan& a, const DyadicSpan& b) {
  if (a.lo > b.hi) return sub(a.lo, b.hi).to_rational();
  if (b.lo > a.hi) return sub(b.lo, a.hi).to_rational();
  return BigRat(0);
}

}  // namespace pxg
