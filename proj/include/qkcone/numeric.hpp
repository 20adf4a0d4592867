// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_NUMERIC_HPP
#define QKCONE_NUMERIC_HPP

#include <cstdint>
#include <gmpxx.h>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qkcone {

// All arithmetic in this library is exact; Rational is the ground field's
// scalar type and no floating point appears anywhere downstream.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

inline Rational rat_pow(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  if (is_zero(base)) {
    if (e < 0) throw std::domain_error("rat_pow: zero to a negative power");
    return Rational(0);
  }
  Rational b = e < 0 ? Rational(1) / base : base;
  unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
  Rational acc(1);
  while (n) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

// Generalized binomial C(n, k) for integer n of either sign, k >= 0.
inline Rational binomial(long n, long k) {
  if (k < 0) return Rational(0);
  Rational acc(1);
  for (long i = 0; i < k; ++i) {
    acc *= Rational(n - i);
    acc /= Rational(i + 1);
  }
  return acc;
}

inline long lcm_long(long a, long b) { return std::lcm(a, b); }

// Serialized form of an exact rational: decimal-free "p/q", or "p" when q=1.
inline std::string rat_to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational rat_from_string(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  r.canonicalize();
  return r;
}

}  // namespace qkcone

#endif
