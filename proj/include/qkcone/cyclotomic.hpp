// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_CYCLOTOMIC_HPP
#define QKCONE_CYCLOTOMIC_HPP

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include "qkcone/numeric.hpp"

namespace qkcone {

namespace detail {

inline long euler_phi(long n) {
  long result = n, m = n;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      result -= result / p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

// Monic integer coefficients of the N-th cyclotomic polynomial, low degree
// first.  Computed as (x^N - 1) / prod_{d | N, d < N} Phi_d.
inline const std::vector<Rational>& cyclotomic_poly(long n) {
  static std::map<long, std::vector<Rational>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::function<std::vector<Rational>(long)> build = [&](long m) -> std::vector<Rational> {
    auto hit = cache.find(m);
    if (hit != cache.end()) return hit->second;
    std::vector<Rational> num(m + 1, Rational(0));
    num[0] = Rational(-1);
    num[m] = Rational(1);
    for (long d = 1; d < m; ++d) {
      if (m % d != 0) continue;
      std::vector<Rational> div = build(d);
      // exact polynomial long division, remainder is zero by construction
      std::vector<Rational> quot(num.size() - div.size() + 1, Rational(0));
      for (long k = static_cast<long>(quot.size()) - 1; k >= 0; --k) {
        Rational c = num[k + div.size() - 1] / div.back();
        quot[k] = c;
        if (is_zero(c)) continue;
        for (size_t j = 0; j < div.size(); ++j) num[k + j] -= c * div[j];
      }
      num = quot;
    }
    cache[m] = num;
    return num;
  };
  build(n);
  return cache.at(n);
}

}  // namespace detail

// Exact element of the cyclotomic field Q(zeta_N), stored as a reduced
// polynomial in zeta of degree < phi(N).  Values of different orders are
// lifted to the lcm order on demand, so one session-wide N emerges from the
// inputs without being tracked globally.
class Cyclo {
 public:
  Cyclo() : order_(1), c_{Rational(0)} {}
  explicit Cyclo(const Rational& r) : order_(1), c_{r} {}
  Cyclo(long num, long den) : order_(1), c_{rat(num, den)} {}

  static Cyclo zero() { return Cyclo(); }
  static Cyclo one() { return Cyclo(Rational(1)); }

  // zeta_N^j
  static Cyclo root_of_unity(long n, long j) {
    j %= n;
    if (j < 0) j += n;
    std::vector<Rational> poly(static_cast<size_t>(j) + 1, Rational(0));
    poly[static_cast<size_t>(j)] = Rational(1);
    return Cyclo(n, reduce(n, poly));
  }

  long order() const { return order_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return qkcone::is_zero(r); });
  }
  bool is_one() const { return is_rational() && c_[0] == 1; }
  bool is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
      if (!qkcone::is_zero(c_[i])) return false;
    return true;
  }
  Rational rational_part() const { return c_[0]; }

  Cyclo lifted(long n) const {
    if (n == order_) return *this;
    if (n % order_ != 0) throw std::invalid_argument("Cyclo::lifted: not a multiple order");
    long step = n / order_;
    std::vector<Rational> poly(static_cast<size_t>((order_ > 1 ? order_ - 1 : 0) * step) + 1,
                               Rational(0));
    for (size_t j = 0; j < c_.size(); ++j) poly[j * static_cast<size_t>(step)] = c_[j];
    return Cyclo(n, reduce(n, poly));
  }

  friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
    long n = lcm_long(a.order_, b.order_);
    Cyclo x = a.lifted(n), y = b.lifted(n);
    for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
    return x;
  }
  friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a + (-b); }
  Cyclo operator-() const {
    Cyclo r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
    long n = lcm_long(a.order_, b.order_);
    Cyclo x = a.lifted(n), y = b.lifted(n);
    std::vector<Rational> conv(x.c_.size() + y.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < x.c_.size(); ++i) {
      if (qkcone::is_zero(x.c_[i])) continue;
      for (size_t j = 0; j < y.c_.size(); ++j) conv[i + j] += x.c_[i] * y.c_[j];
    }
    return Cyclo(n, reduce(n, conv));
  }
  Cyclo& operator+=(const Cyclo& b) { return *this = *this + b; }
  Cyclo& operator-=(const Cyclo& b) { return *this = *this - b; }
  Cyclo& operator*=(const Cyclo& b) { return *this = *this * b; }

  friend bool operator==(const Cyclo& a, const Cyclo& b) {
    long n = lcm_long(a.order_, b.order_);
    return a.lifted(n).c_ == b.lifted(n).c_;
  }
  friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

  // Total order used only for canonical container keys.
  friend bool operator<(const Cyclo& a, const Cyclo& b) {
    long n = lcm_long(a.order_, b.order_);
    return a.lifted(n).c_ < b.lifted(n).c_;
  }

  Cyclo inverse() const {
    if (is_zero()) throw std::domain_error("Cyclo::inverse of zero");
    if (is_rational()) return Cyclo(Rational(1) / c_[0]);
    // extended Euclid against Phi_N in Q[x]
    std::vector<Rational> r0 = detail::cyclotomic_poly(order_);
    std::vector<Rational> r1 = c_;
    trim(r1);
    std::vector<Rational> s0{}, s1{Rational(1)};  // coefficients of the value
    while (true) {
      // divide r0 by r1
      std::vector<Rational> q(std::max<size_t>(r0.size() - r1.size() + 1, 1), Rational(0));
      std::vector<Rational> rem = r0;
      for (long k = static_cast<long>(rem.size()) - static_cast<long>(r1.size()); k >= 0; --k) {
        Rational c = rem[k + r1.size() - 1] / r1.back();
        q[static_cast<size_t>(k)] = c;
        if (qkcone::is_zero(c)) continue;
        for (size_t j = 0; j < r1.size(); ++j) rem[static_cast<size_t>(k) + j] -= c * r1[j];
      }
      trim(rem);
      std::vector<Rational> s2 = sub(s0, mul(q, s1));
      if (rem.empty()) {
        // r1 is the gcd; it must be a nonzero constant since Phi_N is
        // irreducible and the value is nonzero
        if (r1.size() != 1) throw std::domain_error("Cyclo::inverse: unexpected gcd");
        std::vector<Rational> inv = s1;
        for (auto& x : inv) x /= r1[0];
        return Cyclo(order_, reduce(order_, inv));
      }
      r0 = r1;
      r1 = rem;
      s0 = s1;
      s1 = s2;
    }
  }

  // zeta -> zeta^k (the Adams operation on roots of unity).  For k coprime
  // to the order this is the Galois automorphism and acts on arbitrary field
  // elements; otherwise it is only defined on rational multiples of a single
  // root of unity, which is the shape of all coefficients the engine feeds
  // through it.
  Cyclo galois_power(long k) const {
    long kk = k % order_;
    if (kk < 0) kk += order_;
    if (std::gcd(kk, order_) == 1) {
      std::vector<Rational> poly(static_cast<size_t>((c_.size() - 1) * kk) + 1, Rational(0));
      for (size_t j = 0; j < c_.size(); ++j) {
        if (qkcone::is_zero(c_[j])) continue;
        poly[j * static_cast<size_t>(kk)] += c_[j];
      }
      return Cyclo(order_, reduce(order_, poly));
    }
    if (is_rational()) return *this;
    for (long j = 1; j < order_; ++j) {
      Cyclo shifted = *this * root_of_unity(order_, order_ - j);
      if (shifted.is_rational())
        return Cyclo(shifted.c_[0]) * root_of_unity(order_, (j * kk) % order_);
    }
    throw std::domain_error(
        "Adams operation undefined: non-monomial cyclotomic value with non-coprime power");
  }

  Cyclo pow(long e) const {
    if (e == 0) return one();
    Cyclo b = e < 0 ? inverse() : *this;
    unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
    Cyclo acc = one();
    while (n) {
      if (n & 1) acc *= b;
      b *= b;
      n >>= 1;
    }
    return acc;
  }

  // If the value is a root of unity, return (order n, exponent j) with
  // value == zeta_n^j in the lifted field; otherwise nullopt.  Roots of unity
  // in Q(zeta_N) are exactly +-zeta_N^j.
  std::optional<std::pair<long, long>> as_root_of_unity() const {
    for (long j = 0; j < order_; ++j) {
      if (*this == root_of_unity(order_, j)) return std::make_pair(order_, j);
      if (*this == -root_of_unity(order_, j)) {
        long n2 = order_ % 2 == 0 ? order_ : 2 * order_;
        long jj = (j * (n2 / order_) + n2 / 2) % n2;
        return std::make_pair(n2, jj);
      }
    }
    return std::nullopt;
  }

  std::string to_string() const {
    if (is_rational()) return rat_to_string(c_[0]);
    std::ostringstream os;
    os << "cyc" << order_ << "[";
    for (size_t i = 0; i < c_.size(); ++i) {
      if (i) os << ",";
      os << rat_to_string(c_[i]);
    }
    os << "]";
    return os.str();
  }

 private:
  Cyclo(long order, std::vector<Rational> reduced) : order_(order), c_(std::move(reduced)) {}

  static void trim(std::vector<Rational>& p) {
    while (!p.empty() && qkcone::is_zero(p.back())) p.pop_back();
  }
  static std::vector<Rational> mul(const std::vector<Rational>& a,
                                   const std::vector<Rational>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Rational> r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
  }
  static std::vector<Rational> sub(const std::vector<Rational>& a,
                                   const std::vector<Rational>& b) {
    std::vector<Rational> r = a;
    r.resize(std::max(a.size(), b.size()), Rational(0));
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
  }

  static std::vector<Rational> reduce(long n, std::vector<Rational> poly) {
    const auto& phi = detail::cyclotomic_poly(n);
    size_t deg = phi.size() - 1;  // = euler_phi(n)
    // fold exponents >= n first (zeta^n = 1), then divide by Phi_n
    if (poly.size() > static_cast<size_t>(n)) {
      std::vector<Rational> folded(static_cast<size_t>(n), Rational(0));
      for (size_t j = 0; j < poly.size(); ++j) folded[j % static_cast<size_t>(n)] += poly[j];
      poly = std::move(folded);
    }
    for (long k = static_cast<long>(poly.size()) - 1; k >= static_cast<long>(deg); --k) {
      Rational c = poly[static_cast<size_t>(k)];
      if (qkcone::is_zero(c)) continue;
      for (size_t j = 0; j < phi.size(); ++j)
        poly[static_cast<size_t>(k) - deg + j] -= c * phi[j];
    }
    poly.resize(deg, Rational(0));
    if (poly.empty()) poly.push_back(Rational(0));
    return poly;
  }

  long order_;
  std::vector<Rational> c_;
};

}  // namespace qkcone

#endif
