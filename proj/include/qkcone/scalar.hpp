// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_SCALAR_HPP
#define QKCONE_SCALAR_HPP

#include "qkcone/params.hpp"

namespace qkcone {

struct DivisionByZeroAfterSubstitution : std::domain_error {
  explicit DivisionByZeroAfterSubstitution(const std::string& what)
      : std::domain_error("DivisionByZeroAfterSubstitution: " + what) {}
};

// Element of the localized coefficient ring: a parameter polynomial divided
// by a multiset of polynomial factors.  Denominator factors are kept
// factored and canonical (leading coefficient one, no monomial content);
// cancellation is by exact division.
class Scalar {
 public:
  Scalar() : num_(ParamPolynomial::zero()) {}
  explicit Scalar(const Rational& r) : num_(ParamPolynomial(r)) {}
  explicit Scalar(const Cyclo& c) : num_(ParamPolynomial(c)) {}
  explicit Scalar(const ParamPolynomial& p) : num_(p) {}
  explicit Scalar(const ScalarMonomial& m) : num_(ParamPolynomial::monomial(m)) {}

  static Scalar zero() { return Scalar(); }
  static Scalar one() { return Scalar(Rational(1)); }
  static Scalar symbol(const std::string& name, int e = 1) {
    return Scalar(ParamPolynomial::symbol(name, e));
  }
  static Scalar fraction(const ParamPolynomial& num, const ParamPolynomial& den) {
    Scalar s(num);
    s.divide_by(den);
    return s;
  }

  const ParamPolynomial& num() const { return num_; }
  const std::map<ParamPolynomial, int>& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  bool is_monomial() const { return den_.empty() && num_.is_monomial(); }
  ScalarMonomial as_monomial() const {
    if (!is_monomial()) throw std::domain_error("Scalar::as_monomial: not a monomial");
    return num_.leading_monomial();
  }
  ParamPolynomial as_polynomial() const {
    if (!den_.empty()) throw std::domain_error("Scalar::as_polynomial: denominator present");
    return num_;
  }
  bool is_rational() const { return den_.empty() && num_.is_constant(); }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    Scalar r;
    r.den_ = a.den_;
    for (const auto& [f, m] : b.den_) {
      auto it = r.den_.find(f);
      int have = it == r.den_.end() ? 0 : it->second;
      r.den_[f] = std::max(have, m);
    }
    r.num_ = a.num_ * r.complement(a.den_) + b.num_ * r.complement(b.den_);
    r.simplify();
    return r;
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
  Scalar operator-() const {
    Scalar r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    Scalar r;
    r.num_ = a.num_ * b.num_;
    r.den_ = a.den_;
    for (const auto& [f, m] : b.den_) r.den_[f] += m;
    r.simplify();
    return r;
  }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("Scalar::inverse of zero");
    Scalar r = one();
    for (const auto& [f, m] : den_)
      for (int i = 0; i < m; ++i) r.num_ *= f;
    r.divide_by(num_);
    return r;
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

  Scalar pow(long e) const {
    if (e == 0) return one();
    Scalar b = e < 0 ? inverse() : *this;
    Scalar acc = one();
    for (long i = 0; i < (e < 0 ? -e : e); ++i) acc *= b;
    return acc;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) { return (a - b).is_zero(); }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar adams(long k) const {
    Scalar r;
    r.num_ = num_.adams(k);
    for (const auto& [f, m] : den_) r.push_den(f.adams(k), m);
    r.simplify();
    return r;
  }

  Scalar substitute(const ParamAssignment& a) const {
    Scalar r;
    r.num_ = num_.substitute(a);
    for (const auto& [f, m] : den_) {
      ParamPolynomial g = f.substitute(a);
      if (g.is_zero())
        throw DivisionByZeroAfterSubstitution("denominator factor " + f.to_string());
      r.push_den(g, m);
    }
    r.simplify();
    return r;
  }

  Scalar rescale(const std::function<bool(const std::string&)>& affected, int k) const {
    Scalar r;
    r.num_ = num_.rescale(affected, k);
    for (const auto& [f, m] : den_) r.push_den(f.rescale(affected, k), m);
    r.simplify();
    return r;
  }

  bool depends_on(const std::string& name) const {
    if (num_.depends_on(name)) return true;
    for (const auto& [f, m] : den_)
      if (f.depends_on(name)) return true;
    return false;
  }

  // True when some denominator factor vanishes under all parameters -> 1
  // (the 1/(lambda_1 - lambda_2) situation).
  bool limit_unsafe() const {
    for (const auto& [f, m] : den_) {
      Cyclo v = Cyclo::zero();
      for (const auto& [mono, c] : f.terms()) v += c;
      if (v.is_zero()) return true;
    }
    return false;
  }

  std::string to_string() const {
    std::string s = "(" + num_.to_string() + ")";
    for (const auto& [f, m] : den_)
      s += "/(" + f.to_string() + ")" + (m > 1 ? "^" + std::to_string(m) : "");
    return s;
  }

 private:
  // Multiply back all denominator factors except the ones in `skip` counted
  // with multiplicity; used to bring sums to the common denominator.
  ParamPolynomial complement(const std::map<ParamPolynomial, int>& skip) const {
    ParamPolynomial r = ParamPolynomial::one();
    for (const auto& [f, m] : den_) {
      auto it = skip.find(f);
      int minus = it == skip.end() ? 0 : it->second;
      for (int i = 0; i < m - minus; ++i) r *= f;
    }
    return r;
  }

  // Insert a factor, extracting units so that the stored factor is canonical:
  // monomial factors are absorbed into the numerator entirely.
  void push_den(ParamPolynomial f, int mult) {
    if (f.is_zero()) throw std::domain_error("Scalar: zero denominator factor");
    ScalarMonomial content{Cyclo::one(), f.content_monomial()};
    f = f.times_monomial(content.inverse());
    ScalarMonomial unit{f.leading_monomial().coef, ParamMonomial{}};
    f = f.times_monomial(unit.inverse());
    ScalarMonomial total = content * unit;
    if (!total.is_one()) num_ = num_.times_monomial(total.pow(mult).inverse());
    if (!f.is_constant()) den_[f] += mult;
  }

  void simplify() {
    if (num_.is_zero()) {
      den_.clear();
      return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
      bool cancelled = false;
      while (it->second > 0) {
        auto q = num_.exact_div(it->first);
        if (!q) break;
        num_ = *q;
        --it->second;
        cancelled = true;
      }
      if (it->second == 0)
        it = den_.erase(it);
      else
        ++it;
      (void)cancelled;
    }
  }

  void divide_by(const ParamPolynomial& p) {
    if (p.is_zero()) throw std::domain_error("Scalar: division by zero");
    push_den(p, 1);
    simplify();
  }

  ParamPolynomial num_;
  std::map<ParamPolynomial, int> den_;
};

// The Adams operation on scalars, defined for k >= 1.
inline Scalar scalar_adams(long k, const Scalar& s) {
  if (k < 1) throw std::invalid_argument("scalar_adams: k must be >= 1");
  return s.adams(k);
}

// Exact substitution of parameter symbols by monomial scalars; throws
// DivisionByZeroAfterSubstitution when the assignment leaves the localized
// ring.
inline Scalar scalar_substitute(const Scalar& s, const ParamAssignment& a) {
  return s.substitute(a);
}

}  // namespace qkcone

#endif
