// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_PARAMS_HPP
#define QKCONE_PARAMS_HPP

#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "qkcone/cyclotomic.hpp"

namespace qkcone {

// Conventional name of the fiberwise weight parameter.
inline const char* kMu = "mu";

// Laurent monomial in the parameter symbols (mu, a, b, equivariant
// characters, ...).  Exponents may be negative; zero exponents are erased.
class ParamMonomial {
 public:
  ParamMonomial() = default;
  static ParamMonomial symbol(const std::string& name, int e = 1) {
    ParamMonomial m;
    if (e != 0) m.e_[name] = e;
    return m;
  }

  bool trivial() const { return e_.empty(); }
  int exponent(const std::string& name) const {
    auto it = e_.find(name);
    return it == e_.end() ? 0 : it->second;
  }
  const std::map<std::string, int>& exponents() const { return e_; }

  ParamMonomial& mul(const ParamMonomial& o, int scale = 1) {
    for (const auto& [k, v] : o.e_) {
      int nv = e_[k] + v * scale;
      if (nv == 0)
        e_.erase(k);
      else
        e_[k] = nv;
    }
    return *this;
  }
  ParamMonomial pow(int k) const {
    ParamMonomial r;
    if (k == 0) return r;
    for (const auto& [name, e] : e_) r.e_[name] = e * k;
    return r;
  }
  ParamMonomial inverse() const { return pow(-1); }

  friend ParamMonomial operator*(ParamMonomial a, const ParamMonomial& b) { return a.mul(b); }
  friend bool operator==(const ParamMonomial& a, const ParamMonomial& b) { return a.e_ == b.e_; }
  friend bool operator!=(const ParamMonomial& a, const ParamMonomial& b) { return !(a == b); }
  friend bool operator<(const ParamMonomial& a, const ParamMonomial& b) { return a.e_ < b.e_; }

  std::string to_string() const {
    if (e_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [name, e] : e_) {
      if (!first) os << "*";
      first = false;
      os << name;
      if (e != 1) os << "^" << e;
    }
    return os.str();
  }

 private:
  std::map<std::string, int> e_;
};

// Coefficient times a parameter monomial; the shape of factor coefficients,
// substitution images and Novikov multipliers.
struct ScalarMonomial {
  Cyclo coef = Cyclo::one();
  ParamMonomial mono;

  static ScalarMonomial one() { return {}; }
  bool is_one() const { return coef.is_one() && mono.trivial(); }
  bool is_zero() const { return coef.is_zero(); }
  ScalarMonomial inverse() const { return {coef.inverse(), mono.inverse()}; }
  ScalarMonomial pow(long k) const { return {coef.pow(k), mono.pow(static_cast<int>(k))}; }
  // Adams: parameter exponents scale, roots of unity map zeta -> zeta^k,
  // rational coefficients stay put.
  ScalarMonomial adams(long k) const { return {coef.galois_power(k), mono.pow(static_cast<int>(k))}; }
  friend ScalarMonomial operator*(const ScalarMonomial& a, const ScalarMonomial& b) {
    return {a.coef * b.coef, a.mono * b.mono};
  }
  friend bool operator==(const ScalarMonomial& a, const ScalarMonomial& b) {
    return a.coef == b.coef && a.mono == b.mono;
  }
  std::string to_string() const {
    if (mono.trivial()) return coef.to_string();
    if (coef.is_one()) return mono.to_string();
    return coef.to_string() + "*" + mono.to_string();
  }
};

using ParamAssignment = std::map<std::string, ScalarMonomial>;

// Laurent polynomial in the parameter symbols with cyclotomic-rational
// coefficients.  Canonical: no zero terms.
class ParamPolynomial {
 public:
  ParamPolynomial() = default;
  explicit ParamPolynomial(const Cyclo& c) {
    if (!c.is_zero()) t_[ParamMonomial{}] = c;
  }
  explicit ParamPolynomial(const Rational& r) : ParamPolynomial(Cyclo(r)) {}
  static ParamPolynomial monomial(const ScalarMonomial& m) {
    ParamPolynomial p;
    if (!m.coef.is_zero()) p.t_[m.mono] = m.coef;
    return p;
  }
  static ParamPolynomial symbol(const std::string& name, int e = 1) {
    return monomial({Cyclo::one(), ParamMonomial::symbol(name, e)});
  }
  static ParamPolynomial zero() { return ParamPolynomial(); }
  static ParamPolynomial one() { return ParamPolynomial(Cyclo::one()); }

  const std::map<ParamMonomial, Cyclo>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const {
    return t_.empty() || (t_.size() == 1 && t_.begin()->first.trivial());
  }
  bool is_monomial() const { return t_.size() == 1; }
  ScalarMonomial leading_monomial() const {
    if (t_.empty()) throw std::domain_error("leading_monomial of zero");
    auto it = std::prev(t_.end());
    return {it->second, it->first};
  }
  Cyclo constant_term() const {
    auto it = t_.find(ParamMonomial{});
    return it == t_.end() ? Cyclo::zero() : it->second;
  }

  void add_term(const ParamMonomial& m, const Cyclo& c) {
    auto it = t_.find(m);
    if (it == t_.end()) {
      if (!c.is_zero()) t_[m] = c;
      return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }

  friend ParamPolynomial operator+(const ParamPolynomial& a, const ParamPolynomial& b) {
    ParamPolynomial r = a;
    for (const auto& [m, c] : b.t_) r.add_term(m, c);
    return r;
  }
  friend ParamPolynomial operator-(const ParamPolynomial& a, const ParamPolynomial& b) {
    ParamPolynomial r = a;
    for (const auto& [m, c] : b.t_) r.add_term(m, -c);
    return r;
  }
  ParamPolynomial operator-() const {
    ParamPolynomial r;
    for (const auto& [m, c] : t_) r.t_[m] = -c;
    return r;
  }
  friend ParamPolynomial operator*(const ParamPolynomial& a, const ParamPolynomial& b) {
    ParamPolynomial r;
    for (const auto& [ma, ca] : a.t_)
      for (const auto& [mb, cb] : b.t_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  ParamPolynomial& operator+=(const ParamPolynomial& b) { return *this = *this + b; }
  ParamPolynomial& operator-=(const ParamPolynomial& b) { return *this = *this - b; }
  ParamPolynomial& operator*=(const ParamPolynomial& b) { return *this = *this * b; }
  friend bool operator==(const ParamPolynomial& a, const ParamPolynomial& b) {
    return a.t_ == b.t_;
  }
  friend bool operator!=(const ParamPolynomial& a, const ParamPolynomial& b) {
    return !(a == b);
  }
  friend bool operator<(const ParamPolynomial& a, const ParamPolynomial& b) {
    return a.t_ < b.t_;
  }

  // Every parameter exponent scaled by k, every root of unity raised to the
  // k-th power.
  ParamPolynomial adams(long k) const {
    ParamPolynomial r;
    for (const auto& [m, c] : t_) r.add_term(m.pow(static_cast<int>(k)), c.galois_power(k));
    return r;
  }

  ParamPolynomial substitute(const ParamAssignment& a) const {
    ParamPolynomial r;
    for (const auto& [m, c] : t_) {
      Cyclo coef = c;
      ParamMonomial mono;
      for (const auto& [name, e] : m.exponents()) {
        auto it = a.find(name);
        if (it == a.end()) {
          mono.mul(ParamMonomial::symbol(name, e));
        } else {
          if (it->second.coef.is_zero()) {
            if (e < 0) throw std::domain_error("substitute: zero image with negative exponent");
            if (e > 0) {
              coef = Cyclo::zero();
              break;
            }
          } else {
            coef *= it->second.coef.pow(e);
            mono.mul(it->second.mono.pow(e));
          }
        }
      }
      r.add_term(mono, coef);
    }
    return r;
  }

  // Multiply exponents of the listed symbols by k; used for the character
  // lattice rescaling that realizes lambda^(1/m).
  ParamPolynomial rescale(const std::function<bool(const std::string&)>& affected, int k) const {
    ParamPolynomial r;
    for (const auto& [m, c] : t_) {
      ParamMonomial mono;
      for (const auto& [name, e] : m.exponents())
        mono.mul(ParamMonomial::symbol(name, affected(name) ? e * k : e));
      r.add_term(mono, c);
    }
    return r;
  }

  bool depends_on(const std::string& name) const {
    for (const auto& [m, c] : t_)
      if (m.exponent(name) != 0) return true;
    return false;
  }
  bool depends_on_any(const std::function<bool(const std::string&)>& pred) const {
    for (const auto& [m, c] : t_)
      for (const auto& [name, e] : m.exponents())
        if (pred(name)) return true;
    return false;
  }

  // Per-symbol minimum exponent over all terms (missing symbols count as
  // zero): the Laurent "content" monomial.
  ParamMonomial content_monomial() const {
    if (t_.empty()) return {};
    std::map<std::string, int> mins;
    for (const auto& [m, c] : t_)
      for (const auto& [name, e] : m.exponents()) mins.emplace(name, e);
    for (auto& [name, v] : mins)
      for (const auto& [m, c] : t_) v = std::min(v, m.exponent(name));
    ParamMonomial r;
    for (const auto& [name, e] : mins)
      if (e != 0) r.mul(ParamMonomial::symbol(name, e));
    return r;
  }

  ParamPolynomial times_monomial(const ScalarMonomial& m) const {
    ParamPolynomial r;
    for (const auto& [mm, c] : t_) r.add_term(mm * m.mono, c * m.coef);
    return r;
  }

  // Exact division; nullopt when the divisor does not divide.  Runs plain
  // multivariate division under the lex order on a fixed symbol list; when
  // the quotient exists the leading terms divide at every step, so a single
  // failed step certifies inexactness.
  std::optional<ParamPolynomial> exact_div(const ParamPolynomial& d) const {
    if (d.is_zero()) throw std::domain_error("exact_div by zero");
    if (is_zero()) return ParamPolynomial::zero();

    std::vector<std::string> syms;
    auto collect = [&syms](const ParamPolynomial& p) {
      for (const auto& [m, c] : p.t_)
        for (const auto& [name, e] : m.exponents())
          if (std::find(syms.begin(), syms.end(), name) == syms.end()) syms.push_back(name);
    };
    collect(*this);
    collect(d);
    std::sort(syms.begin(), syms.end());

    auto to_vec = [&syms](const ParamMonomial& m) {
      std::vector<int> v(syms.size(), 0);
      for (size_t i = 0; i < syms.size(); ++i) v[i] = m.exponent(syms[i]);
      return v;
    };
    auto to_mono = [&syms](const std::vector<int>& v) {
      ParamMonomial m;
      for (size_t i = 0; i < syms.size(); ++i)
        if (v[i] != 0) m.mul(ParamMonomial::symbol(syms[i], v[i]));
      return m;
    };

    ScalarMonomial shift_n{Cyclo::one(), content_monomial()};
    ScalarMonomial shift_d{Cyclo::one(), d.content_monomial()};
    std::map<std::vector<int>, Cyclo> num, div;
    for (const auto& [m, c] : times_monomial(shift_n.inverse()).t_) num[to_vec(m)] = c;
    for (const auto& [m, c] : d.times_monomial(shift_d.inverse()).t_) div[to_vec(m)] = c;

    const std::vector<int>& dl = std::prev(div.end())->first;
    Cyclo dlc_inv = std::prev(div.end())->second.inverse();
    ParamPolynomial quot;
    while (!num.empty()) {
      auto nl = std::prev(num.end());
      std::vector<int> q(syms.size());
      for (size_t i = 0; i < syms.size(); ++i) {
        q[i] = nl->first[i] - dl[i];
        if (q[i] < 0) return std::nullopt;
      }
      Cyclo qc = nl->second * dlc_inv;
      quot.add_term(to_mono(q), qc);
      for (const auto& [dm, dc] : div) {
        std::vector<int> key(syms.size());
        for (size_t i = 0; i < syms.size(); ++i) key[i] = dm[i] + q[i];
        auto it = num.find(key);
        Cyclo nv = (it == num.end() ? Cyclo::zero() : it->second) - qc * dc;
        if (nv.is_zero()) {
          if (it != num.end()) num.erase(it);
        } else {
          num[key] = nv;
        }
      }
    }
    return quot.times_monomial(shift_n * shift_d.inverse());
  }

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : t_) {
      if (!first) os << " + ";
      first = false;
      if (m.trivial())
        os << c.to_string();
      else if (c.is_one())
        os << m.to_string();
      else
        os << c.to_string() << "*" << m.to_string();
    }
    return os.str();
  }

 private:
  std::map<ParamMonomial, Cyclo> t_;
};

}  // namespace qkcone

#endif
