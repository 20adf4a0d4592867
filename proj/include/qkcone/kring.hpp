// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_KRING_HPP
#define QKCONE_KRING_HPP

#include <memory>

#include "qkcone/scalar.hpp"

namespace qkcone {

struct ModelMismatch : std::domain_error {
  ModelMismatch() : std::domain_error("ModelMismatch: classes over different K-ring models") {}
};
struct NonGlobalClass : std::domain_error {
  explicit NonGlobalClass(const std::string& what)
      : std::domain_error("NonGlobalClass: " + what) {}
};
struct NonInvertibleFactor : std::domain_error {
  explicit NonInvertibleFactor(const std::string& what)
      : std::domain_error("NonInvertibleFactor: " + what) {}
};

using ExpVec = std::vector<int>;

inline ExpVec expvec_add(const ExpVec& a, const ExpVec& b) {
  ExpVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

// Finite model of K(X) or K_G(X).
//
// Presentation mode: line-bundle generators P_i with x_i = P_i - 1 nilpotent,
// a finite monomial basis in the x_i (all exponents <= nilpotency bound, with
// an optional reduction table for out-of-basis monomials; absent entries
// reduce to zero), and a trace table giving chi on basis monomials.
//
// Fixed-point mode: a list of fixed points, the restriction of each generator
// at each point as a character monomial, and the tangent character multiset
// per point; chi is the localization sum.
class KRingModel {
 public:
  enum class Mode { Presentation, FixedPoint };

  struct Vertex {
    std::string name;
    std::vector<ScalarMonomial> gen_restriction;   // one per generator
    std::vector<ScalarMonomial> tangent_chars;     // T_alpha X
  };

  Mode mode = Mode::Presentation;
  std::string name;
  std::vector<std::string> generators;

  // presentation data
  ExpVec bounds;                                    // x_i^(bounds[i]+1) -> reduction
  std::map<ExpVec, std::map<ExpVec, Scalar>> reduction;  // out-of-basis -> combo
  std::map<ExpVec, Scalar> trace;                   // chi on basis monomials

  // fixed-point data
  std::vector<Vertex> vertices;

  size_t rank() const { return generators.size(); }

  std::vector<ExpVec> basis() const {
    std::vector<ExpVec> out;
    ExpVec cur(bounds.size(), 0);
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == bounds.size()) {
        out.push_back(cur);
        return;
      }
      for (int e = 0; e <= bounds[i]; ++e) {
        cur[i] = e;
        rec(i + 1);
      }
      cur[i] = 0;
    };
    rec(0);
    return out;
  }

  size_t dim() const {
    if (mode == Mode::FixedPoint) return vertices.size();
    size_t d = 1;
    for (int b : bounds) d *= static_cast<size_t>(b) + 1;
    return d;
  }

  size_t basis_index(const ExpVec& e) const {
    size_t idx = 0;
    for (size_t i = 0; i < bounds.size(); ++i) {
      idx = idx * (static_cast<size_t>(bounds[i]) + 1) + static_cast<size_t>(e[i]);
    }
    return idx;
  }

  bool in_basis(const ExpVec& e) const {
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] < 0 || e[i] > bounds[i]) return false;
    return true;
  }

  size_t vertex_index(const std::string& v) const {
    for (size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i].name == v) return i;
    throw std::invalid_argument("unknown fixed point: " + v);
  }

  // Built-in targets.
  static std::shared_ptr<KRingModel> point(size_t novikov_rank = 0);
  static std::shared_ptr<KRingModel> projective_space(int n);
  static std::shared_ptr<KRingModel> product_of_projective(const std::vector<int>& ns);
  static std::shared_ptr<KRingModel> projective_space_fixed_point(int n);
};

using ModelPtr = std::shared_ptr<const KRingModel>;

// Element of the model: coefficients over the monomial basis (presentation)
// or the tuple of restrictions (fixed-point).
class KClass {
 public:
  KClass() = default;
  KClass(ModelPtr model, std::vector<Scalar> coeffs)
      : model_(std::move(model)), c_(std::move(coeffs)) {}

  static KClass zero(const ModelPtr& m) { return KClass(m, std::vector<Scalar>(m->dim())); }
  static KClass unit(const ModelPtr& m) { return scalar(m, Scalar::one()); }
  static KClass scalar(const ModelPtr& m, const Scalar& s) {
    KClass r = zero(m);
    if (m->mode == KRingModel::Mode::FixedPoint) {
      for (auto& v : r.c_) v = s;
    } else {
      r.c_[m->basis_index(ExpVec(m->bounds.size(), 0))] = s;
    }
    return r;
  }

  // The class of the line monomial prod_i P_i^{w_i}, exact for either sign of
  // the exponents.
  static KClass line_monomial(const ModelPtr& m, const ExpVec& w) {
    if (m->mode == KRingModel::Mode::FixedPoint) {
      KClass r = zero(m);
      for (size_t a = 0; a < m->vertices.size(); ++a) {
        ScalarMonomial v = ScalarMonomial::one();
        for (size_t i = 0; i < w.size(); ++i)
          v = v * m->vertices[a].gen_restriction[i].pow(w[i]);
        r.c_[a] = Scalar(v);
      }
      return r;
    }
    KClass r = unit(m);
    for (size_t i = 0; i < w.size(); ++i) {
      // (1 + x_i)^{w_i} truncated by nilpotency
      KClass f = zero(m);
      for (int k = 0; k <= m->bounds[i]; ++k) {
        ExpVec e(m->bounds.size(), 0);
        e[i] = k;
        f.c_[m->basis_index(e)] = Scalar(Rational(binomial(w[i], k)));
      }
      r = r * f;
    }
    return r;
  }

  const ModelPtr& model() const { return model_; }
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar& at(size_t i) { return c_[i]; }
  const Scalar& at(size_t i) const { return c_[i]; }

  bool is_zero() const {
    for (const auto& s : c_)
      if (!s.is_zero()) return false;
    return true;
  }

  // Coefficient of the basis monomial 1 (presentation only).
  Scalar scalar_part() const {
    require_presentation();
    return c_[model_->basis_index(ExpVec(model_->bounds.size(), 0))];
  }
  KClass nilpotent_part() const {
    KClass r = *this;
    r.c_[model_->basis_index(ExpVec(model_->bounds.size(), 0))] = Scalar::zero();
    return r;
  }

  friend KClass operator+(const KClass& a, const KClass& b) {
    a.check(b);
    KClass r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend KClass operator-(const KClass& a, const KClass& b) { return a + (-b); }
  KClass operator-() const {
    KClass r = *this;
    for (auto& s : r.c_) s = -s;
    return r;
  }
  friend KClass operator*(const KClass& a, const KClass& b) {
    a.check(b);
    if (a.model_->mode == KRingModel::Mode::FixedPoint) {
      KClass r = a;
      for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] *= b.c_[i];
      return r;
    }
    KClass r = zero(a.model_);
    auto bs = a.model_->basis();
    for (const auto& ea : bs) {
      const Scalar& ca = a.c_[a.model_->basis_index(ea)];
      if (ca.is_zero()) continue;
      for (const auto& eb : bs) {
        const Scalar& cb = b.c_[b.model_->basis_index(eb)];
        if (cb.is_zero()) continue;
        r.accumulate_monomial(expvec_add(ea, eb), ca * cb);
      }
    }
    return r;
  }
  friend KClass operator*(const Scalar& s, const KClass& a) {
    KClass r = a;
    for (auto& x : r.c_) x *= s;
    return r;
  }
  KClass& operator+=(const KClass& b) { return *this = *this + b; }
  KClass& operator*=(const KClass& b) { return *this = *this * b; }

  friend bool operator==(const KClass& a, const KClass& b) { return (a - b).is_zero(); }
  friend bool operator!=(const KClass& a, const KClass& b) { return !(a == b); }

  // Ring-homomorphic extension of P_i -> P_i^k; scalars through the scalar
  // Adams operation.
  KClass adams(long k) const {
    if (k < 1) throw std::invalid_argument("kclass_adams: k must be >= 1");
    if (model_->mode == KRingModel::Mode::FixedPoint) {
      KClass r = *this;
      for (auto& s : r.c_) s = s.adams(k);
      return r;
    }
    // express each basis monomial prod x_i^{a_i} as prod (P_i^k - 1)^{a_i}
    KClass r = zero(model_);
    auto bs = model_->basis();
    for (const auto& e : bs) {
      const Scalar& c = c_[model_->basis_index(e)];
      if (c.is_zero()) continue;
      KClass term = scalar(model_, c.adams(k));
      for (size_t i = 0; i < e.size(); ++i) {
        ExpVec w(model_->bounds.size(), 0);
        w[i] = static_cast<int>(k);
        KClass pk_minus_1 = line_monomial(model_, w) - unit(model_);
        for (int rep = 0; rep < e[i]; ++rep) term = term * pk_minus_1;
      }
      r = r + term;
    }
    return r;
  }

  KClass substitute(const ParamAssignment& a) const {
    KClass r = *this;
    for (auto& s : r.c_) s = s.substitute(a);
    return r;
  }
  KClass rescale(const std::function<bool(const std::string&)>& affected, int k) const {
    KClass r = *this;
    for (auto& s : r.c_) s = s.rescale(affected, k);
    return r;
  }

  bool is_invertible() const {
    if (model_->mode == KRingModel::Mode::FixedPoint) {
      for (const auto& s : c_)
        if (s.is_zero()) return false;
      return true;
    }
    return !scalar_part().is_zero();
  }

  // Inverse of s + n with s the invertible scalar part and n nilpotent:
  // s^{-1} sum (-n/s)^r, a finite sum.
  KClass inverse() const {
    if (model_->mode == KRingModel::Mode::FixedPoint) {
      KClass r = *this;
      for (auto& s : r.c_) {
        if (s.is_zero()) throw NonInvertibleFactor("fixed-point component vanishes");
        s = s.inverse();
      }
      return r;
    }
    Scalar s = scalar_part();
    if (s.is_zero()) throw NonInvertibleFactor("scalar part vanishes");
    Scalar sinv = s.inverse();
    KClass n = nilpotent_part();
    KClass acc = unit(model_);
    KClass pw = unit(model_);
    while (true) {
      pw = (-sinv) * (pw * n);
      if (pw.is_zero()) break;
      acc = acc + pw;
    }
    return sinv * acc;
  }

  KClass pow(long e) const {
    if (e == 0) return unit(model_);
    KClass b = e < 0 ? inverse() : *this;
    KClass acc = unit(model_);
    for (long i = 0; i < (e < 0 ? -e : e); ++i) acc = acc * b;
    return acc;
  }

  void check(const KClass& o) const {
    if (model_.get() != o.model_.get()) throw ModelMismatch();
  }

 private:
  void require_presentation() const {
    if (model_->mode != KRingModel::Mode::Presentation)
      throw std::domain_error("operation requires presentation model");
  }

  void accumulate_monomial(const ExpVec& e, const Scalar& coeff) {
    if (model_->in_basis(e)) {
      c_[model_->basis_index(e)] += coeff;
      return;
    }
    auto it = model_->reduction.find(e);
    if (it == model_->reduction.end()) return;  // reduces to zero
    for (const auto& [be, bc] : it->second) c_[model_->basis_index(be)] += coeff * bc;
  }

  ModelPtr model_;
  std::vector<Scalar> c_;
};

inline KClass kclass_mul(const KClass& a, const KClass& b) { return a * b; }
inline KClass kclass_adams(long k, const KClass& a) { return a.adams(k); }

// chi(X; a (x) b (x) twist) as a scalar, by trace table or localization.
inline Scalar pairing_scalar(const KClass& a, const KClass& b, const KClass& twist) {
  a.check(b);
  a.check(twist);
  const auto& m = a.model();
  KClass prod = a * b * twist;
  if (m->mode == KRingModel::Mode::Presentation) {
    Scalar acc = Scalar::zero();
    for (const auto& e : m->basis()) {
      const Scalar& c = prod.coeffs()[m->basis_index(e)];
      if (c.is_zero()) continue;
      auto it = m->trace.find(e);
      if (it == m->trace.end()) throw std::domain_error("trace table missing a basis monomial");
      acc += c * it->second;
    }
    return acc;
  }
  Scalar acc = Scalar::zero();
  for (size_t i = 0; i < m->vertices.size(); ++i) {
    Scalar eu = Scalar::one();
    for (const auto& ch : m->vertices[i].tangent_chars)
      eu *= Scalar::one() - Scalar(ch.inverse());
    acc += prod.coeffs()[i] / eu;
  }
  return acc;
}

// The twisted Poincare pairing, required to clear all localization
// denominators (the fixed-point invariant of global classes).
inline ParamPolynomial pairing(const KClass& a, const KClass& b, const KClass& twist) {
  Scalar s = pairing_scalar(a, b, twist);
  if (!s.is_polynomial())
    throw NonGlobalClass("pairing left denominator " + s.to_string());
  return s.as_polynomial();
}

// Basis classes of the model (monomials or fixed-point deltas).
inline std::vector<KClass> model_basis_classes(const ModelPtr& m) {
  std::vector<KClass> out;
  if (m->mode == KRingModel::Mode::FixedPoint) {
    for (size_t i = 0; i < m->vertices.size(); ++i) {
      KClass c = KClass::zero(m);
      c.at(i) = Scalar::one();
      out.push_back(c);
    }
    return out;
  }
  for (const auto& e : m->basis()) {
    KClass c = KClass::zero(m);
    c.at(m->basis_index(e)) = Scalar::one();
    out.push_back(c);
  }
  return out;
}

// Dual basis under the twisted pairing, by exact Gram-matrix inversion.
inline std::vector<KClass> dual_basis(const ModelPtr& m, const KClass& twist) {
  auto phis = model_basis_classes(m);
  size_t n = phis.size();
  std::vector<std::vector<Scalar>> g(n, std::vector<Scalar>(2 * n, Scalar::zero()));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) g[i][j] = pairing_scalar(phis[i], phis[j], twist);
    g[i][n + i] = Scalar::one();
  }
  // Gauss-Jordan over the exact scalar field
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && g[piv][col].is_zero()) ++piv;
    if (piv == n) throw std::domain_error("dual_basis: singular Gram matrix");
    std::swap(g[piv], g[col]);
    Scalar inv = g[col][col].inverse();
    for (auto& x : g[col]) x *= inv;
    for (size_t row = 0; row < n; ++row) {
      if (row == col || g[row][col].is_zero()) continue;
      Scalar f = g[row][col];
      for (size_t k = 0; k < 2 * n; ++k) g[row][k] -= f * g[col][k];
    }
  }
  std::vector<KClass> duals;
  for (size_t j = 0; j < n; ++j) {
    KClass d = KClass::zero(m);
    for (size_t i = 0; i < n; ++i) d = d + (g[i][n + j] * phis[i]);
    duals.push_back(d);
  }
  return duals;
}

inline std::shared_ptr<KRingModel> KRingModel::point(size_t novikov_rank) {
  auto m = std::make_shared<KRingModel>();
  m->mode = Mode::Presentation;
  m->name = "pt";
  m->generators.assign(novikov_rank, "P");
  for (size_t i = 0; i < novikov_rank; ++i) m->generators[i] = "P" + std::to_string(i + 1);
  m->bounds.assign(novikov_rank, 0);
  m->trace[ExpVec(novikov_rank, 0)] = Scalar::one();
  return m;
}

// K(P^n) = Z[x]/(x^{n+1}), x = P - 1 with P the tautological O(-1); the trace
// table chi(x^k) = (-1)^k is the standard Euler-characteristic computation
// for this convention.
inline std::shared_ptr<KRingModel> KRingModel::projective_space(int n) {
  auto m = std::make_shared<KRingModel>();
  m->mode = Mode::Presentation;
  m->name = "P" + std::to_string(n);
  m->generators = {"P"};
  m->bounds = {n};
  for (int k = 0; k <= n; ++k)
    m->trace[ExpVec{k}] = Scalar(Rational(k % 2 == 0 ? 1 : -1));
  return m;
}

inline std::shared_ptr<KRingModel> KRingModel::product_of_projective(const std::vector<int>& ns) {
  auto m = std::make_shared<KRingModel>();
  m->mode = Mode::Presentation;
  m->name = "P" + std::to_string(ns[0]);
  for (size_t i = 1; i < ns.size(); ++i) m->name += "xP" + std::to_string(ns[i]);
  for (size_t i = 0; i < ns.size(); ++i) {
    m->generators.push_back("P" + std::to_string(i + 1));
    m->bounds.push_back(ns[i]);
  }
  ExpVec cur(ns.size(), 0);
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == ns.size()) {
      int total = 0;
      for (int e : cur) total += e;
      m->trace[cur] = Scalar(Rational(total % 2 == 0 ? 1 : -1));
      return;
    }
    for (int e = 0; e <= ns[i]; ++e) {
      cur[i] = e;
      rec(i + 1);
    }
    cur[i] = 0;
  };
  rec(0);
  return m;
}

// GKM-style fixed point model of P^n for the standard torus: points e_0..e_n,
// characters t_0 = 1, t_1, .., t_n; the tautological generator restricts to
// t_i at e_i and the tangent characters at e_i are t_j / t_i.  The character
// convention is data, fixed here once.
inline std::shared_ptr<KRingModel> KRingModel::projective_space_fixed_point(int n) {
  auto m = std::make_shared<KRingModel>();
  m->mode = Mode::FixedPoint;
  m->name = "P" + std::to_string(n) + "-fp";
  m->generators = {"P"};
  auto t = [&](int i) {
    if (i == 0) return ScalarMonomial::one();
    return ScalarMonomial{Cyclo::one(), ParamMonomial::symbol("t" + std::to_string(i))};
  };
  for (int i = 0; i <= n; ++i) {
    Vertex v;
    v.name = "e" + std::to_string(i);
    v.gen_restriction = {t(i)};
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      v.tangent_chars.push_back(t(j) * t(i).inverse());
    }
    m->vertices.push_back(v);
  }
  return m;
}

// Bundle description E^vee = sum_j +- f_j with f_j = weight_j * prod_i
// P_i^{e_ji}; levels and twists consume this.
struct BundleSummand {
  int sign = 1;            // +-1
  ExpVec e;                // exponents of the generators
  ScalarMonomial weight;   // optional character weight
};

struct BundleSpec {
  std::vector<BundleSummand> summands;
  int level = 0;

  size_t novikov_rank() const { return summands.empty() ? 0 : summands[0].e.size(); }

  int rank() const {
    int r = 0;
    for (const auto& s : summands) r += s.sign;
    return r;
  }

  // degree pairing m_j(d) = sum_i e_ji d_i = -<c_1(f_j), d>
  long m_of(size_t j, const ExpVec& d) const {
    long m = 0;
    for (size_t i = 0; i < d.size(); ++i) m += static_cast<long>(summands[j].e[i]) * d[i];
    return m;
  }

  // c_1(E)_i = -sum_j sign_j e_ji
  std::vector<long> c1() const {
    std::vector<long> c(novikov_rank(), 0);
    for (const auto& s : summands)
      for (size_t i = 0; i < c.size(); ++i) c[i] -= static_cast<long>(s.sign) * s.e[i];
    return c;
  }

  long c1_pair(const ExpVec& d) const {
    // <c_1(E), d> = sum_j sign_j m_j(d) = -sum_i c1_i d_i
    long acc = 0;
    for (size_t j = 0; j < summands.size(); ++j) acc += summands[j].sign * m_of(j, d);
    return acc;
  }

  BundleSpec dual() const {
    BundleSpec r = *this;
    for (auto& s : r.summands) {
      for (auto& e : s.e) e = -e;
      s.weight = s.weight.inverse();
    }
    return r;
  }
};

enum class MuMode { MuInvOnE, MuOnEDual };

// Eu(mu^{-1} E) = prod_j (1 - mu f_j)^{sign_j},
// Eu(mu E^vee)  = prod_j (1 - mu^{-1} f_j^{-1})^{sign_j}.
inline KClass euler_class(const ModelPtr& m, const BundleSpec& spec, MuMode mode) {
  KClass acc = KClass::unit(m);
  for (const auto& s : spec.summands) {
    ScalarMonomial u{Cyclo::one(), ParamMonomial::symbol(kMu, mode == MuMode::MuInvOnE ? 1 : -1)};
    ExpVec w = s.e;
    ScalarMonomial wt = s.weight;
    if (mode == MuMode::MuOnEDual) {
      for (auto& e : w) e = -e;
      wt = wt.inverse();
    }
    KClass f = Scalar(u * wt) * KClass::line_monomial(m, w);
    KClass factor = KClass::unit(m) - f;
    if (s.sign > 0) {
      acc = acc * factor;
    } else {
      if (!factor.is_invertible())
        throw NonInvertibleFactor("euler factor has vanishing scalar part");
      acc = acc * factor.inverse();
    }
  }
  return acc;
}

// det^{power} of the mu-weighted bundle: a line monomial times a mu power.
inline KClass det_class(const ModelPtr& m, const BundleSpec& spec, int power, MuMode mode) {
  ScalarMonomial u = ScalarMonomial::one();
  ExpVec w(spec.novikov_rank(), 0);
  for (const auto& s : spec.summands) {
    int k = s.sign * power;
    ScalarMonomial mu{Cyclo::one(),
                      ParamMonomial::symbol(kMu, mode == MuMode::MuInvOnE ? -1 : 1)};
    int dir = mode == MuMode::MuInvOnE ? -1 : 1;  // mu^{-1}E has summands mu^{-1} f_j^{-1}
    u = u * mu.pow(k) * s.weight.pow(dir * k);
    for (size_t i = 0; i < w.size(); ++i) w[i] += dir * k * s.e[i];
  }
  return Scalar(u) * KClass::line_monomial(m, w);
}

}  // namespace qkcone

#endif
