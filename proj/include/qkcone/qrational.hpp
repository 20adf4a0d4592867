// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_QRATIONAL_HPP
#define QKCONE_QRATIONAL_HPP

#include "qkcone/kring.hpp"

namespace qkcone {

struct NonInvertibleDenominator : std::domain_error {
  explicit NonInvertibleDenominator(const std::string& what)
      : std::domain_error("NonInvertibleDenominator: " + what) {}
};

// Denominator building block (1 - u * W * q^k): u a scalar monomial, W a
// line-bundle monomial in the model generators, k an integer.  Factors are
// never expanded; pole classification, residues and the splitting algorithm
// all work factor-by-factor.
struct QFactor {
  ScalarMonomial u;
  ExpVec w;  // generator exponents; all zero when no class part
  int k = 1;

  bool has_class_part() const {
    for (int e : w)
      if (e != 0) return true;
    return false;
  }

  QFactor adams(long n) const {
    return {u.adams(n), scale_w(n), static_cast<int>(k * n)};
  }
  // q -> zeta * q^l
  QFactor subst_q(const Cyclo& zeta, long l) const {
    QFactor f = *this;
    f.u.coef = f.u.coef * zeta.pow(k);
    f.k = static_cast<int>(k * l);
    return f;
  }

  ExpVec scale_w(long n) const {
    ExpVec r = w;
    for (auto& e : r) e = static_cast<int>(e * n);
    return r;
  }

  std::string to_string() const {
    std::string s = "(1-" + u.to_string();
    for (size_t i = 0; i < w.size(); ++i)
      if (w[i] != 0) s += "*g" + std::to_string(i + 1) + "^" + std::to_string(w[i]);
    if (k != 0) s += "*q^" + std::to_string(k);
    return s + ")";
  }

  friend bool operator==(const QFactor& a, const QFactor& b) {
    return a.k == b.k && a.w == b.w && a.u == b.u;
  }
  friend bool operator<(const QFactor& a, const QFactor& b) {
    if (a.k != b.k) return a.k < b.k;
    if (a.w != b.w) return a.w < b.w;
    if (a.u.mono != b.u.mono) return a.u.mono < b.u.mono;
    return a.u.coef < b.u.coef;
  }
};

using FactorSet = std::map<QFactor, int>;

// Rational function in q: a Laurent-polynomial numerator with KClass
// coefficients over a factored denominator.  Scalar-only denominators
// (elements of the localized set T) live inside the coefficients, so den_
// carries genuinely q- or class-dependent factors only.
class QRational {
 public:
  QRational() = default;
  explicit QRational(ModelPtr model) : model_(std::move(model)) {}
  QRational(ModelPtr model, const KClass& constant) : model_(std::move(model)) {
    set_num_term(0, constant);
  }

  static QRational zero(const ModelPtr& m) { return QRational(m); }
  static QRational one(const ModelPtr& m) { return QRational(m, KClass::unit(m)); }
  static QRational monomial(const ModelPtr& m, int e, const KClass& c) {
    QRational r(m);
    r.set_num_term(e, c);
    return r;
  }
  // 1 - q
  static QRational one_minus_q(const ModelPtr& m) {
    QRational r = one(m);
    r.set_num_term(1, -KClass::unit(m));
    return r;
  }

  const ModelPtr& model() const { return model_; }
  const std::map<int, KClass>& num() const { return num_; }
  const FactorSet& den() const { return den_; }

  bool is_zero() const { return num_.empty(); }

  void set_num_term(int e, const KClass& c) {
    if (c.is_zero())
      num_.erase(e);
    else
      num_[e] = c;
  }
  void add_num_term(int e, const KClass& c) {
    auto it = num_.find(e);
    if (it == num_.end()) {
      set_num_term(e, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) num_.erase(it);
  }

  int num_min_deg() const { return num_.empty() ? 0 : num_.begin()->first; }
  int num_max_deg() const { return num_.empty() ? 0 : std::prev(num_.end())->first; }
  long den_q_degree() const {
    long d = 0;
    for (const auto& [f, m] : den_) d += static_cast<long>(f.k) * m;
    return d;
  }

  // ---- multiplicative structure ------------------------------------------

  QRational& mul_scalar(const Scalar& s) {
    if (s.is_zero()) {
      num_.clear();
      den_.clear();
      return *this;
    }
    for (auto& [e, c] : num_) c = s * c;
    return *this;
  }
  QRational& mul_class(const KClass& c) {
    std::map<int, KClass> out;
    for (auto& [e, x] : num_) {
      KClass y = c * x;
      if (!y.is_zero()) out[e] = y;
    }
    num_ = std::move(out);
    return *this;
  }
  QRational& mul_qpow(int s) {
    if (s == 0) return *this;
    std::map<int, KClass> out;
    for (auto& [e, c] : num_) out[e + s] = c;
    num_ = std::move(out);
    return *this;
  }

  // numerator multiplication by (1 - u W q^k)
  QRational& mul_factor(const QFactor& f) {
    KClass fc = factor_class(model_, f);
    std::map<int, KClass> out = num_;
    for (const auto& [e, c] : num_) {
      KClass t = -(fc * c);
      auto it = out.find(e + f.k);
      if (it == out.end()) {
        if (!t.is_zero()) out[e + f.k] = t;
      } else {
        it->second += t;
        if (it->second.is_zero()) out.erase(it);
      }
    }
    num_ = std::move(out);
    return *this;
  }

  // denominator multiplication by (1 - u W q^k), canonicalizing so stored
  // factors keep k >= 1 (k = 0 with a class part is expanded by normalize;
  // k = 0 scalar factors join the coefficient ring denominators)
  QRational& div_factor(QFactor f, int mult = 1) {
    if (mult == 0 || is_zero()) return *this;
    if (mult < 0) {
      for (int i = 0; i < -mult; ++i) mul_factor(f);
      return *this;
    }
    if (f.u.coef.is_zero()) return *this;  // factor is 1
    if (f.k == 0) {
      // q-free factor: an invertible class of the localized ring, resolved
      // outright so stored factors always carry a genuine q-power
      KClass fv = KClass::unit(model_) - factor_class(model_, f);
      if (!fv.is_invertible()) throw NonInvertibleDenominator("factor " + f.to_string());
      KClass inv = fv.inverse();
      for (int i = 0; i < mult; ++i) mul_class(inv);
      return *this;
    }
    if (f.k < 0 && f.u.mono.trivial()) {
      // (1 - uWq^k) = (-uWq^k) (1 - u^{-1} W^{-1} q^{-k}); rewriting is safe
      // exactly when u carries no parameters, so coefficient-ring membership
      // of the numerator is unaffected by the extracted unit
      ScalarMonomial unit_inv = f.u.inverse();
      KClass adj = Scalar(-Cyclo::one()) *
                   (Scalar(unit_inv) * KClass::line_monomial(model_, negate(f.w)));
      for (int i = 0; i < mult; ++i) {
        mul_class(adj);
        mul_qpow(-f.k);
      }
      f = QFactor{f.u.inverse(), negate(f.w), -f.k};
    }
    den_[f] += mult;
    return *this;
  }

  friend QRational operator*(const QRational& a, const QRational& b) {
    a.check(b);
    QRational r(a.model_);
    for (const auto& [ea, ca] : a.num_)
      for (const auto& [eb, cb] : b.num_) r.add_num_term(ea + eb, ca * cb);
    r.den_ = a.den_;
    for (const auto& [f, m] : b.den_) r.den_[f] += m;
    if (r.is_zero()) r.den_.clear();
    return r;
  }

  friend QRational operator+(const QRational& a, const QRational& b) {
    a.check(b);
    QRational r(a.model_);
    r.den_ = a.den_;
    for (const auto& [f, m] : b.den_) {
      int have = r.den_.count(f) ? r.den_[f] : 0;
      r.den_[f] = std::max(have, m);
    }
    QRational ea = a, eb = b;
    ea.multiply_complement(r.den_);
    eb.multiply_complement(r.den_);
    r.num_ = ea.num_;
    for (const auto& [e, c] : eb.num_) r.add_num_term(e, c);
    if (r.is_zero()) r.den_.clear();
    return r;
  }
  friend QRational operator-(const QRational& a, const QRational& b) { return a + (-b); }
  QRational operator-() const {
    QRational r = *this;
    for (auto& [e, c] : r.num_) c = -c;
    return r;
  }
  QRational& operator+=(const QRational& b) { return *this = *this + b; }
  QRational& operator*=(const QRational& b) { return *this = *this * b; }

  friend bool operator==(const QRational& a, const QRational& b) {
    return (a - b).is_zero();
  }
  friend bool operator!=(const QRational& a, const QRational& b) { return !(a == b); }

  // ---- normal form --------------------------------------------------------

  // Clears K-ring content from denominator factors through the finite
  // geometric expansion 1/(1-Pq^s) = sum_r q^{sr} (P-1)^r / (1-q^s)^{r+1};
  // the sum terminates by nilpotency.  Fixed-point models resolve the class
  // part per vertex instead, so factors there are left untouched.
  QRational normalized() const {
    QRational r = *this;
    if (model_->mode != KRingModel::Mode::Presentation) return r;
    while (true) {
      auto it = std::find_if(r.den_.begin(), r.den_.end(),
                             [](const auto& fm) { return fm.first.has_class_part(); });
      if (it == r.den_.end()) break;
      QFactor f = it->first;
      int mult = it->second;
      r.den_.erase(it);

      KClass w = KClass::line_monomial(model_, f.w);
      Scalar ws = w.scalar_part();
      if (ws.is_zero()) throw NonInvertibleDenominator("class part " + f.to_string());
      KClass n = w.nilpotent_part();
      // 1/(1 - u q^k (ws + n)) with s := u*ws scalar and nilpotent tail
      ScalarMonomial us = f.u;
      if (!ws.is_monomial())
        throw NonInvertibleDenominator("non-monomial scalar part in " + f.to_string());
      us = us * ws.as_monomial();
      // collect nilpotency order
      std::vector<KClass> powers{KClass::unit(model_)};
      KClass p = KClass::unit(model_);
      while (true) {
        p = p * n;
        if (p.is_zero()) break;
        powers.push_back(p);
      }
      size_t nu = powers.size();
      QFactor base{us, ExpVec(model_->rank(), 0), f.k};
      for (int rep = 0; rep < mult; ++rep) {
        QRational expanded(model_);
        for (size_t rr = 0; rr < nu; ++rr) {
          QRational term(model_, powers[rr]);
          term.mul_scalar(Scalar(ScalarMonomial{f.u.coef, f.u.mono}.pow(rr)));
          term.mul_qpow(static_cast<int>(rr) * f.k);
          for (size_t rem = 0; rem < nu - 1 - rr; ++rem) term.mul_factor(base);
          expanded = expanded + term;
        }
        r = r * expanded;
        for (size_t rr = 0; rr < nu; ++rr) r.div_factor(base);
      }
    }
    r.simplify();
    return r;
  }

  // Cancels denominator factors that divide the numerator exactly.
  void simplify() {
    if (is_zero()) {
      den_.clear();
      return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
      bool all = false;
      while (it->second > 0) {
        auto q = divide_num(it->first);
        if (!q) break;
        num_ = std::move(*q);
        --it->second;
        all = num_.empty();
      }
      if (it->second == 0)
        it = den_.erase(it);
      else
        ++it;
      if (all) break;
    }
  }

  // Serialization normal form: class parts cleared, cancellations applied,
  // every stored factor rewritten with a positive q-power.  Equal rational
  // functions built along different routes serialize to identical bytes.
  QRational canonical_form() const {
    QRational r = normalized();
    r.simplify();
    QRational out(r.model_);
    out.num_ = r.num_;
    for (const auto& [f, m] : r.den_) {
      if (f.k >= 1) {
        out.den_[f] += m;
        continue;
      }
      ScalarMonomial unit_inv = f.u.inverse();
      KClass adj = Scalar(-Cyclo::one()) *
                   (Scalar(unit_inv) * KClass::line_monomial(r.model_, negate(f.w)));
      for (int i = 0; i < m; ++i) {
        out.mul_class(adj);
        out.mul_qpow(-f.k);
      }
      out.den_[QFactor{f.u.inverse(), negate(f.w), -f.k}] += m;
    }
    out.simplify();
    return out;
  }

  // ---- ring maps ----------------------------------------------------------

  QRational adams(long n) const {
    QRational r(model_);
    for (const auto& [e, c] : num_) r.add_num_term(static_cast<int>(e * n), c.adams(n));
    for (const auto& [f, m] : den_) r.div_factor(f.adams(n), m);
    return r;
  }

  // q -> zeta q^l
  QRational subst_q(const Cyclo& zeta, long l) const {
    QRational r(model_);
    for (const auto& [e, c] : num_) {
      KClass cc = Scalar(zeta.pow(e)) * c;
      r.add_num_term(static_cast<int>(e * l), cc);
    }
    for (const auto& [f, m] : den_) r.div_factor(f.subst_q(zeta, l), m);
    return r;
  }

  QRational substitute(const ParamAssignment& a) const {
    QRational r(model_);
    for (const auto& [e, c] : num_) r.add_num_term(e, c.substitute(a));
    for (const auto& [f, m] : den_) {
      QFactor g = f;
      ParamPolynomial img = ParamPolynomial::monomial(g.u).substitute(a);
      if (img.is_zero()) {
        g.u.coef = Cyclo::zero();
      } else {
        if (!img.is_monomial())
          throw std::domain_error("substitute: factor coefficient not monomial");
        g.u = img.leading_monomial();
      }
      r.div_factor(g, m);
    }
    return r;
  }

  QRational rescale(const std::function<bool(const std::string&)>& affected, int k) const {
    QRational r(model_);
    for (const auto& [e, c] : num_) r.add_num_term(e, c.rescale(affected, k));
    for (const auto& [f, m] : den_) {
      QFactor g = f;
      Scalar s = Scalar(g.u).rescale(affected, k);
      g.u = s.as_monomial();
      r.div_factor(g, m);
    }
    return r;
  }

  // Exact value at q = point (a scalar monomial); throws when evaluating on a
  // pole.
  KClass evaluate(const ScalarMonomial& point) const {
    KClass acc = KClass::zero(model_);
    for (const auto& [e, c] : num_) acc = acc + Scalar(point.pow(e)) * c;
    for (const auto& [f, m] : den_) {
      KClass fv = KClass::unit(model_) -
                  Scalar(f.u * point.pow(f.k)) * KClass::line_monomial(model_, f.w);
      if (!fv.is_invertible())
        throw std::domain_error("evaluate: pole at q = " + point.to_string());
      KClass inv = fv.inverse();
      for (int i = 0; i < m; ++i) acc = acc * inv;
    }
    return acc;
  }

  bool depends_on(const std::string& name) const {
    for (const auto& [e, c] : num_)
      for (const auto& s : c.coeffs())
        if (s.depends_on(name)) return true;
    for (const auto& [f, m] : den_)
      if (f.u.mono.exponent(name) != 0) return true;
    return false;
  }

  static KClass factor_class(const ModelPtr& m, const QFactor& f) {
    return Scalar(f.u) * KClass::line_monomial(m, f.w);
  }

  // Restriction to one fixed point: coefficients collapse to their alpha
  // component and class parts of factors merge into the scalar coefficient.
  QRational restrict_vertex(size_t alpha, const ModelPtr& pt_model) const {
    if (model_->mode != KRingModel::Mode::FixedPoint)
      throw std::domain_error("restrict_vertex: fixed-point model required");
    QRational r(pt_model);
    for (const auto& [e, c] : num_)
      r.add_num_term(e, KClass::scalar(pt_model, c.coeffs()[alpha]));
    for (const auto& [f, m] : den_) {
      ScalarMonomial u = f.u;
      for (size_t i = 0; i < f.w.size(); ++i)
        u = u * model_->vertices[alpha].gen_restriction[i].pow(f.w[i]);
      r.div_factor(QFactor{u, ExpVec(pt_model->rank(), 0), f.k}, m);
    }
    return r;
  }

  void check(const QRational& o) const {
    if (model_.get() != o.model_.get()) throw ModelMismatch();
  }

  std::string to_string() const {
    std::string s = "[";
    bool first = true;
    for (const auto& [e, c] : num_) {
      if (!first) s += " + ";
      first = false;
      s += "q^" + std::to_string(e) + "*(..)";
    }
    s += "]";
    for (const auto& [f, m] : den_) {
      s += "/" + f.to_string();
      if (m > 1) s += "^" + std::to_string(m);
    }
    return s;
  }

 private:
  static ExpVec negate(const ExpVec& w) {
    ExpVec r = w;
    for (auto& e : r) e = -e;
    return r;
  }

  void multiply_complement(const FactorSet& target) {
    for (const auto& [f, m] : target) {
      int have = den_.count(f) ? den_.at(f) : 0;
      for (int i = 0; i < m - have; ++i) mul_factor(f);
    }
    den_ = target;
  }

  // numerator / (1 - uWq^k), exact or nullopt; k > 0 divides from the top
  // degree, k < 0 from the bottom, pivoting on the invertible -uW term.
  std::optional<std::map<int, KClass>> divide_num(const QFactor& f) const {
    if (num_.empty()) return num_;
    if (f.k == 0) return std::nullopt;
    KClass lead = factor_class(model_, f);  // coefficient of q^k is -lead
    if (!lead.is_invertible()) return std::nullopt;
    KClass lead_inv = lead.inverse();
    std::map<int, KClass> rem = num_, quot;
    const int minn = num_min_deg(), maxn = num_max_deg();
    while (!rem.empty()) {
      auto ext = f.k > 0 ? std::prev(rem.end()) : rem.begin();
      int e = ext->first;
      if (f.k > 0 ? (e - f.k < minn) : (e - f.k > maxn)) return std::nullopt;
      KClass c = -(lead_inv * ext->second);
      // quotient term c q^{e-k}; subtract c q^{e-k} (1 - lead q^k)
      quot[e - f.k] = c;
      rem.erase(ext);
      auto other = rem.find(e - f.k);
      KClass nv = (other == rem.end() ? KClass::zero(model_) : other->second) - c;
      if (other != rem.end()) rem.erase(other);
      if (!nv.is_zero()) rem[e - f.k] = nv;
    }
    return quot;
  }

  ModelPtr model_;
  std::map<int, KClass> num_;
  FactorSet den_;
};

}  // namespace qkcone

#endif
