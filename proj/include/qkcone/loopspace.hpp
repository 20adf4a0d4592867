// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_LOOPSPACE_HPP
#define QKCONE_LOOPSPACE_HPP

#include "qkcone/profile.hpp"

namespace qkcone {

struct InvalidReduction : std::domain_error {
  explicit InvalidReduction(const std::string& what)
      : std::domain_error("InvalidReduction: " + what) {}
};

inline long degree_total(const ExpVec& d) {
  long t = 0;
  for (int x : d) t += x;
  return t;
}

inline std::vector<ExpVec> all_degrees(size_t rank, int dmax) {
  std::vector<ExpVec> out;
  ExpVec cur(rank, 0);
  std::function<void(size_t, int)> rec = [&](size_t i, int left) {
    if (i == rank) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[i] = e;
      rec(i + 1, left - e);
    }
    cur[i] = 0;
  };
  rec(0, dmax);
  return out;
}

// Truncated point of the loop space: Novikov degree -> rational function,
// all degrees of total weight <= dmax.
class LoopElement {
 public:
  LoopElement() = default;
  LoopElement(ModelPtr model, int dmax, size_t novikov_rank)
      : model_(std::move(model)), dmax_(dmax), rank_(novikov_rank) {}
  LoopElement(ModelPtr model, int dmax)
      : model_(model), dmax_(dmax), rank_(model->rank()) {}

  // the base germ 1 - q at degree zero
  static LoopElement origin(const ModelPtr& m, int dmax) {
    LoopElement j(m, dmax);
    j.set_entry(ExpVec(m->rank(), 0), QRational::one_minus_q(m));
    return j;
  }

  const ModelPtr& model() const { return model_; }
  int dmax() const { return dmax_; }
  size_t rank() const { return rank_; }
  const std::map<ExpVec, QRational>& entries() const { return entries_; }

  void set_entry(const ExpVec& d, const QRational& f) {
    check_degree(d);
    if (f.is_zero())
      entries_.erase(d);
    else
      entries_[d] = f;
  }
  void add_entry(const ExpVec& d, const QRational& f) {
    check_degree(d);
    auto it = entries_.find(d);
    if (it == entries_.end()) {
      set_entry(d, f);
      return;
    }
    it->second += f;
    if (it->second.is_zero()) entries_.erase(it);
  }
  QRational entry(const ExpVec& d) const {
    auto it = entries_.find(d);
    return it == entries_.end() ? QRational::zero(model_) : it->second;
  }

  LoopElement map_entries(const std::function<QRational(const ExpVec&, const QRational&)>& fn)
      const {
    LoopElement out(model_, dmax_, rank_);
    for (const auto& [d, f] : entries_) out.set_entry(d, fn(d, f));
    return out;
  }

  LoopElement normalized() const {
    return map_entries([](const ExpVec&, const QRational& f) {
      QRational g = f.normalized();
      g.simplify();
      return g;
    });
  }

  friend bool operator==(const LoopElement& a, const LoopElement& b) {
    if (a.rank_ != b.rank_) return false;
    std::vector<ExpVec> keys;
    for (const auto& [d, f] : a.entries_) keys.push_back(d);
    for (const auto& [d, f] : b.entries_)
      if (std::find(keys.begin(), keys.end(), d) == keys.end()) keys.push_back(d);
    for (const auto& d : keys)
      if (a.entry(d) != b.entry(d)) return false;
    return true;
  }
  friend bool operator!=(const LoopElement& a, const LoopElement& b) { return !(a == b); }

 private:
  void check_degree(const ExpVec& d) const {
    if (d.size() != rank_) throw std::invalid_argument("degree rank mismatch");
    for (int x : d)
      if (x < 0) throw std::invalid_argument("negative Novikov degree");
    if (degree_total(d) > dmax_) throw std::invalid_argument("degree exceeds truncation");
  }

  ModelPtr model_;
  int dmax_ = 0;
  size_t rank_ = 0;
  std::map<ExpVec, QRational> entries_;
};

// The q-hypergeometric series conventionally attached to (products of)
// projective spaces, shipped as a CLI seed: entry at d is
// (1-q) / prod_i prod_{s=1}^{d_i} (1 - P_i q^s)^{n_i + 1}.
inline LoopElement seed_hypergeometric(const ModelPtr& m, int dmax) {
  if (m->mode != KRingModel::Mode::Presentation)
    throw std::invalid_argument("hypergeometric seed needs a presentation model");
  LoopElement j(m, dmax);
  for (const auto& d : all_degrees(m->rank(), dmax)) {
    QRational f = QRational::one_minus_q(m);
    for (size_t i = 0; i < m->rank(); ++i) {
      ExpVec w(m->rank(), 0);
      w[i] = 1;
      for (int s = 1; s <= d[i]; ++s)
        f.div_factor(QFactor{ScalarMonomial::one(), w, s}, m->bounds[i] + 1);
    }
    j.set_entry(d, f);
  }
  return j;
}

// Change of Novikov variables Q_i -> Q_i c_i q^{k_i}; acts degree-wise by
// multiplying the entry at d with prod_i (c_i q^{k_i})^{d_i}.
struct NovikovSubstitution {
  std::vector<ScalarMonomial> c;
  std::vector<int> k;

  static NovikovSubstitution identity(size_t n) {
    return {std::vector<ScalarMonomial>(n, ScalarMonomial::one()), std::vector<int>(n, 0)};
  }
  NovikovSubstitution compose(const NovikovSubstitution& o) const {
    NovikovSubstitution r = *this;
    for (size_t i = 0; i < c.size(); ++i) {
      r.c[i] = r.c[i] * o.c[i];
      r.k[i] += o.k[i];
    }
    return r;
  }
};

inline LoopElement novikov_substitute(const LoopElement& j, const NovikovSubstitution& sub) {
  if (sub.c.size() != j.rank()) throw std::invalid_argument("substitution rank mismatch");
  return j.map_entries([&](const ExpVec& d, const QRational& f) {
    QRational g = f;
    ScalarMonomial total = ScalarMonomial::one();
    int shift = 0;
    for (size_t i = 0; i < d.size(); ++i) {
      total = total * sub.c[i].pow(d[i]);
      shift += sub.k[i] * d[i];
    }
    g.mul_scalar(Scalar(total));
    g.mul_qpow(shift);
    return g;
  });
}

// Parameter substitution between loop-space profiles; the containment
// pi(T^1) in T^2 and pi (x) id (S^1_+) in S^2_+ is checked on every factor
// encountered, never assumed.
struct ReductionMap {
  ParamAssignment assignment;
  LoopSpaceProfile source;
  LoopSpaceProfile target;
};

namespace detail {

inline std::optional<QFactor> substitute_factor(const QFactor& f, const ParamAssignment& a) {
  ParamPolynomial img = ParamPolynomial::monomial(f.u).substitute(a);
  if (img.is_zero()) return std::nullopt;  // factor degenerates to 1
  if (!img.is_monomial())
    throw std::domain_error("factor coefficient must stay monomial under reduction");
  return QFactor{img.leading_monomial(), f.w, f.k};
}

}  // namespace detail

inline LoopElement reduce_coefficients(const LoopElement& j, const ReductionMap& pi) {
  return j.map_entries([&](const ExpVec& d, const QRational& raw) {
    QRational f = raw.normalized();
    f.simplify();
    // factor-wise guards
    for (const auto& [fac, mult] : f.den()) {
      FactorClass before = classify_factor(fac, pi.source);
      if (before == FactorClass::Outside)
        throw InvalidReduction("entry outside source space: " + fac.to_string());
      auto img = detail::substitute_factor(fac, pi.assignment);
      if (!img) continue;
      FactorClass after = classify_factor(*img, pi.target);
      bool ok = (before == FactorClass::PlusAdmissible &&
                 after == FactorClass::PlusAdmissible) ||
                (before == FactorClass::UnitRootPole && after == FactorClass::UnitRootPole);
      if (!ok)
        throw InvalidReduction("factor " + fac.to_string() + " maps outside its side");
    }
    for (const auto& [e, c] : f.num())
      for (const auto& s : c.coeffs()) {
        if (!scalar_in_lambda(s, pi.source))
          throw InvalidReduction("coefficient outside source ring: " + s.to_string());
        for (const auto& [den, mult] : s.den()) {
          ParamPolynomial img = den.substitute(pi.assignment);  // throws on zero
          if (img.is_zero() || !t_member(img, pi.target))
            throw InvalidReduction("coefficient denominator leaves T: " + den.to_string());
        }
      }
    QRational g = f.substitute(pi.assignment).normalized();
    g.simplify();
    std::vector<std::string> offenders;
    if (!member_of_side(g, pi.target, Side::Full, &offenders))
      throw InvalidReduction("image outside target space" +
                             (offenders.empty() ? std::string() : ": " + offenders[0]));
    return g;
  });
}

struct DegreeVerdict {
  ExpVec degree;
  bool ok = true;
  std::vector<std::string> offenders;
};

inline std::vector<DegreeVerdict> check_profile_membership(const LoopElement& j,
                                                           const LoopSpaceProfile& profile,
                                                           Side side) {
  std::vector<DegreeVerdict> out;
  for (const auto& [d, f] : j.entries()) {
    DegreeVerdict v;
    v.degree = d;
    v.ok = member_of_side(f, profile, side, &v.offenders);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace qkcone

#endif
