// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_RESIDUE_HPP
#define QKCONE_RESIDUE_HPP

#include "qkcone/polarize.hpp"

namespace qkcone {

namespace detail {

// Truncated power series in t = q - point with KClass coefficients.
struct TSeries {
  std::vector<KClass> c;

  static TSeries zero(const ModelPtr& m, size_t order) {
    return {std::vector<KClass>(order, KClass::zero(m))};
  }
  TSeries mul(const TSeries& o, const ModelPtr& m) const {
    TSeries r = zero(m, c.size());
    for (size_t i = 0; i < c.size(); ++i) {
      if (c[i].is_zero()) continue;
      for (size_t j = 0; i + j < c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    }
    return r;
  }
};

// Series of sum_i binom(e, i) point^{e-i} t^i = (point + t)^e, any sign of e.
inline std::vector<Scalar> binomial_series(const ScalarMonomial& point, long e, size_t order) {
  std::vector<Scalar> out;
  for (size_t i = 0; i < order; ++i) {
    Scalar term = Scalar(Rational(binomial(e, static_cast<long>(i)))) *
                  Scalar(point.pow(e - static_cast<long>(i)));
    out.push_back(term);
  }
  return out;
}

inline std::vector<Scalar> invert_scalar_series(const std::vector<Scalar>& d) {
  Scalar lead_inv = d[0].inverse();
  std::vector<Scalar> inv(d.size(), Scalar::zero());
  inv[0] = lead_inv;
  for (size_t i = 1; i < d.size(); ++i) {
    Scalar acc = Scalar::zero();
    for (size_t j = 1; j <= i; ++j) acc += d[j] * inv[i - j];
    inv[i] = -(lead_inv * acc);
  }
  return inv;
}

}  // namespace detail

inline bool factor_vanishes_at(const QFactor& f, const ScalarMonomial& point) {
  if (f.has_class_part()) return false;
  return (f.u * point.pow(f.k)).is_one();
}

// Coefficients of (q - point)^{-r} .. (q - point)^{-1} in the Laurent
// development of f dq/q at q = point; empty when regular there.  The input
// must be normalized.  Exact for poles of any order.
inline std::vector<KClass> residue_principal_part(const QRational& input,
                                                  const ScalarMonomial& point) {
  QRational f = input.normalized();
  const ModelPtr& m = f.model();
  size_t r = 0;
  for (const auto& [fac, mult] : f.den())
    if (factor_vanishes_at(fac, point)) r += static_cast<size_t>(mult);
  if (r == 0 || f.is_zero()) return {};

  detail::TSeries acc = detail::TSeries::zero(m, r);
  for (const auto& [e, c] : f.num()) {
    auto bs = detail::binomial_series(point, e, r);
    for (size_t i = 0; i < r; ++i) acc.c[i] += bs[i] * c;
  }

  for (const auto& [fac, mult] : f.den()) {
    // 1 - u (point + t)^k, coefficient of t^i
    std::vector<Scalar> d;
    auto bs = detail::binomial_series(point, fac.k, r + 1);
    for (size_t i = 0; i <= r; ++i) {
      Scalar v = -(Scalar(fac.u) * bs[i]);
      if (i == 0) v += Scalar::one();
      d.push_back(v);
    }
    bool vanishes = factor_vanishes_at(fac, point);
    std::vector<Scalar> unit;
    if (vanishes)
      unit.assign(d.begin() + 1, d.end());  // factor = t * unit(t)
    else
      unit.assign(d.begin(), d.end() - 1);
    auto inv = detail::invert_scalar_series(unit);
    for (int rep = 0; rep < mult; ++rep) {
      detail::TSeries s = detail::TSeries::zero(m, r);
      for (size_t i = 0; i < r; ++i) s.c[i] = inv[i] * KClass::unit(m);
      acc = acc.mul(s, m);
    }
  }

  // the dq/q part: 1/(point + t)
  {
    auto bs = detail::binomial_series(point, -1, r);
    detail::TSeries s = detail::TSeries::zero(m, r);
    for (size_t i = 0; i < r; ++i) s.c[i] = bs[i] * KClass::unit(m);
    acc = acc.mul(s, m);
  }

  // acc[i] is the t^i coefficient of the regular part; dividing by t^r makes
  // acc[0] the (q-point)^{-r} coefficient and acc[r-1] the residue.
  return acc.c;
}

// Res_{q = point} f dq/q; zero at regular points.
inline KClass residue_at(const QRational& f, const ScalarMonomial& point) {
  auto pp = residue_principal_part(f, point);
  if (pp.empty()) return KClass::zero(f.model());
  return pp.back();
}

namespace detail {

// Distinct unit-root pole locations of a normalized rational function.
inline std::vector<Cyclo> unit_root_pole_points(const QRational& f) {
  std::vector<Cyclo> pts;
  for (const auto& [fac, mult] : f.den()) {
    if (!intrinsic_unit_root(fac)) continue;
    for (const auto& omega : kth_roots_of_unit_root(fac.u.coef, fac.k)) {
      Cyclo rho = omega.inverse();
      if (std::find(pts.begin(), pts.end(), rho) == pts.end()) pts.push_back(rho);
    }
  }
  return pts;
}

inline Scalar residues_at_unit_roots(const QRational& h) {
  Scalar total = Scalar::zero();
  for (const auto& rho : unit_root_pole_points(h)) {
    KClass res = residue_at(h, ScalarMonomial{rho, {}});
    total += res.coeffs()[0];
  }
  return total;
}

}  // namespace detail

// Omega(f, g) = Res_{q = roots of unity} <f(q^{-1}), g(q)> dq/q with the
// twisted Poincare pairing on coefficients.
inline Scalar symplectic_pair(const QRational& f, const QRational& g, const KClass& twist) {
  f.check(g);
  const ModelPtr& m = f.model();
  auto pt = KRingModel::point(m->rank());
  ModelPtr ptc = pt;

  if (m->mode == KRingModel::Mode::FixedPoint) {
    Scalar total = Scalar::zero();
    for (size_t a = 0; a < m->vertices.size(); ++a) {
      Scalar eu = Scalar::one();
      for (const auto& ch : m->vertices[a].tangent_chars)
        eu *= Scalar::one() - Scalar(ch.inverse());
      QRational fa = f.restrict_vertex(a, ptc).subst_q(Cyclo::one(), -1);
      QRational ga = g.restrict_vertex(a, ptc);
      QRational h = fa * ga;
      h.mul_scalar(twist.coeffs()[a] * eu.inverse());
      total += detail::residues_at_unit_roots(h.normalized());
    }
    return total;
  }

  QRational fn = f.normalized().subst_q(Cyclo::one(), -1);
  QRational gn = g.normalized();
  QRational h(ptc);
  for (const auto& [e1, c1] : fn.num())
    for (const auto& [e2, c2] : gn.num()) {
      Scalar s = pairing_scalar(c1, c2, twist);
      if (!s.is_zero()) h.add_num_term(e1 + e2, KClass::scalar(ptc, s));
    }
  for (const auto& [fac, mult] : fn.den())
    h.div_factor(QFactor{fac.u, ExpVec(ptc->rank(), 0), fac.k}, mult);
  for (const auto& [fac, mult] : gn.den())
    h.div_factor(QFactor{fac.u, ExpVec(ptc->rank(), 0), fac.k}, mult);
  return detail::residues_at_unit_roots(h);
}

}  // namespace qkcone

#endif
