// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_SERIES_HPP
#define QKCONE_SERIES_HPP

#include "qkcone/qrational.hpp"

namespace qkcone {

struct PoleAtExpansionPoint : std::domain_error {
  explicit PoleAtExpansionPoint(const std::string& what)
      : std::domain_error("PoleAtExpansionPoint: " + what) {}
};

// Truncated series in one expansion parameter with coefficients free of that
// parameter.  Keys are orders in sym^{dir} (dir = +1 expands at sym -> 0,
// dir = -1 in the inverse parameter); negative keys may appear transiently
// and must cancel by the end.
using ParamSeries = std::map<int, QRational>;

namespace detail {

inline void series_add_term(ParamSeries& s, int k, const QRational& v) {
  if (v.is_zero()) return;
  auto it = s.find(k);
  if (it == s.end()) {
    s[k] = v;
    return;
  }
  it->second += v;
  if (it->second.is_zero()) s.erase(it);
}

inline ParamSeries series_mul(const ParamSeries& a, const ParamSeries& b, int order) {
  ParamSeries r;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) {
      if (ka + kb > order) continue;
      series_add_term(r, ka + kb, va * vb);
    }
  return r;
}

inline void scalar_map_add(std::map<int, Scalar>& m, int k, const Scalar& v) {
  if (v.is_zero()) return;
  auto it = m.find(k);
  if (it == m.end()) {
    m[k] = v;
    return;
  }
  it->second += v;
  if (it->second.is_zero()) m.erase(it);
}

// Split one scalar into a series in sym^{dir}; coefficients free of sym.
inline std::map<int, Scalar> scalar_series(const Scalar& s, const std::string& sym, int dir,
                                           int order) {
  std::map<int, Scalar> out;
  for (const auto& [m, c] : s.num().terms()) {
    ParamMonomial rest = m * ParamMonomial::symbol(sym, -m.exponent(sym));
    scalar_map_add(out, dir * m.exponent(sym), Scalar(ScalarMonomial{c, rest}));
  }
  for (const auto& [f, mult] : s.den()) {
    // factor = sym^{dir v} (f0 + sum_{e>0} tails_e), f0 free of sym, nonzero
    int v = 0;
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
      int e = dir * m.exponent(sym);
      v = first ? e : std::min(v, e);
      first = false;
    }
    ParamPolynomial f0;
    std::map<int, ParamPolynomial> tails;
    for (const auto& [m, c] : f.terms()) {
      int e = dir * m.exponent(sym) - v;
      ParamMonomial rest = m * ParamMonomial::symbol(sym, -m.exponent(sym));
      if (e == 0)
        f0.add_term(rest, c);
      else
        tails[e].add_term(rest, c);
    }
    Scalar f0inv = Scalar::fraction(ParamPolynomial::one(), f0);
    int bound = order + std::abs(v) * (mult + 1) + 1;
    // 1/ghat = f0^{-1} sum_r (-f0^{-1} tail)^r, then shift keys by -v
    std::map<int, Scalar> inv{{-v, f0inv}};
    std::map<int, Scalar> pw{{0, Scalar::one()}};
    while (!pw.empty()) {
      std::map<int, Scalar> next;
      for (const auto& [k1, s1] : pw)
        for (const auto& [k2, p2] : tails) {
          if (k1 + k2 > bound) continue;
          scalar_map_add(next, k1 + k2, s1 * (-(f0inv * Scalar(p2))));
        }
      pw = std::move(next);
      for (const auto& [k, sv] : pw) scalar_map_add(inv, k - v, f0inv * sv);
    }
    for (int rep = 0; rep < mult; ++rep) {
      std::map<int, Scalar> acc;
      for (const auto& [k1, s1] : out)
        for (const auto& [k2, s2] : inv) scalar_map_add(acc, k1 + k2, s1 * s2);
      out = std::move(acc);
    }
  }
  return out;
}

}  // namespace detail

// Power-series expansion of a rational function in one parameter direction:
// sym at 0 when dir = +1, the inverse parameter when dir = -1.  Coefficients
// are rational functions of q free of sym.  Throws PoleAtExpansionPoint when
// negative orders survive.
inline ParamSeries taylor_embed(const QRational& input, const std::string& sym, int dir,
                                int order) {
  const ModelPtr& model = input.model();
  QRational f = input.normalized();
  ParamSeries acc{{0, QRational::one(model)}};

  // numerator
  ParamSeries nums;
  for (const auto& [e, c] : f.num()) {
    // expand each coefficient scalar
    std::map<int, KClass> by_order;
    for (size_t i = 0; i < c.coeffs().size(); ++i) {
      const Scalar& s = c.coeffs()[i];
      if (s.is_zero()) continue;
      for (const auto& [k, sv] : detail::scalar_series(s, sym, dir, order)) {
        auto it = by_order.find(k);
        if (it == by_order.end()) by_order[k] = KClass::zero(model);
        KClass unitv = KClass::zero(model);
        unitv.at(i) = sv;
        by_order[k] += unitv;
      }
    }
    for (const auto& [k, cls] : by_order)
      detail::series_add_term(nums, k, QRational::monomial(model, e, cls));
  }
  acc = nums;

  // denominator factors
  std::vector<std::pair<QFactor, int>> sym_free;
  for (const auto& [fac, mult] : f.den()) {
    int v = dir * fac.u.mono.exponent(sym);
    if (v == 0) {
      sym_free.emplace_back(fac, mult);
      continue;
    }
    QFactor g = fac;
    if (v < 0) {
      // (1 - uWq^k) = (-uWq^k)(1 - u'W'q^{-k}); the unit has positive order
      ScalarMonomial unit_inv = g.u.inverse();
      ExpVec wneg = g.w;
      for (auto& x : wneg) x = -x;
      QRational adj(model, Scalar(Cyclo(Rational(-1))) *
                               (Scalar(ScalarMonomial{unit_inv.coef,
                                                      unit_inv.mono *
                                                          ParamMonomial::symbol(
                                                              sym, -unit_inv.mono.exponent(sym))}) *
                                KClass::line_monomial(model, wneg)));
      adj.mul_qpow(-g.k);
      for (int rep = 0; rep < mult; ++rep) {
        ParamSeries unit_series;
        detail::series_add_term(unit_series, -v, adj);
        acc = detail::series_mul(acc, unit_series, order);
      }
      g = QFactor{g.u.inverse(), wneg, -g.k};
      v = -v;
    }
    // geometric series for 1/(1 - uWq^k) with ord(u) = v > 0
    ScalarMonomial stripped{g.u.coef,
                            g.u.mono * ParamMonomial::symbol(sym, -g.u.mono.exponent(sym))};
    ParamSeries geo;
    KClass base = Scalar(stripped) * KClass::line_monomial(model, g.w);
    QRational pw = QRational::one(model);
    for (int r = 0; r * v <= order; ++r) {
      detail::series_add_term(geo, r * v, pw);
      QRational nxt = pw;
      nxt.mul_class(base);
      nxt.mul_qpow(g.k);
      pw = nxt;
    }
    for (int rep = 0; rep < mult; ++rep) acc = detail::series_mul(acc, geo, order);
  }

  for (auto& [k, v] : acc) {
    for (const auto& [fac, mult] : sym_free) v.div_factor(fac, mult);
    v.simplify();
  }
  for (const auto& [k, v] : acc)
    if (k < 0 && !v.is_zero())
      throw PoleAtExpansionPoint(sym + (dir < 0 ? "^-1" : "") + " order " + std::to_string(k));
  ParamSeries out;
  for (const auto& [k, v] : acc)
    if (k >= 0 && !v.is_zero()) out[k] = v;
  return out;
}

// Expansion in two parameters, total degree truncation; keys are (order in
// sym1, order in sym2).
inline std::map<std::pair<int, int>, QRational> taylor_embed2(const QRational& f,
                                                              const std::string& sym1, int dir1,
                                                              const std::string& sym2, int dir2,
                                                              int order) {
  std::map<std::pair<int, int>, QRational> out;
  for (const auto& [k1, c1] : taylor_embed(f, sym1, dir1, order)) {
    for (const auto& [k2, c2] : taylor_embed(c1, sym2, dir2, order - k1)) {
      if (!c2.is_zero()) out[{k1, k2}] = c2;
    }
  }
  return out;
}

}  // namespace qkcone

#endif
