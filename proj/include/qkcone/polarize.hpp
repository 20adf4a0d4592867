// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_POLARIZE_HPP
#define QKCONE_POLARIZE_HPP

#include "qkcone/profile.hpp"

namespace qkcone {

struct MixedFactor : std::domain_error {
  explicit MixedFactor(const std::string& what) : std::domain_error("MixedFactor: " + what) {}
};

// Lagrangian splitting f = plus + minus: `plus` has no poles at roots of
// unity, `minus` is reduced with poles only at roots of unity and none at
// q = 0.  The decomposition is unique and exact.
struct PolarizationSplit {
  QRational plus;
  QRational minus;
};

namespace detail {

// (1 - u q^k) with u a root of unity splits into the linear unit-root
// factors prod over the k-th roots omega of u of (1 - omega q).
inline std::vector<Cyclo> kth_roots_of_unit_root(const Cyclo& u, int k) {
  auto ru = u.as_root_of_unity();
  if (!ru) throw MixedFactor("expected root-of-unity coefficient");
  auto [n, j] = *ru;
  std::vector<Cyclo> roots;
  for (int t = 0; t < k; ++t)
    roots.push_back(Cyclo::root_of_unity(n * k, j + n * t));
  return roots;
}

// Intrinsic (profile-free) unit-root test: generic parameters, so only
// parameter-free root-of-unity coefficients create unit-root poles.
inline bool intrinsic_unit_root(const QFactor& f) {
  return f.u.mono.trivial() && f.u.coef.as_root_of_unity().has_value();
}

// A small polynomial-in-q view with KClass coefficients, used by the
// splitting recursion for the product of the non-unit-root factors.
using QPoly = std::map<int, KClass>;

inline QPoly qpoly_mul_factor(const ModelPtr& m, const QPoly& p, const QFactor& f) {
  KClass fc = QRational::factor_class(m, f);
  QPoly out = p;
  for (const auto& [e, c] : p) {
    KClass t = -(fc * c);
    if (t.is_zero()) continue;
    auto it = out.find(e + f.k);
    if (it == out.end())
      out[e + f.k] = t;
    else {
      it->second += t;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

inline KClass qpoly_eval(const ModelPtr& m, const QPoly& p, const Cyclo& at) {
  KClass acc = KClass::zero(m);
  for (const auto& [e, c] : p) acc = acc + Scalar(at.pow(e)) * c;
  return acc;
}

}  // namespace detail

// Splitting by the factor-peeling induction: pick one unit-root linear
// factor (1 - omega q), Euclid-divide the numerator against the product G of
// the remaining admissible factors at the pole rho = omega^{-1}, deposit the
// constant-over-unit-root remainder on the minus side, recurse on the
// reduced-degree rest.  Higher-order poles peel the same factor repeatedly.
inline PolarizationSplit polarize(const QRational& input) {
  const ModelPtr& model = input.model();
  QRational f = input.normalized();
  PolarizationSplit out{QRational::zero(model), QRational::zero(model)};
  if (f.is_zero()) return out;

  // partition denominator factors
  std::vector<Cyclo> unit_linear;  // omega of (1 - omega q), with multiplicity
  FactorSet plus_factors;
  for (const auto& [fac, mult] : f.den()) {
    if (detail::intrinsic_unit_root(fac)) {
      auto roots = detail::kth_roots_of_unit_root(fac.u.coef, fac.k);
      for (int i = 0; i < mult; ++i)
        unit_linear.insert(unit_linear.end(), roots.begin(), roots.end());
    } else {
      plus_factors[fac] += mult;
    }
  }

  if (unit_linear.empty()) {
    out.plus = f;
    return out;
  }

  // numerator as an ordinary polynomial: num = q^{-shift} N(q)
  int shift = std::min(0, f.num_min_deg());
  detail::QPoly numer;
  for (const auto& [e, c] : f.num()) numer[e - shift] = c;

  // G = q^{-shift} * prod of plus factors, an ordinary polynomial
  detail::QPoly g{{-shift, KClass::unit(model)}};
  for (const auto& [fac, mult] : plus_factors)
    for (int i = 0; i < mult; ++i) g = detail::qpoly_mul_factor(model, g, fac);

  std::sort(unit_linear.begin(), unit_linear.end(),
            [](const Cyclo& a, const Cyclo& b) { return a < b; });

  std::vector<Cyclo> remaining = unit_linear;
  while (!remaining.empty()) {
    Cyclo omega = remaining.back();
    Cyclo rho = omega.inverse();  // pole location of (1 - omega q)

    KClass g_rho = detail::qpoly_eval(model, g, rho);
    if (!g_rho.is_invertible())
      throw MixedFactor("admissible factor vanishes at a root of unity");
    KClass g_rho_inv = g_rho.inverse();
    KClass n_rho = detail::qpoly_eval(model, numer, rho);

    // minus contribution N(rho)/G(rho) over the current unit-root product
    QRational term(model, n_rho * g_rho_inv);
    for (const auto& w : remaining)
      term.div_factor(QFactor{ScalarMonomial{w, {}}, ExpVec(model->rank(), 0), 1});
    out.minus += term;

    // A = (N G(rho) - N(rho) G) / (1 - omega q), exact; fold in G(rho)^{-1}
    detail::QPoly scaled;
    for (const auto& [e, c] : numer) scaled[e] = g_rho * c;
    for (const auto& [e, c] : g) {
      KClass t = n_rho * c;
      auto it = scaled.find(e);
      KClass nv = (it == scaled.end() ? KClass::zero(model) : it->second) - t;
      if (it != scaled.end()) scaled.erase(it);
      if (!nv.is_zero()) scaled[e] = nv;
    }
    // divide by (1 - omega q) from the top
    detail::QPoly quot;
    KClass lead = Scalar(ScalarMonomial{omega, {}}) * KClass::unit(model);
    KClass lead_inv = lead.inverse();
    while (!scaled.empty()) {
      auto top = std::prev(scaled.end());
      int e = top->first;
      if (e == 0) throw MixedFactor("splitting division left a remainder");
      KClass c = -(lead_inv * top->second);
      quot[e - 1] = c;
      scaled.erase(top);
      auto low = scaled.find(e - 1);
      KClass nv = (low == scaled.end() ? KClass::zero(model) : low->second) - c;
      if (low != scaled.end()) scaled.erase(low);
      if (!nv.is_zero()) scaled[e - 1] = nv;
    }
    numer.clear();
    for (const auto& [e, c] : quot) {
      KClass t = g_rho_inv * c;
      if (!t.is_zero()) numer[e] = t;
    }
    remaining.pop_back();
  }

  // what is left is the plus part A_final / (q^{-shift} prod plus factors)
  QRational plus(model);
  for (const auto& [e, c] : numer) plus.add_num_term(e + shift, c);
  for (const auto& [fac, mult] : plus_factors) plus.div_factor(fac, mult);
  plus.simplify();
  out.plus = plus;
  out.minus.simplify();
  return out;
}

}  // namespace qkcone

#endif
