// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_PFD_HPP
#define QKCONE_PFD_HPP

#include "qkcone/series.hpp"

namespace qkcone {

struct NonTelescoping : std::domain_error {
  explicit NonTelescoping(const std::string& what)
      : std::domain_error("NonTelescoping: " + what) {}
};
struct NoPositiveValuation : std::domain_error {
  explicit NoPositiveValuation(const std::string& what)
      : std::domain_error("NoPositiveValuation: " + what) {}
};

// The supported pseudo-finite-difference operator shapes.  Each acts
// diagonally on Novikov degrees; the closed form is the telescoped product,
// the series form evaluates the defining exponential order by order in the
// expansion parameter(s).
//   Euler     : k-sum with q^k numerator over the bundle, parameter mu
//   DualEuler : the dual variant, expanding in mu^{-1}
//   D1, D2    : the two level-composition shapes, parameters (a, b)
//   FA, FB    : single log-type factors, parameters a resp. b
enum class PFDKind { Euler, DualEuler, D1, D2, FA, FB };

struct PFDSpec {
  PFDKind kind = PFDKind::Euler;
  BundleSpec bundle;
};

namespace detail {

// Walks s over the telescoped range: s = 1..m for m >= 0, and the inverted
// range s = m+1..0 for m < 0 (the product-over-an-empty-lower-limit
// convention; inverted factors land in the denominator).
inline void for_each_s(long m, const std::function<void(long s, bool inverted)>& fn) {
  if (m >= 0) {
    for (long s = 1; s <= m; ++s) fn(s, false);
  } else {
    for (long s = m + 1; s <= 0; ++s) fn(s, true);
  }
}

// sum_{s=1}^{m} q^{ks} as a Laurent polynomial, with the same convention
// (negative m yields minus the sum over s = m+1..0).
inline std::map<int, Rational> geometric_sum_q(long k, long m) {
  std::map<int, Rational> out;
  for_each_s(m, [&](long s, bool inverted) {
    out[static_cast<int>(k * s)] += Rational(inverted ? -1 : 1);
  });
  return out;
}

}  // namespace detail

// Closed (telescoped) degree-d multiplier of the operator.
inline QRational pfd_multiplier_closed(const ModelPtr& model, const PFDSpec& spec,
                                       const ExpVec& d) {
  const BundleSpec& b = spec.bundle;
  const int l = b.level;
  QRational r = QRational::one(model);
  auto mu = [&](int e) { return ParamMonomial::symbol(kMu, e); };
  for (size_t j = 0; j < b.summands.size(); ++j) {
    const auto& sm = b.summands[j];
    long m = b.m_of(j, d);
    switch (spec.kind) {
      case PFDKind::Euler:
        detail::for_each_s(m, [&](long s, bool inv) {
          QFactor f{ScalarMonomial{Cyclo::one(), mu(1)} * sm.weight, sm.e, static_cast<int>(s)};
          r.div_factor(f, (inv ? -1 : 1) * -sm.sign);  // sign>0 multiplies
        });
        break;
      case PFDKind::DualEuler:
        detail::for_each_s(m, [&](long s, bool inv) {
          QFactor f{ScalarMonomial{Cyclo::one(), mu(-1)} * sm.weight.inverse(),
                    QFactor{{}, sm.e, 0}.scale_w(-1), static_cast<int>(-s)};
          r.div_factor(f, (inv ? -1 : 1) * sm.sign);  // divides for sign>0
        });
        break;
      case PFDKind::D1:
      case PFDKind::D2: {
        long lo = spec.kind == PFDKind::D1 ? 1 : 0;
        long hi = spec.kind == PFDKind::D1 ? m : m - 1;
        // s from lo..hi with the same inversion convention
        long span = hi - lo + 1;
        auto emit = [&](long s, bool inv) {
          int e = (inv ? -1 : 1) * sm.sign;
          QFactor fb{ScalarMonomial{Cyclo::one(), ParamMonomial::symbol("b", 1)} *
                         sm.weight.inverse(),
                     QFactor{{}, sm.e, 0}.scale_w(-1), static_cast<int>(-s)};
          r.div_factor(fb, -l * e);
          QFactor fa{ScalarMonomial{Cyclo::one(), ParamMonomial::symbol("a", 1)} * sm.weight,
                     sm.e, static_cast<int>(s)};
          r.div_factor(fa, (l + 1) * e);
        };
        if (span >= 0) {
          for (long s = lo; s <= hi; ++s) emit(s, false);
        } else {
          for (long s = hi + 1; s <= lo - 1; ++s) emit(s, true);
        }
        break;
      }
      case PFDKind::FA: {
        QFactor f{ScalarMonomial{Cyclo::one(), ParamMonomial::symbol("a", 1)} * sm.weight,
                  sm.e, static_cast<int>(m)};
        r.div_factor(f, sm.sign);
        break;
      }
      case PFDKind::FB: {
        QFactor f{ScalarMonomial{Cyclo::one(), ParamMonomial::symbol("b", 1)} *
                      sm.weight.inverse(),
                  QFactor{{}, sm.e, 0}.scale_w(-1), static_cast<int>(-m)};
        r.div_factor(f, sm.sign);
        break;
      }
    }
  }
  return r;
}

// Series of the defining exponential, truncated at total order M in the
// expansion parameters.  Keys are (order in the first parameter, order in
// the second); single-parameter kinds use the first slot.
using PFDSeries = std::map<std::pair<int, int>, QRational>;

inline PFDSeries pfd_multiplier_series(const ModelPtr& model, const PFDSpec& spec,
                                       const ExpVec& d, int order) {
  if (order < 0) throw NoPositiveValuation("negative order");
  const BundleSpec& b = spec.bundle;
  const int l = b.level;

  // exponent terms: key -> Laurent-in-q class-valued coefficient
  std::map<std::pair<int, int>, QRational> expo;
  auto add = [&](int ka, int kb, const QRational& v) {
    if (v.is_zero()) return;
    auto key = std::make_pair(ka, kb);
    auto it = expo.find(key);
    if (it == expo.end())
      expo[key] = v;
    else {
      it->second += v;
      if (it->second.is_zero()) expo.erase(it);
    }
  };
  auto f_pow = [&](const BundleSummand& sm, long k) {
    return Scalar(sm.weight.adams(k)) * KClass::line_monomial(model, QFactor{{}, sm.e, 0}.scale_w(k));
  };
  auto qpoly = [&](const std::map<int, Rational>& p, const KClass& c) {
    QRational r(model);
    for (const auto& [e, coef] : p) r.add_num_term(e, Scalar(Rational(coef)) * c);
    return r;
  };

  for (size_t j = 0; j < b.summands.size(); ++j) {
    const auto& sm = b.summands[j];
    long m = b.m_of(j, d);
    for (long k = 1; k <= order; ++k) {
      Rational inv_k = rat(1) / Rational(k);
      switch (spec.kind) {
        case PFDKind::Euler:
          // -sign_j sum_k mu^k f_j^k (sum_{s=1..m} q^{ks}) / k
          add(static_cast<int>(k), 0,
              qpoly(detail::geometric_sum_q(k, m), f_pow(sm, k))
                  .mul_scalar(Scalar(Rational(-sm.sign) * inv_k)));
          break;
        case PFDKind::DualEuler:
          add(static_cast<int>(k), 0,
              qpoly(detail::geometric_sum_q(-k, m), f_pow(sm, -k))
                  .mul_scalar(Scalar(Rational(sm.sign) * inv_k)));
          break;
        case PFDKind::D1:
        case PFDKind::D2: {
          long shift = spec.kind == PFDKind::D2 ? -1 : 0;  // s ranges shifted by one
          auto gs_a = detail::geometric_sum_q(k, m + shift);
          auto gs_b = detail::geometric_sum_q(-k, m + shift);
          if (spec.kind == PFDKind::D2) {
            // s = 0..m-1: add the s = 0 term to the s = 1..m-1 range
            gs_a[0] += Rational(1);
            gs_b[0] += Rational(1);
          }
          add(static_cast<int>(k), 0,
              qpoly(gs_a, f_pow(sm, k))
                  .mul_scalar(Scalar(Rational((l + 1) * sm.sign) * inv_k)));
          add(0, static_cast<int>(k),
              qpoly(gs_b, f_pow(sm, -k))
                  .mul_scalar(Scalar(Rational(-l * sm.sign) * inv_k)));
          break;
        }
        case PFDKind::FA: {
          QRational t(model, f_pow(sm, k));
          t.mul_qpow(static_cast<int>(k * m));
          add(static_cast<int>(k), 0, t.mul_scalar(Scalar(Rational(sm.sign) * inv_k)));
          break;
        }
        case PFDKind::FB: {
          QRational t(model, f_pow(sm, -k));
          t.mul_qpow(static_cast<int>(-k * m));
          add(0, static_cast<int>(k), t.mul_scalar(Scalar(Rational(sm.sign) * inv_k)));
          break;
        }
      }
    }
  }

  // exp of the truncated exponent
  PFDSeries result{{{0, 0}, QRational::one(model)}};
  PFDSeries power{{{0, 0}, QRational::one(model)}};
  Rational factorial(1);
  for (int r = 1; r <= order; ++r) {
    PFDSeries next;
    for (const auto& [k1, v1] : power)
      for (const auto& [k2, v2] : expo) {
        int ka = k1.first + k2.first, kb = k1.second + k2.second;
        if (ka + kb > order) continue;
        QRational prod = v1 * v2;
        if (prod.is_zero()) continue;
        auto key = std::make_pair(ka, kb);
        auto it = next.find(key);
        if (it == next.end())
          next[key] = prod;
        else
          it->second += prod;
      }
    if (next.empty()) break;
    power = std::move(next);
    factorial *= Rational(r);
    for (const auto& [key, v] : power) {
      QRational t = v;
      t.mul_scalar(Scalar(Rational(1) / factorial));
      auto it = result.find(key);
      if (it == result.end())
        result[key] = t;
      else
        it->second += t;
    }
  }
  for (auto it = result.begin(); it != result.end();)
    it = it->second.is_zero() ? result.erase(it) : std::next(it);
  return result;
}

}  // namespace qkcone

#endif
