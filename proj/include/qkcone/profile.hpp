// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_PROFILE_HPP
#define QKCONE_PROFILE_HPP

#include "qkcone/qrational.hpp"

namespace qkcone {

// How a parameter symbol enters the localized coefficient ring of a loop
// space variant:
//   ExpandAtZero  - denominators must be nonzero at the symbol -> 0
//                   (power-series-embeddable parameters; mu in K^mu, a and b
//                   in K^{a,b})
//   LocalizedUnit - the symbol is fully localized (mu in K(mu))
//   MonomialUnit  - only monomials in the symbol are units (K[mu,mu^{-1}])
//   CharAtOne     - equivariant character classified through its value at 1
//                   (the pullback-of-S_+ convention)
//   CharGeneric   - equivariant character kept generic (K~ variants)
enum class ParamTreatment { ExpandAtZero, LocalizedUnit, MonomialUnit, CharAtOne, CharGeneric };

// Gate on which non-unit-root factors are admissible input denominators:
// Min allows only powers of q, Max allows everything passing the unit-root
// test, PerParamFactor additionally requires each factor to involve a single
// parameter group (the K(mu)^{a,b} shape).
enum class SPlusMode { Min, Max, PerParamFactor };

enum class FactorClass { PlusAdmissible, UnitRootPole, Outside };
enum class Membership { PlusMember, MinusMember, Mixed, Outside };

struct LoopSpaceProfile {
  std::string name;
  std::map<std::string, ParamTreatment> params;
  SPlusMode splus = SPlusMode::Max;

  ParamTreatment treatment_of(const std::string& sym) const {
    auto it = params.find(sym);
    return it == params.end() ? ParamTreatment::LocalizedUnit : it->second;
  }

  bool is_char(const std::string& sym) const {
    auto t = treatment_of(sym);
    return t == ParamTreatment::CharAtOne || t == ParamTreatment::CharGeneric;
  }

  // S_+ = S_max over no parameters: rational functions of q with poles away
  // from roots of unity.
  static LoopSpaceProfile classic_rational(const std::string& nm = "K~") {
    return {nm, {}, SPlusMode::Max};
  }
  static LoopSpaceProfile classic_laurent(const std::string& nm = "K") {
    return {nm, {}, SPlusMode::Min};
  }
  static LoopSpaceProfile expanded(const std::vector<std::string>& syms,
                                   const std::string& nm) {
    LoopSpaceProfile p{nm, {}, SPlusMode::PerParamFactor};
    for (const auto& s : syms) p.params[s] = ParamTreatment::ExpandAtZero;
    return p;
  }
  static LoopSpaceProfile k_mu() {
    return expanded({std::string(kMu)}, "K^mu");
  }
  static LoopSpaceProfile k_of_mu() {
    return {"K(mu)", {{kMu, ParamTreatment::LocalizedUnit}}, SPlusMode::Max};
  }
  static LoopSpaceProfile k_mu_laurent() {
    return {"K[mu,mu^-1]", {{kMu, ParamTreatment::MonomialUnit}}, SPlusMode::Min};
  }
  static LoopSpaceProfile k_ab() { return expanded({"a", "b"}, "K^{a,b}"); }
  static LoopSpaceProfile k_of_mu_ab() {
    LoopSpaceProfile p{"K(mu)^{a,b}",
                       {{kMu, ParamTreatment::LocalizedUnit},
                        {"a", ParamTreatment::ExpandAtZero},
                        {"b", ParamTreatment::ExpandAtZero}},
                       SPlusMode::PerParamFactor};
    return p;
  }
  LoopSpaceProfile with_chars(const std::vector<std::string>& chars, bool at_one,
                              const std::string& suffix = "^G") const {
    LoopSpaceProfile p = *this;
    p.name += suffix;
    for (const auto& c : chars)
      p.params[c] = at_one ? ParamTreatment::CharAtOne : ParamTreatment::CharGeneric;
    return p;
  }
};

// Classification of a single denominator factor (1 - u W q^k) against a
// profile: a factor carries unit-root poles exactly when, after sending the
// expansion parameters to zero and the at-one characters to 1, its
// coefficient is a root of unity.
inline FactorClass classify_factor(const QFactor& f, const LoopSpaceProfile& profile) {
  if (f.has_class_part())
    throw std::domain_error("classify_factor: normalize before classification");
  bool param_part = false;
  std::vector<std::string> groups;
  for (const auto& [sym, e] : f.u.mono.exponents()) {
    switch (profile.treatment_of(sym)) {
      case ParamTreatment::ExpandAtZero:
        // either sign: the zero locus degenerates to q = 0 or infinity at
        // sym -> 0, never to a root of unity
        groups.push_back(sym);
        param_part = true;
        break;
      case ParamTreatment::CharAtOne:
        break;  // folded away at 1
      case ParamTreatment::MonomialUnit:
      case ParamTreatment::LocalizedUnit:
      case ParamTreatment::CharGeneric:
        param_part = true;
        groups.push_back(sym);
        break;
    }
  }
  if (param_part) {
    // u carries a parameter: no zero of q survives at a root of unity
    if (profile.splus == SPlusMode::Min) return FactorClass::Outside;
    if (profile.splus == SPlusMode::PerParamFactor) {
      std::sort(groups.begin(), groups.end());
      groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
      if (groups.size() > 1) return FactorClass::Outside;
    }
    return FactorClass::PlusAdmissible;
  }
  if (f.u.coef.as_root_of_unity()) return FactorClass::UnitRootPole;
  if (profile.splus == SPlusMode::Min) return FactorClass::Outside;
  return FactorClass::PlusAdmissible;
}

// Membership of a parameter-polynomial denominator factor in the localized
// set T of the profile.
inline bool t_member(const ParamPolynomial& factor, const LoopSpaceProfile& profile) {
  ParamAssignment zeros, ones;
  std::vector<std::string> expand_syms;
  bool has_monomial_unit_sym = false;
  for (const auto& [m, c] : factor.terms()) {
    for (const auto& [sym, e] : m.exponents()) {
      switch (profile.treatment_of(sym)) {
        case ParamTreatment::ExpandAtZero:
          zeros[sym] = ScalarMonomial{Cyclo::zero(), {}};
          expand_syms.push_back(sym);
          break;
        case ParamTreatment::CharAtOne:
          ones[sym] = ScalarMonomial::one();
          break;
        case ParamTreatment::MonomialUnit:
          has_monomial_unit_sym = true;
          break;
        default:
          break;
      }
    }
  }
  // stored factors are never monomials, so a MonomialUnit symbol cannot occur
  if (has_monomial_unit_sym) return false;
  std::sort(expand_syms.begin(), expand_syms.end());
  expand_syms.erase(std::unique(expand_syms.begin(), expand_syms.end()), expand_syms.end());
  if (expand_syms.size() > 1) return false;  // T factors over one parameter each
  ParamPolynomial v = factor;
  try {
    if (!zeros.empty()) v = v.substitute(zeros);
    if (!ones.empty()) v = v.substitute(ones);
  } catch (const std::domain_error&) {
    return false;
  }
  return !v.is_zero();
}

inline bool scalar_in_lambda(const Scalar& s, const LoopSpaceProfile& profile) {
  for (const auto& [f, m] : s.den())
    if (!t_member(f, profile)) return false;
  // expansion parameters admit no negative powers in the coefficient ring
  for (const auto& [m, c] : s.num().terms())
    for (const auto& [sym, e] : m.exponents())
      if (e < 0 && profile.treatment_of(sym) == ParamTreatment::ExpandAtZero) return false;
  return true;
}

struct MembershipReport {
  Membership verdict = Membership::PlusMember;
  std::vector<std::string> offenders;
};

// Full classification of a normalized rational function against a profile.
inline MembershipReport classify(const QRational& f, const LoopSpaceProfile& profile) {
  MembershipReport rep;
  if (f.is_zero()) return rep;
  bool has_plus = false, has_minus = false, outside = false;

  for (const auto& [e, c] : f.num())
    for (const auto& s : c.coeffs())
      if (!scalar_in_lambda(s, profile)) {
        outside = true;
        rep.offenders.push_back("coefficient " + s.to_string());
      }

  for (const auto& [fac, m] : f.den()) {
    switch (classify_factor(fac, profile)) {
      case FactorClass::PlusAdmissible:
        has_plus = true;
        break;
      case FactorClass::UnitRootPole:
        has_minus = true;
        break;
      case FactorClass::Outside:
        outside = true;
        rep.offenders.push_back("factor " + fac.to_string());
        break;
    }
  }

  bool reduced = !f.is_zero() && f.num_min_deg() >= 0 &&
                 static_cast<long>(f.num_max_deg()) < f.den_q_degree();
  if (outside) {
    rep.verdict = Membership::Outside;
  } else if (!has_minus) {
    rep.verdict = Membership::PlusMember;
  } else if (!has_plus && reduced) {
    rep.verdict = Membership::MinusMember;
  } else {
    rep.verdict = Membership::Mixed;
    if (has_minus && !has_plus && !reduced) rep.offenders.push_back("not reduced");
  }
  return rep;
}

enum class Side { Plus, Minus, Full };

inline bool member_of_side(const QRational& f, const LoopSpaceProfile& profile, Side side,
                           std::vector<std::string>* offenders = nullptr) {
  QRational g = f.normalized();
  MembershipReport rep = classify(g, profile);
  bool ok = false;
  switch (side) {
    case Side::Plus:
      ok = rep.verdict == Membership::PlusMember;
      break;
    case Side::Minus:
      ok = rep.verdict == Membership::MinusMember || f.is_zero();
      break;
    case Side::Full:
      ok = rep.verdict != Membership::Outside;
      break;
  }
  if (!ok && offenders) {
    *offenders = rep.offenders;
    // name the factors sitting on the wrong side of the split
    for (const auto& [fac, m] : g.den()) {
      FactorClass c = classify_factor(fac, profile);
      if ((side == Side::Plus && c == FactorClass::UnitRootPole) ||
          (side == Side::Minus && c == FactorClass::PlusAdmissible))
        offenders->push_back("factor " + fac.to_string());
    }
  }
  return ok;
}

}  // namespace qkcone

#endif
