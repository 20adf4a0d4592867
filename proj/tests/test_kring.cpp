// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "qkcone/kring.hpp"

using namespace qkcone;

namespace {
KClass xclass(const ModelPtr& m, int power = 1) {
  // x = P - 1
  KClass x = KClass::line_monomial(m, ExpVec{1}) - KClass::unit(m);
  return x.pow(power);
}
}  // namespace

TEST_CASE("P^1 presentation ring") {
  auto m = KRingModel::projective_space(1);
  ModelPtr mc = m;
  KClass one = KClass::unit(mc);
  KClass p = KClass::line_monomial(mc, ExpVec{1});

  // (1+x)(1+x) = 1+2x since x^2 = 0
  KClass sq = p * p;
  KClass expect = one + Scalar(Rational(2)) * xclass(mc);
  CHECK(sq == expect);
  CHECK(kclass_mul(sq, one) == sq);

  // Psi^2(P) = P^2 = 1 + 2x
  CHECK(kclass_adams(2, p) == expect);
  CHECK(kclass_adams(5, one) == one);

  // inverse of P is 1 - x
  CHECK(p.inverse() == one - xclass(mc));
  CHECK(p * p.inverse() == one);
}

TEST_CASE("pairings via trace table") {
  auto m = KRingModel::projective_space(1);
  ModelPtr mc = m;
  KClass one = KClass::unit(mc);
  // chi(P^1, O(-1)) = 0: P = 1 + x, chi(1) = 1, chi(x) = -1
  CHECK(pairing(KClass::line_monomial(mc, ExpVec{1}), one, one) == ParamPolynomial::zero());
  CHECK(pairing(one, one, one) == ParamPolynomial::one());

  auto pt = KRingModel::point(0);
  ModelPtr ptc = pt;
  CHECK(pairing(KClass::unit(ptc), KClass::unit(ptc), KClass::unit(ptc)) ==
        ParamPolynomial::one());
}

TEST_CASE("fixed-point localization on P^1") {
  auto m = KRingModel::projective_space_fixed_point(1);
  ModelPtr mc = m;
  KClass one = KClass::unit(mc);
  // chi(1) = 1/(1-t^{-1}) + 1/(1-t) = 1
  CHECK(pairing(one, one, one) == ParamPolynomial::one());
  // chi(P) = 0 with P|_0 = 1, P|_inf = t
  KClass p = KClass::line_monomial(mc, ExpVec{1});
  CHECK(pairing(p, one, one) == ParamPolynomial::zero());
  // componentwise product and Adams
  KClass p2 = kclass_adams(2, p);
  CHECK(p2 == p * p);
}

TEST_CASE("fixed-point localization on P^2 clears denominators") {
  auto m = KRingModel::projective_space_fixed_point(2);
  ModelPtr mc = m;
  KClass one = KClass::unit(mc);
  CHECK(pairing(one, one, one) == ParamPolynomial::one());
  KClass p = KClass::line_monomial(mc, ExpVec{1});
  CHECK(pairing(p, one, one) == ParamPolynomial::zero());
  CHECK(pairing(p, p, one) == ParamPolynomial::zero());
}

TEST_CASE("presentation vs fixed-point agreement for P^1 and P^2") {
  for (int n : {1, 2}) {
    auto mp = KRingModel::projective_space(n);
    auto mf = KRingModel::projective_space_fixed_point(n);
    ModelPtr mpc = mp, mfc = mf;
    ParamAssignment chars_to_one;
    for (int i = 1; i <= n; ++i) chars_to_one["t" + std::to_string(i)] = ScalarMonomial::one();
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        ParamPolynomial lhs = pairing(KClass::line_monomial(mpc, ExpVec{a}),
                                      KClass::line_monomial(mpc, ExpVec{b}),
                                      KClass::unit(mpc));
        ParamPolynomial rhs = pairing(KClass::line_monomial(mfc, ExpVec{a}),
                                      KClass::line_monomial(mfc, ExpVec{b}),
                                      KClass::unit(mfc))
                                  .substitute(chars_to_one);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("dual basis from exact Gram inversion") {
  for (bool fixed : {false, true}) {
    auto m = fixed ? KRingModel::projective_space_fixed_point(1)
                   : KRingModel::projective_space(1);
    ModelPtr mc = m;
    KClass twist = KClass::unit(mc);
    auto phis = model_basis_classes(mc);
    auto duals = dual_basis(mc, twist);
    for (size_t i = 0; i < phis.size(); ++i)
      for (size_t j = 0; j < duals.size(); ++j) {
        Scalar v = pairing_scalar(phis[i], duals[j], twist);
        CHECK(v == (i == j ? Scalar::one() : Scalar::zero()));
      }
  }
}

TEST_CASE("pairing symmetry") {
  auto m = KRingModel::projective_space(2);
  ModelPtr mc = m;
  KClass a = KClass::line_monomial(mc, ExpVec{2}) + xclass(mc, 2);
  KClass b = KClass::line_monomial(mc, ExpVec{-1});
  KClass f = KClass::unit(mc) + xclass(mc);
  CHECK(pairing(a, b, f) == pairing(b, a, f));
}

TEST_CASE("euler and det classes of bundle specs") {
  auto m = KRingModel::projective_space(1);
  ModelPtr mc = m;
  BundleSpec e;  // E^vee = P
  e.summands.push_back({1, ExpVec{1}, ScalarMonomial::one()});

  Scalar mu = Scalar::symbol(kMu);
  KClass p = KClass::line_monomial(mc, ExpVec{1});

  // Eu(mu^{-1} E) = 1 - mu P
  CHECK(euler_class(mc, e, MuMode::MuInvOnE) == KClass::unit(mc) - mu * p);
  // Eu(mu E^vee) = 1 - mu^{-1} P^{-1}
  CHECK(euler_class(mc, e, MuMode::MuOnEDual) ==
        KClass::unit(mc) - Scalar::symbol(kMu, -1) * p.inverse());
  // det^{-1}(mu^{-1} E) = mu P
  CHECK(det_class(mc, e, -1, MuMode::MuInvOnE) == mu * p);
  // power 0 is the unit
  CHECK(det_class(mc, e, 0, MuMode::MuInvOnE) == KClass::unit(mc));

  // rank-0 spec: empty product
  BundleSpec zero;
  CHECK(euler_class(mc, zero, MuMode::MuInvOnE) == KClass::unit(mc));

  // det^1(mu E^vee) for E^vee = f1 + f2 is mu^2 f1 f2
  auto m2 = KRingModel::product_of_projective({1, 1});
  ModelPtr m2c = m2;
  BundleSpec e2;
  e2.summands.push_back({1, ExpVec{1, 0}, ScalarMonomial::one()});
  e2.summands.push_back({1, ExpVec{0, 1}, ScalarMonomial::one()});
  KClass expect = Scalar::symbol(kMu, 2) * KClass::line_monomial(m2c, ExpVec{1, 1});
  CHECK(det_class(m2c, e2, 1, MuMode::MuOnEDual) == expect);
}

TEST_CASE("det and Euler-ratio relation") {
  // det^{-1}(mu^{-1} E) (-1)^{rank E} = Eu(mu^{-1}E) / Eu(mu E^vee)
  auto m = KRingModel::product_of_projective({1, 1});
  ModelPtr mc = m;
  for (int with_negative : {0, 1}) {
    BundleSpec e;
    e.summands.push_back({1, ExpVec{1, 0}, ScalarMonomial::one()});
    e.summands.push_back({with_negative ? -1 : 1, ExpVec{1, 1}, ScalarMonomial::one()});
    KClass lhs = det_class(mc, e, -1, MuMode::MuInvOnE);
    if (e.rank() % 2 != 0) lhs = Scalar(Rational(-1)) * lhs;
    KClass rhs = euler_class(mc, e, MuMode::MuInvOnE) *
                 euler_class(mc, e, MuMode::MuOnEDual).inverse();
    CHECK(lhs == rhs);
  }
}

TEST_CASE("model mismatch is rejected") {
  auto m1 = KRingModel::projective_space(1);
  auto m2 = KRingModel::projective_space(1);
  ModelPtr c1 = m1, c2 = m2;
  CHECK_THROWS_AS(KClass::unit(c1) * KClass::unit(c2), ModelMismatch);
}

TEST_CASE("degree pairing and first Chern data of bundle specs") {
  BundleSpec e;
  e.summands.push_back({1, ExpVec{1, 0}, ScalarMonomial::one()});
  e.summands.push_back({-1, ExpVec{2, 1}, ScalarMonomial::one()});
  CHECK(e.rank() == 0);
  CHECK(e.m_of(0, ExpVec{3, 5}) == 3);
  CHECK(e.m_of(1, ExpVec{3, 5}) == 11);
  auto c1 = e.c1();
  CHECK(c1 == std::vector<long>{1, 1});
  CHECK(e.c1_pair(ExpVec{3, 5}) == 3 - 11);
}
