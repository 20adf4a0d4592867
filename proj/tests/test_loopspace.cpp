// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "qkcone/loopspace.hpp"
#include "qkcone/twists.hpp"

using namespace qkcone;

namespace {

ModelPtr p1() {
  static std::shared_ptr<KRingModel> m = KRingModel::projective_space(1);
  return m;
}

ScalarMonomial sym(const char* s, int e = 1) {
  return ScalarMonomial{Cyclo::one(), ParamMonomial::symbol(s, e)};
}

}  // namespace

TEST_CASE("profile membership of loop elements") {
  LoopElement j = LoopElement::origin(p1(), 3);
  auto rep = check_profile_membership(j, LoopSpaceProfile::k_of_mu(), Side::Plus);
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].ok);  // 1-q is a plus member of any profile

  // an entry with factor (1-mu q^{-1})^{-1} is plus: its coefficient at
  // (q,mu)=(zeta,0) is 1
  QRational f = QRational::one(p1());
  f.div_factor(QFactor{sym(kMu), ExpVec{0}, -1});
  LoopElement j2(p1(), 3);
  j2.set_entry(ExpVec{1}, f);
  auto rep2 = check_profile_membership(j2, LoopSpaceProfile::k_mu(), Side::Plus);
  CHECK(rep2[0].ok);

  // 1/(1-q) on the plus side reports the offender
  QRational g = QRational::one(p1());
  g.div_factor(QFactor{ScalarMonomial::one(), ExpVec{0}, 1});
  LoopElement j3(p1(), 3);
  j3.set_entry(ExpVec{1}, g);
  auto rep3 = check_profile_membership(j3, LoopSpaceProfile::k_mu(), Side::Plus);
  CHECK_FALSE(rep3[0].ok);
  CHECK_FALSE(rep3[0].offenders.empty());
}

TEST_CASE("novikov substitution acts degree-wise and composes") {
  LoopElement j(p1(), 3);
  j.set_entry(ExpVec{0}, QRational::one_minus_q(p1()));
  j.set_entry(ExpVec{1}, QRational::one(p1()));
  j.set_entry(ExpVec{2}, QRational::monomial(p1(), 1, KClass::unit(p1())));

  // Q -> Q(-q): entry at d=1 becomes -q
  NovikovSubstitution s1{{ScalarMonomial{Cyclo(Rational(-1)), {}}}, {1}};
  LoopElement r1 = novikov_substitute(j, s1);
  CHECK(r1.entry(ExpVec{1}) ==
        QRational::monomial(p1(), 1, Scalar(Rational(-1)) * KClass::unit(p1())));
  CHECK(r1.entry(ExpVec{0}) == j.entry(ExpVec{0}));

  // Q -> Q mu^2 at d=2 multiplies by mu^4
  NovikovSubstitution s2{{sym(kMu, 2)}, {0}};
  LoopElement r2 = novikov_substitute(j, s2);
  QRational expect = j.entry(ExpVec{2});
  expect.mul_scalar(Scalar::symbol(kMu, 4));
  CHECK(r2.entry(ExpVec{2}) == expect);

  // identity substitution and the group law
  NovikovSubstitution id = NovikovSubstitution::identity(1);
  CHECK(novikov_substitute(j, id) == j);
  LoopElement both = novikov_substitute(novikov_substitute(j, s1), s2);
  CHECK(both == novikov_substitute(j, s1.compose(s2)));
}

TEST_CASE("reduction of coefficients: worked examples") {
  // a->mu, b->mu^{-1} on (1-aqP)/(1-b q^{-1} P^{-1})
  QRational f = QRational::one(p1());
  f.mul_factor(QFactor{sym("a"), ExpVec{1}, 1});
  f.div_factor(QFactor{sym("b"), ExpVec{-1}, -1});
  LoopElement j(p1(), 2);
  j.set_entry(ExpVec{1}, f);

  ReductionMap step1{
      {{"a", sym(kMu)}, {"b", sym(kMu, -1)}},
      LoopSpaceProfile::k_ab(),
      LoopSpaceProfile::k_of_mu()};
  LoopElement r = reduce_coefficients(j, step1);

  QRational expect = QRational::one(p1());
  expect.mul_factor(QFactor{sym(kMu), ExpVec{1}, 1});
  expect.div_factor(QFactor{sym(kMu, -1), ExpVec{-1}, -1});
  CHECK(r.entry(ExpVec{1}) == expect);

  // mu -> 1 on (mu P)^2 q^3 gives P^2 q^3
  QRational g = QRational::monomial(
      p1(), 3, Scalar::symbol(kMu, 2) * KClass::line_monomial(p1(), ExpVec{2}));
  LoopElement j2(p1(), 2);
  j2.set_entry(ExpVec{2}, g);
  ReductionMap step2{{{kMu, ScalarMonomial::one()}},
                     LoopSpaceProfile::k_mu_laurent(),
                     LoopSpaceProfile::classic_laurent()};
  LoopElement r2 = reduce_coefficients(j2, step2);
  CHECK(r2.entry(ExpVec{2}) ==
        QRational::monomial(p1(), 3, KClass::line_monomial(p1(), ExpVec{2})));

  // the identity reduction changes nothing
  ReductionMap ident{{}, LoopSpaceProfile::k_of_mu(), LoopSpaceProfile::k_of_mu()};
  CHECK(reduce_coefficients(j, ident) == j);
}

TEST_CASE("reduction guards reject factors that leave their side") {
  // (1-mu q) is a plus factor of K(mu); under mu -> 1 it turns into the
  // unit-root factor (1-q), which InvalidReduction must flag
  QRational f = QRational::one(p1());
  f.div_factor(QFactor{sym(kMu), ExpVec{0}, 1});
  LoopElement j(p1(), 1);
  j.set_entry(ExpVec{1}, f);
  ReductionMap bad{{{kMu, ScalarMonomial::one()}},
                   LoopSpaceProfile::k_of_mu(),
                   LoopSpaceProfile::classic_rational()};
  CHECK_THROWS_AS(reduce_coefficients(j, bad), InvalidReduction);

  // an entry outside the source space is rejected up front: (1-mu q) is not
  // a K[mu,mu^{-1}] denominator
  ReductionMap bad2{{{kMu, ScalarMonomial::one()}},
                    LoopSpaceProfile::k_mu_laurent(),
                    LoopSpaceProfile::classic_laurent()};
  CHECK_THROWS_AS(reduce_coefficients(j, bad2), InvalidReduction);
}

TEST_CASE("reduction commutes with Adams and loop rotation on plus parts") {
  QRational f = QRational::one(p1());
  f.mul_factor(QFactor{sym("a"), ExpVec{1}, 1});
  f.div_factor(QFactor{sym("b", 1), ExpVec{0}, 2});
  ReductionMap pi{{{"a", sym(kMu)}, {"b", sym(kMu, -1)}},
                  LoopSpaceProfile::k_ab(),
                  LoopSpaceProfile::k_of_mu()};
  LoopElement j(p1(), 2);
  j.set_entry(ExpVec{1}, f);

  // pi(Psi^2 f) == Psi^2(pi f)
  LoopElement adams_first = reduce_coefficients(
      j.map_entries([](const ExpVec&, const QRational& g) { return g.adams(2); }), pi);
  LoopElement adams_last =
      reduce_coefficients(j, pi).map_entries(
          [](const ExpVec&, const QRational& g) { return g.adams(2); });
  CHECK(adams_first == adams_last);

  // pi(f(zeta q^2)) == (pi f)(zeta q^2)
  Cyclo zeta = Cyclo::root_of_unity(3, 1);
  LoopElement rot_first = reduce_coefficients(
      j.map_entries([&](const ExpVec&, const QRational& g) { return g.subst_q(zeta, 2); }),
      pi);
  LoopElement rot_last =
      reduce_coefficients(j, pi).map_entries(
          [&](const ExpVec&, const QRational& g) { return g.subst_q(zeta, 2); });
  CHECK(rot_first == rot_last);

  // plus membership is preserved degree by degree
  for (const auto& v :
       check_profile_membership(reduce_coefficients(j, pi), pi.target, Side::Plus))
    CHECK(v.ok);
}

TEST_CASE("reduction rejects coefficient denominators leaving T") {
  // a coefficient 1/(1-mu) is fine in K(mu) but has no image under mu -> 1
  Scalar c = (Scalar::one() - Scalar::symbol(kMu)).inverse();
  LoopElement j(p1(), 1);
  QRational f(p1(), c * KClass::unit(p1()));
  f.div_factor(QFactor{ScalarMonomial{Cyclo::one(), {}}, ExpVec{0}, 1});  // minus side
  j.set_entry(ExpVec{1}, f);
  ReductionMap pi{{{kMu, ScalarMonomial::one()}},
                  LoopSpaceProfile::k_of_mu(),
                  LoopSpaceProfile::classic_rational()};
  CHECK_THROWS_AS(reduce_coefficients(j, pi), InvalidReduction);
}
