// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "qkcone/polarize.hpp"
#include "qkcone/residue.hpp"
#include "qkcone/series.hpp"

using namespace qkcone;

namespace {

ModelPtr p1() {
  static std::shared_ptr<KRingModel> m = KRingModel::projective_space(1);
  return m;
}
ModelPtr pt() {
  static std::shared_ptr<KRingModel> m = KRingModel::point(0);
  return m;
}

QFactor unit_root_factor(const ModelPtr& m, long order, long j, int k = 1) {
  return QFactor{ScalarMonomial{Cyclo::root_of_unity(order, j), {}},
                 ExpVec(m->rank(), 0), k};
}
QFactor mu_factor(const ModelPtr& m, int k, int mu_exp = 1) {
  return QFactor{ScalarMonomial{Cyclo::one(), ParamMonomial::symbol(kMu, mu_exp)},
                 ExpVec(m->rank(), 0), k};
}

}  // namespace

TEST_CASE("normalize expands nilpotent denominators") {
  // 1/(1-Pq) = 1/(1-q) + q x/(1-q)^2 in K(P^1)
  QRational f = QRational::one(p1());
  f.div_factor(QFactor{ScalarMonomial::one(), ExpVec{1}, 1});
  QRational n = f.normalized();
  CHECK(n.den().size() == 1);
  CHECK(n.den().begin()->second == 2);

  QRational expect = QRational::one(p1());
  expect.div_factor(unit_root_factor(p1(), 1, 0));
  KClass x = KClass::line_monomial(p1(), ExpVec{1}) - KClass::unit(p1());
  QRational tail = QRational::monomial(p1(), 1, x);
  tail.div_factor(unit_root_factor(p1(), 1, 0), 2);
  expect += tail;
  CHECK(n == expect);
  CHECK(f == expect);  // equality sees through the normal form

  // 1/(1-q) has no nilpotent content
  QRational g = QRational::one(p1());
  g.div_factor(unit_root_factor(p1(), 1, 0));
  CHECK(g.normalized() == g);

  // 1/(1-mu P): same expansion in a parameter factor
  QRational h = QRational::one(p1());
  h.div_factor(QFactor{ScalarMonomial{Cyclo::one(), ParamMonomial::symbol(kMu, 1)},
                       ExpVec{1}, 0});
  QRational hn = h.normalized();
  Scalar one_minus_mu = Scalar::one() - Scalar::symbol(kMu);
  QRational hexpect(p1(), KClass::scalar(p1(), one_minus_mu.inverse()));
  QRational htail(p1(), Scalar(ScalarMonomial{Cyclo::one(), ParamMonomial::symbol(kMu, 1)}) *
                            ((one_minus_mu * one_minus_mu).inverse() * x));
  hexpect += htail;
  CHECK(hn == hexpect);
}

TEST_CASE("classification against profiles") {
  auto prof_mu = LoopSpaceProfile::k_mu();
  auto prof_kofmu = LoopSpaceProfile::k_of_mu();

  // 1/(1-mu q) is plus under K^mu
  QRational f = QRational::one(pt());
  f.div_factor(mu_factor(pt(), 1));
  CHECK(member_of_side(f, prof_mu, Side::Plus));
  CHECK(member_of_side(f, prof_kofmu, Side::Plus));

  // 1/(1-q)^2 is a minus member
  QRational g = QRational::one(pt());
  g.div_factor(unit_root_factor(pt(), 1, 0), 2);
  CHECK(member_of_side(g, prof_mu, Side::Minus));
  CHECK_FALSE(member_of_side(g, prof_mu, Side::Plus));

  // 1/(1-lambda q^2) under the equivariant pullback profile is outside the
  // plus side: its limit has unit-root poles
  auto prof_g = LoopSpaceProfile::classic_rational().with_chars({"l"}, true);
  QRational h = QRational::one(pt());
  h.div_factor(QFactor{ScalarMonomial{Cyclo::one(), ParamMonomial::symbol("l", 1)},
                       ExpVec{}, 2});
  CHECK_FALSE(member_of_side(h, prof_g, Side::Plus));
  CHECK(member_of_side(h, prof_g, Side::Minus));
  // under the generic-character profile it is a plus member
  auto prof_generic = LoopSpaceProfile::classic_rational().with_chars({"l"}, false);
  CHECK(member_of_side(h, prof_generic, Side::Plus));

  // Laurent polynomials are plus everywhere, even under S_min
  QRational lp = QRational::monomial(pt(), -2, KClass::unit(pt()));
  lp.add_num_term(3, KClass::unit(pt()));
  CHECK(member_of_side(lp, LoopSpaceProfile::classic_laurent(), Side::Plus));
  // but (1-mu q) denominators are not inside the classic Laurent space
  CHECK_FALSE(member_of_side(f, LoopSpaceProfile::classic_laurent(), Side::Full));
}

TEST_CASE("polarize: worked examples") {
  // q/(1-q): plus = -1, minus = 1/(1-q)
  QRational f = QRational::monomial(pt(), 1, KClass::unit(pt()));
  f.div_factor(unit_root_factor(pt(), 1, 0));
  auto split = polarize(f);
  CHECK(split.plus == QRational(pt(), Scalar(Rational(-1)) * KClass::unit(pt())));
  QRational minus_expect = QRational::one(pt());
  minus_expect.div_factor(unit_root_factor(pt(), 1, 0));
  CHECK(split.minus == minus_expect);

  // 1/((1-q)(1-mu q)): minus = (1/(1-mu)) / (1-q), plus = -(mu/(1-mu)) / (1-mu q)
  QRational g = QRational::one(pt());
  g.div_factor(unit_root_factor(pt(), 1, 0));
  g.div_factor(mu_factor(pt(), 1));
  auto gs = polarize(g);
  Scalar c = (Scalar::one() - Scalar::symbol(kMu)).inverse();
  QRational minus2(pt(), KClass::scalar(pt(), c));
  minus2.div_factor(unit_root_factor(pt(), 1, 0));
  CHECK(gs.minus == minus2);
  QRational plus2(pt(), KClass::scalar(pt(), -(Scalar::symbol(kMu) * c)));
  plus2.div_factor(mu_factor(pt(), 1));
  CHECK(gs.plus == plus2);
  CHECK(gs.plus + gs.minus == g);

  // Laurent polynomials stay on the plus side
  QRational lp = QRational::monomial(pt(), -1, KClass::unit(pt()));
  lp.add_num_term(4, KClass::unit(pt()));
  auto ls = polarize(lp);
  CHECK(ls.plus == lp);
  CHECK(ls.minus.is_zero());
}

TEST_CASE("polarize: randomized reconstruction, idempotence, side membership") {
  std::mt19937_64 rng(401);
  std::uniform_int_distribution<int> order_pick(0, 3), kpick(1, 3), mpick(-2, 2),
      cpick(-3, 3), npick(0, 2);
  const long orders[4] = {1, 2, 3, 6};
  auto profile = LoopSpaceProfile::k_of_mu();
  for (int trial = 0; trial < 60; ++trial) {
    ModelPtr m = trial % 2 ? p1() : pt();
    QRational f(m);
    // random Laurent numerator
    for (int t = 0; t <= npick(rng); ++t) {
      KClass c = KClass::scalar(m, Scalar(Rational(cpick(rng))));
      if (m->rank() == 1 && trial % 3 == 0)
        c = c + Scalar(Rational(cpick(rng))) *
                    (KClass::line_monomial(m, ExpVec{1}) - KClass::unit(m));
      f.add_num_term(mpick(rng), c);
    }
    if (f.is_zero()) f = QRational::one(m);
    // random factors: (1 - zeta q), (1 - mu q^k), q^m handled via numerator
    for (int t = 0, n = npick(rng) + 1; t < n; ++t) {
      if (trial % 2 == 0)
        f.div_factor(unit_root_factor(m, orders[order_pick(rng)], 1));
      else
        f.div_factor(mu_factor(m, kpick(rng)));
    }
    auto s = polarize(f);
    CHECK(s.plus + s.minus == f);
    auto again_plus = polarize(s.plus);
    CHECK(again_plus.plus == s.plus);
    CHECK(again_plus.minus.is_zero());
    auto again_minus = polarize(s.minus);
    CHECK(again_minus.minus == s.minus);
    CHECK(again_minus.plus.is_zero());
    CHECK(member_of_side(s.plus, profile, Side::Plus));
    CHECK(member_of_side(s.minus, profile, Side::Minus));
  }
}

TEST_CASE("residues") {
  // Res_{q=1} of 1/(1-q) dq/q = -1
  QRational f = QRational::one(pt());
  f.div_factor(unit_root_factor(pt(), 1, 0));
  CHECK(residue_at(f, ScalarMonomial::one()) ==
        Scalar(Rational(-1)) * KClass::unit(pt()));

  // Res_{q=lambda} of 1/(1-q lambda^{-1}) dq/q = -1
  QRational g = QRational::one(pt());
  g.div_factor(QFactor{ScalarMonomial{Cyclo::one(), ParamMonomial::symbol("l", -1)},
                       ExpVec{}, 1});
  CHECK(residue_at(g, ScalarMonomial{Cyclo::one(), ParamMonomial::symbol("l", 1)}) ==
        Scalar(Rational(-1)) * KClass::unit(pt()));

  // regular points give zero
  CHECK(residue_at(f, ScalarMonomial{Cyclo::root_of_unity(3, 1), {}}).is_zero());

  // principal part of 1/(1-q)^2 dq/q at q=1: 1/(q-1)^2 - 1/(q-1)
  QRational h = QRational::one(pt());
  h.div_factor(unit_root_factor(pt(), 1, 0), 2);
  auto pp = residue_principal_part(h, ScalarMonomial::one());
  REQUIRE(pp.size() == 2);
  CHECK(pp[0] == KClass::unit(pt()));
  CHECK(pp[1] == Scalar(Rational(-1)) * KClass::unit(pt()));
}

TEST_CASE("symplectic pairing") {
  KClass tw = KClass::unit(pt());
  // Omega(1, 1/(1-q)) = -1 over the point
  QRational one = QRational::one(pt());
  QRational f = QRational::one(pt());
  f.div_factor(unit_root_factor(pt(), 1, 0));
  CHECK(symplectic_pair(one, f, tw) == Scalar(Rational(-1)));

  // antisymmetry on samples
  QRational g = QRational::monomial(pt(), 1, KClass::unit(pt()));
  g.div_factor(unit_root_factor(pt(), 2, 1));
  CHECK(symplectic_pair(f, g, tw) == -(symplectic_pair(g, f, tw)));
  CHECK(symplectic_pair(f, f, tw) == -(symplectic_pair(f, f, tw)));

  // Lagrangian property: plus x plus and minus x minus vanish
  std::mt19937_64 rng(402);
  std::uniform_int_distribution<int> cpick(-3, 3), kpick(1, 2);
  for (int trial = 0; trial < 20; ++trial) {
    QRational fp = QRational::monomial(pt(), cpick(rng), KClass::unit(pt()));
    fp.div_factor(mu_factor(pt(), kpick(rng)));
    QRational gp = QRational::one(pt());
    gp.add_num_term(1, KClass::scalar(pt(), Scalar(Rational(cpick(rng)))));
    gp.div_factor(mu_factor(pt(), kpick(rng)));
    CHECK(symplectic_pair(fp, gp, tw).is_zero());

    QRational fm(pt(), KClass::scalar(pt(), Scalar(Rational(cpick(rng)))));
    fm.div_factor(unit_root_factor(pt(), 1, 0));
    QRational gm(pt(), KClass::scalar(pt(), Scalar(Rational(cpick(rng)))));
    gm.div_factor(unit_root_factor(pt(), 2, 1), kpick(rng));
    CHECK(symplectic_pair(fm, gm, tw).is_zero());
  }

  // coefficient extraction on dual pairs: Omega(q^k, 1/(1-q)) = -1
  for (int k = -2; k <= 2; ++k) {
    QRational qk = QRational::monomial(pt(), k, KClass::unit(pt()));
    Scalar v = symplectic_pair(qk, f, tw);
    CHECK(v == Scalar(Rational(-1)));
  }
}

TEST_CASE("taylor embedding") {
  // 1/(1-mu q) to mu-order 2: 1 + mu q + mu^2 q^2
  QRational f = QRational::one(pt());
  f.div_factor(mu_factor(pt(), 1));
  auto s = taylor_embed(f, kMu, 1, 2);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == QRational::one(pt()));
  CHECK(s[1] == QRational::monomial(pt(), 1, KClass::unit(pt())));
  CHECK(s[2] == QRational::monomial(pt(), 2, KClass::unit(pt())));

  // iota(1-q) = 1-q
  auto t = taylor_embed(QRational::one_minus_q(pt()), kMu, 1, 3);
  REQUIRE(t.size() == 1);
  CHECK(t[0] == QRational::one_minus_q(pt()));

  // a pole at the expansion point is rejected
  QRational g = QRational::one(pt());
  g.mul_scalar(Scalar::symbol(kMu, -1));
  CHECK_THROWS_AS(taylor_embed(g, kMu, 1, 2), PoleAtExpansionPoint);

  // expansion in mu^{-1}: 1/(1-mu^{-1} q)
  QRational h = QRational::one(pt());
  h.div_factor(mu_factor(pt(), 1, -1));
  auto hs = taylor_embed(h, kMu, -1, 2);
  CHECK(hs[0] == QRational::one(pt()));
  CHECK(hs[1] == QRational::monomial(pt(), 1, KClass::unit(pt())));
}

TEST_CASE("taylor embedding commutes with Adams and with q -> zeta q^l") {
  std::mt19937_64 rng(403);
  std::uniform_int_distribution<int> cpick(-2, 2), kpick(1, 2);
  for (int trial = 0; trial < 10; ++trial) {
    QRational f = QRational::monomial(pt(), cpick(rng), KClass::unit(pt()));
    f.add_num_term(2, KClass::scalar(pt(), Scalar::symbol(kMu, 1)));
    f.div_factor(mu_factor(pt(), kpick(rng)));

    // Psi^l then expand == expand then Psi^l with keys scaled
    int l = 2;
    auto lhs = taylor_embed(f.adams(l), kMu, 1, 4);
    auto rhs_base = taylor_embed(f, kMu, 1, 4);
    ParamSeries rhs;
    for (const auto& [k, v] : rhs_base)
      if (k * l <= 4) rhs[k * l] = v.adams(l);
    CHECK(lhs.size() == rhs.size());
    for (const auto& [k, v] : rhs) {
      REQUIRE(lhs.count(k) == 1);
      CHECK(lhs.at(k) == v);
    }

    // q -> zeta q^2 commutes
    Cyclo zeta = Cyclo::root_of_unity(3, 1);
    auto sub_first = taylor_embed(f.subst_q(zeta, 2), kMu, 1, 3);
    auto sub_last = taylor_embed(f, kMu, 1, 3);
    for (auto& [k, v] : sub_last) v = v.subst_q(zeta, 2);
    CHECK(sub_first.size() == sub_last.size());
    for (const auto& [k, v] : sub_last) {
      REQUIRE(sub_first.count(k) == 1);
      CHECK(sub_first.at(k) == v);
    }
  }
}

TEST_CASE("minus parts are reduced and finite at the origin") {
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> cpick(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    QRational f = QRational::monomial(pt(), cpick(rng) + 2, KClass::unit(pt()));
    f.div_factor(unit_root_factor(pt(), 1, 0));
    f.div_factor(unit_root_factor(pt(), 3, 1));
    f.div_factor(mu_factor(pt(), 1));
    auto s = polarize(f);
    if (s.minus.is_zero()) continue;
    CHECK(s.minus.num_min_deg() >= 0);
    CHECK(static_cast<long>(s.minus.num_max_deg()) < s.minus.den_q_degree());
  }
}
