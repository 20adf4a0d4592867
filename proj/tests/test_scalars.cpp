// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "qkcone/scalar.hpp"

using namespace qkcone;

TEST_CASE("cyclotomic arithmetic basics") {
  Cyclo i = Cyclo::root_of_unity(4, 1);
  CHECK(i * i == Cyclo(Rational(-1)));
  CHECK(i.pow(4) == Cyclo::one());
  CHECK(i.inverse() == i.pow(3));

  Cyclo z6 = Cyclo::root_of_unity(6, 1);
  CHECK(z6.pow(6) == Cyclo::one());
  CHECK(z6.pow(3) == Cyclo(Rational(-1)));
  // mixed orders lift to the lcm
  Cyclo w = i * z6;
  CHECK(w.pow(12) == Cyclo::one());

  // 1 + z5 + ... + z5^4 = 0
  Cyclo acc = Cyclo::zero();
  for (int j = 0; j < 5; ++j) acc += Cyclo::root_of_unity(5, j);
  CHECK(acc.is_zero());
}

TEST_CASE("root of unity detection") {
  CHECK(Cyclo::root_of_unity(6, 1).as_root_of_unity().has_value());
  CHECK((-Cyclo::root_of_unity(5, 2)).as_root_of_unity().has_value());
  CHECK_FALSE(Cyclo(Rational(2)).as_root_of_unity().has_value());
  CHECK_FALSE((Cyclo::root_of_unity(4, 1) + Cyclo::one()).as_root_of_unity().has_value());
  auto mone = Cyclo(Rational(-1)).as_root_of_unity();
  REQUIRE(mone.has_value());
  CHECK(mone->first == 2);
  CHECK(mone->second == 1);
}

TEST_CASE("cyclotomic inverse via extended euclid") {
  Cyclo z = Cyclo::root_of_unity(12, 5);
  Cyclo v = z + Cyclo(Rational(3));
  CHECK(v * v.inverse() == Cyclo::one());
}

TEST_CASE("adams is the identity at k=1 and exponent scaling on monomials") {
  Scalar s = Scalar(ScalarMonomial{Cyclo::root_of_unity(4, 1),
                                   ParamMonomial::symbol(kMu, 1)});
  CHECK(scalar_adams(1, s) == s);

  // Psi^2(mu zeta_4) = -mu^2
  Scalar expect = Scalar(ScalarMonomial{Cyclo(Rational(-1)), ParamMonomial::symbol(kMu, 2)});
  CHECK(scalar_adams(2, s) == expect);

  // Psi^3(a^2 b) = a^6 b^3
  Scalar ab = Scalar(ScalarMonomial{
      Cyclo::one(), ParamMonomial::symbol("a", 2) * ParamMonomial::symbol("b", 1)});
  Scalar ab3 = Scalar(ScalarMonomial{
      Cyclo::one(), ParamMonomial::symbol("a", 6) * ParamMonomial::symbol("b", 3)});
  CHECK(scalar_adams(3, ab) == ab3);
}

TEST_CASE("substitution examples") {
  // a -> mu, b -> mu^{-1} on a*b gives 1
  Scalar ab = Scalar(ScalarMonomial{
      Cyclo::one(), ParamMonomial::symbol("a", 1) * ParamMonomial::symbol("b", 1)});
  ParamAssignment to_mu{{"a", ScalarMonomial{Cyclo::one(), ParamMonomial::symbol(kMu, 1)}},
                        {"b", ScalarMonomial{Cyclo::one(), ParamMonomial::symbol(kMu, -1)}}};
  CHECK(scalar_substitute(ab, to_mu) == Scalar::one());

  // mu -> 1 on (1 - mu)/2 gives 0
  Scalar half_one_minus_mu =
      Scalar(Rational(1, 2)) * (Scalar::one() - Scalar::symbol(kMu));
  CHECK(scalar_substitute(half_one_minus_mu, {{kMu, ScalarMonomial::one()}}).is_zero());

  // lambda_1, lambda_2 -> 1 on 1/(lambda_1 - lambda_2) leaves the ring
  Scalar diff = Scalar::symbol("l1") - Scalar::symbol("l2");
  Scalar inv = diff.inverse();
  CHECK(inv.limit_unsafe());
  CHECK_THROWS_AS(
      scalar_substitute(inv, {{"l1", ScalarMonomial::one()}, {"l2", ScalarMonomial::one()}}),
      DivisionByZeroAfterSubstitution);
}

namespace {

// Samples with distinct parameter monomials per term and a single root of
// unity in each coefficient, the shape on which every Adams power acts.
// Roots of odd order: powering an even-order root can collapse onto a
// rational (zeta_6^3 = -1), where the rational and eigenvalue readings of
// the value genuinely part ways.
Scalar random_scalar(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(0, 2), expo(-2, 2), ord(0, 4), num(-3, 3);
  ParamPolynomial p;
  for (int t = 0; t < 2; ++t) {
    ParamMonomial m = ParamMonomial::symbol("w", t);
    if (coin(rng)) m.mul(ParamMonomial::symbol(kMu, expo(rng)));
    if (coin(rng) == 0) m.mul(ParamMonomial::symbol("a", expo(rng)));
    Cyclo c = Cyclo(Rational(num(rng))) * Cyclo::root_of_unity(5, ord(rng));
    p.add_term(m, c);
  }
  return Scalar(p);
}

}  // namespace

TEST_CASE("adams composition and ring homomorphism properties") {
  std::mt19937_64 rng(20260810);
  for (int trial = 0; trial < 40; ++trial) {
    Scalar x = random_scalar(rng), y = random_scalar(rng);
    CHECK(scalar_adams(2, scalar_adams(3, x)) == scalar_adams(6, x));
    CHECK(scalar_adams(2, x * y) == scalar_adams(2, x) * scalar_adams(2, y));
    CHECK(scalar_adams(3, x + y) == scalar_adams(3, x) + scalar_adams(3, y));
  }
}

TEST_CASE("substitution commutes with arithmetic on valid assignments") {
  std::mt19937_64 rng(77);
  ParamAssignment assign{{"a", ScalarMonomial{Cyclo::root_of_unity(3, 1),
                                              ParamMonomial::symbol(kMu, 2)}}};
  for (int trial = 0; trial < 40; ++trial) {
    Scalar x = random_scalar(rng), y = random_scalar(rng);
    CHECK(scalar_substitute(x + y, assign) ==
          scalar_substitute(x, assign) + scalar_substitute(y, assign));
    CHECK(scalar_substitute(x * y, assign) ==
          scalar_substitute(x, assign) * scalar_substitute(y, assign));
  }
}

TEST_CASE("exact division of parameter polynomials") {
  ParamPolynomial a = ParamPolynomial::symbol("l1") - ParamPolynomial::symbol("l2");
  ParamPolynomial b = ParamPolynomial::symbol("l1") + ParamPolynomial::symbol("l2");
  ParamPolynomial prod = a * b;
  auto q = prod.exact_div(a);
  REQUIRE(q.has_value());
  CHECK(*q == b);
  CHECK_FALSE(prod.exact_div(a + ParamPolynomial::one()).has_value());

  // Laurent content: (t - t^{-1}) divisible by (1 - t^{-2})
  ParamPolynomial t = ParamPolynomial::symbol("t");
  ParamPolynomial tinv = ParamPolynomial::symbol("t", -1);
  auto q2 = (t - tinv).exact_div(ParamPolynomial::one() - tinv * tinv);
  REQUIRE(q2.has_value());
  CHECK(*q2 == t);
}
