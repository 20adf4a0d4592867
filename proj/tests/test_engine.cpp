// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "qkcone/engine.hpp"

using namespace qkcone;

TEST_CASE("empty pipeline is the identity copy") {
  Json manifest{{"target", "P1"}, {"seed", "origin"}, {"dmax", 2}, {"pipeline", Json::array()}};
  TransformOutcome out = cmd_transform(manifest);
  auto model = model_from_json("P1");
  ModelPtr mc = model;
  CHECK(out.element.entries().size() == 1);
  CHECK(out.provenance.empty());
}

TEST_CASE("euler stage on the origin germ changes nothing but provenance") {
  Json manifest{{"target", "P1"},
                {"seed", "origin"},
                {"dmax", 2},
                {"pipeline",
                 Json::array({Json{{"op", "euler"},
                                   {"bundle",
                                    Json{{"level", 0},
                                         {"summands", Json::array({Json{{"sign", 1},
                                                                        {"e", Json::array({1})}}})}}}}})}};
  TransformOutcome out = cmd_transform(manifest);
  REQUIRE(out.provenance.size() == 1);
  CHECK(out.provenance[0].at("op") == "euler");
  // the only entry sits at degree zero where the multiplier is empty
  auto model = model_from_json("P1");
  ModelPtr mc = model;
  LoopElement expect = LoopElement::origin(mc, 2);
  for (const auto& [d, f] : out.element.entries()) CHECK(f == expect.entry(d));
}

TEST_CASE("the two duality forms serialize to byte-identical outputs") {
  Json bundle{{"level", 1},
              {"summands", Json::array({Json{{"sign", 1}, {"e", Json::array({1})}}})}};
  Json base{{"target", "P1"}, {"seed", "hypergeometric"}, {"dmax", 3}};
  Json mu = base, muinv = base;
  mu["pipeline"] = Json::array({Json{{"op", "qsd-mu"}, {"bundle", bundle}}});
  muinv["pipeline"] = Json::array({Json{{"op", "qsd-muinv"}, {"bundle", bundle}}});
  std::string golden = loop_element_to_json(cmd_transform(muinv).element).dump(2);
  std::string got = loop_element_to_json(cmd_transform(mu).element).dump(2);
  CHECK(got == golden);
}

TEST_CASE("identical manifests give byte-identical results") {
  Json bundle{{"level", 0},
              {"summands", Json::array({Json{{"sign", 1}, {"e", Json::array({1})}}})}};
  Json manifest{{"target", "P2"},
                {"seed", "hypergeometric"},
                {"dmax", 2},
                {"pipeline", Json::array({Json{{"op", "euler"}, {"bundle", bundle}},
                                          Json{{"op", "level"}, {"bundle", bundle}}})}};
  std::string a = transform_result_json(manifest, cmd_transform(manifest)).dump(2);
  std::string b = transform_result_json(manifest, cmd_transform(manifest)).dump(2);
  CHECK(a == b);
}

TEST_CASE("loop elements round-trip through serialization") {
  auto model = model_from_json("P1");
  ModelPtr mc = model;
  LoopElement j = seed_hypergeometric(mc, 2);
  BundleSpec b;
  b.level = 1;
  b.summands.push_back({1, ExpVec{1}, ScalarMonomial::one()});
  j = qsd_transform(j, b, QsdForm::Mu);
  Json dumped = loop_element_to_json(j);
  LoopElement back = loop_element_from_json(dumped, mc);
  CHECK(back == j);
}

TEST_CASE("custom model configs load and pair correctly") {
  Json cfg{{"name", "pt-custom"},
           {"mode", "presentation"},
           {"generators", Json::array()},
           {"bounds", Json::array()},
           {"trace", Json::array({Json{{"monomial", Json::array()}, {"value", "1"}}})}};
  auto m = model_from_json(cfg);
  ModelPtr mc = m;
  CHECK(pairing(KClass::unit(mc), KClass::unit(mc), KClass::unit(mc)) ==
        ParamPolynomial::one());

  // fixed-point config with explicit characters
  Json fp{{"name", "P1-fp-custom"},
          {"mode", "fixed-point"},
          {"generators", Json::array({"P"})},
          {"vertices",
           Json::array(
               {Json{{"name", "e0"},
                     {"restrictions", Json::array({Json{{"coef", "1"}, {"mono", Json::object()}}})},
                     {"tangent", Json::array({Json{{"coef", "1"}, {"mono", Json{{"t1", 1}}}}})}},
                Json{{"name", "e1"},
                     {"restrictions", Json::array({Json{{"coef", "1"}, {"mono", Json{{"t1", 1}}}}})},
                     {"tangent", Json::array({Json{{"coef", "1"}, {"mono", Json{{"t1", -1}}}}})}}})}};
  auto mf = model_from_json(fp);
  ModelPtr mfc = mf;
  CHECK(pairing(KClass::unit(mfc), KClass::unit(mfc), KClass::unit(mfc)) ==
        ParamPolynomial::one());
}

TEST_CASE("scalar expression parser") {
  Scalar t = Scalar::symbol("t1");
  CHECK(parse_scalar_expression("2*(1-t1)") == Scalar(Rational(2)) * (Scalar::one() - t));
  CHECK(parse_scalar_expression("t1^-2") == Scalar::symbol("t1", -2));
  CHECK(parse_scalar_expression("1/2 + 1/2") == Scalar::one());
  CHECK(parse_scalar_expression("(1-t1)/(1+t1)") ==
        (Scalar::one() - t) / (Scalar::one() + t));
  CHECK_THROWS_AS(parse_scalar_expression("1 +"), ConfigError);
}

TEST_CASE("gkm config with coefficient oracle") {
  Json cfg{{"model", "P1-fp"},
           {"edges",
            Json::array({Json{{"from", "e0"}, {"to", "e1"}, {"character", Json{{"t1", 1}}},
                              {"degree", Json::array({1})}},
                         Json{{"from", "e1"}, {"to", "e0"}, {"character", Json{{"t1", -1}}},
                              {"degree", Json::array({1})}}})},
           {"coefficients",
            Json::array({Json{{"from", "e0"}, {"to", "e1"}, {"m", 1}, {"value", "2"}}})}};
  GKMConfig g = gkm_from_json(cfg);
  g.graph.validate();
  auto oracle = g.oracle();
  CHECK(oracle(g.graph.edges[0], 1) == Scalar(Rational(2)));
  CHECK(oracle(g.graph.edges[0], 2).is_zero());
  CHECK(oracle(g.graph.edges[1], 1).is_zero());
}

TEST_CASE("pipeline profile chains are type-checked") {
  Json manifest{{"target", "P1"},
                {"seed", "origin"},
                {"dmax", 1},
                {"pipeline",
                 Json::array({Json{{"op", "reduce"},
                                   {"assignment", Json{{"a", Json{{"coef", "1"},
                                                                  {"mono", Json{{"mu", 1}}}}}}},
                                   {"source", "K^{a,b}"},
                                   {"target", "K(mu)"}},
                              Json{{"op", "reduce"},
                                   {"assignment", Json{{"mu", "1"}}},
                                   {"source", "K[mu,mu^-1]"},
                                   {"target", "K"}}})}};
  CHECK_THROWS_AS(cmd_transform(manifest), ConfigError);
}

TEST_CASE("verification suites pass on reduced parameters") {
  CHECK(run_suite("split", Json{{"cases", 20}}).all_pass());
  CHECK(run_suite("omega", Json{{"cases", 10}}).all_pass());
  CHECK(run_suite("level-identity", Json{{"dmax", 2}, {"lmax", 1}}).all_pass());
  CHECK(run_suite("pipeline-4-10", Json{{"dmax", 2}, {"lmax", 1}}).all_pass());
  CHECK(run_suite("qsd-forms", Json{{"dmax", 2}}).all_pass());
  CHECK(run_suite("level-duality", Json{{"dmax", 2}}).all_pass());
  CHECK(run_suite("recursion", Json::object()).all_pass());
  CHECK(run_suite("transfer", Json{{"mmax", 2}, {"dmax", 2}}).all_pass());
  CHECK(run_suite("limits", Json{{"samples", 5}}).all_pass());
  CHECK(run_suite("abelianization", Json{{"dmax", 2}}).all_pass());
  CHECK_THROWS_AS(run_suite("nonsense", Json::object()), ConfigError);
}

TEST_CASE("split suite flags the empty input set as a warning") {
  SuiteReport rep = suite_split(0);
  CHECK(rep.all_pass());
  REQUIRE(rep.cases.size() == 1);
  CHECK(rep.cases[0].detail.find("warning") != std::string::npos);
}

TEST_CASE("series stage truncates entries in the expansion parameter") {
  Json bundle{{"level", 0},
              {"summands", Json::array({Json{{"sign", 1}, {"e", Json::array({1})}}})}};
  Json manifest{{"target", "P1"},
                {"seed", "hypergeometric"},
                {"dmax", 2},
                {"series_order", 2},
                {"pipeline", Json::array({Json{{"op", "euler"}, {"bundle", bundle}},
                                          Json{{"op", "series"}, {"param", "mu"}}})}};
  TransformOutcome out = cmd_transform(manifest);
  // entries are now polynomials in mu of degree <= 2 over q-rational parts
  auto model = model_from_json("P1");
  ModelPtr mc = model;
  LoopElement exact = euler_twist(seed_hypergeometric(mc, 2), [&] {
    BundleSpec b;
    b.summands.push_back({1, ExpVec{1}, ScalarMonomial::one()});
    return b;
  }());
  for (const auto& [d, f] : out.element.entries()) {
    auto expanded = taylor_embed(exact.entry(d), kMu, 1, 2);
    QRational reassembled(mc);
    for (const auto& [k, coeff] : expanded) {
      QRational term = coeff;
      term.mul_scalar(Scalar::symbol(kMu, k));
      reassembled += term;
    }
    CHECK(f == reassembled);
  }
}
