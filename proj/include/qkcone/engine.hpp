// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_ENGINE_HPP
#define QKCONE_ENGINE_HPP

#include <random>

#include "qkcone/io.hpp"
#include "qkcone/polarize.hpp"
#include "qkcone/residue.hpp"
#include "qkcone/series.hpp"

namespace qkcone {

struct SuiteCase {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteCase> cases;

  bool all_pass() const {
    for (const auto& c : cases)
      if (!c.pass) return false;
    return true;
  }
  size_t failed() const {
    size_t n = 0;
    for (const auto& c : cases)
      if (!c.pass) ++n;
    return n;
  }
  void add(const std::string& name, bool pass, const std::string& detail = "") {
    cases.push_back({name, pass, detail});
  }
  void absorb(const CheckReport& rep, const std::string& prefix) {
    for (const auto& i : rep.items) add(prefix + i.what, i.pass);
  }
  Json to_json() const {
    Json cs = Json::array();
    for (const auto& c : cases) {
      Json e{{"name", c.name}, {"pass", c.pass}};
      if (!c.detail.empty()) e["detail"] = c.detail;
      cs.push_back(e);
    }
    return Json{{"suite", suite},
                {"cases", cs},
                {"passed", cases.size() - failed()},
                {"failed", failed()}};
  }
};

namespace detail {

inline BundleSpec simple_bundle(size_t rank, int gen_exp, int level, int copies = 1) {
  BundleSpec b;
  b.level = level;
  ExpVec e(rank, 0);
  e[0] = gen_exp;
  for (int i = 0; i < copies; ++i) b.summands.push_back({1, e, ScalarMonomial::one()});
  return b;
}

// Randomized factored rational functions over the given model, drawn from
// unit-root linears, (1 - mu q^k) factors and Laurent monomials.
inline QRational random_factored(const ModelPtr& m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> order_pick(0, 3), kpick(1, 3), epick(-2, 2),
      cpick(-3, 3), npick(1, 3), coin(0, 1);
  const long orders[4] = {1, 2, 3, 6};
  QRational f(m);
  for (int t = 0, n = npick(rng); t < n; ++t) {
    KClass c = KClass::scalar(m, Scalar(Rational(cpick(rng))));
    if (m->rank() >= 1 && coin(rng))
      c = c + Scalar(Rational(cpick(rng))) *
                  (KClass::line_monomial(m, [&] {
                     ExpVec w(m->rank(), 0);
                     w[0] = 1;
                     return w;
                   }()) -
                   KClass::unit(m));
    f.add_num_term(epick(rng), c);
  }
  if (f.is_zero()) f = QRational::one(m);
  for (int t = 0, n = npick(rng); t < n; ++t) {
    if (coin(rng)) {
      f.div_factor(QFactor{ScalarMonomial{Cyclo::root_of_unity(orders[order_pick(rng)], 1), {}},
                           ExpVec(m->rank(), 0), 1});
    } else {
      f.div_factor(QFactor{ScalarMonomial{Cyclo::one(), ParamMonomial::symbol(kMu, 1)},
                           ExpVec(m->rank(), 0), kpick(rng)});
    }
  }
  return f;
}

}  // namespace detail

// Polarization suite: sum reconstruction, idempotence and side membership on
// randomized factored inputs over P^1 and the point.
inline SuiteReport suite_split(int cases = 200, unsigned seed = 20260810) {
  SuiteReport rep;
  rep.suite = "split";
  std::mt19937_64 rng(seed);
  auto p1 = KRingModel::projective_space(1);
  auto pt = KRingModel::point(0);
  std::vector<ModelPtr> models{p1, pt};
  auto profile = LoopSpaceProfile::k_of_mu();
  if (cases == 0) {
    rep.add("no input cases", true, "warning: empty input set");
    return rep;
  }
  for (int i = 0; i < cases; ++i) {
    ModelPtr m = models[static_cast<size_t>(i) % models.size()];
    QRational f = detail::random_factored(m, rng);
    std::string label = "case " + std::to_string(i);
    try {
      auto s = polarize(f);
      bool ok = (s.plus + s.minus == f);
      auto sp = polarize(s.plus);
      auto sm = polarize(s.minus);
      ok = ok && sp.plus == s.plus && sp.minus.is_zero();
      ok = ok && sm.minus == s.minus && sm.plus.is_zero();
      ok = ok && member_of_side(s.plus, profile, Side::Plus) &&
           member_of_side(s.minus, profile, Side::Minus);
      rep.add(label, ok);
    } catch (const std::exception& ex) {
      rep.add(label, false, ex.what());
    }
  }
  return rep;
}

// Symplectic-form suite: Omega vanishes on same-side pairs and is
// antisymmetric.
inline SuiteReport suite_omega(int cases = 100, unsigned seed = 20260811) {
  SuiteReport rep;
  rep.suite = "omega";
  std::mt19937_64 rng(seed);
  auto p1 = KRingModel::projective_space(1);
  auto pt = KRingModel::point(0);
  std::vector<ModelPtr> models{p1, pt};
  for (int i = 0; i < cases; ++i) {
    ModelPtr m = models[static_cast<size_t>(i) % models.size()];
    KClass tw = KClass::unit(m);
    QRational f = detail::random_factored(m, rng);
    QRational g = detail::random_factored(m, rng);
    std::string label = "case " + std::to_string(i);
    try {
      auto sf = polarize(f), sg = polarize(g);
      bool ok = symplectic_pair(sf.plus, sg.plus, tw).is_zero();
      ok = ok && symplectic_pair(sf.minus, sg.minus, tw).is_zero();
      ok = ok && symplectic_pair(f, g, tw) == -(symplectic_pair(g, f, tw));
      rep.add(label, ok);
    } catch (const std::exception& ex) {
      rep.add(label, false, ex.what());
    }
  }
  return rep;
}

// Telescoping suite: series and closed PFD multipliers agree to the given
// order for the Euler-type shapes over P^1 and P^2.
inline SuiteReport suite_pfd(int dmax = 4, int order = 4) {
  SuiteReport rep;
  rep.suite = "pfd";
  std::vector<ModelPtr> models{KRingModel::projective_space(1),
                               KRingModel::projective_space(2)};
  for (const auto& m : models) {
    std::vector<std::pair<std::string, BundleSpec>> specs;
    specs.emplace_back("P", detail::simple_bundle(m->rank(), 1, 0));
    specs.emplace_back("P^2", detail::simple_bundle(m->rank(), 2, 0));
    BundleSpec both = detail::simple_bundle(m->rank(), 1, 0);
    {
      ExpVec e(m->rank(), 0);
      e[0] = 2;
      both.summands.push_back({1, e, ScalarMonomial::one()});
    }
    specs.emplace_back("P+P^2", both);
    for (const auto& [label, b] : specs) {
      for (PFDKind kind : {PFDKind::Euler, PFDKind::DualEuler}) {
        PFDSpec spec{kind, b};
        int dir = kind == PFDKind::Euler ? 1 : -1;
        for (int d = 0; d <= dmax; ++d) {
          ExpVec dv(m->rank(), 0);
          dv[0] = d;
          std::string name = m->name + " " + label +
                             (kind == PFDKind::Euler ? " euler" : " dual") +
                             " d=" + std::to_string(d);
          try {
            QRational closed = pfd_multiplier_closed(m, spec, dv);
            auto series = pfd_multiplier_series(m, spec, dv, order);
            auto expanded = taylor_embed(closed, kMu, dir, order);
            bool ok = true;
            for (int k = 0; k <= order; ++k) {
              QRational lhs =
                  series.count({k, 0}) ? series.at({k, 0}) : QRational::zero(m);
              QRational rhs = expanded.count(k) ? expanded.at(k) : QRational::zero(m);
              if (!(lhs == rhs)) ok = false;
            }
            rep.add(name, ok);
          } catch (const std::exception& ex) {
            rep.add(name, false, ex.what());
          }
        }
      }
    }
  }
  return rep;
}

// Determinant identity suite.
inline SuiteReport suite_level_identity(int dmax = 5, int lmax = 3) {
  SuiteReport rep;
  rep.suite = "level-identity";
  auto m = KRingModel::projective_space(1);
  ModelPtr mc = m;
  std::vector<std::pair<std::string, std::vector<std::pair<int, int>>>> shapes{
      {"P", {{1, 1}}},
      {"P^2", {{1, 2}}},
      {"P+P^2", {{1, 1}, {1, 2}}},
      {"P-P^2", {{1, 1}, {-1, 2}}},
      {"P^-1", {{1, -1}}},
  };
  for (int l = 0; l <= lmax; ++l) {
    for (const auto& [label, data] : shapes) {
      BundleSpec b;
      b.level = l;
      for (auto [sign, e] : data) b.summands.push_back({sign, ExpVec{e}, ScalarMonomial::one()});
      for (int d = 0; d <= dmax; ++d) {
        auto r = level_identity_check(mc, b, ExpVec{d});
        rep.add(label + " l=" + std::to_string(l) + " d=" + std::to_string(d), r.pass,
                r.detail);
      }
    }
  }
  return rep;
}

// The two-step reduction pipeline against the level twist.
inline SuiteReport suite_pipeline_410(int dmax = 4, int lmax = 2) {
  SuiteReport rep;
  rep.suite = "pipeline-4-10";
  ReductionMap step1{{{"a", ScalarMonomial{Cyclo::one(), ParamMonomial::symbol(kMu, 1)}},
                      {"b", ScalarMonomial{Cyclo::one(), ParamMonomial::symbol(kMu, -1)}}},
                     LoopSpaceProfile::k_ab(),
                     LoopSpaceProfile::k_of_mu()};
  ReductionMap step2{{{kMu, ScalarMonomial::one()}},
                     LoopSpaceProfile::k_mu_laurent(),
                     LoopSpaceProfile::classic_rational()};
  std::vector<ModelPtr> models{KRingModel::projective_space(1),
                               KRingModel::product_of_projective({1, 1})};
  for (const auto& m : models) {
    for (int l = 1; l <= lmax; ++l) {
      BundleSpec b = detail::simple_bundle(m->rank(), 1, l);
      if (m->rank() == 2) {
        ExpVec e(m->rank(), 0);
        e[1] = 1;
        b.summands.push_back({1, e, ScalarMonomial::one()});
      }
      std::string name = m->name + " l=" + std::to_string(l);
      try {
        LoopElement j = seed_hypergeometric(m, dmax);
        LoopElement lhs =
            reduce_coefficients(reduce_coefficients(rab_twist(j, b), step1), step2);
        LoopElement rhs = level_twist(j, b);
        rep.add(name, lhs == rhs);
      } catch (const std::exception& ex) {
        rep.add(name, false, ex.what());
      }
    }
  }
  return rep;
}

// Two-form equality of the duality transform, plus the stated factor
// relating the scaled routes.
inline SuiteReport suite_qsd_forms(int dmax = 4) {
  SuiteReport rep;
  rep.suite = "qsd-forms";
  std::vector<ModelPtr> models{KRingModel::projective_space(1),
                               KRingModel::projective_space(2)};
  for (const auto& m : models) {
    for (int l : {0, 1, 2}) {
      for (int copies : {1, 2}) {
        BundleSpec b = detail::simple_bundle(m->rank(), 1, l, copies);
        std::string name =
            m->name + " l=" + std::to_string(l) + (copies == 2 ? " P+P" : " P");
        try {
          LoopElement j = seed_hypergeometric(m, dmax);
          LoopElement mu_form = qsd_transform(j, b, QsdForm::Mu);
          LoopElement muinv_form = qsd_transform(j, b, QsdForm::MuInv);
          bool ok = (mu_form == muinv_form);

          LoopElement twoa = qsd_transform(j, b, QsdForm::TwoA);
          LoopElement mu_scaled = mu_form.map_entries([&](const ExpVec& d, const QRational& f) {
            QRational g = f;
            for (size_t jj = 0; jj < b.summands.size(); ++jj)
              g.div_factor(QFactor{ScalarMonomial{Cyclo::one(),
                                                  ParamMonomial::symbol(kMu, 1)} *
                                       b.summands[jj].weight,
                                   b.summands[jj].e, static_cast<int>(b.m_of(jj, d))},
                           -b.summands[jj].sign);
            return g;
          });
          ok = ok && (twoa == mu_scaled);

          LoopElement twob = qsd_transform(j, b, QsdForm::TwoB);
          LoopElement muinv_scaled =
              muinv_form.map_entries([&](const ExpVec& d, const QRational& f) {
                QRational g = f;
                for (size_t jj = 0; jj < b.summands.size(); ++jj) {
                  ExpVec w = b.summands[jj].e;
                  for (auto& x : w) x = -x;
                  g.div_factor(QFactor{ScalarMonomial{Cyclo::one(),
                                                      ParamMonomial::symbol(kMu, -1)} *
                                           b.summands[jj].weight.inverse(),
                                       w, static_cast<int>(-b.m_of(jj, d))},
                               -b.summands[jj].sign);
                }
                return g;
              });
          ok = ok && (twob == muinv_scaled);
          rep.add(name, ok);
        } catch (const std::exception& ex) {
          rep.add(name, false, ex.what());
        }
      }
    }
  }
  return rep;
}

// Level duality: the twist of the dual bundle is the twist of the bundle
// composed with Q_i -> Q_i q^{l c_1(E)_i}.
inline SuiteReport suite_level_duality(int dmax = 4) {
  SuiteReport rep;
  rep.suite = "level-duality";
  std::vector<ModelPtr> models{KRingModel::projective_space(1),
                               KRingModel::product_of_projective({1, 1})};
  for (const auto& m : models) {
    for (int l : {1, 2}) {
      BundleSpec b = detail::simple_bundle(m->rank(), 1, l);
      std::string name = m->name + " l=" + std::to_string(l);
      try {
        LoopElement j = seed_hypergeometric(m, dmax);
        auto c1 = b.c1();
        NovikovSubstitution sub = NovikovSubstitution::identity(m->rank());
        for (size_t i = 0; i < c1.size(); ++i) sub.k[i] = static_cast<int>(l * c1[i]);
        LoopElement lhs = level_twist(novikov_substitute(j, sub), b);
        LoopElement rhs = level_twist(j, b.dual());
        rep.add(name, lhs == rhs);
      } catch (const std::exception& ex) {
        rep.add(name, false, ex.what());
      }
    }
  }
  return rep;
}

// Soundness of the residue recursion verifier.
inline SuiteReport suite_recursion() {
  SuiteReport rep;
  rep.suite = "recursion";
  auto m = KRingModel::projective_space_fixed_point(1);
  ModelPtr mc = m;
  GKMGraph g = gkm_projective_space(1);
  g.validate();

  auto element = [&](const Rational& c) {
    LoopElement j(mc, 1);
    j.set_entry(ExpVec{0}, QRational::one_minus_q(mc));
    KClass num = KClass::zero(mc);
    num.at(0) = Scalar(c) * (Scalar::one() - Scalar::symbol("t1"));
    QRational f(mc, num);
    f.div_factor(QFactor{ScalarMonomial{Cyclo::one(), ParamMonomial::symbol("t1", -1)},
                         ExpVec{0}, 1});
    j.set_entry(ExpVec{1}, f);
    return j;
  };
  auto oracle = [](const Rational& c) {
    return RecursionCoefficient([c](const GKMEdge& e, int m2) {
      if (e.from == 0 && e.to == 1 && m2 == 1) return Scalar(c);
      return Scalar::zero();
    });
  };

  rep.add("constructed element passes",
          recursion_check(element(Rational(2)), g, oracle(Rational(2)), 2).all_pass());
  for (long p : {1L, 3L, -1L, 5L})
    rep.add("perturbed coefficient " + std::to_string(p) + "/1 fails",
            !recursion_check(element(Rational(2)), g, oracle(Rational(p)), 1).all_pass());
  {
    LoopElement bad = element(Rational(2));
    QRational stray = QRational::one(mc);
    stray.div_factor(QFactor{ScalarMonomial{Cyclo::one(), ParamMonomial::symbol("s", -1)},
                             ExpVec{0}, 1});
    bad.add_entry(ExpVec{1}, stray);
    rep.add("pole at a non-tangent character root fails",
            !recursion_check(bad, g, oracle(Rational(2)), 1).all_pass());
  }
  rep.add("element with zero callback against a genuine pole fails",
          !recursion_check(element(Rational(2)), g,
                           [](const GKMEdge&, int) { return Scalar::zero(); }, 1)
               .all_pass());
  return rep;
}

// Transfer identity suite for the duality factor families.
inline SuiteReport suite_transfer(int m_max = 3, int d_max = 4) {
  SuiteReport rep;
  rep.suite = "transfer";
  for (int n : {1, 2}) {
    GKMGraph g = gkm_projective_space(n);
    g.validate();
    for (int exp : {1, 2}) {
      BundleSpec spec = detail::simple_bundle(1, exp, 0);
      for (TransferFamily fam : {TransferFamily::Mu, TransferFamily::MuInv}) {
        auto r = recursion_transfer_check(spec, g, fam, m_max, d_max);
        rep.add("P" + std::to_string(n) + " f=P^" + std::to_string(exp) +
                    (fam == TransferFamily::Mu ? " family=mu" : " family=muinv"),
                r.all_pass(),
                r.all_pass() ? "" : std::to_string(r.failures()) + " failures");
      }
    }
  }
  return rep;
}

// Non-equivariant limit guards and naturality against the Euler twist.
inline SuiteReport suite_limits(int samples = 50, unsigned seed = 20260812) {
  SuiteReport rep;
  rep.suite = "limits";
  auto m = KRingModel::projective_space(1);
  ModelPtr mc = m;
  auto sym = [](const char* s, int e = 1) {
    return ScalarMonomial{Cyclo::one(), ParamMonomial::symbol(s, e)};
  };

  {
    QRational leak = QRational::one(mc);
    leak.div_factor(QFactor{sym("l"), ExpVec{0}, 2});
    LoopElement j(mc, 1);
    j.set_entry(ExpVec{1}, leak);
    bool threw = false;
    try {
      nonequivariant_limit(j, {"l"});
    } catch (const PlusMinusLeak&) {
      threw = true;
    }
    rep.add("1/(1-lambda q^2) rejected on the plus side", threw);
  }
  {
    Scalar diff = (Scalar::symbol("l1") - Scalar::symbol("l2")).inverse();
    LoopElement j(mc, 1);
    j.set_entry(ExpVec{1}, QRational(mc, diff * KClass::unit(mc)));
    bool threw = false;
    try {
      nonequivariant_limit(j, {"l1", "l2"});
    } catch (const LimitSingular&) {
      threw = true;
    }
    rep.add("1/(lambda_1 - lambda_2) rejected everywhere", threw);
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cpick(-3, 3), kpick(1, 2), epick(0, 1);
  for (int i = 0; i < samples; ++i) {
    LoopElement j(mc, 2);
    j.set_entry(ExpVec{0}, QRational::one_minus_q(mc));
    for (int d = 1; d <= 2; ++d) {
      QRational f = QRational::monomial(
          mc, cpick(rng),
          KClass::scalar(mc, Scalar(Rational(cpick(rng)))) +
              Scalar(Rational(cpick(rng))) * KClass::line_monomial(mc, ExpVec{1}));
      f.mul_scalar(Scalar(sym("l", epick(rng))));
      f.div_factor(QFactor{sym(kMu) * sym("l", epick(rng)), ExpVec{epick(rng)}, kpick(rng)});
      j.set_entry(ExpVec{d}, f);
    }
    BundleSpec spec;
    spec.summands.push_back({1, ExpVec{1}, sym("l", epick(rng))});
    BundleSpec spec_limit = spec;
    for (auto& sm : spec_limit.summands)
      sm.weight = Scalar(sm.weight).substitute({{"l", ScalarMonomial::one()}}).as_monomial();
    std::string name = "limit commutes with euler twist, sample " + std::to_string(i);
    try {
      LoopElement lhs = nonequivariant_limit(euler_twist(j, spec), {"l"});
      LoopElement rhs = euler_twist(nonequivariant_limit(j, {"l"}), spec_limit);
      rep.add(name, lhs == rhs);
    } catch (const std::exception& ex) {
      rep.add(name, false, ex.what());
    }
  }
  return rep;
}

// Abelian/non-abelian specialization of the duality over Gr(1,2).
inline SuiteReport suite_abelianization(int dmax = 3) {
  SuiteReport rep;
  rep.suite = "abelianization";
  auto m = KRingModel::projective_space(1);
  ModelPtr mc = m;
  FlagConfig cfg;
  cfg.blocks = {{0}};
  cfg.j = 0;
  for (int l : {0, 1, 2}) {
    cfg.level = l;
    BundleSpec b;
    b.level = l;
    b.summands.push_back({1, ExpVec{-1}, ScalarMonomial::one()});
    LoopElement j = seed_hypergeometric(mc, dmax);
    for (QsdForm form : {QsdForm::TwoA, QsdForm::TwoB}) {
      std::string name = "Gr(1,2) l=" + std::to_string(l) +
                         (form == QsdForm::TwoA ? " route A" : " route B");
      try {
        LoopElement flag = flag_qsd(j, cfg, form);
        LoopElement direct = qsd_transform(j, b, form);
        rep.add(name, abelian_specialize(flag, {{0}}) == abelian_specialize(direct, {{0}}));
      } catch (const std::exception& ex) {
        rep.add(name, false, ex.what());
      }
    }
  }
  return rep;
}

inline SuiteReport cmd_verify(const std::string& name, const Json& config);

inline SuiteReport run_suite(const std::string& name, const Json& config = Json::object()) {
  auto geti = [&](const char* key, int dflt) { return config.value(key, dflt); };
  if (name == "split") return suite_split(geti("cases", 200));
  if (name == "omega") return suite_omega(geti("cases", 100));
  if (name == "pfd") return suite_pfd(geti("dmax", 4), geti("order", 4));
  if (name == "level-identity") return suite_level_identity(geti("dmax", 5), geti("lmax", 3));
  if (name == "pipeline-4-10") return suite_pipeline_410(geti("dmax", 4), geti("lmax", 2));
  if (name == "qsd-forms") return suite_qsd_forms(geti("dmax", 4));
  if (name == "level-duality") return suite_level_duality(geti("dmax", 4));
  if (name == "recursion") return suite_recursion();
  if (name == "transfer") return suite_transfer(geti("mmax", 3), geti("dmax", 4));
  if (name == "limits") return suite_limits(geti("samples", 50));
  if (name == "abelianization") return suite_abelianization(geti("dmax", 3));
  throw ConfigError("unknown suite: " + name);
}

inline SuiteReport cmd_verify(const std::string& name, const Json& config) {
  return run_suite(name, config);
}

// ---- transform pipeline -----------------------------------------------------

// Ordered pipeline of transforms applied to a loop element; the provenance
// log records each stage by its registry id so identical manifests give
// byte-identical outputs.
struct TransformOutcome {
  LoopElement element;
  Json provenance = Json::array();
};

inline LoopElement load_input_element(const Json& manifest, const ModelPtr& model) {
  int dmax = manifest.value("dmax", 3);
  if (manifest.contains("seed")) {
    std::string seed = manifest.at("seed").get<std::string>();
    if (seed == "origin") return LoopElement::origin(model, dmax);
    if (seed == "hypergeometric") return seed_hypergeometric(model, dmax);
    throw ConfigError("unknown seed: " + seed);
  }
  if (manifest.contains("input")) {
    Json j = manifest.at("input").is_string()
                 ? load_json_file(manifest.at("input").get<std::string>())
                 : manifest.at("input");
    return loop_element_from_json(j, model);
  }
  throw ConfigError("manifest needs a seed or an input element");
}

inline TransformOutcome cmd_transform(const Json& manifest) {
  ModelPtr model = model_from_json(manifest.at("target"));
  TransformOutcome out{load_input_element(manifest, model), Json::array()};
  std::string chained_profile;

  const Json pipeline = manifest.value("pipeline", Json::array());
  size_t index = 0;
  for (const auto& stage : pipeline) {
    std::string op = stage.at("op").get<std::string>();
    Json note{{"stage", index}, {"op", op}};
    if (op == "euler" || op == "dual-euler" || op == "level" || op == "level-weighted" ||
        op == "rab" || op == "qsd-mu" || op == "qsd-muinv" || op == "qsd-2A" ||
        op == "qsd-2B") {
      BundleSpec b = bundle_from_json(stage.at("bundle"), out.element.rank());
      note["bundle"] = bundle_to_json(b);
      if (op == "euler")
        out.element = euler_twist(out.element, b);
      else if (op == "dual-euler")
        out.element = dual_euler_twist(out.element, b);
      else if (op == "level")
        out.element = level_twist(out.element, b, false);
      else if (op == "level-weighted")
        out.element = level_twist(out.element, b, true);
      else if (op == "rab")
        out.element = rab_twist(out.element, b);
      else if (op == "qsd-mu")
        out.element = qsd_transform(out.element, b, QsdForm::Mu);
      else if (op == "qsd-muinv")
        out.element = qsd_transform(out.element, b, QsdForm::MuInv);
      else if (op == "qsd-2A")
        out.element = qsd_transform(out.element, b, QsdForm::TwoA);
      else
        out.element = qsd_transform(out.element, b, QsdForm::TwoB);
    } else if (op == "flag-qsd-A" || op == "flag-qsd-B") {
      FlagConfig cfg;
      cfg.blocks = stage.at("blocks").get<std::vector<std::vector<size_t>>>();
      cfg.j = stage.value("j", 0);
      cfg.level = stage.value("level", 0);
      note["level"] = cfg.level;
      out.element = flag_qsd(out.element, cfg,
                             op == "flag-qsd-A" ? QsdForm::TwoA : QsdForm::TwoB);
    } else if (op == "novikov") {
      NovikovSubstitution sub = substitution_from_json(stage, out.element.rank());
      out.element = novikov_substitute(out.element, sub);
    } else if (op == "reduce") {
      ReductionMap pi{assignment_from_json(stage.at("assignment")),
                      profile_from_json(stage.at("source")),
                      profile_from_json(stage.at("target"))};
      if (!chained_profile.empty() && chained_profile != pi.source.name)
        throw ConfigError("pipeline profile chain broken at stage " + std::to_string(index) +
                          ": " + chained_profile + " != " + pi.source.name);
      chained_profile = pi.target.name;
      note["source"] = pi.source.name;
      note["target"] = pi.target.name;
      out.element = reduce_coefficients(out.element, pi);
    } else if (op == "restrict") {
      // assert membership in a smaller loop space and continue the chain
      // from there (the refinement step between reductions)
      LoopSpaceProfile p = profile_from_json(stage.at("profile"));
      out.element = out.element.normalized();
      for (const auto& v : check_profile_membership(out.element, p, Side::Full))
        if (!v.ok)
          throw InvalidReduction("restrict: entry " + expvec_str(v.degree) +
                                 " is not in " + p.name);
      chained_profile = p.name;
      note["profile"] = p.name;
    } else if (op == "normalize") {
      out.element = out.element.normalized();
    } else if (op == "series") {
      // truncated series image in one parameter direction, reassembled as a
      // polynomial in the expansion parameter
      std::string param = stage.value("param", std::string(kMu));
      int dir = stage.value("dir", 1);
      int order = stage.value("order", manifest.value("series_order", 4));
      note["param"] = param;
      note["order"] = order;
      out.element = out.element.map_entries([&](const ExpVec&, const QRational& f) {
        QRational acc(out.element.model());
        for (const auto& [k, coeff] : taylor_embed(f, param, dir, order)) {
          QRational term = coeff;
          term.mul_scalar(Scalar::symbol(param, dir * k));
          acc += term;
        }
        return acc;
      });
    } else if (op == "abelian-specialize") {
      out.element = abelian_specialize(
          out.element, stage.at("blocks").get<std::vector<std::vector<size_t>>>());
    } else {
      throw ConfigError("unknown pipeline op: " + op);
    }
    out.provenance.push_back(note);
    ++index;
  }
  return out;
}

inline Json transform_result_json(const Json& manifest, const TransformOutcome& out) {
  return Json{{"manifest", manifest},
              {"element", loop_element_to_json(out.element)},
              {"provenance", out.provenance}};
}

}  // namespace qkcone

#endif
