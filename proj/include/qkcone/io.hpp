// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_IO_HPP
#define QKCONE_IO_HPP

#include <fstream>

#include <json.hpp>

#include "qkcone/gkm.hpp"
#include "qkcone/loopspace.hpp"
#include "qkcone/twists.hpp"

namespace qkcone {

using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error("ConfigError: " + what) {}
};

// ---- scalars --------------------------------------------------------------

inline Json cyclo_to_json(const Cyclo& c) {
  if (c.is_rational()) return rat_to_string(c.rational_part());
  Json coeffs = Json::array();
  for (const auto& r : c.coeffs()) coeffs.push_back(rat_to_string(r));
  return Json{{"order", c.order()}, {"coeffs", coeffs}};
}

inline Cyclo cyclo_from_json(const Json& j) {
  if (j.is_string()) return Cyclo(rat_from_string(j.get<std::string>()));
  if (j.is_number_integer()) return Cyclo(Rational(j.get<long>()));
  long order = j.at("order").get<long>();
  Cyclo acc = Cyclo::zero();
  const auto& coeffs = j.at("coeffs");
  for (size_t i = 0; i < coeffs.size(); ++i) {
    Rational r = rat_from_string(coeffs[i].get<std::string>());
    acc += Cyclo(r) * Cyclo::root_of_unity(order, static_cast<long>(i));
  }
  return acc;
}

inline Json mono_to_json(const ParamMonomial& m) {
  Json out = Json::object();
  for (const auto& [name, e] : m.exponents()) out[name] = e;
  return out;
}

inline ParamMonomial mono_from_json(const Json& j) {
  ParamMonomial m;
  for (auto it = j.begin(); it != j.end(); ++it)
    m.mul(ParamMonomial::symbol(it.key(), it.value().get<int>()));
  return m;
}

inline Json scalar_monomial_to_json(const ScalarMonomial& s) {
  return Json{{"coef", cyclo_to_json(s.coef)}, {"mono", mono_to_json(s.mono)}};
}

inline ScalarMonomial scalar_monomial_from_json(const Json& j) {
  if (j.is_string() || j.is_number_integer())
    return ScalarMonomial{cyclo_from_json(j), {}};
  return ScalarMonomial{cyclo_from_json(j.at("coef")), mono_from_json(j.at("mono"))};
}

inline Json param_poly_to_json(const ParamPolynomial& p) {
  Json out = Json::array();
  for (const auto& [m, c] : p.terms())
    out.push_back(Json{{"mono", mono_to_json(m)}, {"coef", cyclo_to_json(c)}});
  return out;
}

inline ParamPolynomial param_poly_from_json(const Json& j) {
  ParamPolynomial p;
  if (j.is_string()) return ParamPolynomial(Cyclo(rat_from_string(j.get<std::string>())));
  for (const auto& t : j) p.add_term(mono_from_json(t.at("mono")), cyclo_from_json(t.at("coef")));
  return p;
}

inline Json scalar_to_json(const Scalar& s) {
  Json den = Json::array();
  for (const auto& [f, m] : s.den())
    den.push_back(Json{{"factor", param_poly_to_json(f)}, {"mult", m}});
  return Json{{"num", param_poly_to_json(s.num())}, {"den", den}};
}

inline Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return Scalar(rat_from_string(j.get<std::string>()));
  Scalar s(param_poly_from_json(j.at("num")));
  if (j.contains("den"))
    for (const auto& f : j.at("den")) {
      Scalar d = Scalar::fraction(ParamPolynomial::one(),
                                  param_poly_from_json(f.at("factor")));
      for (int i = 0; i < f.at("mult").get<int>(); ++i) s *= d;
    }
  return s;
}

// ---- K-ring models and classes --------------------------------------------

inline Json model_to_json(const KRingModel& m) {
  Json j;
  j["name"] = m.name;
  if (m.mode == KRingModel::Mode::Presentation) {
    j["mode"] = "presentation";
    j["generators"] = m.generators;
    j["bounds"] = m.bounds;
    Json trace = Json::array();
    for (const auto& [e, v] : m.trace)
      trace.push_back(Json{{"monomial", e}, {"value", scalar_to_json(v)}});
    j["trace"] = trace;
    if (!m.reduction.empty()) {
      Json red = Json::array();
      for (const auto& [from, combo] : m.reduction) {
        Json entry{{"from", from}};
        Json to = Json::array();
        for (const auto& [e, c] : combo)
          to.push_back(Json{{"monomial", e}, {"coef", scalar_to_json(c)}});
        entry["to"] = to;
        red.push_back(entry);
      }
      j["reduction"] = red;
    }
  } else {
    j["mode"] = "fixed-point";
    j["generators"] = m.generators;
    Json verts = Json::array();
    for (const auto& v : m.vertices) {
      Json restr = Json::array(), tang = Json::array();
      for (const auto& r : v.gen_restriction) restr.push_back(scalar_monomial_to_json(r));
      for (const auto& t : v.tangent_chars) tang.push_back(scalar_monomial_to_json(t));
      verts.push_back(Json{{"name", v.name}, {"restrictions", restr}, {"tangent", tang}});
    }
    j["vertices"] = verts;
  }
  return j;
}

inline Json load_json_file(const std::string& path);

inline std::shared_ptr<KRingModel> model_from_json(const Json& j) {
  if (j.is_string()) {
    // builtins are cached so that every reference to the same name shares
    // one model instance
    static std::map<std::string, std::shared_ptr<KRingModel>> cache;
    static std::mutex mu;
    std::string name = j.get<std::string>();
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = cache.find(name);
      if (it != cache.end()) return it->second;
    }
    std::shared_ptr<KRingModel> m;
    if (name == "pt")
      m = KRingModel::point(0);
    else if (name == "P1")
      m = KRingModel::projective_space(1);
    else if (name == "P2")
      m = KRingModel::projective_space(2);
    else if (name == "P3")
      m = KRingModel::projective_space(3);
    else if (name == "P1xP1")
      m = KRingModel::product_of_projective({1, 1});
    else if (name == "P1-fp")
      m = KRingModel::projective_space_fixed_point(1);
    else if (name == "P2-fp")
      m = KRingModel::projective_space_fixed_point(2);
    else if (name.find('/') != std::string::npos ||
             (name.size() > 5 && name.substr(name.size() - 5) == ".json"))
      return model_from_json(load_json_file(name));
    else
      throw ConfigError("unknown builtin target: " + name);
    std::lock_guard<std::mutex> lock(mu);
    cache[name] = m;
    return m;
  }
  auto m = std::make_shared<KRingModel>();
  m->name = j.value("name", "target");
  std::string mode = j.at("mode").get<std::string>();
  m->generators = j.at("generators").get<std::vector<std::string>>();
  if (mode == "presentation") {
    m->mode = KRingModel::Mode::Presentation;
    m->bounds = j.at("bounds").get<ExpVec>();
    for (const auto& t : j.at("trace"))
      m->trace[t.at("monomial").get<ExpVec>()] = scalar_from_json(t.at("value"));
    if (j.contains("reduction"))
      for (const auto& r : j.at("reduction")) {
        std::map<ExpVec, Scalar> combo;
        for (const auto& t : r.at("to"))
          combo[t.at("monomial").get<ExpVec>()] = scalar_from_json(t.at("coef"));
        m->reduction[r.at("from").get<ExpVec>()] = combo;
      }
  } else if (mode == "fixed-point") {
    m->mode = KRingModel::Mode::FixedPoint;
    for (const auto& v : j.at("vertices")) {
      KRingModel::Vertex vert;
      vert.name = v.at("name").get<std::string>();
      for (const auto& r : v.at("restrictions"))
        vert.gen_restriction.push_back(scalar_monomial_from_json(r));
      for (const auto& t : v.at("tangent"))
        vert.tangent_chars.push_back(scalar_monomial_from_json(t));
      m->vertices.push_back(vert);
    }
  } else {
    throw ConfigError("unknown model mode: " + mode);
  }
  return m;
}

inline Json kclass_to_json(const KClass& c) {
  Json coeffs = Json::array();
  for (const auto& s : c.coeffs()) coeffs.push_back(scalar_to_json(s));
  return Json{{"coeffs", coeffs}};
}

inline KClass kclass_from_json(const Json& j, const ModelPtr& m) {
  std::vector<Scalar> coeffs;
  for (const auto& s : j.at("coeffs")) coeffs.push_back(scalar_from_json(s));
  if (coeffs.size() != m->dim()) throw ConfigError("class dimension mismatch");
  return KClass(m, coeffs);
}

// ---- rational functions and loop elements ---------------------------------

// Canonical serialization: numerator coefficient list ordered by q-exponent,
// factor list in the canonical factor order; byte-stable for golden tests.
inline Json qrational_to_json(const QRational& input) {
  QRational f = input.canonical_form();
  Json num = Json::array(), den = Json::array();
  for (const auto& [e, c] : f.num()) num.push_back(Json{{"q", e}, {"class", kclass_to_json(c)}});
  for (const auto& [fac, mult] : f.den())
    den.push_back(Json{{"coef", cyclo_to_json(fac.u.coef)},
                       {"mono", mono_to_json(fac.u.mono)},
                       {"w", fac.w},
                       {"k", fac.k},
                       {"mult", mult}});
  return Json{{"num", num}, {"den", den}};
}

inline QRational qrational_from_json(const Json& j, const ModelPtr& m) {
  QRational f(m);
  for (const auto& t : j.at("num"))
    f.add_num_term(t.at("q").get<int>(), kclass_from_json(t.at("class"), m));
  for (const auto& d : j.at("den")) {
    QFactor fac{ScalarMonomial{cyclo_from_json(d.at("coef")), mono_from_json(d.at("mono"))},
                d.at("w").get<ExpVec>(), d.at("k").get<int>()};
    f.div_factor(fac, d.at("mult").get<int>());
  }
  return f;
}

inline Json loop_element_to_json(const LoopElement& j) {
  Json entries = Json::array();
  for (const auto& [d, f] : j.entries())
    entries.push_back(Json{{"degree", d}, {"value", qrational_to_json(f)}});
  return Json{{"target", j.model()->name},
              {"dmax", j.dmax()},
              {"rank", j.rank()},
              {"entries", entries}};
}

inline LoopElement loop_element_from_json(const Json& j, const ModelPtr& m) {
  LoopElement out(m, j.at("dmax").get<int>(),
                  j.contains("rank") ? j.at("rank").get<size_t>() : m->rank());
  for (const auto& e : j.at("entries"))
    out.set_entry(e.at("degree").get<ExpVec>(), qrational_from_json(e.at("value"), m));
  return out;
}

// ---- bundle specs, profiles, substitutions ---------------------------------

inline Json bundle_to_json(const BundleSpec& b) {
  Json summands = Json::array();
  for (const auto& s : b.summands) {
    Json sj{{"sign", s.sign}, {"e", s.e}};
    if (!s.weight.is_one()) sj["weight"] = scalar_monomial_to_json(s.weight);
    summands.push_back(sj);
  }
  return Json{{"level", b.level}, {"summands", summands}};
}

inline BundleSpec bundle_from_json(const Json& j, size_t rank) {
  BundleSpec b;
  b.level = j.value("level", 0);
  for (const auto& s : j.at("summands")) {
    BundleSummand sm;
    sm.sign = s.value("sign", 1);
    sm.e = s.at("e").get<ExpVec>();
    if (sm.e.size() != rank) throw ConfigError("summand exponent rank mismatch");
    if (s.contains("weight")) sm.weight = scalar_monomial_from_json(s.at("weight"));
    b.summands.push_back(sm);
  }
  return b;
}

inline LoopSpaceProfile profile_from_json(const Json& j) {
  std::string name = j.is_string() ? j.get<std::string>() : j.at("name").get<std::string>();
  LoopSpaceProfile p;
  if (name == "K")
    p = LoopSpaceProfile::classic_laurent();
  else if (name == "K~")
    p = LoopSpaceProfile::classic_rational();
  else if (name == "K^mu")
    p = LoopSpaceProfile::k_mu();
  else if (name == "K(mu)")
    p = LoopSpaceProfile::k_of_mu();
  else if (name == "K[mu,mu^-1]")
    p = LoopSpaceProfile::k_mu_laurent();
  else if (name == "K^{a,b}")
    p = LoopSpaceProfile::k_ab();
  else if (name == "K(mu)^{a,b}")
    p = LoopSpaceProfile::k_of_mu_ab();
  else
    throw ConfigError("unknown loop space profile: " + name);
  if (!j.is_string() && j.contains("chars"))
    p = p.with_chars(j.at("chars").get<std::vector<std::string>>(),
                     j.value("at_one", true));
  return p;
}

inline ParamAssignment assignment_from_json(const Json& j) {
  ParamAssignment a;
  for (auto it = j.begin(); it != j.end(); ++it)
    a[it.key()] = scalar_monomial_from_json(it.value());
  return a;
}

inline NovikovSubstitution substitution_from_json(const Json& j, size_t rank) {
  NovikovSubstitution sub = NovikovSubstitution::identity(rank);
  if (j.contains("c")) {
    const auto& c = j.at("c");
    for (size_t i = 0; i < rank && i < c.size(); ++i)
      sub.c[i] = scalar_monomial_from_json(c[i]);
  }
  if (j.contains("k")) {
    const auto& k = j.at("k");
    for (size_t i = 0; i < rank && i < k.size(); ++i) sub.k[i] = k[i].get<int>();
  }
  return sub;
}

// ---- GKM configs ------------------------------------------------------------

// Minimal expression grammar for recursion coefficients: rationals, symbols,
// + - * / ^int and parentheses.
inline Scalar parse_scalar_expression(const std::string& text) {
  size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  std::function<Scalar()> sum;
  std::function<Scalar()> atom = [&]() -> Scalar {
    skip();
    if (pos >= text.size()) throw ConfigError("expression ended unexpectedly");
    if (text[pos] == '(') {
      ++pos;
      Scalar inner = sum();
      skip();
      if (pos >= text.size() || text[pos] != ')') throw ConfigError("missing )");
      ++pos;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
      size_t start = pos;
      while (pos < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/'))
        ++pos;
      return Scalar(rat_from_string(text.substr(start, pos - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_') {
      size_t start = pos;
      while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                   text[pos] == '_'))
        ++pos;
      return Scalar::symbol(text.substr(start, pos - start));
    }
    throw ConfigError("unexpected character in expression: " + text.substr(pos, 1));
  };
  std::function<Scalar()> power = [&]() -> Scalar {
    Scalar base = atom();
    skip();
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      skip();
      bool neg = pos < text.size() && text[pos] == '-';
      if (neg) ++pos;
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      long e = std::stol(text.substr(start, pos - start));
      return base.pow(neg ? -e : e);
    }
    return base;
  };
  std::function<Scalar()> product = [&]() -> Scalar {
    Scalar acc = power();
    while (true) {
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        acc *= power();
      } else if (pos < text.size() && text[pos] == '/') {
        ++pos;
        acc = acc / power();
      } else {
        return acc;
      }
    }
  };
  sum = [&]() -> Scalar {
    skip();
    bool neg = pos < text.size() && text[pos] == '-';
    if (neg) ++pos;
    Scalar acc = product();
    if (neg) acc = -acc;
    while (true) {
      skip();
      if (pos < text.size() && text[pos] == '+') {
        ++pos;
        acc += product();
      } else if (pos < text.size() && text[pos] == '-') {
        ++pos;
        acc -= product();
      } else {
        return acc;
      }
    }
  };
  Scalar result = sum();
  skip();
  if (pos != text.size()) throw ConfigError("trailing input in expression: " + text);
  return result;
}

struct GKMConfig {
  GKMGraph graph;
  // keyed by (from, to, m); m = 0 is the any-m default
  std::map<std::tuple<size_t, size_t, int>, Scalar> coefficients;

  RecursionCoefficient oracle() const {
    auto table = coefficients;
    return [table](const GKMEdge& e, int m) {
      auto it = table.find({e.from, e.to, m});
      if (it != table.end()) return it->second;
      it = table.find({e.from, e.to, 0});
      if (it != table.end()) return it->second;
      return Scalar::zero();
    };
  }
};

inline GKMConfig gkm_from_json(const Json& j) {
  GKMConfig cfg;
  if (j.is_string()) {
    std::string name = j.get<std::string>();
    if (name == "P1")
      cfg.graph = gkm_projective_space(1);
    else if (name == "P2")
      cfg.graph = gkm_projective_space(2);
    else
      throw ConfigError("unknown builtin GKM graph: " + name);
    return cfg;
  }
  cfg.graph.model = model_from_json(j.at("model"));
  for (const auto& e : j.at("edges")) {
    GKMEdge edge;
    edge.from = cfg.graph.model->vertex_index(e.at("from").get<std::string>());
    edge.to = cfg.graph.model->vertex_index(e.at("to").get<std::string>());
    edge.character = mono_from_json(e.at("character"));
    edge.degree = e.at("degree").get<ExpVec>();
    cfg.graph.edges.push_back(edge);
  }
  if (j.contains("coefficients"))
    for (const auto& c : j.at("coefficients")) {
      size_t from = cfg.graph.model->vertex_index(c.at("from").get<std::string>());
      size_t to = cfg.graph.model->vertex_index(c.at("to").get<std::string>());
      int m = c.value("m", 0);
      cfg.coefficients[{from, to, m}] =
          parse_scalar_expression(c.at("value").get<std::string>());
    }
  return cfg;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qkcone

#endif
