// Copyright 2026 the qk-cone authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QKCONE_GKM_HPP
#define QKCONE_GKM_HPP

#include "qkcone/residue.hpp"
#include "qkcone/twists.hpp"

namespace qkcone {

struct LimitSingular : std::domain_error {
  explicit LimitSingular(const std::string& what)
      : std::domain_error("LimitSingular: " + what) {}
};
struct PlusMinusLeak : std::domain_error {
  explicit PlusMinusLeak(const std::string& what)
      : std::domain_error("PlusMinusLeak: " + what) {}
};

struct GKMEdge {
  size_t from = 0, to = 0;
  ParamMonomial character;  // tangent character at `from` along the edge
  ExpVec degree;            // homological degree of the closed orbit
};

// Fixed-point graph: vertices (with restrictions and tangent characters)
// come from the fixed-point K-ring model, edges carry characters and curve
// classes.
struct GKMGraph {
  ModelPtr model;
  std::vector<GKMEdge> edges;

  std::vector<std::string> char_symbols() const {
    std::vector<std::string> syms;
    auto collect = [&syms](const ParamMonomial& m) {
      for (const auto& [name, e] : m.exponents())
        if (std::find(syms.begin(), syms.end(), name) == syms.end()) syms.push_back(name);
    };
    for (const auto& v : model->vertices) {
      for (const auto& g : v.gen_restriction) collect(g.mono);
      for (const auto& t : v.tangent_chars) collect(t.mono);
    }
    for (const auto& e : edges) collect(e.character);
    std::sort(syms.begin(), syms.end());
    return syms;
  }

  // Edge symmetry and the restriction-compatibility relation
  // P_i|_from * char^{D_i} = P_i|_to along every edge.
  void validate() const {
    for (const auto& e : edges) {
      bool found = false;
      for (const auto& r : edges)
        if (r.from == e.to && r.to == e.from && r.character == e.character.inverse() &&
            r.degree == e.degree)
          found = true;
      if (!found) throw std::invalid_argument("GKM edge has no mirror");
      for (size_t i = 0; i < model->rank(); ++i) {
        ScalarMonomial lhs = model->vertices[e.from].gen_restriction[i] *
                             ScalarMonomial{Cyclo::one(), e.character.pow(e.degree[i])};
        if (!(lhs == model->vertices[e.to].gen_restriction[i]))
          throw std::invalid_argument("GKM restrictions incompatible along an edge");
      }
      bool tangent = false;
      for (const auto& t : model->vertices[e.from].tangent_chars)
        if (t.mono == e.character && t.coef.is_one()) tangent = true;
      if (!tangent) throw std::invalid_argument("edge character is not tangent at its source");
    }
  }
};

// The recursion coefficient is an oracle supplied by configuration: the full
// factor multiplying f_beta(lambda^{1/m}), minus sign and 1/m included by the
// verifier itself.  Expressions are evaluated in the rescaled character
// lattice of the pass for m.
using RecursionCoefficient = std::function<Scalar(const GKMEdge&, int m)>;

// The standard torus picture of P^n: one edge pair between any two fixed
// points, character t_j/t_i at e_i, all orbit closures of degree one.
inline GKMGraph gkm_projective_space(int n) {
  GKMGraph g;
  g.model = KRingModel::projective_space_fixed_point(n);
  auto t = [&](int i) {
    return i == 0 ? ParamMonomial{} : ParamMonomial::symbol("t" + std::to_string(i));
  };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      GKMEdge e;
      e.from = static_cast<size_t>(i);
      e.to = static_cast<size_t>(j);
      e.character = t(j) * t(i).inverse();
      e.degree = ExpVec{1};
      g.edges.push_back(e);
    }
  return g;
}

struct CheckItem {
  std::string what;
  bool pass = true;
};
struct CheckReport {
  std::vector<CheckItem> items;
  bool all_pass() const {
    for (const auto& i : items)
      if (!i.pass) return false;
    return true;
  }
  size_t failures() const {
    size_t n = 0;
    for (const auto& i : items)
      if (!i.pass) ++n;
    return n;
  }
};

inline std::string expvec_str(const ExpVec& d) {
  std::string s = "(";
  for (size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

// restrict(J, alpha): the per-vertex component stream of a fixed-point-model
// element.
inline std::map<ExpVec, QRational> restrict_to_vertex(const LoopElement& j, size_t alpha,
                                                      const ModelPtr& pt) {
  std::map<ExpVec, QRational> out;
  for (const auto& [d, f] : j.entries()) out[d] = f.restrict_vertex(alpha, pt);
  return out;
}

// Residue criterion: for every edge alpha->beta with character lambda, every
// covering multiplicity m and every degree d,
//   Res_{q = lambda^{1/m}} f_{alpha, d + m D} dq/q = -(1/m) C(edge, m) f_{beta, d}(lambda^{1/m}),
// and residues vanish at roots of non-tangent characters.  lambda^{1/m} is
// realized by rescaling the character lattice per pass.
inline CheckReport recursion_check(const LoopElement& j, const GKMGraph& graph,
                                   const RecursionCoefficient& coeff, int m_max) {
  CheckReport rep;
  const ModelPtr& model = j.model();
  auto pt = KRingModel::point(model->rank());
  ModelPtr ptc = pt;
  auto chars = graph.char_symbols();
  // symbols showing up in the element's poles count as characters of a
  // possibly larger torus; their roots are subject to the same conditions
  for (const auto& [d, f] : j.entries())
    for (const auto& [fac, mult] : f.den())
      for (const auto& [name, e] : fac.u.mono.exponents())
        if (name != kMu && name != "a" && name != "b" &&
            std::find(chars.begin(), chars.end(), name) == chars.end())
          chars.push_back(name);
  std::sort(chars.begin(), chars.end());
  auto is_char = [&chars](const std::string& s) {
    return std::find(chars.begin(), chars.end(), s) != chars.end();
  };

  for (int m = 1; m <= m_max; ++m) {
    // rescale lambda -> lambda^m so that lambda^{1/m} is the plain character
    LoopElement jm = j.map_entries(
        [&](const ExpVec&, const QRational& f) { return f.rescale(is_char, m); });

    // residue recursion along every edge, driven by the stored degrees: the
    // entry at d' supplies the residue, the entry at d' - mD the right side
    // (zero when that degree leaves the effective cone)
    for (const auto& e : graph.edges) {
      ScalarMonomial point{Cyclo::one(), e.character};
      Scalar c = coeff(e, m);
      for (const auto& [dup, falpha] : jm.entries()) {
        ExpVec d = dup;
        bool effective = true;
        for (size_t i = 0; i < d.size(); ++i) {
          d[i] -= m * e.degree[i];
          if (d[i] < 0) effective = false;
        }
        CheckItem item;
        item.what = "edge " + graph.model->vertices[e.from].name + "->" +
                    graph.model->vertices[e.to].name + " m=" + std::to_string(m) +
                    " d'=" + expvec_str(dup);
        try {
          QRational fa = falpha.restrict_vertex(e.from, ptc);
          KClass lhs = residue_at(fa, point);
          Scalar rhs = Scalar::zero();
          if (effective) {
            KClass rhs_val = jm.entry(d).restrict_vertex(e.to, ptc).evaluate(point);
            rhs = -(Scalar(Rational(1, m)) * c) * rhs_val.coeffs()[0];
          }
          item.pass = (lhs.coeffs()[0] == rhs);
        } catch (const std::exception& ex) {
          item.pass = false;
          item.what += std::string(" [") + ex.what() + "]";
        }
        rep.items.push_back(item);
      }
    }

    // zero-residue requirement: character poles that are not m'-th roots of
    // a tangent character at the vertex must have vanishing residue
    for (size_t alpha = 0; alpha < model->vertices.size(); ++alpha) {
      std::vector<ExpVec> tangent;  // unrescaled edge character exponents
      for (const auto& e : graph.edges)
        if (e.from == alpha) {
          ExpVec v;
          for (const auto& s : chars) v.push_back(e.character.exponent(s));
          tangent.push_back(v);
        }
      auto legitimate = [&](const ExpVec& p) {
        // exists m' >= 1 and tangent chi with m' * p == m * chi
        for (const auto& chi : tangent)
          for (int mp = 1; mp <= 64; ++mp) {
            bool eq = true;
            for (size_t i = 0; i < p.size(); ++i)
              if (mp * p[i] != m * chi[i]) eq = false;
            if (eq) return true;
          }
        return false;
      };
      for (const auto& [d, f] : jm.entries()) {
        QRational fa = f.restrict_vertex(alpha, ptc).normalized();
        fa.simplify();
        for (const auto& [fac, mult] : fa.den()) {
          if (fac.u.mono.trivial()) continue;  // unit-root poles belong to K_-
          // pole points solve q^k = u^{-1}
          ExpVec p;
          bool divisible = true;
          for (const auto& s : chars) {
            int e = -fac.u.mono.exponent(s);
            if (e % fac.k != 0) divisible = false;
            p.push_back(e / fac.k);
          }
          if (!divisible) continue;  // caught at the pass where k | m exponents
          if (legitimate(p)) continue;
          ParamMonomial pmono;
          for (size_t i = 0; i < chars.size(); ++i)
            if (p[i] != 0) pmono.mul(ParamMonomial::symbol(chars[i], p[i]));
          auto ru = fac.u.coef.inverse().as_root_of_unity();
          std::vector<Cyclo> branches =
              ru ? detail::kth_roots_of_unit_root(fac.u.coef.inverse(), fac.k)
                 : std::vector<Cyclo>{};
          CheckItem item;
          item.what = "non-tangent pole " + fac.to_string() + " at vertex " +
                      model->vertices[alpha].name + " m=" + std::to_string(m) +
                      " d=" + expvec_str(d);
          if (branches.empty()) {
            item.pass = false;  // non-unit-root coefficient: outside the model
          } else {
            item.pass = true;
            for (const auto& w : branches) {
              KClass res = residue_at(fa, ScalarMonomial{w, pmono});
              if (!res.is_zero()) item.pass = false;
            }
          }
          rep.items.push_back(item);
        }
      }
    }
  }
  return rep;
}

enum class TransferFamily { Mu, MuInv };

// The transfer identity for the duality factor families: evaluated at
// q = lambda^{1/m}, the factor of degree d + mD restricted at the edge source
// equals the factor of degree d restricted at the target,
//   1 - mu f_j|_alpha q^{m_j(d) + m m_j(D)} == 1 - mu f_j|_beta q^{m_j(d)},
// and mirrored for the inverse family.  Passing for all edges, m, d and
// summands makes the transform recursion-compatible.
inline CheckReport recursion_transfer_check(const BundleSpec& spec, const GKMGraph& graph,
                                            TransferFamily family, int m_max, int d_max) {
  CheckReport rep;
  auto chars = graph.char_symbols();
  auto is_char = [&chars](const std::string& s) {
    return std::find(chars.begin(), chars.end(), s) != chars.end();
  };
  auto degrees = all_degrees(graph.model->rank(), d_max);
  for (int m = 1; m <= m_max; ++m) {
    for (const auto& e : graph.edges) {
      ScalarMonomial point{Cyclo::one(), e.character};
      for (const auto& d : degrees) {
        for (size_t jj = 0; jj < spec.summands.size(); ++jj) {
          const auto& sm = spec.summands[jj];
          long md = spec.m_of(jj, d);
          long mD = spec.m_of(jj, e.degree);
          auto restriction = [&](size_t vertex) {
            ScalarMonomial r = sm.weight;
            for (size_t i = 0; i < sm.e.size(); ++i)
              r = r * graph.model->vertices[vertex].gen_restriction[i].pow(sm.e[i]);
            return ScalarMonomial{r.coef, r.mono.pow(m)};  // rescaled lattice
          };
          int dir = family == TransferFamily::Mu ? 1 : -1;
          ScalarMonomial mu{Cyclo::one(), ParamMonomial::symbol(kMu, dir)};
          ScalarMonomial fa = restriction(e.from), fb = restriction(e.to);
          if (dir < 0) {
            fa = fa.inverse();
            fb = fb.inverse();
          }
          Scalar lhs = Scalar::one() -
                       Scalar(mu * fa * point.pow(dir * (md + m * mD)));
          Scalar rhs = Scalar::one() - Scalar(mu * fb * point.pow(dir * md));
          CheckItem item;
          item.what = "edge " + graph.model->vertices[e.from].name + "->" +
                      graph.model->vertices[e.to].name + " m=" + std::to_string(m) + " d=" +
                      expvec_str(d) + " j=" + std::to_string(jj) +
                      (dir < 0 ? " family=muinv" : " family=mu");
          item.pass = (lhs == rhs);
          rep.items.push_back(item);
        }
      }
    }
  }
  return rep;
}

// Character substitution chi -> 1 with the two guards: LimitSingular when a
// coefficient denominator vanishes, PlusMinusLeak when a denominator factor
// crosses from the plus side to unit-root poles (rejected on the plus side).
inline LoopElement nonequivariant_limit(const LoopElement& j,
                                        const std::vector<std::string>& char_syms,
                                        Side side = Side::Full) {
  ParamAssignment to_one;
  for (const auto& s : char_syms) to_one[s] = ScalarMonomial::one();
  LoopSpaceProfile before = LoopSpaceProfile::classic_rational().with_chars(char_syms, false);
  LoopSpaceProfile after = LoopSpaceProfile::classic_rational();

  return j.map_entries([&](const ExpVec& d, const QRational& f) {
    QRational g = f.normalized();
    for (const auto& [fac, mult] : g.den()) {
      FactorClass pre = classify_factor(fac, before);
      auto img = detail::substitute_factor(fac, to_one);
      if (!img) continue;
      FactorClass post = classify_factor(*img, after);
      if (side != Side::Minus && pre == FactorClass::PlusAdmissible &&
          post == FactorClass::UnitRootPole)
        throw PlusMinusLeak(fac.to_string() + " at degree " + expvec_str(d));
    }
    try {
      QRational out = g.substitute(to_one);
      out.simplify();
      return out;
    } catch (const DivisionByZeroAfterSubstitution& err) {
      throw LimitSingular(err.what());
    }
  });
}

// Novikov specialization of the abelian/non-abelian correspondence:
// degrees (d_{is}) push forward along column blocks to d_i = sum_s d_{is},
// entries summing over the fibers.
inline LoopElement abelian_specialize(const LoopElement& j,
                                      const std::vector<std::vector<size_t>>& blocks) {
  LoopElement out(j.model(), j.dmax(), blocks.size());
  for (const auto& [d, f] : j.entries()) {
    ExpVec target(blocks.size(), 0);
    for (size_t i = 0; i < blocks.size(); ++i)
      for (size_t col : blocks[i]) target[i] += d[col];
    out.add_entry(target, f);
  }
  return out;
}

}  // namespace qkcone

#endif
