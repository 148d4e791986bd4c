#pragma once
// ============================================================================
// Self-check suites exposed through the command-line tool and reused by the
// acceptance battery.  Every suite returns a SuiteResult whose witness names
// the first counterexample found; all checks are exact.
//
//   relations   -- every defining relation (including the trace and
//                  projection identities) pairs to zero against every
//                  monomial class of the truncated dual.
//   pairing     -- structural properties of the dual pairing itself:
//                  coproduct compatibility, well-definedness on the
//                  quotient coalgebra, and degree orthogonality.
//   primitives  -- the space of primitive functionals at degree <= 2 has
//                  the predicted dimension 2r(N-r), split evenly by side.
//   actions     -- the generator action computed from the coaction and the
//                  pairing agrees with the closed-form action on every
//                  generator pair.
//   nilpotency  -- every classified space induces a representation with
//                  nilpotent off-diagonal spectrum and the predicted
//                  eigenvalue transitions.
// ============================================================================

#include <map>
#include <string>
#include <vector>

#include "qgr/report.hpp"
#include "qgr/tangent.hpp"

namespace qgr {

namespace detail_verify {

inline std::string gen_name(GenSym g) {
  std::string base;
  switch (g.kind) {
    case GK::E: base = "E"; break;
    case GK::F: base = "F"; break;
    case GK::K: base = "K"; break;
    case GK::Kinv: base = "K"; break;
  }
  base += std::to_string(g.idx);
  if (g.kind == GK::Kinv) base += "^-1";
  return base;
}

inline std::vector<GenSym> all_generators(int N) {
  std::vector<GenSym> out;
  for (GK kind : {GK::E, GK::F, GK::K, GK::Kinv})
    for (int i = 1; i < N; ++i) out.push_back({kind, i});
  return out;
}

inline std::vector<GenSym> fixing_generators(int N, int r) {
  std::vector<GenSym> out;
  for (int i = 1; i < N; ++i)
    if (i != r) out.push_back({GK::E, i});
  for (int i = 1; i < N; ++i)
    if (i != r) out.push_back({GK::F, i});
  for (int i = 1; i < N; ++i) out.push_back({GK::K, i});
  for (int i = 1; i < N; ++i) out.push_back({GK::Kinv, i});
  return out;
}

/// All plain words of exactly `len` letters over the full generator set.
inline std::vector<ZWord> words_of_length(int N, int len) {
  const auto gens = all_zgens(N);
  std::vector<ZWord> out;
  std::vector<size_t> idx(static_cast<size_t>(len), 0);
  while (true) {
    ZWord w;
    for (int p = 0; p < len; ++p) w.push_back(gens[idx[static_cast<size_t>(p)]]);
    out.push_back(w);
    int p = len - 1;
    while (p >= 0 && ++idx[static_cast<size_t>(p)] == gens.size()) {
      idx[static_cast<size_t>(p)] = 0;
      --p;
    }
    if (p < 0) break;
  }
  return out;
}

}  // namespace detail_verify

// ----------------------------------------------------------------------
// relations
// ----------------------------------------------------------------------

inline SuiteResult verify_relations(const PairingContext& ctx) {
  SuiteResult out;
  out.suite = "relations";
  const int N = ctx.N(), r = ctx.r();
  const auto rules = relation_table(N, r);
  for (const auto& rule : rules) {
    BElement diff = rule.lhs - rule.rhs;
    for (size_t c = 0; c < ctx.cols().size(); ++c) {
      RatFunc v = v_read_b(ctx.stack(c), diff);
      if (!v.is_zero()) {
        out.pass = false;
        out.witness = "relation case " + rule.caseTag + " pairs to " + v.str() + " against " +
                      pbw_name(ctx.cols()[c], N, r);
        return out;
      }
    }
  }
  out.lines.push_back(std::to_string(rules.size()) +
                      " defining relations annihilated by all " +
                      std::to_string(ctx.cols().size()) + " monomial classes of degree <= " +
                      std::to_string(ctx.k()));
  return out;
}

// ----------------------------------------------------------------------
// pairing
// ----------------------------------------------------------------------

inline SuiteResult verify_pairing(const PairingContext& ctx) {
  using namespace detail_verify;
  SuiteResult out;
  out.suite = "pairing";
  const int N = ctx.N(), r = ctx.r();
  const Convention conv = ctx.convention();

  // (a) Coproduct compatibility: <x, ab> = sum <x_(1), a> <x_(2), b> for
  // every generator x and all plain words a, b of length <= 2.
  {
    const auto words = spanning_words(N, r, 2);
    VStack base4 = v_unit(N, r, 4);
    VStack base2 = v_unit(N, r, 2);
    size_t triples = 0;
    for (GenSym g : all_generators(N)) {
      VStack sx = base4;
      v_append_gen(sx, g);
      struct Leg {
        VStack s1, s2;
        RatFunc c;
      };
      std::vector<Leg> legs;
      for (const auto& [pair, c] : coproduct_tensor(UElement::gen(g.kind, g.idx), 2)) {
        Leg leg;
        leg.s1 = base2;
        for (GenSym letter : pair[0]) v_append_gen(leg.s1, letter);
        leg.s2 = base2;
        for (GenSym letter : pair[1]) v_append_gen(leg.s2, letter);
        leg.c = c;
        legs.push_back(std::move(leg));
      }
      for (const ZWord& a : words)
        for (const ZWord& b : words) {
          ZWord ab = a;
          ab.insert(ab.end(), b.begin(), b.end());
          RatFunc lhs = v_read(sx, ab);
          RatFunc rhs;
          for (const Leg& leg : legs) rhs += leg.c * v_read(leg.s1, a) * v_read(leg.s2, b);
          ++triples;
          if (!(lhs - rhs).is_zero()) {
            out.pass = false;
            out.witness = "coproduct compatibility fails for " + gen_name(g) + " on (" +
                          zword_name(a) + ", " + zword_name(b) + "): " + lhs.str() +
                          " != " + rhs.str();
            return out;
          }
        }
    }
    out.lines.push_back("coproduct compatibility holds on " + std::to_string(triples) +
                        " (generator, word, word) triples");
  }

  // (b) Well-definedness on the quotient: for every generator x of the
  // fixing subalgebra, <x u, b> = eps(x) <u, b> for all monomials u of
  // degree <= 2 and plain words b of length <= 2, so the augmentation
  // ideal of the fixing subalgebra annihilates the coinvariant algebra.
  {
    const auto words = spanning_words(N, r, 2);
    const auto mons = pbw_monomials(N, r, 2);
    VStack base2 = v_unit(N, r, 2);
    size_t triples = 0;
    for (GenSym g : fixing_generators(N, r)) {
      VStack sg = base2;
      v_append_gen(sg, g);
      RatFunc eg = counit(UElement::gen(g.kind, g.idx));
      for (const PbwMonomial& m : mons) {
        UElement xu = pbw_expand(m, N, r, conv);
        VStack sgu = v_append_elem(sg, xu);
        VStack su = v_append_elem(base2, xu);
        for (const ZWord& b : words) {
          RatFunc lhs = v_read(sgu, b);
          RatFunc rhs = eg * v_read(su, b);
          ++triples;
          if (!(lhs - rhs).is_zero()) {
            out.pass = false;
            out.witness = "quotient well-definedness fails for " + gen_name(g) + " * " +
                          pbw_name(m, N, r) + " on " + zword_name(b) + ": " + lhs.str() +
                          " != " + rhs.str();
            return out;
          }
        }
      }
    }
    out.lines.push_back("quotient well-definedness holds on " + std::to_string(triples) +
                        " (generator, monomial, word) triples");
  }

  // (c) Degree orthogonality: monomial classes of degree d annihilate
  // every product of d+1 shifted letters.
  {
    const int dmax = std::min(2, ctx.k() - 1);
    size_t checks = 0;
    for (int d = 0; d <= dmax; ++d) {
      const auto words = words_of_length(N, d + 1);
      for (const ZWord& w : words) {
        BElement e = expand_shifted(w, N, r);
        for (size_t c = 0; c < ctx.cols().size(); ++c) {
          if (ctx.cols()[c].degree() != d) continue;
          RatFunc v = v_read_b(ctx.stack(c), e);
          ++checks;
          if (!v.is_zero()) {
            out.pass = false;
            out.witness = "degree orthogonality fails: " + pbw_name(ctx.cols()[c], N, r) +
                          " pairs to " + v.str() + " with " + zword_name(w, true);
            return out;
          }
        }
      }
    }
    out.lines.push_back("degree orthogonality holds on " + std::to_string(checks) +
                        " (monomial, shifted product) pairs up to degree " +
                        std::to_string(dmax));
  }
  return out;
}

// ----------------------------------------------------------------------
// primitives
// ----------------------------------------------------------------------

inline SuiteResult verify_primitives(const UbarModel& M) {
  SuiteResult out;
  out.suite = "primitives";
  const long long D = static_cast<long long>(M.r()) * (M.N() - M.r());
  const auto both = primitives(M, 2, 0);
  const auto plus = primitives(M, 2, +1);
  const auto minus = primitives(M, 2, -1);
  out.lines.push_back("primitive functionals at degree <= 2: " + std::to_string(both.size()) +
                      " (predicted " + std::to_string(2 * D) + ")");
  out.lines.push_back("E-side: " + std::to_string(plus.size()) + ", F-side: " +
                      std::to_string(minus.size()) + " (predicted " + std::to_string(D) +
                      " each)");
  if (static_cast<long long>(both.size()) != 2 * D) {
    out.pass = false;
    out.witness = "primitive space has dimension " + std::to_string(both.size()) +
                  ", predicted " + std::to_string(2 * D);
  } else if (static_cast<long long>(plus.size()) != D ||
             static_cast<long long>(minus.size()) != D) {
    out.pass = false;
    out.witness = "side split " + std::to_string(plus.size()) + "+" +
                  std::to_string(minus.size()) + " differs from " + std::to_string(D) + "+" +
                  std::to_string(D);
  }
  return out;
}

// ----------------------------------------------------------------------
// actions
// ----------------------------------------------------------------------

inline SuiteResult verify_actions(int N, int r) {
  using namespace detail_verify;
  (void)r;  // the generator action on matrix entries does not depend on r
  SuiteResult out;
  out.suite = "actions";
  size_t checks = 0;
  for (GenSym g : all_generators(N))
    for (int i = 1; i <= N; ++i)
      for (int j = 1; j <= N; ++j) {
        ZGen z{i, j};
        BElement lhs = act_from_pairing(g, z, N);
        BElement rhs = act(g, BElement::from_word({z}), N);
        ++checks;
        if (!(lhs - rhs).is_zero()) {
          out.pass = false;
          out.witness = "action of " + gen_name(g) + " on " +
                        zword_name(ZWord{z}) + ": pairing gives " + lhs.str() +
                        ", formula gives " + rhs.str();
          return out;
        }
      }
  out.lines.push_back("coaction-derived and closed-form actions agree on " +
                      std::to_string(checks) + " generator pairs");
  return out;
}

// ----------------------------------------------------------------------
// nilpotency
// ----------------------------------------------------------------------

inline SuiteResult verify_nilpotency(const UbarModel& M, int maxDim) {
  SuiteResult out;
  out.suite = "nilpotency";
  ClassifyResult res = classify(M, maxDim);
  if (res.refusedAudit) {
    out.pass = false;
    out.witness = "classification refused by the truncation audit";
    return out;
  }
  if (res.unsupported) {
    out.pass = false;
    out.witness = "classification hit an unsupported multiplicity pattern";
    return out;
  }
  for (const TangentSpace& T : res.spaces) {
    InducedRep rep = induced_rep(M, T);
    SpectrumReport sr = nilpotency_report(M, rep);
    if (!sr.pass()) {
      out.pass = false;
      out.witness = T.name + ": " +
                    (sr.violations.empty() ? "non-nilpotent spectrum" : sr.violations.front());
      return out;
    }
    out.lines.push_back(T.name + ": nilpotent off-diagonal spectrum, " +
                        std::to_string(sr.muPlusChecked + sr.muMinusChecked) +
                        " eigenvalue transitions verified");
  }
  out.lines.insert(out.lines.begin(), std::to_string(res.spaces.size()) +
                                          " classified spaces at max dim " +
                                          std::to_string(maxDim));
  return out;
}

}  // namespace qgr
