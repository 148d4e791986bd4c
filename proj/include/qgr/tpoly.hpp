#pragma once
/**
 * Sparse polynomials in up to two solver parameters with coefficients in
 * Q(q), together with the exact root isolation used when the classification
 * search has to pick points out of a parametric family of candidate
 * subspaces.  Everything is exact; quadratics are split only when their
 * discriminant is a perfect square in Q(q), and anything beyond the
 * implemented solving strategies is reported as unsolved rather than
 * guessed.
 */

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgr/ratfunc.hpp"

namespace qgr {

struct TPoly {
  // exponent pair (e0, e1) -> nonzero coefficient
  std::map<std::array<int, 2>, RatFunc> terms;

  TPoly() = default;

  static TPoly constant(RatFunc c) {
    TPoly p;
    if (!c.is_zero()) p.terms[{0, 0}] = std::move(c);
    return p;
  }
  static TPoly var(int v) {
    TPoly p;
    std::array<int, 2> e{0, 0};
    e[static_cast<size_t>(v)] = 1;
    p.terms[e] = RatFunc(1);
    return p;
  }

  [[nodiscard]] bool is_zero() const { return terms.empty(); }
  [[nodiscard]] bool is_constant() const {
    return terms.empty() ||
           (terms.size() == 1 && terms.begin()->first == std::array<int, 2>{0, 0});
  }
  [[nodiscard]] RatFunc constant_value() const {
    auto it = terms.find({0, 0});
    return it == terms.end() ? RatFunc() : it->second;
  }
  [[nodiscard]] int deg(int v) const {
    int d = 0;
    for (const auto& [e, c] : terms) d = std::max(d, e[static_cast<size_t>(v)]);
    return d;
  }
  [[nodiscard]] bool depends(int v) const { return deg(v) > 0; }

  TPoly& operator+=(const TPoly& b) {
    for (const auto& [e, c] : b.terms) {
      auto it = terms.find(e);
      if (it == terms.end()) {
        terms[e] = c;
      } else {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
      }
    }
    return *this;
  }
  TPoly& operator-=(const TPoly& b) {
    for (const auto& [e, c] : b.terms) {
      auto it = terms.find(e);
      if (it == terms.end()) {
        terms[e] = -c;
      } else {
        it->second -= c;
        if (it->second.is_zero()) terms.erase(it);
      }
    }
    return *this;
  }
  friend TPoly operator+(TPoly a, const TPoly& b) { return a += b; }
  friend TPoly operator-(TPoly a, const TPoly& b) { return a -= b; }
  friend TPoly operator-(const TPoly& a) {
    TPoly r;
    for (const auto& [e, c] : a.terms) r.terms[e] = -c;
    return r;
  }
  friend TPoly operator*(const TPoly& a, const TPoly& b) {
    TPoly r;
    for (const auto& [ea, ca] : a.terms)
      for (const auto& [eb, cb] : b.terms) {
        std::array<int, 2> e{ea[0] + eb[0], ea[1] + eb[1]};
        auto it = r.terms.find(e);
        if (it == r.terms.end()) {
          RatFunc v = ca * cb;
          if (!v.is_zero()) r.terms[e] = std::move(v);
        } else {
          it->second += ca * cb;
          if (it->second.is_zero()) r.terms.erase(it);
        }
      }
    return r;
  }
  TPoly& operator*=(const TPoly& b) { return *this = *this * b; }
  friend TPoly operator*(const RatFunc& s, const TPoly& a) {
    TPoly r;
    if (s.is_zero()) return r;
    for (const auto& [e, c] : a.terms) r.terms[e] = s * c;
    return r;
  }

  friend bool operator==(const TPoly& a, const TPoly& b) { return a.terms == b.terms; }

  [[nodiscard]] RatFunc eval(const RatFunc& t0, const RatFunc& t1) const {
    RatFunc acc;
    for (const auto& [e, c] : terms) {
      RatFunc m = c;
      for (int i = 0; i < e[0]; ++i) m *= t0;
      for (int i = 0; i < e[1]; ++i) m *= t1;
      acc += m;
    }
    return acc;
  }

  [[nodiscard]] std::string str() const {
    if (terms.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms) {
      if (!out.empty()) out += " + ";
      out += "(" + c.str() + ")";
      if (e[0] > 0) out += "*s^" + std::to_string(e[0]);
      if (e[1] > 0) out += "*t^" + std::to_string(e[1]);
    }
    return out;
  }
};

/// Square root in Q(q) if one exists.
inline std::optional<RatFunc> ratfunc_sqrt(const RatFunc& x) {
  if (x.is_zero()) return RatFunc();
  auto s = (x.numerator() * x.denominator()).sqrt_exact();
  if (!s) return std::nullopt;
  return RatFunc(*s, x.denominator());
}

// ---- univariate helpers (coefficient vectors over Q(q), index = power) ----

inline std::vector<RatFunc> univariate_coeffs(const TPoly& p, int v) {
  std::vector<RatFunc> c(static_cast<size_t>(p.deg(v)) + 1);
  for (const auto& [e, cf] : p.terms) c[static_cast<size_t>(e[static_cast<size_t>(v)])] += cf;
  while (c.size() > 1 && c.back().is_zero()) c.pop_back();
  return c;
}

inline void uni_trim(std::vector<RatFunc>& c) {
  while (c.size() > 1 && c.back().is_zero()) c.pop_back();
  if (c.size() == 1 && c[0].is_zero()) c.clear();
}

inline bool uni_is_zero(const std::vector<RatFunc>& c) {
  for (const auto& x : c)
    if (!x.is_zero()) return false;
  return true;
}

inline std::vector<RatFunc> uni_rem(std::vector<RatFunc> a, const std::vector<RatFunc>& b) {
  while (a.size() >= b.size() && !a.empty()) {
    RatFunc f = a.back() / b.back();
    size_t off = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    uni_trim(a);
    if (a.empty()) break;
    if (a.size() >= b.size() && a.back().is_zero()) uni_trim(a);
  }
  return a;
}

/// Monic gcd over Q(q)[t].
inline std::vector<RatFunc> uni_gcd(std::vector<RatFunc> a, std::vector<RatFunc> b) {
  uni_trim(a);
  uni_trim(b);
  while (!b.empty()) {
    std::vector<RatFunc> r = uni_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    RatFunc lead = a.back();
    for (auto& x : a) x = x / lead;
  }
  return a;
}

inline std::vector<RatFunc> uni_derivative(const std::vector<RatFunc>& c) {
  std::vector<RatFunc> d;
  for (size_t i = 1; i < c.size(); ++i) d.push_back(RatFunc(static_cast<long long>(i)) * c[i]);
  uni_trim(d);
  return d;
}

struct RootResult {
  std::vector<RatFunc> roots;     // Q(q)-rational roots, deduplicated
  bool complete = false;          // certified: no further Q(q) roots exist
  bool discardedIrrational = false;
  std::string note;
};

/// All Q(q)-rational roots of a univariate polynomial over Q(q); complete
/// certification for degrees <= 2 after square-free reduction.
inline RootResult univariate_roots(std::vector<RatFunc> c) {
  RootResult out;
  uni_trim(c);
  if (c.empty()) {
    out.note = "identically zero";
    return out;  // complete=false: every value is a root
  }
  // factor out t^k
  size_t low = 0;
  while (low < c.size() && c[low].is_zero()) ++low;
  if (low > 0) {
    out.roots.push_back(RatFunc());
    c.erase(c.begin(), c.begin() + static_cast<long>(low));
  }
  // square-free reduction preserves the root set
  if (c.size() >= 3) {
    auto d = uni_derivative(c);
    auto g = uni_gcd(c, d);
    if (g.size() > 1) {
      // divide c by g exactly
      std::vector<RatFunc> quot(c.size() - g.size() + 1);
      std::vector<RatFunc> rem = c;
      for (size_t k = quot.size(); k-- > 0;) {
        RatFunc f = rem[k + g.size() - 1] / g.back();
        quot[k] = f;
        for (size_t i = 0; i < g.size(); ++i) rem[k + i] -= f * g[i];
      }
      c = std::move(quot);
      uni_trim(c);
    }
  }
  if (c.size() <= 1) {
    out.complete = true;
    return out;
  }
  if (c.size() == 2) {
    out.roots.push_back(-(c[0] / c[1]));
    out.complete = true;
  } else if (c.size() == 3) {
    RatFunc disc = c[1] * c[1] - RatFunc(4) * c[2] * c[0];
    auto s = ratfunc_sqrt(disc);
    if (s) {
      RatFunc twoA = RatFunc(2) * c[2];
      out.roots.push_back((-c[1] + *s) / twoA);
      out.roots.push_back((-c[1] - *s) / twoA);
    } else {
      out.discardedIrrational = true;
      out.note = "quadratic with non-square discriminant has no Q(q) roots";
    }
    out.complete = true;
  } else {
    out.note = "degree > 2 after square-free reduction; not factored";
    out.complete = false;
  }
  std::sort(out.roots.begin(), out.roots.end());
  out.roots.erase(std::unique(out.roots.begin(), out.roots.end()), out.roots.end());
  return out;
}

/// p with variable v replaced by num/den (both free of v); returns
/// den^deg_v(p) * p|_{t_v = num/den}, a polynomial in the remaining
/// variable.
inline TPoly substitute_ratio(const TPoly& p, int v, const TPoly& num, const TPoly& den) {
  int D = p.deg(v);
  // collect coefficients of powers of t_v
  std::vector<TPoly> byPow(static_cast<size_t>(D) + 1);
  for (const auto& [e, cf] : p.terms) {
    std::array<int, 2> rest = e;
    int pw = rest[static_cast<size_t>(v)];
    rest[static_cast<size_t>(v)] = 0;
    TPoly t;
    t.terms[rest] = cf;
    byPow[static_cast<size_t>(pw)] += t;
  }
  // powers of num and den
  std::vector<TPoly> numPow(static_cast<size_t>(D) + 1), denPow(static_cast<size_t>(D) + 1);
  numPow[0] = denPow[0] = TPoly::constant(RatFunc(1));
  for (int i = 1; i <= D; ++i) {
    numPow[static_cast<size_t>(i)] = numPow[static_cast<size_t>(i - 1)] * num;
    denPow[static_cast<size_t>(i)] = denPow[static_cast<size_t>(i - 1)] * den;
  }
  TPoly out;
  for (int j = 0; j <= D; ++j)
    out += byPow[static_cast<size_t>(j)] * numPow[static_cast<size_t>(j)] *
           denPow[static_cast<size_t>(D - j)];
  return out;
}

struct SolveResult {
  bool solved = false;      // system fully analyzed by the implemented strategies
  bool wholeSpace = false;  // every parameter value satisfies the system
  std::vector<std::array<RatFunc, 2>> points;
  bool discardedIrrational = false;
  std::string note;
};

/**
 * Exact common zeros of a polynomial system in at most two parameters.
 * Strategy: gcd root isolation for one effective variable; linear
 * elimination (constant-coefficient or polynomial-coefficient) for two.
 * Every reported point is re-verified against the full system.
 */
inline SolveResult solve_conditions(std::vector<TPoly> eqs, int nvars) {
  SolveResult out;
  eqs.erase(std::remove_if(eqs.begin(), eqs.end(), [](const TPoly& p) { return p.is_zero(); }),
            eqs.end());
  if (eqs.empty()) {
    out.solved = true;
    out.wholeSpace = true;
    return out;
  }
  for (const TPoly& p : eqs)
    if (p.is_constant()) {
      out.solved = true;  // nonzero constant: no solutions
      return out;
    }
  bool uses0 = false, uses1 = false;
  for (const TPoly& p : eqs) {
    uses0 = uses0 || p.depends(0);
    uses1 = uses1 || p.depends(1);
  }
  auto verify = [&eqs](const RatFunc& a, const RatFunc& b) {
    for (const TPoly& p : eqs)
      if (!p.eval(a, b).is_zero()) return false;
    return true;
  };
  auto push_point = [&out, &verify](const RatFunc& a, const RatFunc& b) {
    if (!verify(a, b)) return;
    std::array<RatFunc, 2> pt{a, b};
    for (const auto& q : out.points)
      if (q == pt) return;
    out.points.push_back(pt);
  };

  if (!uses0 || !uses1) {
    int v = uses0 ? 0 : 1;
    if (nvars == 2 && ((uses0 && !uses1) || (!uses0 && uses1))) {
      // The other parameter is unconstrained; any root gives a line of
      // solutions.  Report honestly instead of sampling.
      std::vector<RatFunc> g;
      for (const TPoly& p : eqs) {
        g = g.empty() ? univariate_coeffs(p, v) : uni_gcd(g, univariate_coeffs(p, v));
        if (g.size() == 1) break;
      }
      if (g.size() == 1) {
        out.solved = true;  // no common roots at all
        return out;
      }
      out.note = "one parameter unconstrained by the conditions";
      return out;
    }
    std::vector<RatFunc> g;
    for (const TPoly& p : eqs)
      g = g.empty() ? univariate_coeffs(p, v) : uni_gcd(g, univariate_coeffs(p, v));
    RootResult rr = univariate_roots(g);
    out.discardedIrrational = rr.discardedIrrational;
    if (!rr.complete && !uni_is_zero(g)) {
      out.note = "univariate system not fully factored: " + rr.note;
      return out;
    }
    for (const RatFunc& t : rr.roots)
      v == 0 ? push_point(t, RatFunc()) : push_point(RatFunc(), t);
    out.solved = true;
    return out;
  }

  // Two effective variables: eliminate one through an equation linear in it.
  for (int v = 1; v >= 0; --v) {
    for (size_t pick = 0; pick < eqs.size(); ++pick) {
      if (eqs[pick].deg(v) != 1) continue;
      // p = A + B*t_v with A, B free of t_v
      TPoly A, B;
      for (const auto& [e, cf] : eqs[pick].terms) {
        std::array<int, 2> rest = e;
        int pw = rest[static_cast<size_t>(v)];
        rest[static_cast<size_t>(v)] = 0;
        TPoly t;
        t.terms[rest] = cf;
        (pw == 0 ? A : B) += t;
      }
      int other = 1 - v;
      // Branch 1: t_v = -A/B where B != 0.
      std::vector<TPoly> sub;
      for (size_t i = 0; i < eqs.size(); ++i) {
        if (i == pick) continue;
        sub.push_back(substitute_ratio(eqs[i], v, -A, B));
      }
      SolveResult inner = solve_conditions(sub, 1);  // effectively univariate in `other`
      // inner works on variable `other`; rebuild full points
      if (!inner.solved && !inner.wholeSpace) continue;  // try another pivot equation
      out.discardedIrrational = out.discardedIrrational || inner.discardedIrrational;
      auto expand_other = [&](const RatFunc& tOther) {
        RatFunc bval = other == 0 ? B.eval(tOther, RatFunc()) : B.eval(RatFunc(), tOther);
        if (bval.is_zero()) return;  // handled in branch 2
        RatFunc aval = other == 0 ? A.eval(tOther, RatFunc()) : A.eval(RatFunc(), tOther);
        RatFunc tv = -(aval / bval);
        if (other == 0)
          push_point(tOther, tv);
        else
          push_point(tv, tOther);
      };
      if (inner.wholeSpace) {
        // Every value of `other` solves the substituted system; the original
        // then has a curve of solutions unless B-vanishing cuts it down.
        out.note = "curve of solutions along the elimination branch";
        return out;
      }
      for (const auto& pt : inner.points)
        expand_other(pt[static_cast<size_t>(other)]);
      // Branch 2: B = 0 and A = 0 simultaneously (the picked equation is
      // then vacuous); both are polynomials in `other` alone.
      std::vector<RatFunc> g =
          uni_gcd(univariate_coeffs(A, other), univariate_coeffs(B, other));
      RootResult rr = univariate_roots(g);
      out.discardedIrrational = out.discardedIrrational || rr.discardedIrrational;
      if (!rr.complete && !uni_is_zero(g)) {
        out.note = "branch gcd not fully factored: " + rr.note;
        return out;
      }
      for (const RatFunc& tOther : rr.roots) {
        // substitute t_other, solve remaining system in t_v
        std::vector<TPoly> rest;
        for (size_t i = 0; i < eqs.size(); ++i) {
          if (i == pick) continue;
          TPoly num = TPoly::constant(tOther), den = TPoly::constant(RatFunc(1));
          rest.push_back(substitute_ratio(eqs[i], other, num, den));
        }
        SolveResult tail = solve_conditions(rest, 1);
        out.discardedIrrational = out.discardedIrrational || tail.discardedIrrational;
        if (!tail.solved) {
          out.note = "nested solve incomplete";
          return out;
        }
        if (tail.wholeSpace) {
          out.note = "curve of solutions on a degenerate branch";
          return out;
        }
        for (const auto& pt : tail.points) {
          RatFunc tv = pt[static_cast<size_t>(v)];
          if (other == 0)
            push_point(tOther, tv);
          else
            push_point(tv, tOther);
        }
      }
      out.solved = true;
      return out;
    }
  }
  out.note = "no equation linear in a parameter; elimination not implemented";
  return out;
}

}  // namespace qgr
