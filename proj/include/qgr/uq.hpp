/**
 * @file uq.hpp
 * @brief The quantized enveloping algebra U = U_q(sl_N): words in the
 *        Chevalley generators, Hopf structure maps, the fundamental
 *        (vector) representation, quantum root vectors, and the PBW
 *        monomial basis used throughout.
 *
 * Elements are finite Q(q)-linear combinations of generator words.  Words
 * are kept free (no relation rewriting) except for the trivial cancellation
 * of adjacent K_i Kinv_i pairs; all semantic consumers evaluate elements
 * through representations or pairings, where the defining relations hold.
 */
#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgr/linalg.hpp"
#include "qgr/ratfunc.hpp"

namespace qgr {

/// Generator kinds: E_i, F_i (1 <= i <= N-1), K_i and its inverse.
enum class GK : std::uint8_t { E, F, K, Kinv };

inline const char* gk_name(GK k) {
  switch (k) {
    case GK::E: return "E";
    case GK::F: return "F";
    case GK::K: return "K";
    case GK::Kinv: return "Kinv";
  }
  return "?";
}

struct GenSym {
  GK kind;
  int idx;  // 1-based simple-root index
  auto operator<=>(const GenSym&) const = default;
};

using UWord = std::vector<GenSym>;

inline bool cancels(const GenSym& a, const GenSym& b) {
  return a.idx == b.idx && ((a.kind == GK::K && b.kind == GK::Kinv) ||
                            (a.kind == GK::Kinv && b.kind == GK::K));
}

/// Concatenate two words, cancelling K/Kinv pairs meeting at the seam.
inline UWord mul_words(const UWord& a, const UWord& b) {
  UWord out = a;
  size_t j = 0;
  while (!out.empty() && j < b.size() && cancels(out.back(), b[j])) {
    out.pop_back();
    ++j;
  }
  out.insert(out.end(), b.begin() + static_cast<long>(j), b.end());
  return out;
}

inline std::string word_name(const UWord& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << '*';
    os << gk_name(w[i].kind) << w[i].idx;
  }
  return os.str();
}

// ======================================================================
// UElement: a Q(q)-linear combination of words.
// ======================================================================
class UElement {
 public:
  UElement() = default;
  explicit UElement(const RatFunc& c) {
    if (!c.is_zero()) terms_[UWord{}] = c;
  }

  static UElement zero() { return UElement(); }
  static UElement one() { return UElement(RatFunc(1)); }
  static UElement gen(GK kind, int idx) {
    UElement x;
    x.terms_[UWord{GenSym{kind, idx}}] = RatFunc(1);
    return x;
  }
  static UElement from_word(UWord w, RatFunc c = RatFunc(1)) {
    UElement x;
    if (!c.is_zero()) x.terms_[std::move(w)] = std::move(c);
    return x;
  }

  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] const std::map<UWord, RatFunc>& terms() const { return terms_; }

  void add_term(const UWord& w, const RatFunc& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  UElement& operator+=(const UElement& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  UElement& operator-=(const UElement& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  UElement& operator*=(const RatFunc& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }

  friend UElement operator+(UElement a, const UElement& b) { return a += b; }
  friend UElement operator-(UElement a, const UElement& b) { return a -= b; }
  friend UElement operator*(UElement a, const RatFunc& s) { return a *= s; }
  friend UElement operator*(const RatFunc& s, UElement a) { return a *= s; }
  friend UElement operator-(UElement a) {
    for (auto& [w, c] : a.terms_) c = -c;
    return a;
  }

  friend UElement operator*(const UElement& a, const UElement& b) {
    UElement out;
    for (const auto& [wa, ca] : a.terms_)
      for (const auto& [wb, cb] : b.terms_) out.add_term(mul_words(wa, wb), ca * cb);
    return out;
  }

  friend bool operator==(const UElement& a, const UElement& b) { return a.terms_ == b.terms_; }

  [[nodiscard]] std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      if (c.is_one() && !w.empty())
        os << word_name(w);
      else if (w.empty())
        os << c.str();
      else
        os << c.str() << "*" << word_name(w);
    }
    return os.str();
  }

 private:
  std::map<UWord, RatFunc> terms_;
};

// ======================================================================
// Hopf structure maps.
// ======================================================================

/// Counit: eps(E)=eps(F)=0, eps(K)=eps(Kinv)=1.
inline RatFunc counit(const UElement& x) {
  RatFunc out;
  for (const auto& [w, c] : x.terms()) {
    bool kills = false;
    for (const auto& g : w)
      if (g.kind == GK::E || g.kind == GK::F) {
        kills = true;
        break;
      }
    if (!kills) out += c;
  }
  return out;
}

/// Antipode: the algebra anti-homomorphism with S(E) = -E*Kinv,
/// S(F) = -K*F, S(K) = Kinv.
inline UElement antipode(const UElement& x) {
  auto s_letter = [](const GenSym& g) -> UElement {
    switch (g.kind) {
      case GK::E:
        return -(UElement::gen(GK::E, g.idx) * UElement::gen(GK::Kinv, g.idx));
      case GK::F:
        return -(UElement::gen(GK::K, g.idx) * UElement::gen(GK::F, g.idx));
      case GK::K:
        return UElement::gen(GK::Kinv, g.idx);
      case GK::Kinv:
        return UElement::gen(GK::K, g.idx);
    }
    return UElement::zero();
  };
  UElement out;
  for (const auto& [w, c] : x.terms()) {
    UElement prod = UElement::one();
    for (auto it = w.rbegin(); it != w.rend(); ++it) prod = prod * s_letter(*it);
    out += c * prod;
  }
  return out;
}

/// Tensors with a fixed number of legs, as linear combinations of tuples
/// of words.
using UTensor = std::map<std::vector<UWord>, RatFunc>;

inline void tensor_add(UTensor& t, const std::vector<UWord>& legs, const RatFunc& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = t.try_emplace(legs, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) t.erase(it);
  }
}

/**
 * Iterated coproduct with `legs` tensor legs (legs >= 1; legs == 2 is the
 * plain coproduct).  Uses the closed forms
 *   Delta^(n-1)(E_i) = sum_m 1x..x1 x E_i x K_i x..x K_i   (E in slot m),
 *   Delta^(n-1)(F_i) = sum_m Kinv_i x..x Kinv_i x F_i x 1x..x1,
 * and group-likeness of K_i.
 */
inline UTensor coproduct_tensor(const UElement& x, int legs = 2) {
  if (legs < 1) throw std::invalid_argument("coproduct_tensor: legs must be >= 1");
  const size_t n = static_cast<size_t>(legs);
  auto letter_tensor = [&](const GenSym& g) {
    std::vector<std::pair<std::vector<UWord>, RatFunc>> out;
    if (g.kind == GK::K || g.kind == GK::Kinv) {
      out.push_back({std::vector<UWord>(n, UWord{g}), RatFunc(1)});
      return out;
    }
    for (size_t m = 0; m < n; ++m) {
      std::vector<UWord> t(n);
      t[m] = UWord{g};
      if (g.kind == GK::E)
        for (size_t p = m + 1; p < n; ++p) t[p] = UWord{GenSym{GK::K, g.idx}};
      else
        for (size_t p = 0; p < m; ++p) t[p] = UWord{GenSym{GK::Kinv, g.idx}};
      out.push_back({std::move(t), RatFunc(1)});
    }
    return out;
  };
  UTensor result;
  for (const auto& [w, c] : x.terms()) {
    UTensor acc;
    acc[std::vector<UWord>(n)] = c;
    for (const auto& g : w) {
      UTensor next;
      auto lt = letter_tensor(g);
      for (const auto& [legsAcc, ca] : acc)
        for (const auto& [legsG, cg] : lt) {
          std::vector<UWord> merged(n);
          for (size_t p = 0; p < n; ++p) merged[p] = mul_words(legsAcc[p], legsG[p]);
          tensor_add(next, merged, ca * cg);
        }
      acc = std::move(next);
    }
    for (const auto& [legsAcc, ca] : acc) tensor_add(result, legsAcc, ca);
  }
  return result;
}

// ======================================================================
// Fundamental (vector) representation on C(q)^N.
// ======================================================================

/**
 * Matrix of x in the fundamental representation:
 *   rho(E_k) = e_{k+1,k},  rho(F_k) = e_{k,k+1},
 *   rho(K_k) = diag(1, ..., q^{-1} at k, q at k+1, ..., 1).
 * All defining relations of U hold for these matrices (tested).
 */
inline Mat fundamental_matrix(const UElement& x, int N) {
  auto letter = [&](const GenSym& g) {
    Mat m(N, N);
    switch (g.kind) {
      case GK::E:
        m.at(g.idx, g.idx - 1) = RatFunc(1);
        break;
      case GK::F:
        m.at(g.idx - 1, g.idx) = RatFunc(1);
        break;
      case GK::K:
      case GK::Kinv: {
        for (int i = 0; i < N; ++i) m.at(i, i) = RatFunc(1);
        bool inv = g.kind == GK::Kinv;
        m.at(g.idx - 1, g.idx - 1) = RatFunc::q_power(inv ? 1 : -1);
        m.at(g.idx, g.idx) = RatFunc::q_power(inv ? -1 : 1);
        break;
      }
    }
    return m;
  };
  Mat out(N, N);
  for (const auto& [w, c] : x.terms()) {
    Mat prod = Mat::identity(N);
    for (const auto& g : w) {
      if (g.idx < 1 || g.idx >= N) throw std::invalid_argument("generator index out of range");
      prod = prod * letter(g);
    }
    out = out + scale(prod, c);
  }
  return out;
}

// ======================================================================
// Weights (alpha-coordinates in Z^{N-1}).
// ======================================================================
struct Weight {
  std::vector<long long> alpha;
  auto operator<=>(const Weight&) const = default;

  static Weight zero(int N) { return Weight{std::vector<long long>(static_cast<size_t>(N - 1))}; }

  Weight& operator+=(const Weight& o) {
    for (size_t i = 0; i < alpha.size(); ++i) alpha[i] += o.alpha[i];
    return *this;
  }
  Weight& operator-=(const Weight& o) {
    for (size_t i = 0; i < alpha.size(); ++i) alpha[i] -= o.alpha[i];
    return *this;
  }
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }

  [[nodiscard]] std::string str() const {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < alpha.size(); ++i) {
      if (i) os << ',';
      os << alpha[i];
    }
    os << ')';
    return os.str();
  }
};

inline Weight word_weight(const UWord& w, int N) {
  Weight wt = Weight::zero(N);
  for (const auto& g : w) {
    if (g.kind == GK::E) wt.alpha[static_cast<size_t>(g.idx - 1)] += 1;
    if (g.kind == GK::F) wt.alpha[static_cast<size_t>(g.idx - 1)] -= 1;
  }
  return wt;
}

/// Weight of x if every word of x has the same weight; nullopt when the
/// element is inhomogeneous.
inline std::optional<Weight> weight(const UElement& x, int N) {
  std::optional<Weight> wt;
  for (const auto& [w, c] : x.terms()) {
    Weight ww = word_weight(w, N);
    if (!wt)
      wt = ww;
    else if (*wt != ww)
      return std::nullopt;
  }
  if (!wt) return Weight::zero(N);  // zero element: weight 0 by convention
  return wt;
}

// ======================================================================
// Quantum root vectors and PBW monomials.
// ======================================================================

/// Root-vector convention: `alternate` replaces the commutator coefficient
/// q^{-1} by q in every defining bracket.
enum class Convention : std::uint8_t { primary, alternate };

/// Positive roots handled by the PBW basis: pairs (i,j) with
/// 1 <= i <= r <= j <= N-1, in lexicographic order.
inline std::vector<std::pair<int, int>> phi_plus_roots(int N, int r) {
  std::vector<std::pair<int, int>> roots;
  for (int i = 1; i <= r; ++i)
    for (int j = r; j <= N - 1; ++j) roots.emplace_back(i, j);
  return roots;
}

/**
 * Quantum root vector E(i,j) (kind GK::E) or F(i,j) (kind GK::F) for a
 * root (i,j) with 1 <= i <= r <= j <= N-1:
 *   E(r,r) = E_r,
 *   E(r,j) = E(r,j-1) E_j - c E_j E(r,j-1)          (j > r),
 *   E(i,j) = E_i E(i+1,j) - c E(i+1,j) E_i          (i < r),
 * with c = q^{-1} (primary) or q (alternate); F mirrors E letter for
 * letter.
 */
inline UElement root_vector(GK kind, int i, int j, int r,
                            Convention conv = Convention::primary) {
  if (kind != GK::E && kind != GK::F)
    throw std::invalid_argument("root_vector: kind must be E or F");
  if (!(1 <= i && i <= r && r <= j))
    throw std::invalid_argument("root_vector: need 1 <= i <= r <= j <= N-1");
  RatFunc c = RatFunc::q_power(conv == Convention::primary ? -1 : 1);
  if (i == r && j == r) return UElement::gen(kind, r);
  if (i == r) {
    UElement prev = root_vector(kind, r, j - 1, r, conv);
    UElement gj = UElement::gen(kind, j);
    return prev * gj - c * (gj * prev);
  }
  UElement inner = root_vector(kind, i + 1, j, r, conv);
  UElement gi = UElement::gen(kind, i);
  return gi * inner - c * (inner * gi);
}

/// alpha-coordinate weight of the root (i,j): alpha_i + ... + alpha_j.
inline Weight root_weight(int i, int j, int N) {
  Weight wt = Weight::zero(N);
  for (int k = i; k <= j; ++k) wt.alpha[static_cast<size_t>(k - 1)] += 1;
  return wt;
}

struct PbwMonomial {
  std::vector<int> fExp, eExp;  // exponents aligned with phi_plus_roots
  auto operator<=>(const PbwMonomial&) const = default;

  [[nodiscard]] int f_total() const {
    int s = 0;
    for (int e : fExp) s += e;
    return s;
  }
  [[nodiscard]] int e_total() const {
    int s = 0;
    for (int e : eExp) s += e;
    return s;
  }
  [[nodiscard]] int degree() const { return f_total() + e_total(); }
};

namespace detail {
/// Compositions of `total` into `parts` parts, first part descending,
/// recursively.
inline void compositions(int total, int parts, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int first = total; first >= 0; --first) {
    cur.push_back(first);
    compositions(total - first, parts - 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  compositions(total, parts, cur, out);
  return out;
}
}  // namespace detail

/**
 * All PBW monomials of degree <= maxDeg, ordered: total degree ascending;
 * within a degree, F-degree descending; within that, F then E exponent
 * vectors enumerated with earlier roots' exponents descending first.
 */
inline std::vector<PbwMonomial> pbw_monomials(int N, int r, int maxDeg) {
  const int R = static_cast<int>(phi_plus_roots(N, r).size());
  std::vector<PbwMonomial> out;
  for (int d = 0; d <= maxDeg; ++d)
    for (int ftot = d; ftot >= 0; --ftot) {
      auto fs = detail::compositions(ftot, R);
      auto es = detail::compositions(d - ftot, R);
      for (const auto& f : fs)
        for (const auto& e : es) out.push_back(PbwMonomial{f, e});
    }
  return out;
}

/// Expand a PBW monomial into an element of U: product of F-root powers
/// (roots ascending) then E-root powers (roots ascending).
inline UElement pbw_expand(const PbwMonomial& m, int N, int r,
                           Convention conv = Convention::primary) {
  auto roots = phi_plus_roots(N, r);
  UElement prod = UElement::one();
  for (size_t t = 0; t < roots.size(); ++t)
    for (int k = 0; k < m.fExp[t]; ++k)
      prod = prod * root_vector(GK::F, roots[t].first, roots[t].second, r, conv);
  for (size_t t = 0; t < roots.size(); ++t)
    for (int k = 0; k < m.eExp[t]; ++k)
      prod = prod * root_vector(GK::E, roots[t].first, roots[t].second, r, conv);
  return prod;
}

inline Weight pbw_weight(const PbwMonomial& m, int N, int r) {
  auto roots = phi_plus_roots(N, r);
  Weight wt = Weight::zero(N);
  for (size_t t = 0; t < roots.size(); ++t) {
    Weight rw = root_weight(roots[t].first, roots[t].second, N);
    for (int k = 0; k < m.eExp[t]; ++k) wt += rw;
    for (int k = 0; k < m.fExp[t]; ++k) wt -= rw;
  }
  return wt;
}

/// Display name, e.g. "F[1,2]^2*E[1,1]"; the lone root of N=2 prints as
/// plain "F"/"E"; the empty monomial prints as "1".
inline std::string pbw_name(const PbwMonomial& m, int N, int r) {
  auto roots = phi_plus_roots(N, r);
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const char* letter, size_t t, int exp) {
    if (exp == 0) return;
    if (!first) os << '*';
    first = false;
    os << letter;
    if (roots.size() > 1) os << '[' << roots[t].first << ',' << roots[t].second << ']';
    if (exp > 1) os << '^' << exp;
  };
  for (size_t t = 0; t < roots.size(); ++t) emit("F", t, m.fExp[t]);
  for (size_t t = 0; t < roots.size(); ++t) emit("E", t, m.eExp[t]);
  if (first) return "1";
  return os.str();
}

// ======================================================================
// Word-syntax parser: "E1*F2*Kinv1" with root-vector atoms "E[1,3]".
// ======================================================================
inline UElement parse_uword(const std::string& s, int N, int r,
                            Convention conv = Convention::primary) {
  UElement out = UElement::one();
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  skip_ws();
  size_t lastNonWs = s.find_last_not_of(" \t\n\r");
  if (lastNonWs != std::string::npos && pos == lastNonWs && s[pos] == '1') return out;
  bool expectAtom = true;
  while (pos < s.size()) {
    skip_ws();
    if (pos >= s.size()) break;
    if (!expectAtom) {
      if (s[pos] != '*') throw std::invalid_argument("expected '*' in word: " + s);
      ++pos;
      skip_ws();
    }
    expectAtom = false;
    GK kind;
    if (s.compare(pos, 4, "Kinv") == 0) {
      kind = GK::Kinv;
      pos += 4;
    } else if (s[pos] == 'K') {
      kind = GK::K;
      pos += 1;
    } else if (s[pos] == 'E') {
      kind = GK::E;
      pos += 1;
    } else if (s[pos] == 'F') {
      kind = GK::F;
      pos += 1;
    } else {
      throw std::invalid_argument("unknown generator in word: " + s);
    }
    skip_ws();
    if (pos < s.size() && s[pos] == '[') {
      if (kind == GK::K || kind == GK::Kinv)
        throw std::invalid_argument("root-vector brackets require E or F: " + s);
      ++pos;
      size_t comma = s.find(',', pos), close = s.find(']', pos);
      if (comma == std::string::npos || close == std::string::npos || comma > close)
        throw std::invalid_argument("malformed root vector in word: " + s);
      int i = std::stoi(s.substr(pos, comma - pos));
      int j = std::stoi(s.substr(comma + 1, close - comma - 1));
      pos = close + 1;
      if (!(1 <= i && i <= r && r <= j && j <= N - 1))
        throw std::invalid_argument("root vector index out of range in word: " + s);
      out = out * root_vector(kind, i, j, r, conv);
    } else {
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) throw std::invalid_argument("missing generator index in word: " + s);
      int idx = std::stoi(s.substr(start, pos - start));
      if (idx < 1 || idx > N - 1)
        throw std::invalid_argument("generator index out of range in word: " + s);
      out = out * UElement::gen(kind, idx);
    }
  }
  return out;
}

}  // namespace qgr
