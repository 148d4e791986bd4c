/**
 * @file qgrass.hpp
 * @brief The coordinate algebra B = O_q(Gr(r,N)): generators z_{ij}, the
 *        counit, the left U-action, the embedding into u/S(u) words, the
 *        relation database, standard-form reordering, and spanning words.
 *
 * Words in the z_{ij} are kept free; the relation table supplies exact
 *        identities (each certified downstream by pairing values), and
 *        reorder() rewrites words to the standard V- | V0 | V+ block form.
 */
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgr/ratfunc.hpp"
#include "qgr/uq.hpp"

namespace qgr {

// ======================================================================
// Generators and words.
// ======================================================================
struct ZGen {
  int i = 1, j = 1;  // 1-based indices in 1..N
  auto operator<=>(const ZGen&) const = default;
};

enum class ZClass { Minus, Zero, Plus };

inline ZClass z_class(ZGen z) {
  if (z.i > z.j) return ZClass::Minus;
  if (z.i == z.j) return ZClass::Zero;
  return ZClass::Plus;
}

using ZWord = std::vector<ZGen>;

inline std::string zgen_name(ZGen z, bool shifted = false) {
  std::ostringstream os;
  os << 'z' << (shifted ? "+" : "") << '[' << z.i << ',' << z.j << ']';
  return os.str();
}

inline std::string zword_name(const ZWord& w, bool shifted = false) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (size_t t = 0; t < w.size(); ++t) {
    if (t) os << '*';
    os << zgen_name(w[t], shifted);
  }
  return os.str();
}

class BElement {
 public:
  BElement() = default;
  explicit BElement(const RatFunc& c) {
    if (!c.is_zero()) terms_[ZWord{}] = c;
  }

  static BElement zero() { return BElement(); }
  static BElement one() { return BElement(RatFunc(1)); }
  static BElement gen(ZGen z) {
    BElement x;
    x.terms_[ZWord{z}] = RatFunc(1);
    return x;
  }
  static BElement from_word(ZWord w, RatFunc c = RatFunc(1)) {
    BElement x;
    if (!c.is_zero()) x.terms_[std::move(w)] = std::move(c);
    return x;
  }

  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] const std::map<ZWord, RatFunc>& terms() const { return terms_; }

  void add_term(const ZWord& w, const RatFunc& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  BElement& operator+=(const BElement& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  BElement& operator-=(const BElement& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  BElement& operator*=(const RatFunc& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }

  friend BElement operator+(BElement a, const BElement& b) { return a += b; }
  friend BElement operator-(BElement a, const BElement& b) { return a -= b; }
  friend BElement operator*(BElement a, const RatFunc& s) { return a *= s; }
  friend BElement operator*(const RatFunc& s, BElement a) { return a *= s; }
  friend BElement operator-(BElement a) {
    for (auto& [w, c] : a.terms_) c = -c;
    return a;
  }
  friend BElement operator*(const BElement& a, const BElement& b) {
    BElement out;
    for (const auto& [wa, ca] : a.terms_)
      for (const auto& [wb, cb] : b.terms_) {
        ZWord w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
        out.add_term(w, ca * cb);
      }
    return out;
  }
  friend bool operator==(const BElement& a, const BElement& b) { return a.terms_ == b.terms_; }

  [[nodiscard]] std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      if (c.is_one() && !w.empty())
        os << zword_name(w);
      else if (w.empty())
        os << c.str();
      else
        os << c.str() << "*" << zword_name(w);
    }
    return os.str();
  }

 private:
  std::map<ZWord, RatFunc> terms_;
};

// ======================================================================
// Counit, weights, shifted generators.
// ======================================================================

/// eps(z_{ij}) = q^{-2N-1+2i} when i = j > r, else 0.
inline RatFunc z_epsilon_gen(ZGen z, int N, int r) {
  if (z.i == z.j && z.i > r) return RatFunc::q_power(-2 * N - 1 + 2 * z.i);
  return RatFunc(0);
}

/// Multiplicative extension of the counit to B.
inline RatFunc epsilon(const BElement& x, int N, int r) {
  RatFunc out;
  for (const auto& [w, c] : x.terms()) {
    RatFunc prod = c;
    for (const ZGen& z : w) {
      prod *= z_epsilon_gen(z, N, r);
      if (prod.is_zero()) break;
    }
    out += prod;
  }
  return out;
}

/// Shifted generator z+_{ij} = z_{ij} - eps(z_{ij}).
inline BElement shifted_gen(ZGen z, int N, int r) {
  return BElement::gen(z) - BElement(z_epsilon_gen(z, N, r));
}

/// Expand a word in shifted generators into plain generators.
inline BElement expand_shifted(const ZWord& w, int N, int r) {
  BElement out = BElement::one();
  for (const ZGen& z : w) out = out * shifted_gen(z, N, r);
  return out;
}

/**
 * Weight of z_{ij} in alpha-coordinates: the expansion of eps_i - eps_j
 * (+1 on positions i..j-1 when i < j, -1 on j..i-1 when i > j).  With
 * this sign a nonzero pairing <x, w> forces wt(x) = z_weight(w).
 */
inline Weight z_weight_gen(ZGen z, int N) {
  Weight wt = Weight::zero(N);
  if (z.i < z.j)
    for (int k = z.i; k <= z.j - 1; ++k) wt.alpha[static_cast<size_t>(k - 1)] += 1;
  else if (z.i > z.j)
    for (int k = z.j; k <= z.i - 1; ++k) wt.alpha[static_cast<size_t>(k - 1)] -= 1;
  return wt;
}

inline Weight z_weight(const ZWord& w, int N) {
  Weight wt = Weight::zero(N);
  for (const ZGen& z : w) wt += z_weight_gen(z, N);
  return wt;
}

// ======================================================================
// Left action of U on B.
// ======================================================================
namespace detail {
inline int dlt(int a, int b) { return a == b ? 1 : 0; }

/// Exponent c with K_k acting on z_{ij} by q^c.
inline int k_exponent(int k, ZGen z) {
  return dlt(z.j, k) - dlt(z.j, k + 1) - dlt(z.i, k) + dlt(z.i, k + 1);
}

/// E_k on a single generator: delta_{ik} q^{d_{kj}-d_{k,j-1}} z_{i+1,j}
/// - delta_{j,k+1} q z_{i,j-1}.
inline BElement act_E_gen(int k, ZGen z, int N) {
  BElement out;
  if (z.i == k && z.i + 1 <= N)
    out += RatFunc::q_power(dlt(k, z.j) - dlt(k, z.j - 1)) * BElement::gen(ZGen{z.i + 1, z.j});
  if (z.j == k + 1)
    out -= RatFunc::q() * BElement::gen(ZGen{z.i, z.j - 1});
  return out;
}

/// F_k on a single generator: delta_{i,k+1} z_{i-1,j}
/// - delta_{jk} q^{d_{ik}-d_{i,k+1}-1} z_{i,j+1}.
inline BElement act_F_gen(int k, ZGen z, int N) {
  BElement out;
  if (z.i == k + 1)
    out += BElement::gen(ZGen{z.i - 1, z.j});
  if (z.j == k && z.j + 1 <= N)
    out -= RatFunc::q_power(dlt(z.i, k) - dlt(z.i, k + 1) - 1) * BElement::gen(ZGen{z.i, z.j + 1});
  return out;
}
}  // namespace detail

/**
 * Left action of a single generator on B, extended to products through the
 * coproduct: E acts with K-twists on the right tail, F with Kinv-twists on
 * the left head, K and Kinv act diagonally.
 */
inline BElement act(GenSym g, const BElement& x, int N) {
  if (g.idx < 1 || g.idx > N - 1) throw std::invalid_argument("act: generator index out of range");
  BElement out;
  const int k = g.idx;
  for (const auto& [w, c] : x.terms()) {
    switch (g.kind) {
      case GK::K:
      case GK::Kinv: {
        int e = 0;
        for (const ZGen& z : w) e += detail::k_exponent(k, z);
        if (g.kind == GK::Kinv) e = -e;
        out.add_term(w, c * RatFunc::q_power(e));
        break;
      }
      case GK::E: {
        for (size_t m = 0; m < w.size(); ++m) {
          BElement mid = detail::act_E_gen(k, w[m], N);
          if (mid.is_zero()) continue;
          int tail = 0;
          for (size_t t = m + 1; t < w.size(); ++t) tail += detail::k_exponent(k, w[t]);
          for (const auto& [mw, mc] : mid.terms()) {
            ZWord nw(w.begin(), w.begin() + static_cast<long>(m));
            nw.insert(nw.end(), mw.begin(), mw.end());
            nw.insert(nw.end(), w.begin() + static_cast<long>(m) + 1, w.end());
            out.add_term(nw, c * mc * RatFunc::q_power(tail));
          }
        }
        break;
      }
      case GK::F: {
        for (size_t m = 0; m < w.size(); ++m) {
          BElement mid = detail::act_F_gen(k, w[m], N);
          if (mid.is_zero()) continue;
          int head = 0;
          for (size_t t = 0; t < m; ++t) head -= detail::k_exponent(k, w[t]);
          for (const auto& [mw, mc] : mid.terms()) {
            ZWord nw(w.begin(), w.begin() + static_cast<long>(m));
            nw.insert(nw.end(), mw.begin(), mw.end());
            nw.insert(nw.end(), w.begin() + static_cast<long>(m) + 1, w.end());
            out.add_term(nw, c * mc * RatFunc::q_power(head));
          }
        }
        break;
      }
    }
  }
  return out;
}

/// Left action of a full element of U: (xy) acts as x after y.
inline BElement act(const UElement& x, const BElement& b, int N) {
  BElement out;
  for (const auto& [w, c] : x.terms()) {
    BElement cur = b;
    for (auto it = w.rbegin(); it != w.rend() && !cur.is_zero(); ++it)
      cur = act(*it, cur, N);
    out += c * cur;
  }
  return out;
}

// ======================================================================
// Embedding into words over {u^a_b, S(u^a_b)}.
// ======================================================================
enum class SlotKind : std::uint8_t { U, SU };

struct MixedLetter {
  SlotKind kind;
  int a, b;  // U: u^a_b; SU: S(u^a_b)
  auto operator<=>(const MixedLetter&) const = default;
};

using MixedWord = std::vector<MixedLetter>;
using MixedElement = std::map<MixedWord, RatFunc>;

inline std::string mixed_name(const MixedWord& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (size_t t = 0; t < w.size(); ++t) {
    if (t) os << '*';
    if (w[t].kind == SlotKind::U)
      os << "u[" << w[t].a << ',' << w[t].b << ']';
    else
      os << "S(u[" << w[t].a << ',' << w[t].b << "])";
  }
  return os.str();
}

/// i(z_{ij}) = sum_{k=r+1..N} q^{-2N-1+2k} u^k_i S(u^j_k), extended
/// multiplicatively to words and linearly to B.
inline MixedElement embed(const BElement& x, int N, int r) {
  MixedElement out;
  for (const auto& [w, c] : x.terms()) {
    std::vector<std::pair<MixedWord, RatFunc>> acc{{MixedWord{}, c}};
    for (const ZGen& z : w) {
      std::vector<std::pair<MixedWord, RatFunc>> next;
      for (const auto& [mw, mc] : acc)
        for (int k = r + 1; k <= N; ++k) {
          MixedWord nw = mw;
          nw.push_back(MixedLetter{SlotKind::U, k, z.i});
          nw.push_back(MixedLetter{SlotKind::SU, z.j, k});
          next.emplace_back(std::move(nw), mc * RatFunc::q_power(-2 * N - 1 + 2 * k));
        }
      acc = std::move(next);
    }
    for (auto& [mw, mc] : acc) {
      auto [it, inserted] = out.try_emplace(mw, mc);
      if (!inserted) {
        it->second += mc;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  return out;
}

// ======================================================================
// Relation database.
// ======================================================================
struct RewriteRule {
  BElement lhs, rhs;  // the identity lhs = rhs holds in B
  std::string caseTag;
  /// Set when lhs is a single two-letter word with coefficient 1; such
  /// rules drive the reordering dispatch.
  std::optional<std::pair<ZGen, ZGen>> pair_lhs;
};

namespace detail {

inline BElement zw(std::initializer_list<ZGen> gens, RatFunc c = RatFunc(1)) {
  return BElement::from_word(ZWord(gens), std::move(c));
}

inline RewriteRule make_pair_rule(std::string tag, ZGen x, ZGen y, BElement rhs) {
  RewriteRule rule;
  rule.lhs = zw({x, y});
  rule.rhs = std::move(rhs);
  rule.caseTag = std::move(tag);
  rule.pair_lhs = std::make_pair(x, y);
  return rule;
}

/// qhat = q - q^{-1}.
inline RatFunc qh() { return RatFunc::qhat(); }

}  // namespace detail

/**
 * The complete relation table at (N, r): every Appendix-style case
 * instantiated over all valid index tuples (both displayed forms where the
 * source gives two), the derived dispatch orientations (tags suffixed
 * "r", plus the projector-reduced variant "4.6u"), the trace relation, and
 * all projector instances.
 */
inline std::vector<RewriteRule> relation_table(int N, int r) {
  using detail::make_pair_rule;
  using detail::qh;
  using detail::zw;
  std::vector<RewriteRule> rules;
  auto Z = [](int i, int j) { return ZGen{i, j}; };
  auto g = [](int e) { return RatFunc::q_power(e); };

  // ---- Item 1: V0 is commutative (lhs out of order: index descending).
  for (int d = 1; d <= N; ++d)
    for (int a = d + 1; a <= N; ++a)
      rules.push_back(make_pair_rule("1.1", Z(a, a), Z(d, d), zw({Z(d, d), Z(a, a)})));

  // ---- Item 2: V0 * V+ as written (z_bb z_ca, c < a), plus solved forms.
  for (int c = 1; c <= N; ++c)
    for (int a = c + 1; a <= N; ++a)
      for (int b = 1; b <= N; ++b) {
        ZGen zb = Z(b, b), zca = Z(c, a);
        if (b < c) {
          rules.push_back(make_pair_rule("2.1", zb, zca, zw({zca, zb})));
          rules.push_back(make_pair_rule("2.1r", zca, zb, zw({zb, zca})));
        } else if (b == c) {
          BElement sum;
          for (int i = 1; i < b; ++i) sum += g(2 * b - 2 * i) * zw({Z(b, i), Z(i, a)});
          rules.push_back(make_pair_rule(
              "2.2", zb, Z(b, a), g(-2) * zw({Z(b, a), zb}) - g(-1) * qh() * sum));
          rules.push_back(make_pair_rule(
              "2.2r", Z(b, a), zb, g(2) * zw({zb, Z(b, a)}) + g(1) * qh() * sum));
        } else if (b < a) {  // c < b < a
          BElement sum;
          for (int i = 1; i < b; ++i) sum += g(2 * b - 2 * i) * zw({Z(c, i), Z(i, a)});
          rules.push_back(make_pair_rule(
              "2.3", zb, zca,
              zw({zca, zb}) - g(1) * qh() * zw({Z(c, b), Z(b, a)}) - qh() * qh() * sum));
          rules.push_back(make_pair_rule("2.3b", zb, zca,
                                         zw({zca, zb}) - qh() * zw({Z(b, a), Z(c, b)})));
          rules.push_back(make_pair_rule(
              "2.3r", zca, zb,
              zw({zb, zca}) + g(1) * qh() * zw({Z(c, b), Z(b, a)}) + qh() * qh() * sum));
        } else if (b == a) {
          BElement sum;
          for (int i = 1; i < a; ++i) sum += g(2 * a - 2 * i) * zw({Z(c, i), Z(i, a)});
          rules.push_back(make_pair_rule("2.4", zb, zca,
                                         zw({zca, zb}) + g(-1) * qh() * sum));
          rules.push_back(make_pair_rule("2.4r", zca, zb,
                                         zw({zb, zca}) - g(-1) * qh() * sum));
        } else {  // c < a < b
          rules.push_back(make_pair_rule("2.5", zb, zca, zw({zca, zb})));
          rules.push_back(make_pair_rule("2.5r", zca, zb, zw({zb, zca})));
        }
      }

  // ---- Item 3: V0 * V- as written (z_bb z_ca, c > a); lhs already out of
  // order, so these double as dispatch rules.
  for (int c = 1; c <= N; ++c)
    for (int a = 1; a < c; ++a)
      for (int b = 1; b <= N; ++b) {
        ZGen zb = Z(b, b), zca = Z(c, a);
        if (b < a) {
          rules.push_back(make_pair_rule("3.1", zb, zca, zw({zca, zb})));
        } else if (b == a) {
          BElement sum;
          for (int i = 1; i < b; ++i) sum += g(2 * b - 2 * i) * zw({Z(c, i), Z(i, b)});
          rules.push_back(make_pair_rule(
              "3.2", zb, Z(c, b), g(2) * zw({Z(c, b), zb}) + g(1) * qh() * sum));
        } else if (b < c) {  // a < b < c
          BElement sum;
          for (int i = 1; i < b; ++i) sum += g(2 * b - 2 * i) * zw({Z(c, i), Z(i, a)});
          rules.push_back(make_pair_rule(
              "3.3", zb, zca,
              zw({zca, zb}) + g(1) * qh() * zw({Z(c, b), Z(b, a)}) + qh() * qh() * sum));
          rules.push_back(make_pair_rule("3.3b", zb, zca,
                                         zw({zca, zb}) + qh() * zw({Z(b, a), Z(c, b)})));
        } else if (b == c) {
          BElement sum;
          for (int i = 1; i < b; ++i) sum += g(2 * b - 2 * i) * zw({Z(b, i), Z(i, a)});
          rules.push_back(make_pair_rule("3.4", zb, Z(b, a),
                                         zw({Z(b, a), zb}) - g(-1) * qh() * sum));
        } else {  // a < c < b
          rules.push_back(make_pair_rule("3.5", zb, zca, zw({zca, zb})));
        }
      }

  // ---- Item 4: V+ * V- (z_db z_ca with d < b, c > a); 13 interleavings.
  // lhs out of order; these are the dispatch rules, with the
  // projector-reduced "4.6u" preferred over raw "4.6".
  for (int d = 1; d <= N; ++d)
    for (int b = d + 1; b <= N; ++b)
      for (int c = 1; c <= N; ++c)
        for (int a = 1; a < c; ++a) {
          ZGen zdb = Z(d, b), zca = Z(c, a);
          if (b < a) {
            rules.push_back(make_pair_rule("4.1", zdb, zca, zw({zca, zdb})));
          } else if (b == a && d < b && b < c) {
            rules.push_back(make_pair_rule("4.2", zdb, zca, g(1) * zw({zca, zdb})));
          } else if (d < a && a < b && b < c) {
            rules.push_back(make_pair_rule(
                "4.3", zdb, zca, zw({zca, zdb}) + qh() * zw({Z(c, b), Z(d, a)})));
          } else if (d == a && a < b && b < c) {
            BElement sum;
            for (int i = 1; i < a; ++i) sum += g(2 * a - 2 * i) * zw({Z(c, i), Z(i, b)});
            rules.push_back(make_pair_rule(
                "4.4", zdb, zca,
                g(1) * zw({zca, zdb}) + qh() * zw({Z(c, b), Z(a, a)}) + qh() * sum));
          } else if (a < d && d < b && b < c) {
            rules.push_back(make_pair_rule(
                "4.5", zdb, zca, zw({zca, zdb}) + qh() * zw({Z(c, b), Z(d, a)})));
          } else if (d < a && a < b && b == c) {
            BElement sum;
            for (int j = 1; j < b; ++j) sum += g(2 * b - 2 * j) * zw({Z(d, j), Z(j, a)});
            rules.push_back(make_pair_rule(
                "4.6", zdb, zca,
                g(-1) * zw({zca, zdb}) + g(-1) * qh() * zw({Z(b, b), Z(d, a)}) -
                    g(-1) * qh() * sum));
            // Projector-reduced variant (the filtration-decreasing form):
            // z_db z_ba = q z_ba z_db + q qh z+_bb z_da
            //             + q qh sum_{m>b} q^{2b-2m} z_dm z_ma.
            BElement upper;
            for (int m = b + 1; m <= N; ++m)
              upper += g(2 * b - 2 * m) * zw({Z(d, m), Z(m, a)});
            BElement rhs = g(1) * zw({zca, zdb}) +
                           g(1) * qh() * (shifted_gen(Z(b, b), N, r) * zw({Z(d, a)})) +
                           g(1) * qh() * upper;
            rules.push_back(make_pair_rule("4.6u", zdb, zca, std::move(rhs)));
          } else if (d == a && a < b && b == c) {
            BElement sumA, sumB;
            for (int j = 1; j < a; ++j) sumA += g(2 * a - 2 * j) * zw({Z(b, j), Z(j, b)});
            for (int j = 1; j < b; ++j) sumB += g(2 * b - 2 * j) * zw({Z(a, j), Z(j, a)});
            rules.push_back(make_pair_rule(
                "4.7", zdb, zca,
                zw({zca, zdb}) + g(-1) * qh() * zw({Z(b, b), Z(a, a)}) +
                    g(-1) * qh() * sumA - g(-1) * qh() * sumB));
          } else if (a < d && d < b && b == c) {
            BElement sum;
            for (int j = 1; j < b; ++j) sum += g(2 * b - 2 * j) * zw({Z(d, j), Z(j, a)});
            rules.push_back(make_pair_rule(
                "4.8", zdb, zca,
                g(-1) * zw({zca, zdb}) + g(-1) * qh() * zw({Z(d, a), Z(b, b)}) -
                    g(-1) * qh() * sum));
          } else if (d < a && a < c && c < b) {
            rules.push_back(make_pair_rule(
                "4.9", zdb, zca, zw({zca, zdb}) + qh() * zw({Z(d, a), Z(c, b)})));
            rules.push_back(make_pair_rule(
                "4.9b", zdb, zca, zw({zca, zdb}) + qh() * zw({Z(c, b), Z(d, a)})));
          } else if (d == a && a < c && c < b) {
            BElement sum;
            for (int i = 1; i < a; ++i) sum += g(2 * a - 2 * i) * zw({Z(c, i), Z(i, b)});
            rules.push_back(make_pair_rule(
                "4.10", zdb, zca,
                g(1) * zw({zca, zdb}) + qh() * zw({Z(a, a), Z(c, b)}) + qh() * sum));
          } else if (a < d && d < c && c < b) {
            rules.push_back(make_pair_rule(
                "4.11", zdb, zca, zw({zca, zdb}) + qh() * zw({Z(d, a), Z(c, b)})));
          } else if (a < d && d == c && c < b) {
            rules.push_back(make_pair_rule("4.12", zdb, zca, g(1) * zw({zca, zdb})));
          } else if (a < c && c < d) {
            rules.push_back(make_pair_rule("4.13", zdb, zca, zw({zca, zdb})));
          }
        }

  // ---- Item 5: V+ * V+ as written (lhs in order) plus solved dispatch
  // orientations 5.2r / 5.3r for out-of-order pairs.
  for (int d = 1; d <= N; ++d)
    for (int b = d + 1; b <= N; ++b)
      for (int c = 1; c <= N; ++c)
        for (int a = c + 1; a <= N; ++a) {
          ZGen zdb = Z(d, b), zca = Z(c, a);
          if (d < b && b == c && c < a) {
            BElement sum;
            for (int i = 1; i < b; ++i) sum += g(2 * b - 2 * i) * zw({Z(d, i), Z(i, a)});
            rules.push_back(make_pair_rule(
                "5.1", zdb, zca, g(-1) * zw({zca, zdb}) - g(-1) * qh() * sum));
          }
          if (d == c && c < b && b < a)
            rules.push_back(make_pair_rule("5.2", Z(c, b), zca, g(-1) * zw({zca, Z(c, b)})));
          if (d < c) {
            // q^{d_bc} z_db z_ca = q^{d_ab} z_ca z_db
            //   - d_bc qh sum_{j<b} q^{2b-2j} z_dj z_ja + (a<b) qh z_da z_cb
            int dbc = b == c ? 1 : 0, dab = a == b ? 1 : 0;
            BElement rhs = g(dab) * zw({zca, zdb});
            if (dbc)
              for (int j = 1; j < b; ++j)
                rhs -= qh() * g(2 * b - 2 * j) * zw({Z(d, j), Z(j, a)});
            if (a < b) rhs += qh() * zw({Z(d, a), Z(c, b)});
            RewriteRule rule;
            rule.lhs = g(dbc) * zw({zdb, zca});
            rule.rhs = std::move(rhs);
            rule.caseTag = "5.3";
            if (dbc == 0) rule.pair_lhs = std::make_pair(zdb, zca);
            rules.push_back(std::move(rule));
          }
        }
  // Solved orientations for out-of-order V+ pairs (z_gh, z_uv), g < h,
  // u < v: same row (5.2r) or descending rows (5.3r).
  for (int gR = 1; gR <= N; ++gR)
    for (int h = gR + 1; h <= N; ++h)
      for (int u = 1; u <= N; ++u)
        for (int v = u + 1; v <= N; ++v) {
          if (gR == u && h > v) {
            rules.push_back(
                make_pair_rule("5.2r", Z(gR, h), Z(u, v), g(1) * zw({Z(u, v), Z(gR, h)})));
          } else if (gR > u) {
            int dvg = v == gR ? 1 : 0, dhv = h == v ? 1 : 0;
            BElement rhs = g(dvg) * zw({Z(u, v), Z(gR, h)});
            if (dvg)
              for (int j = 1; j < v; ++j)
                rhs += qh() * g(2 * v - 2 * j) * zw({Z(u, j), Z(j, h)});
            if (h < v) rhs -= qh() * zw({Z(u, h), Z(gR, v)});
            rules.push_back(make_pair_rule("5.3r", Z(gR, h), Z(u, v), g(-dhv) * rhs));
          }
        }

  // ---- Item 6: induction form of 5.1 (identity only).
  for (int d = 1; d <= N; ++d)
    for (int b = d + 1; b <= N; ++b)
      for (int a = b + 1; a <= N; ++a) {
        BElement rhs = g(-1) * zw({Z(b, a), Z(d, b)});
        for (int i = d + 1; i < b; ++i) rhs -= qh() * zw({Z(i, a), Z(d, i)});
        rhs -= g(1) * qh() * zw({Z(d, d), Z(d, a)});
        for (int i = 1; i < d; ++i)
          rhs -= g(1) * qh() * g(2 * d - 2 * i) * zw({Z(d, i), Z(i, a)});
        rules.push_back(make_pair_rule("6.1", Z(d, b), Z(b, a), std::move(rhs)));
      }

  // ---- Item 7: induction forms of 4.7.  "7.1" is fully block-ordered and
  // is the preferred dispatch for the pattern z_ab z_ba.  The two forms are
  // rearrangements of a single identity, so 7.1 is obtained from 7.2 by
  // solving for the opposite product order.
  for (int a = 1; a <= N; ++a)
    for (int b = a + 1; b <= N; ++b) {
      BElement rhs72 = zw({Z(a, b), Z(b, a)});
      rhs72 -= g(-1) * qh() * zw({Z(a, a), Z(b, b)});
      for (int j = 1; j < a; ++j) rhs72 += qh() * qh() * zw({Z(j, j), Z(b, b)});
      for (int j = 1; j < a; ++j) rhs72 -= g(1) * qh() * zw({Z(j, b), Z(b, j)});
      for (int j = a; j < b; ++j)
        rhs72 += g(-1) * qh() * g(2 * b - 2 * j) * zw({Z(a, j), Z(j, a)});
      for (int j = 1; j < a; ++j)
        rhs72 -= g(2 * b - 2 * a) * qh() * qh() * zw({Z(j, j), Z(a, a)});
      for (int j = 1; j < a; ++j)
        rhs72 += g(2 * b - 2 * a + 1) * qh() * zw({Z(j, a), Z(a, j)});
      for (int i = 1; i < a; ++i)
        for (int j = a; j < b; ++j)
          rhs72 -= qh() * qh() * g(2 * b - 2 * j) * zw({Z(i, j), Z(j, i)});
      // 7.2 reads z_ba z_ab = z_ab z_ba + X; therefore z_ab z_ba = z_ba z_ab - X.
      BElement rhs71 = zw({Z(b, a), Z(a, b)}) + zw({Z(a, b), Z(b, a)}) - rhs72;
      rules.push_back(make_pair_rule("7.1", Z(a, b), Z(b, a), std::move(rhs71)));
      rules.push_back(make_pair_rule("7.2", Z(b, a), Z(a, b), std::move(rhs72)));
    }

  // ---- Item 8: V- * V- as written plus solved orientations.
  for (int d = 1; d <= N; ++d)
    for (int b = 1; b < d; ++b)
      for (int a = 1; a <= N; ++a) {
        // 8.1 (b = c > a): z_db z_ba, d > b > a.
        if (a < b) {
          BElement sum;
          for (int j = 1; j < b; ++j) sum += g(2 * b - 2 * j) * zw({Z(d, j), Z(j, a)});
          rules.push_back(make_pair_rule(
              "8.1", Z(d, b), Z(b, a), g(-1) * zw({Z(b, a), Z(d, b)}) - qh() * g(-1) * sum));
          BElement upper;
          for (int j = b + 1; j <= N; ++j)
            upper += g(2 * b - 2 * j) * zw({Z(d, j), Z(j, a)});
          rules.push_back(make_pair_rule(
              "8.1b", Z(d, b), Z(b, a),
              g(1) * zw({Z(b, a), Z(d, b)}) + g(1) * qh() * upper -
                  g(2 * b - 2 * N) * qh() * zw({Z(d, a)})));
        }
      }
  for (int d = 1; d <= N; ++d)
    for (int b = 1; b < d; ++b)
      for (int a = 1; a < b; ++a)
        rules.push_back(make_pair_rule("8.2", Z(d, b), Z(d, a), g(1) * zw({Z(d, a), Z(d, b)})));
  for (int d = 1; d <= N; ++d)
    for (int b = 1; b < d; ++b)
      for (int c = 1; c < d; ++c)
        for (int a = 1; a < c; ++a) {
          // 8.3: d > b, d > c, c > a.
          int dbc = b == c ? 1 : 0, dab = a == b ? 1 : 0;
          BElement rhs = g(-dab) * zw({Z(c, a), Z(d, b)});
          if (dbc)
            for (int j = 1; j < b; ++j)
              rhs -= qh() * g(2 * b - 2 * j) * zw({Z(d, j), Z(j, a)});
          if (a > b) rhs -= qh() * zw({Z(d, a), Z(c, b)});
          RewriteRule rule;
          rule.lhs = detail::zw({Z(d, b), Z(c, a)}, g(dbc));
          rule.rhs = std::move(rhs);
          rule.caseTag = "8.3";
          if (dbc == 0) rule.pair_lhs = std::make_pair(Z(d, b), Z(c, a));
          rules.push_back(std::move(rule));
        }
  // Solved orientations for out-of-order V- pairs (z_gh, z_uv), g > h,
  // u > v: same row (8.2r) or ascending rows (8.3r).
  for (int gR = 1; gR <= N; ++gR)
    for (int h = 1; h < gR; ++h)
      for (int u = 1; u <= N; ++u)
        for (int v = 1; v < u; ++v) {
          if (gR == u && h < v) {
            rules.push_back(
                make_pair_rule("8.2r", Z(gR, h), Z(u, v), g(-1) * zw({Z(u, v), Z(gR, h)})));
          } else if (gR < u) {
            int dvg = v == gR ? 1 : 0, dhv = h == v ? 1 : 0;
            BElement rhs = g(dvg) * zw({Z(u, v), Z(gR, h)});
            if (dvg)
              for (int j = 1; j < v; ++j)
                rhs += qh() * g(2 * v - 2 * j) * zw({Z(u, j), Z(j, h)});
            if (h > v) rhs += qh() * zw({Z(u, h), Z(gR, v)});
            rules.push_back(make_pair_rule("8.3r", Z(gR, h), Z(u, v), g(dhv) * rhs));
          }
        }

  // ---- Item 9: second induction form of 8.1 (identity only; its left side
  // is already in standard order, so it never drives dispatch).  Built from
  // the solved form 8.1b by commuting each descending-row product z_dj z_ja
  // with b < j < d back through 8.1, so it is an identity by construction;
  // the strictly-below-d terms appear in the order z_ja z_dj.
  for (int d = 1; d <= N; ++d)
    for (int b = 1; b < d; ++b)
      for (int a = 1; a < b; ++a) {
        BElement rhs = g(1) * zw({Z(b, a), Z(d, b)});
        rhs -= g(2 * b - 2 * N) * qh() * zw({Z(d, a)});
        for (int j = b + 1; j <= N; ++j) {
          RatFunc c = g(1) * qh() * g(2 * b - 2 * j);
          if (j < d) {
            rhs += c * g(-1) * zw({Z(j, a), Z(d, j)});
            for (int m = 1; m < j; ++m)
              rhs -= c * g(-1) * qh() * g(2 * j - 2 * m) * zw({Z(d, m), Z(m, a)});
          } else {
            rhs += c * zw({Z(d, j), Z(j, a)});
          }
        }
        rules.push_back(make_pair_rule("9.1", Z(d, b), Z(b, a), std::move(rhs)));
      }

  // ---- Trace relation: sum_i z_ii = (1 - q^{-2s})/(q - q^{-1}).
  {
    RewriteRule rule;
    for (int i = 1; i <= N; ++i) rule.lhs += zw({Z(i, i)});
    int s = N - r;
    rule.rhs = BElement((RatFunc(1) - RatFunc::q_power(-2 * s)) / RatFunc::qhat());
    rule.caseTag = "trace";
    rules.push_back(std::move(rule));
  }

  // ---- Projector instances: q^{2N+1} sum_n q^{-2n} z_in z_nk = z_ik.
  for (int i = 1; i <= N; ++i)
    for (int k = 1; k <= N; ++k) {
      RewriteRule rule;
      for (int n = 1; n <= N; ++n)
        rule.lhs += g(2 * N + 1 - 2 * n) * zw({Z(i, n), Z(n, k)});
      rule.rhs = zw({Z(i, k)});
      rule.caseTag = "proj";
      rules.push_back(std::move(rule));
    }

  return rules;
}

// ======================================================================
// Standard order and reordering.
// ======================================================================

/// Strict "x before y" in the standard form: the V- block (rows
/// descending, columns descending within a row), then V0 (index
/// ascending), then V+ (rows ascending, columns ascending).
inline bool z_before(ZGen x, ZGen y) {
  int cx = static_cast<int>(z_class(x)), cy = static_cast<int>(z_class(y));
  if (cx != cy) return cx < cy;  // Minus(0) < Zero(1) < Plus(2)
  switch (z_class(x)) {
    case ZClass::Minus:
      return x.i != y.i ? x.i > y.i : x.j > y.j;
    case ZClass::Zero:
      return x.i < y.i;
    case ZClass::Plus:
      return x.i != y.i ? x.i < y.i : x.j < y.j;
  }
  return false;
}

/// Adjacent pair needing a rewrite: strictly out of order.
inline bool z_out_of_order(ZGen x, ZGen y) { return !(x == y) && !z_before(x, y); }

inline bool is_standard(const ZWord& w) {
  for (size_t t = 1; t < w.size(); ++t)
    if (z_out_of_order(w[t - 1], w[t])) return false;
  return true;
}

struct ReorderError : std::runtime_error {
  explicit ReorderError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Reordering engine: dispatch map from out-of-order pairs to certified
/// replacement elements, assembled from the relation table.
class ReorderEngine {
 public:
  ReorderEngine(int N, int r) : N_(N), r_(r) {
    auto table = relation_table(N, r);
    auto prefer = [](const std::string& oldTag, const std::string& newTag) {
      // "4.6u" beats "4.6"; "7.1" beats "4.7"; plain beats "...b".
      auto score = [](const std::string& t) {
        if (t.back() == 'u') return 3;
        if (t == "7.1") return 2;
        if (t.back() == 'b') return 0;
        return 1;
      };
      return score(newTag) > score(oldTag);
    };
    for (auto& rule : table) {
      if (!rule.pair_lhs) continue;
      auto [x, y] = *rule.pair_lhs;
      if (!z_out_of_order(x, y)) continue;
      auto key = std::make_pair(x, y);
      auto it = rules_.find(key);
      if (it == rules_.end())
        rules_.emplace(key, Entry{rule.rhs, rule.caseTag});
      else if (prefer(it->second.tag, rule.caseTag))
        it->second = Entry{rule.rhs, rule.caseTag};
    }
  }

  [[nodiscard]] int N() const { return N_; }
  [[nodiscard]] int r() const { return r_; }

  /// Rewrite to a combination of standard-form words.  `budget` bounds the
  /// number of rule applications; exhausting it raises ReorderError with a
  /// trace of the most recent rewrites.
  [[nodiscard]] BElement reorder(const BElement& x, long budget = 10000) const {
    BElement out;
    std::vector<std::pair<ZWord, RatFunc>> work(x.terms().begin(), x.terms().end());
    std::vector<std::string> trace;
    long steps = 0;
    while (!work.empty()) {
      auto [w, c] = std::move(work.back());
      work.pop_back();
      size_t pos = w.size();
      for (size_t t = 1; t < w.size(); ++t)
        if (z_out_of_order(w[t - 1], w[t])) {
          pos = t - 1;
          break;
        }
      if (pos == w.size()) {
        out.add_term(w, c);
        continue;
      }
      if (++steps > budget) {
        std::ostringstream os;
        os << "reorder budget exhausted after " << budget << " steps; word "
           << zword_name(w) << "; recent rewrites:";
        size_t from = trace.size() > 20 ? trace.size() - 20 : 0;
        for (size_t t = from; t < trace.size(); ++t) os << "\n  " << trace[t];
        throw ReorderError(os.str());
      }
      auto it = rules_.find(std::make_pair(w[pos], w[pos + 1]));
      if (it == rules_.end())
        throw ReorderError("no dispatch rule for pair " + zgen_name(w[pos]) + " " +
                           zgen_name(w[pos + 1]));
      if (trace.size() < 4096)
        trace.push_back(zword_name(w) + " @" + std::to_string(pos) + " via " +
                        it->second.tag);
      for (const auto& [rw, rc] : it->second.rhs.terms()) {
        ZWord nw(w.begin(), w.begin() + static_cast<long>(pos));
        nw.insert(nw.end(), rw.begin(), rw.end());
        nw.insert(nw.end(), w.begin() + static_cast<long>(pos) + 2, w.end());
        work.emplace_back(std::move(nw), c * rc);
      }
    }
    return out;
  }

 private:
  struct Entry {
    BElement rhs;
    std::string tag;
  };
  int N_, r_;
  std::map<std::pair<ZGen, ZGen>, Entry> rules_;
};

/// Convenience wrapper constructing a fresh engine.
inline BElement reorder(const BElement& x, int N, int r, long budget = 10000) {
  return ReorderEngine(N, r).reorder(x, budget);
}

// ======================================================================
// Spanning words.
// ======================================================================

/// All generators in row-major order: (1,1), (1,2), ..., (N,N).
inline std::vector<ZGen> all_zgens(int N) {
  std::vector<ZGen> gens;
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j) gens.push_back(ZGen{i, j});
  return gens;
}

/**
 * Graded-lexicographic list of words in the shifted generators z+_{ij}
 * of length <= k, including the empty word.  The words (interpreted via
 * expand_shifted) span B/(B+)^{k+1}; duplicates under the relations are
 * harmless downstream.
 */
inline std::vector<ZWord> spanning_words(int N, int r, int k) {
  (void)r;  // the shifted interpretation depends on r only at expansion time
  if (k < 0) throw std::invalid_argument("spanning_words: k must be >= 0");
  auto gens = all_zgens(N);
  std::vector<ZWord> out{{ZWord{}}};
  std::vector<ZWord> prev{ZWord{}};
  for (int len = 1; len <= k; ++len) {
    std::vector<ZWord> cur;
    for (const auto& w : prev)
      for (const auto& z : gens) {
        ZWord nw = w;
        nw.push_back(z);
        cur.push_back(std::move(nw));
      }
    out.insert(out.end(), cur.begin(), cur.end());
    prev = std::move(cur);
  }
  return out;
}

}  // namespace qgr
