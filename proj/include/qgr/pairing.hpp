/**
 * @file pairing.hpp
 * @brief Exact evaluation of the dual pairing between U and B via tensor
 *        powers of the fundamental representation: mixed-word evaluation,
 *        v-vector stacks against embedded z-words, pairing matrices with a
 *        deterministic invertible row minor, and functionals realizing the
 *        truncated quotient coalgebra on B/(B+)^{k+1}.
 *
 * Slot model: a u-slot pairs through rho (the fundamental representation)
 * and an Su-slot through sigma(y) = transpose(rho(S(y))), so every slot is
 * an algebra homomorphism and word evaluation is a sparse matrix product.
 */
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qgr/linalg.hpp"
#include "qgr/parallel.hpp"
#include "qgr/qgrass.hpp"
#include "qgr/ratfunc.hpp"
#include "qgr/uq.hpp"

namespace qgr {

using SparseVec = std::map<std::uint64_t, RatFunc>;

namespace detail {

inline void sv_add(SparseVec& v, std::uint64_t key, const RatFunc& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = v.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) v.erase(it);
  }
}

/// Diagonal exponent of rho(K_k) on 0-based digit d: rho(K_k) carries
/// q^{-1} at 1-based position k and q at k+1.
inline int u_k_exp(int k, int d) { return d == k ? 1 : (d == k - 1 ? -1 : 0); }

/**
 * Apply one generator to a slot-state vector: the state holds one 0-based
 * digit per slot, keys packed little-endian base N.  Right multiplication
 * by rho(g) on u-slots and sigma(g) on Su-slots, summed over the iterated
 * coproduct of g (closed forms: E gets K-tails, F gets Kinv-heads, K and
 * Kinv act diagonally).
 */
inline SparseVec apply_gen(const std::vector<SlotKind>& pat, int N, const SparseVec& v,
                           GenSym g) {
  const int k = g.idx;
  const size_t M = pat.size();
  if (k < 1 || k > N - 1) throw std::invalid_argument("apply_gen: index out of range");
  std::vector<std::uint64_t> pw(M + 1, 1);
  for (size_t t = 0; t < M; ++t) pw[t + 1] = pw[t] * static_cast<std::uint64_t>(N);
  SparseVec out;
  std::vector<int> dig(M);
  for (const auto& [key, c] : v) {
    std::uint64_t rest = key;
    for (size_t t = 0; t < M; ++t) {
      dig[t] = static_cast<int>(rest % static_cast<std::uint64_t>(N));
      rest /= static_cast<std::uint64_t>(N);
    }
    switch (g.kind) {
      case GK::K:
      case GK::Kinv: {
        int e = 0;
        for (size_t t = 0; t < M; ++t) {
          int ue = u_k_exp(k, dig[t]);
          e += pat[t] == SlotKind::U ? ue : -ue;
        }
        if (g.kind == GK::Kinv) e = -e;
        sv_add(out, key, c * RatFunc::q_power(e));
        break;
      }
      case GK::E: {
        for (size_t m = 0; m < M; ++m) {
          int d = dig[m], nd;
          RatFunc coeff;
          if (pat[m] == SlotKind::U) {
            if (d != k) continue;  // rho(E_k): digit k -> k-1, coeff 1
            nd = k - 1;
            coeff = RatFunc(1);
          } else {
            if (d != k - 1) continue;  // sigma(E_k): digit k-1 -> k, coeff -q
            nd = k;
            coeff = -RatFunc::q();
          }
          int tail = 0;
          for (size_t t = m + 1; t < M; ++t) {
            int ue = u_k_exp(k, dig[t]);
            tail += pat[t] == SlotKind::U ? ue : -ue;
          }
          std::uint64_t nkey =
              key + static_cast<std::uint64_t>(nd - d + N) * pw[m] -
              static_cast<std::uint64_t>(N) * pw[m];
          sv_add(out, nkey, c * coeff * RatFunc::q_power(tail));
        }
        break;
      }
      case GK::F: {
        for (size_t m = 0; m < M; ++m) {
          int d = dig[m], nd;
          RatFunc coeff;
          if (pat[m] == SlotKind::U) {
            if (d != k - 1) continue;  // rho(F_k): digit k-1 -> k, coeff 1
            nd = k;
            coeff = RatFunc(1);
          } else {
            if (d != k) continue;  // sigma(F_k): digit k -> k-1, coeff -q^{-1}
            nd = k - 1;
            coeff = -RatFunc::q_power(-1);
          }
          int head = 0;
          for (size_t t = 0; t < m; ++t) {
            int ue = u_k_exp(k, dig[t]);
            head -= pat[t] == SlotKind::U ? ue : -ue;  // Kinv on the head
          }
          std::uint64_t nkey =
              key + static_cast<std::uint64_t>(nd - d + N) * pw[m] -
              static_cast<std::uint64_t>(N) * pw[m];
          sv_add(out, nkey, c * coeff * RatFunc::q_power(head));
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

// ======================================================================
// Mixed-word evaluation.
// ======================================================================

/// <x, w> for a mixed word with concrete indices.  The empty word pairs
/// to the counit of x.
inline RatFunc eval(const UElement& x, const MixedWord& w, int N) {
  const size_t M = w.size();
  std::vector<SlotKind> pat(M);
  std::uint64_t startKey = 0, endKey = 0, pw = 1;
  for (size_t t = 0; t < M; ++t) {
    pat[t] = w[t].kind;
    int start, end;
    if (w[t].kind == SlotKind::U) {
      start = w[t].a - 1;  // <1, u^a_b> = delta_ab: lower index evolves
      end = w[t].b - 1;
    } else {
      start = w[t].b - 1;  // <1, S(u^a_b)> = delta_ab: upper index evolves
      end = w[t].a - 1;
    }
    if (start < 0 || start >= N || end < 0 || end >= N)
      throw std::invalid_argument("eval: mixed-word index out of range");
    startKey += static_cast<std::uint64_t>(start) * pw;
    endKey += static_cast<std::uint64_t>(end) * pw;
    pw *= static_cast<std::uint64_t>(N);
  }
  RatFunc out;
  for (const auto& [uw, c] : x.terms()) {
    SparseVec v{{startKey, RatFunc(1)}};
    for (const GenSym& g : uw) {
      if (v.empty()) break;
      v = detail::apply_gen(pat, N, v, g);
    }
    auto it = v.find(endKey);
    if (it != v.end()) out += c * it->second;
  }
  return out;
}

/// <x, b> through the embedding of B.
inline RatFunc eval_b(const UElement& x, const BElement& b, int N, int r) {
  RatFunc out;
  for (const auto& [w, c] : embed(b, N, r)) out += c * eval(x, w, N);
  return out;
}

// ======================================================================
// v-vector stacks: pairings against all embedded z-words at once.
// ======================================================================

/**
 * Levels 0..maxLen of the functional <x, i(z-word)>: level l is a sparse
 * vector over keys packing the word (i_1, j_1, ..., i_l, j_l) as 0-based
 * little-endian base-N digits.  The embedding's diagonal sums over
 * k in (r, N] are pre-contracted into the unit stack.
 */
struct VStack {
  int N = 0, r = 0, maxLen = 0;
  std::vector<SparseVec> lv;

  [[nodiscard]] static std::vector<SlotKind> pattern(int len) {
    std::vector<SlotKind> pat(2 * static_cast<size_t>(len));
    for (size_t t = 0; t < pat.size(); ++t)
      pat[t] = t % 2 == 0 ? SlotKind::U : SlotKind::SU;
    return pat;
  }
};

/// Stack of the unit 1: level l entries at duplicated diagonal digits
/// c > r with weight prod q^{-2N-1+2c}.
inline VStack v_unit(int N, int r, int maxLen) {
  VStack s;
  s.N = N;
  s.r = r;
  s.maxLen = maxLen;
  s.lv.resize(static_cast<size_t>(maxLen) + 1);
  s.lv[0][0] = RatFunc(1);
  for (int l = 1; l <= maxLen; ++l) {
    const std::uint64_t block = static_cast<std::uint64_t>(N) * static_cast<std::uint64_t>(N);
    for (const auto& [key, c] : s.lv[static_cast<size_t>(l - 1)]) {
      std::uint64_t pw = 1;
      for (int t = 0; t < l - 1; ++t) pw *= block;
      for (int d = r; d <= N - 1; ++d) {  // 0-based diagonal digit
        std::uint64_t nkey = key + pw * (static_cast<std::uint64_t>(d) +
                                         static_cast<std::uint64_t>(N) *
                                             static_cast<std::uint64_t>(d));
        s.lv[static_cast<size_t>(l)][nkey] =
            c * RatFunc::q_power(-2 * N - 1 + 2 * (d + 1));
      }
    }
  }
  return s;
}

/// Append one generator on the right of the paired U-element.
inline void v_append_gen(VStack& s, GenSym g) {
  for (int l = 0; l <= s.maxLen; ++l) {
    auto pat = VStack::pattern(l);
    s.lv[static_cast<size_t>(l)] =
        detail::apply_gen(pat, s.N, s.lv[static_cast<size_t>(l)], g);
  }
}

/// Append a whole element (linear combination of words) on the right.
inline VStack v_append_elem(const VStack& base, const UElement& x) {
  VStack out;
  out.N = base.N;
  out.r = base.r;
  out.maxLen = base.maxLen;
  out.lv.resize(base.lv.size());
  for (const auto& [w, c] : x.terms()) {
    VStack tmp = base;
    for (const GenSym& g : w) v_append_gen(tmp, g);
    for (size_t l = 0; l < tmp.lv.size(); ++l)
      for (const auto& [key, val] : tmp.lv[l])
        detail::sv_add(out.lv[l], key, c * val);
  }
  return out;
}

/// Read <x, plain z-word> off the stack.
inline RatFunc v_read(const VStack& s, const ZWord& w) {
  const int l = static_cast<int>(w.size());
  if (l > s.maxLen) throw std::invalid_argument("v_read: word longer than stack");
  std::uint64_t key = 0, pw = 1;
  for (const ZGen& z : w) {
    key += static_cast<std::uint64_t>(z.i - 1) * pw;
    pw *= static_cast<std::uint64_t>(s.N);
    key += static_cast<std::uint64_t>(z.j - 1) * pw;
    pw *= static_cast<std::uint64_t>(s.N);
  }
  const auto& lv = s.lv[static_cast<size_t>(l)];
  auto it = lv.find(key);
  return it == lv.end() ? RatFunc(0) : it->second;
}

/// Read <x, b> for a combination of plain z-words.
inline RatFunc v_read_b(const VStack& s, const BElement& b) {
  RatFunc out;
  for (const auto& [w, c] : b.terms()) out += c * v_read(s, w);
  return out;
}

// ======================================================================
// Pairing matrices.
// ======================================================================

struct PairingMatrix {
  int N = 0, r = 0, k = 0;
  std::vector<ZWord> rows;        // shifted z+-words, graded-lex
  std::vector<PbwMonomial> cols;  // PBW monomials of degree <= k
  Mat entries;                    // entry(r, c) = <col c, row r>
  std::vector<int> chosenRows;    // deterministic invertible minor
};

/// Sum_{l<=k} C(D+l-1, l) with D = 2r(N-r): the predicted rank.
inline long long truncated_dimension(int N, int r, int k) {
  const long long D = 2LL * r * (N - r);
  long long total = 0, term = 1;
  for (int l = 0; l <= k; ++l) {
    total += term;
    term = term * (D + l) / (l + 1);
  }
  return total;
}

/**
 * Shared evaluation context: v-stacks for every PBW monomial of degree
 * <= k, the pairing matrix with its chosen rows, and the inverse of the
 * chosen minor.  Stacks are filled by a DP over the monomial tree
 * (parent = last nonzero exponent decremented).
 */
class PairingContext {
 public:
  PairingContext(int N, int r, int k, Convention conv = Convention::primary,
                 int jobs = 1, std::string cacheDir = "")
      : N_(N), r_(r), k_(k), conv_(conv), cacheDir_(std::move(cacheDir)) {
    if (N < 2 || r < 1 || r >= N) throw std::invalid_argument("PairingContext: bad (N, r)");
    if (k < 0) throw std::invalid_argument("PairingContext: k must be >= 0");
    roots_ = phi_plus_roots(N, r);
    cols_ = pbw_monomials(N, r, k);
    build_stacks();
    build_matrix(jobs);
  }

  [[nodiscard]] int N() const { return N_; }
  [[nodiscard]] int r() const { return r_; }
  [[nodiscard]] int k() const { return k_; }
  [[nodiscard]] Convention convention() const { return conv_; }
  [[nodiscard]] const PairingMatrix& matrix() const { return matrix_; }
  [[nodiscard]] const std::vector<PbwMonomial>& cols() const { return cols_; }
  [[nodiscard]] const VStack& stack(size_t col) const { return stacks_[col]; }

  /// Pairings of every column monomial against b.
  [[nodiscard]] Vec value_row(const BElement& b) const {
    Vec v(cols_.size());
    for (size_t c = 0; c < cols_.size(); ++c) v[c] = v_read_b(stacks_[c], b);
    return v;
  }

  /// Inverse of the chosen-row minor (lazy).
  [[nodiscard]] const Mat& minor_inverse() const {
    if (minorInv_.rows == 0) {
      const int n = static_cast<int>(matrix_.chosenRows.size());
      Mat minor(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          minor.at(i, j) = matrix_.entries.at(matrix_.chosenRows[static_cast<size_t>(i)], j);
      minorInv_ = inverse(minor);
    }
    return minorInv_;
  }

 private:
  void build_stacks() {
    stacks_.resize(cols_.size());
    std::map<PbwMonomial, size_t> index;
    for (size_t c = 0; c < cols_.size(); ++c) index[cols_[c]] = c;
    for (size_t c = 0; c < cols_.size(); ++c) {
      const PbwMonomial& m = cols_[c];
      if (m.degree() == 0) {
        stacks_[c] = v_unit(N_, r_, k_);
        continue;
      }
      if (load_stack(c)) continue;
      // Parent: decrement the last nonzero exponent (E-block from the
      // end first, then F-block), matching the written product order.
      PbwMonomial parent = m;
      GK kind = GK::E;
      int rootIdx = -1;
      for (int t = static_cast<int>(parent.eExp.size()) - 1; t >= 0; --t)
        if (parent.eExp[static_cast<size_t>(t)] > 0) {
          --parent.eExp[static_cast<size_t>(t)];
          kind = GK::E;
          rootIdx = t;
          break;
        }
      if (rootIdx < 0)
        for (int t = static_cast<int>(parent.fExp.size()) - 1; t >= 0; --t)
          if (parent.fExp[static_cast<size_t>(t)] > 0) {
            --parent.fExp[static_cast<size_t>(t)];
            kind = GK::F;
            rootIdx = t;
            break;
          }
      auto pit = index.find(parent);
      if (pit == index.end() || pit->second >= c)
        throw std::logic_error("PairingContext: monomial parent missing");
      UElement root = root_vector(kind, roots_[static_cast<size_t>(rootIdx)].first,
                                  roots_[static_cast<size_t>(rootIdx)].second, r_, conv_);
      stacks_[c] = v_append_elem(stacks_[pit->second], root);
      save_stack(c);
    }
  }

  void build_matrix(int jobs) {
    matrix_.N = N_;
    matrix_.r = r_;
    matrix_.k = k_;
    matrix_.rows = spanning_words(N_, r_, k_);
    matrix_.cols = cols_;
    const int R = static_cast<int>(matrix_.rows.size());
    const int C = static_cast<int>(cols_.size());
    matrix_.entries = Mat(R, C);
    std::vector<BElement> expanded(static_cast<size_t>(R));
    for (int i = 0; i < R; ++i)
      expanded[static_cast<size_t>(i)] =
          expand_shifted(matrix_.rows[static_cast<size_t>(i)], N_, r_);
    parallel_for(R, jobs, [&](int i) {
      for (int c = 0; c < C; ++c)
        matrix_.entries.at(i, c) =
            v_read_b(stacks_[static_cast<size_t>(c)], expanded[static_cast<size_t>(i)]);
    });
    // Deterministic greedy invertible minor: scan rows in graded-lex
    // order, keep those that enlarge the span.
    Echelon ech(C);
    for (int i = 0; i < R && static_cast<int>(matrix_.chosenRows.size()) < C; ++i)
      if (ech.insert(matrix_.entries.row(i))) matrix_.chosenRows.push_back(i);
    if (static_cast<int>(matrix_.chosenRows.size()) != C)
      throw std::runtime_error("knondeg violation");
    if (truncated_dimension(N_, r_, k_) != static_cast<long long>(C))
      throw std::logic_error("pairing_matrix: column count mismatch");
  }

  // ---- Disk cache of v-stacks (textual, versioned by parameters).
  [[nodiscard]] std::string stack_path(size_t c) const {
    std::ostringstream os;
    os << cacheDir_ << "/v_" << N_ << "_" << r_ << "_" << k_ << "_"
       << (conv_ == Convention::primary ? "p" : "a");
    for (int e : cols_[c].fExp) os << "_" << e;
    os << "_f";
    for (int e : cols_[c].eExp) os << "_" << e;
    os << "_e.txt";
    return os.str();
  }

  bool load_stack(size_t c) {
    if (cacheDir_.empty()) return false;
    std::ifstream in(stack_path(c));
    if (!in) return false;
    VStack s;
    s.N = N_;
    s.r = r_;
    s.maxLen = k_;
    s.lv.resize(static_cast<size_t>(k_) + 1);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      size_t level;
      std::uint64_t key;
      std::string val;
      if (!(ls >> level >> key)) return false;
      std::getline(ls, val);
      size_t start = val.find_first_not_of(' ');
      if (start == std::string::npos || level >= s.lv.size()) return false;
      try {
        s.lv[level][key] = RatFunc::parse(val.substr(start));
      } catch (const std::exception&) {
        return false;
      }
    }
    stacks_[c] = std::move(s);
    return true;
  }

  void save_stack(size_t c) const {
    if (cacheDir_.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(cacheDir_, ec);
    const std::string path = stack_path(c);
    std::ofstream out(path + ".tmp");
    if (!out) return;
    for (size_t l = 0; l < stacks_[c].lv.size(); ++l)
      for (const auto& [key, val] : stacks_[c].lv[l])
        out << l << ' ' << key << ' ' << val.str() << '\n';
    out.close();
    std::filesystem::rename(path + ".tmp", path, ec);
  }

  int N_, r_, k_;
  Convention conv_;
  std::string cacheDir_;
  std::vector<std::pair<int, int>> roots_;
  std::vector<PbwMonomial> cols_;
  std::vector<VStack> stacks_;
  PairingMatrix matrix_;
  mutable Mat minorInv_;
};

/// Build the full pairing matrix at (N, r, k); throws "knondeg violation"
/// when no invertible minor of full column rank exists.
inline PairingMatrix pairing_matrix(int N, int r, int k,
                                    Convention conv = Convention::primary, int jobs = 1,
                                    const std::string& cacheDir = "") {
  return PairingContext(N, r, k, conv, jobs, cacheDir).matrix();
}

/// CSV export: header row of PBW monomial names, then one line per
/// spanning word with textual entries.
inline std::string pairing_matrix_csv(const PairingMatrix& pm) {
  std::ostringstream os;
  os << "word";
  for (const auto& m : pm.cols) os << ',' << pbw_name(m, pm.N, pm.r);
  os << '\n';
  for (size_t i = 0; i < pm.rows.size(); ++i) {
    os << zword_name(pm.rows[i], true);
    for (int c = 0; c < pm.entries.cols; ++c)
      os << ',' << pm.entries.at(static_cast<int>(i), c).str();
    os << '\n';
  }
  return os.str();
}

// ======================================================================
// Functionals on B/(B+)^{k+1}.
// ======================================================================

struct Functional {
  int N = 0, r = 0, k = 0;
  std::vector<ZWord> basisWords;  // chosen rows of the pairing matrix
  Vec coords;                     // values on the chosen basis words
};

/// The functional of x truncated to degree k: its values on the chosen
/// basis words of B/(B+)^{k+1}.
inline Functional functional_of(const UElement& x, const PairingContext& ctx) {
  Functional f;
  f.N = ctx.N();
  f.r = ctx.r();
  f.k = ctx.k();
  VStack s = v_append_elem(v_unit(ctx.N(), ctx.r(), ctx.k()), x);
  for (int rowIdx : ctx.matrix().chosenRows) {
    const ZWord& w = ctx.matrix().rows[static_cast<size_t>(rowIdx)];
    f.basisWords.push_back(w);
    f.coords.push_back(v_read_b(s, expand_shifted(w, ctx.N(), ctx.r())));
  }
  return f;
}

/// Apply a functional to b: express [b] in the chosen basis through the
/// inverse minor, then contract with the stored values.
inline RatFunc functional_apply(const Functional& f, const BElement& b,
                                const PairingContext& ctx) {
  if (f.k != ctx.k() || f.N != ctx.N() || f.r != ctx.r())
    throw std::invalid_argument("functional_apply: context mismatch");
  Vec vb = ctx.value_row(b);            // <col, b> for every column
  Vec coeff = vec_mat(vb, ctx.minor_inverse());  // coordinates of [b]
  RatFunc out;
  for (size_t i = 0; i < coeff.size(); ++i) out += coeff[i] * f.coords[i];
  return out;
}

// ======================================================================
// Pairing-derived action: the decisive convention lock.
// ======================================================================

/// g acting on z_ij through the coaction delta(z_ij) = sum_{k,l} z_kl (x)
/// u^k_i S(u^j_l): must reproduce act(g, z_ij) exactly.
inline BElement act_from_pairing(GenSym g, ZGen z, int N) {
  BElement out;
  UElement x = UElement::gen(g.kind, g.idx);
  for (int k = 1; k <= N; ++k)
    for (int l = 1; l <= N; ++l) {
      MixedWord w{{SlotKind::U, k, z.i}, {SlotKind::SU, z.j, l}};
      RatFunc val = eval(x, w, N);
      if (!val.is_zero()) out += val * BElement::gen(ZGen{k, l});
    }
  return out;
}

}  // namespace qgr
