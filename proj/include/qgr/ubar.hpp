#pragma once
/**
 * Truncated model of the quotient coalgebra: the functionals on
 * B/(B+)^{m+1} carried by the classes of ordered root-vector monomials of
 * degree <= m.  The pairing context supplies the concrete realization, and
 * every operation here (right multiplication, translation by coordinate
 * words, primitivity) is expressed through exact linear algebra over the
 * monomial-class basis.
 *
 * Coordinates.  A functional f is stored as its coefficient vector t over
 * the monomial classes ("t-coordinates"): f = sum_c t_c [mu_c].  The value
 * vector of f on the chosen coordinate words ("vals") is M t where M is the
 * chosen square minor of the pairing matrix; the two descriptions are
 * exchanged by M and its inverse.
 */

#include <cassert>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qgr/pairing.hpp"

namespace qgr {

/// Torus weight of a single coordinate generator, in simple-root
/// coordinates; chosen so that a pairing <monomial, word> can be nonzero
/// only when the monomial weight equals the sum of the word's letter
/// weights.
inline Weight zgen_weight(const ZGen& z, int N) {
  Weight w = Weight::zero(N);
  if (z.i < z.j)
    for (int k = z.i; k < z.j; ++k) w.alpha[static_cast<size_t>(k - 1)] += 1;
  else if (z.i > z.j)
    for (int k = z.j; k < z.i; ++k) w.alpha[static_cast<size_t>(k - 1)] -= 1;
  return w;
}

inline Weight zword_weight(const ZWord& w, int N) {
  Weight out = Weight::zero(N);
  for (const auto& z : w) out += zgen_weight(z, N);
  return out;
}

class UbarModel {
 public:
  UbarModel(int N, int r, int m, Convention conv = Convention::primary,
            int jobs = 1, const std::string& cacheDir = "")
      : ctx_(N, r, m, conv, jobs, cacheDir) {
    const PairingMatrix& pm = ctx_.matrix();
    dim_ = static_cast<int>(ctx_.cols().size());
    for (int idx : pm.chosenRows) {
      chosenWords_.push_back(pm.rows[static_cast<size_t>(idx)]);
      chosenExpanded_.push_back(expand_shifted(pm.rows[static_cast<size_t>(idx)], N, r));
      wordWeights_.push_back(zword_weight(pm.rows[static_cast<size_t>(idx)], N));
    }
    chosenMat_ = Mat(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int c = 0; c < dim_; ++c)
        chosenMat_.at(i, c) = pm.entries.at(pm.chosenRows[static_cast<size_t>(i)], c);
    for (int c = 0; c < dim_; ++c) {
      weights_.push_back(pbw_weight(ctx_.cols()[static_cast<size_t>(c)], N, r));
      degrees_.push_back(ctx_.cols()[static_cast<size_t>(c)].degree());
    }
    if (degrees_[0] != 0) throw std::logic_error("UbarModel: unit class not first");
    build_pair_table();
  }

  UbarModel(const UbarModel&) = delete;
  UbarModel& operator=(const UbarModel&) = delete;

  [[nodiscard]] int N() const { return ctx_.N(); }
  [[nodiscard]] int r() const { return ctx_.r(); }
  [[nodiscard]] int truncation() const { return ctx_.k(); }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] Convention convention() const { return ctx_.convention(); }
  [[nodiscard]] const PairingContext& context() const { return ctx_; }
  [[nodiscard]] const std::vector<PbwMonomial>& basis() const { return ctx_.cols(); }
  [[nodiscard]] const Weight& weight(int c) const { return weights_[static_cast<size_t>(c)]; }
  [[nodiscard]] int degree(int c) const { return degrees_[static_cast<size_t>(c)]; }
  [[nodiscard]] int unit_index() const { return 0; }
  [[nodiscard]] const std::vector<ZWord>& chosen_words() const { return chosenWords_; }

  /// True when the basis class at c involves only E-type root vectors
  /// (side +1), only F-type (side -1); side 0 accepts everything.
  [[nodiscard]] bool on_side(int c, int side) const {
    const PbwMonomial& mu = ctx_.cols()[static_cast<size_t>(c)];
    if (side > 0) return mu.f_total() == 0;
    if (side < 0) return mu.e_total() == 0;
    return true;
  }

  // ---- coordinate conversions -----------------------------------------
  [[nodiscard]] Vec vals_of_t(const Vec& t) const {
    Vec out(static_cast<size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
      RatFunc s;
      for (int c = 0; c < dim_; ++c) {
        const RatFunc& e = chosenMat_.at(i, c);
        if (!e.is_zero() && !t[static_cast<size_t>(c)].is_zero())
          s += e * t[static_cast<size_t>(c)];
      }
      out[static_cast<size_t>(i)] = std::move(s);
    }
    return out;
  }

  [[nodiscard]] Vec t_of_vals(const Vec& vals) const {
    const Mat& inv = ctx_.minor_inverse();
    Vec out(static_cast<size_t>(dim_));
    for (int j = 0; j < dim_; ++j) {
      if (vals[static_cast<size_t>(j)].is_zero()) continue;
      for (int i = 0; i < dim_; ++i) {
        const RatFunc& e = inv.at(i, j);
        if (!e.is_zero()) out[static_cast<size_t>(i)] += e * vals[static_cast<size_t>(j)];
      }
    }
    return out;
  }

  /// Class of an arbitrary element of the enveloping algebra in
  /// t-coordinates.
  [[nodiscard]] Vec t_of(const UElement& x) const {
    return t_of_vals(functional_of(x, ctx_).coords);
  }

  /// Evaluate the functional with t-coordinates t on an arbitrary algebra
  /// element.
  [[nodiscard]] RatFunc apply_t(const Vec& t, const BElement& b) const {
    Vec row = ctx_.value_row(b);
    RatFunc s;
    for (int c = 0; c < dim_; ++c)
      if (!t[static_cast<size_t>(c)].is_zero() && !row[static_cast<size_t>(c)].is_zero())
        s += t[static_cast<size_t>(c)] * row[static_cast<size_t>(c)];
    return s;
  }

  // ---- right multiplication -------------------------------------------
  /// Matrix (in t-coordinates) of right multiplication by a single
  /// generator letter: column c holds the class of mu_c * g.
  [[nodiscard]] const Mat& rmat(GenSym g) const {
    auto it = rmats_.find(g);
    if (it != rmats_.end()) return it->second;
    Mat m(dim_, dim_);
    for (int c = 0; c < dim_; ++c) {
      VStack s = ctx_.stack(static_cast<size_t>(c));
      v_append_gen(s, g);
      Vec vals(static_cast<size_t>(dim_));
      for (int j = 0; j < dim_; ++j)
        vals[static_cast<size_t>(j)] = v_read_b(s, chosenExpanded_[static_cast<size_t>(j)]);
      Vec t = t_of_vals(vals);
      for (int i = 0; i < dim_; ++i) m.at(i, c) = t[static_cast<size_t>(i)];
    }
    return rmats_.emplace(g, std::move(m)).first->second;
  }

  [[nodiscard]] Vec rmul(const Vec& t, GenSym g) const {
    const Mat& m = rmat(g);
    Vec out(static_cast<size_t>(dim_));
    for (int c = 0; c < dim_; ++c) {
      if (t[static_cast<size_t>(c)].is_zero()) continue;
      for (int i = 0; i < dim_; ++i) {
        const RatFunc& e = m.at(i, c);
        if (!e.is_zero()) out[static_cast<size_t>(i)] += e * t[static_cast<size_t>(c)];
      }
    }
    return out;
  }

  /// Generators of the fixing subalgebra: E_i, F_i for i != r and the
  /// torus letters.
  [[nodiscard]] std::vector<GenSym> k_generators() const {
    std::vector<GenSym> out;
    for (int i = 1; i < N(); ++i)
      if (i != r()) out.push_back({GK::E, i});
    for (int i = 1; i < N(); ++i)
      if (i != r()) out.push_back({GK::F, i});
    for (int i = 1; i < N(); ++i) out.push_back({GK::K, i});
    for (int i = 1; i < N(); ++i) out.push_back({GK::Kinv, i});
    return out;
  }

  [[nodiscard]] bool in_k(GenSym g) const {
    if (g.kind == GK::K || g.kind == GK::Kinv) return true;
    return g.idx != r();
  }

  // ---- translation by coordinate words --------------------------------
  /**
   * t-coordinates of the functional b |-> f(w_a b) for the chosen word at
   * index a.  Values beyond the truncation vanish by degree orthogonality,
   * so the translate is exact.
   */
  [[nodiscard]] Vec translate(const Vec& t, int a) const {
    Vec vals(static_cast<size_t>(dim_));
    for (const auto& tr : pairTable_[static_cast<size_t>(a)]) {
      const auto& [j, c, val] = tr;
      if (!t[static_cast<size_t>(c)].is_zero())
        vals[static_cast<size_t>(j)] += val * t[static_cast<size_t>(c)];
    }
    return t_of_vals(vals);
  }

  /// <mu_c, w_a w_j> as a sparse list per a of (j, c, value).
  [[nodiscard]] const std::vector<std::vector<std::tuple<int, int, RatFunc>>>& pair_table()
      const {
    return pairTable_;
  }

  /**
   * Value of the t-coordinate functional on the product of one shifted
   * coordinate letter with the chosen word at wordIdx.  Zero when the
   * product leaves the truncation range.
   */
  [[nodiscard]] RatFunc apply_shifted_product(const Vec& t, const ZGen& z, int wordIdx) const {
    if (static_cast<int>(chosenWords_[static_cast<size_t>(wordIdx)].size()) + 1 > truncation())
      return RatFunc();
    BElement prod =
        expand_shifted({z}, N(), r()) * chosenExpanded_[static_cast<size_t>(wordIdx)];
    RatFunc s;
    for (int c = 0; c < dim_; ++c) {
      if (t[static_cast<size_t>(c)].is_zero()) continue;
      RatFunc v = v_read_b(ctx_.stack(static_cast<size_t>(c)), prod);
      if (!v.is_zero()) s += t[static_cast<size_t>(c)] * v;
    }
    return s;
  }

  // ---- primitivity ----------------------------------------------------
  /**
   * Canonical basis (t-coordinates) of the functionals f with f(1) = 0 and
   * f(ab) = f(a)eps(b) + eps(a)f(b) on all coordinate-word pairs, within
   * degree maxDeg; side +1/-1 restricts support to E-only/F-only classes.
   */
  [[nodiscard]] std::vector<Vec> primitives(int maxDeg, int side = 0) const {
    std::vector<Vec> rows;
    // Support restrictions: vanish outside the requested degree/side range,
    // and at the unit class.
    for (int c = 0; c < dim_; ++c) {
      if (c == unit_index() || degrees_[static_cast<size_t>(c)] > maxDeg ||
          !on_side(c, side)) {
        Vec e(static_cast<size_t>(dim_));
        e[static_cast<size_t>(c)] = RatFunc(1);
        rows.push_back(std::move(e));
      }
    }
    // f(w_a w_j) = 0 over nonempty coordinate-word pairs.
    for (size_t a = 0; a < chosenWords_.size(); ++a) {
      if (chosenWords_[a].empty()) continue;
      std::map<int, Vec> byJ;
      for (const auto& [j, c, val] : pairTable_[a]) {
        if (chosenWords_[static_cast<size_t>(j)].empty()) continue;
        auto [it, fresh] = byJ.try_emplace(j, Vec(static_cast<size_t>(dim_)));
        it->second[static_cast<size_t>(c)] += val;
      }
      for (auto& [j, row] : byJ) rows.push_back(std::move(row));
    }
    Mat cond(static_cast<int>(rows.size()), dim_);
    for (size_t i = 0; i < rows.size(); ++i)
      for (int c = 0; c < dim_; ++c) cond.at(static_cast<int>(i), c) = rows[i][static_cast<size_t>(c)];
    return nullspace(cond);
  }

 private:
  void build_pair_table() {
    const int m = truncation();
    pairTable_.resize(chosenWords_.size());
    std::vector<Weight> mono = weights_;
    // Group basis classes by weight for the sparsity filter.
    std::map<Weight, std::vector<int>> byWeight;
    for (int c = 0; c < dim_; ++c) byWeight[mono[static_cast<size_t>(c)]].push_back(c);
    for (size_t a = 0; a < chosenWords_.size(); ++a) {
      for (size_t j = 0; j < chosenWords_.size(); ++j) {
        int len = static_cast<int>(chosenWords_[a].size() + chosenWords_[j].size());
        if (len > m) continue;  // value vanishes by degree orthogonality
        Weight w = wordWeights_[a] + wordWeights_[j];
        auto it = byWeight.find(w);
        if (it == byWeight.end()) continue;
        BElement prod = chosenExpanded_[a] * chosenExpanded_[j];
        for (int c : it->second) {
          RatFunc v = v_read_b(ctx_.stack(static_cast<size_t>(c)), prod);
          if (!v.is_zero())
            pairTable_[a].emplace_back(static_cast<int>(j), c, std::move(v));
        }
      }
    }
  }

  PairingContext ctx_;
  int dim_ = 0;
  std::vector<ZWord> chosenWords_;
  std::vector<BElement> chosenExpanded_;
  std::vector<Weight> wordWeights_;
  std::vector<Weight> weights_;
  std::vector<int> degrees_;
  Mat chosenMat_;
  mutable std::map<GenSym, Mat> rmats_;
  std::vector<std::vector<std::tuple<int, int, RatFunc>>> pairTable_;
};

}  // namespace qgr
