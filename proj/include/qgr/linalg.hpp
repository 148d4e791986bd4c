/**
 * @file linalg.hpp
 * @brief Exact dense linear algebra over Q(q).
 *
 * Everything here is deterministic: pivot choices depend only on the input
 * entries (optionally guided by a rational probe evaluation, with an exact
 * fallback), and all canonical outputs (RREF, nullspace bases) are unique
 * for a given input.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgr/ratfunc.hpp"

namespace qgr {

using Vec = std::vector<RatFunc>;

struct Mat {
  int rows = 0, cols = 0;
  std::vector<RatFunc> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = RatFunc(1);
    return m;
  }

  RatFunc& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const RatFunc& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  [[nodiscard]] Vec row(int r) const {
    return Vec(a.begin() + static_cast<long>(r) * cols,
               a.begin() + static_cast<long>(r + 1) * cols);
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

inline Mat operator*(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch");
  Mat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const RatFunc& v = x.at(i, k);
      if (v.is_zero()) continue;
      for (int j = 0; j < y.cols; ++j) {
        const RatFunc& w = y.at(k, j);
        if (!w.is_zero()) r.at(i, j) += v * w;
      }
    }
  return r;
}

inline Mat operator+(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix shape mismatch");
  Mat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
  return r;
}

inline Mat operator-(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("matrix shape mismatch");
  Mat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
  return r;
}

inline Mat scale(const Mat& x, const RatFunc& s) {
  Mat r = x;
  for (auto& v : r.a) v *= s;
  return r;
}

inline Mat transpose(const Mat& x) {
  Mat r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

inline bool is_zero(const Mat& x) {
  for (const auto& v : x.a)
    if (!v.is_zero()) return false;
  return true;
}

inline bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline Vec mat_vec(const Mat& m, const Vec& v) {
  Vec r(static_cast<size_t>(m.rows));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (!m.at(i, j).is_zero() && !v[static_cast<size_t>(j)].is_zero())
        r[static_cast<size_t>(i)] += m.at(i, j) * v[static_cast<size_t>(j)];
  return r;
}

inline Vec vec_mat(const Vec& v, const Mat& m) {
  Vec r(static_cast<size_t>(m.cols));
  for (int i = 0; i < m.rows; ++i) {
    const RatFunc& x = v[static_cast<size_t>(i)];
    if (x.is_zero()) continue;
    for (int j = 0; j < m.cols; ++j)
      if (!m.at(i, j).is_zero()) r[static_cast<size_t>(j)] += x * m.at(i, j);
  }
  return r;
}

// ======================================================================
// Incremental echelon form.  Rows are kept reduced against each other;
// canonical_basis() returns the unique RREF basis of the span.
// ======================================================================
class Echelon {
 public:
  explicit Echelon(int cols) : cols_(cols) {}

  /// Reduce v against the current rows.  If a nonzero residual remains,
  /// normalize it (leading entry 1), back-eliminate, insert, and return
  /// true; return false when v already lies in the span.
  bool insert(Vec v) {
    reduce(v);
    int p = pivot_of(v);
    if (p < 0) return false;
    RatFunc lead = v[static_cast<size_t>(p)];
    for (auto& x : v) x /= lead;
    // Eliminate column p from existing rows to keep the form reduced.
    for (size_t i = 0; i < rows_.size(); ++i) {
      RatFunc f = rows_[i][static_cast<size_t>(p)];
      if (!f.is_zero())
        for (int j = 0; j < cols_; ++j)
          rows_[i][static_cast<size_t>(j)] -= f * v[static_cast<size_t>(j)];
    }
    // Insert keeping pivot order.
    size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + static_cast<long>(pos), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<long>(pos), p);
    return true;
  }

  /// Subtract the projection onto the span; the residual is zero iff v
  /// lies in the span.
  void reduce(Vec& v) const {
    for (size_t i = 0; i < rows_.size(); ++i) {
      RatFunc f = v[static_cast<size_t>(pivots_[i])];
      if (f.is_zero()) continue;
      for (int j = 0; j < cols_; ++j)
        v[static_cast<size_t>(j)] -= f * rows_[i][static_cast<size_t>(j)];
    }
  }

  [[nodiscard]] bool contains(Vec v) const {
    reduce(v);
    return is_zero(v);
  }

  [[nodiscard]] int rank() const { return static_cast<int>(rows_.size()); }
  [[nodiscard]] int cols() const { return cols_; }
  [[nodiscard]] const std::vector<Vec>& rows() const { return rows_; }
  [[nodiscard]] const std::vector<int>& pivots() const { return pivots_; }

  /// The unique reduced-row-echelon basis of the span.
  [[nodiscard]] std::vector<Vec> canonical_basis() const { return rows_; }

 private:
  static int pivot_of(const Vec& v) {
    for (size_t j = 0; j < v.size(); ++j)
      if (!v[j].is_zero()) return static_cast<int>(j);
    return -1;
  }
  int cols_;
  std::vector<Vec> rows_;
  std::vector<int> pivots_;
};

/// Reduced row echelon form with unit pivots; canonical for the row space.
inline Mat rref(const Mat& m, std::vector<int>* pivotCols = nullptr) {
  Echelon e(m.cols);
  for (int i = 0; i < m.rows; ++i) e.insert(m.row(i));
  Mat r(e.rank(), m.cols);
  for (int i = 0; i < e.rank(); ++i)
    for (int j = 0; j < m.cols; ++j) r.at(i, j) = e.rows()[static_cast<size_t>(i)][static_cast<size_t>(j)];
  if (pivotCols) *pivotCols = e.pivots();
  return r;
}

/// Canonical nullspace basis: one vector per free column, entry 1 there.
inline std::vector<Vec> nullspace(const Mat& m) {
  std::vector<int> piv;
  Mat r = rref(m, &piv);
  std::vector<bool> isPivot(static_cast<size_t>(m.cols), false);
  for (int p : piv) isPivot[static_cast<size_t>(p)] = true;
  std::vector<Vec> basis;
  for (int j = 0; j < m.cols; ++j) {
    if (isPivot[static_cast<size_t>(j)]) continue;
    Vec v(static_cast<size_t>(m.cols));
    v[static_cast<size_t>(j)] = RatFunc(1);
    for (int i = 0; i < r.rows; ++i)
      v[static_cast<size_t>(piv[static_cast<size_t>(i)])] = -r.at(i, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Exact inverse; throws std::runtime_error on singular input.
inline Mat inverse(const Mat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse of non-square matrix");
  int n = m.rows;
  Mat aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = RatFunc(1);
  }
  // Gauss-Jordan with first-nonzero pivots.
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    int sel = -1;
    for (int i = row; i < n; ++i)
      if (!aug.at(i, col).is_zero()) { sel = i; break; }
    if (sel < 0) throw std::runtime_error("singular matrix");
    if (sel != row)
      for (int j = 0; j < 2 * n; ++j) std::swap(aug.at(sel, j), aug.at(row, j));
    RatFunc inv = aug.at(row, col).inv();
    for (int j = 0; j < 2 * n; ++j) aug.at(row, j) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == row) continue;
      RatFunc f = aug.at(i, col);
      if (f.is_zero()) continue;
      for (int j = 0; j < 2 * n; ++j) aug.at(i, j) -= f * aug.at(row, j);
    }
    ++row;
  }
  if (row < n) throw std::runtime_error("singular matrix");
  Mat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = aug.at(i, n + j);
  return out;
}

/// Solve A x = b exactly.  Returns false when the system is inconsistent;
/// for underdetermined systems the free variables are set to zero.
inline bool solve(const Mat& A, const Vec& b, Vec& x) {
  Mat aug(A.rows, A.cols + 1);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols) = b[static_cast<size_t>(i)];
  }
  std::vector<int> piv;
  Mat r = rref(aug, &piv);
  x.assign(static_cast<size_t>(A.cols), RatFunc(0));
  for (int i = 0; i < r.rows; ++i) {
    if (piv[static_cast<size_t>(i)] == A.cols) return false;  // row (0 ... 0 | 1)
    x[static_cast<size_t>(piv[static_cast<size_t>(i)])] = r.at(i, A.cols);
  }
  return true;
}

// ======================================================================
// Rational probes and rank.
// ======================================================================
struct Probe {
  Rational q0;
};

/// Deterministic pseudo-random probe point, never 0 or ±1.
inline Probe choose_probe(std::uint64_t seed, int round = 0) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<unsigned>(round) + 1);
  std::uniform_int_distribution<int> num(2, 97), den(1, 13);
  for (;;) {
    int p = num(rng), r = den(rng);
    Rational q0(p, r);
    if (q0 != 0 && q0 != 1 && q0 != -1) return Probe{q0};
  }
}

/// Rank of the matrix evaluated at q0, or nullopt if some entry has a pole.
inline std::optional<int> rank_at(const Mat& m, const Rational& q0) {
  std::vector<std::vector<Rational>> a(static_cast<size_t>(m.rows),
                                       std::vector<Rational>(static_cast<size_t>(m.cols)));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) {
      try {
        a[static_cast<size_t>(i)][static_cast<size_t>(j)] = m.at(i, j).evaluate_at(q0);
      } catch (const std::domain_error&) {
        return std::nullopt;
      }
    }
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int sel = -1;
    for (int i = rank; i < m.rows; ++i)
      if (a[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) { sel = i; break; }
    if (sel < 0) continue;
    std::swap(a[static_cast<size_t>(sel)], a[static_cast<size_t>(rank)]);
    for (int i = rank + 1; i < m.rows; ++i) {
      Rational f = a[static_cast<size_t>(i)][static_cast<size_t>(col)] /
                   a[static_cast<size_t>(rank)][static_cast<size_t>(col)];
      if (f == 0) continue;
      for (int j = col; j < m.cols; ++j)
        a[static_cast<size_t>(i)][static_cast<size_t>(j)] -=
            f * a[static_cast<size_t>(rank)][static_cast<size_t>(j)];
    }
    ++rank;
  }
  return rank;
}

/// Fast certified lower bound for the rank: evaluate at a random rational
/// point and count pivots there.  Specializations of the entries can only
/// lose rank, never gain it, so the result is a true lower bound.
inline int rank_precheck(const Mat& m, std::uint64_t seed = 0x5eed) {
  for (int round = 0; round < 64; ++round) {
    auto r = rank_at(m, choose_probe(seed, round).q0);
    if (r) return *r;
  }
  return 0;  // every probe hit a pole; the bound 0 is still valid
}

/// Exact rank.  Rows are first cleared to polynomial form (multiplying a
/// row by a nonzero scalar preserves rank), then eliminated fraction-free
/// in the Bareiss scheme with exact divisions; pivots are guided by a
/// rational probe with an exact zero test.
inline int rank_exact(const Mat& m, std::uint64_t seed = 0x5eed) {
  // Polynomial-cleared copy.
  std::vector<std::vector<Poly>> a(static_cast<size_t>(m.rows),
                                   std::vector<Poly>(static_cast<size_t>(m.cols)));
  for (int i = 0; i < m.rows; ++i) {
    Poly lcm(1);
    for (int j = 0; j < m.cols; ++j) {
      const Poly& d = m.at(i, j).denominator();
      Poly g = Poly::gcd(lcm, d);
      Poly quot;
      if (!d.try_divide(g, &quot)) quot = d;  // g primitive: exact division
      lcm *= quot;
    }
    for (int j = 0; j < m.cols; ++j) {
      Poly quot;
      if (!lcm.try_divide(m.at(i, j).denominator(), &quot)) quot = Poly(1);
      a[static_cast<size_t>(i)][static_cast<size_t>(j)] = m.at(i, j).numerator() * quot;
    }
  }
  Probe probe = choose_probe(seed);
  Poly prevPivot(1);
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    // Pivot: prefer a row whose entry is nonzero at the probe point.
    int sel = -1, fallback = -1;
    for (int i = rank; i < m.rows; ++i) {
      const Poly& x = a[static_cast<size_t>(i)][static_cast<size_t>(col)];
      if (x.is_zero()) continue;
      if (fallback < 0) fallback = i;
      if (x.evaluate(probe.q0) != 0) { sel = i; break; }
    }
    if (sel < 0) sel = fallback;
    if (sel < 0) continue;
    std::swap(a[static_cast<size_t>(sel)], a[static_cast<size_t>(rank)]);
    const Poly pivot = a[static_cast<size_t>(rank)][static_cast<size_t>(col)];
    for (int i = rank + 1; i < m.rows; ++i) {
      const Poly lead = a[static_cast<size_t>(i)][static_cast<size_t>(col)];
      a[static_cast<size_t>(i)][static_cast<size_t>(col)] = Poly();
      // Even for lead == 0 the Bareiss update must run so that the exact
      // division by the previous pivot stays valid on later steps.
      for (int j = col + 1; j < m.cols; ++j) {
        Poly t = pivot * a[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                 lead * a[static_cast<size_t>(rank)][static_cast<size_t>(j)];
        Poly quot;
        if (!t.try_divide(prevPivot, &quot)) quot = t;  // Bareiss: division is exact
        a[static_cast<size_t>(i)][static_cast<size_t>(j)] = std::move(quot);
      }
    }
    prevPivot = pivot;
    ++rank;
  }
  return rank;
}

}  // namespace qgr
