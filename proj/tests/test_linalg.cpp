#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qgr/linalg.hpp"
#include "qgr/parallel.hpp"

using namespace qgr;

namespace {

RatFunc rf(const std::string& s) { return RatFunc::parse(s); }

Mat from_rows(const std::vector<std::vector<std::string>>& rows) {
  Mat m(static_cast<int>(rows.size()), static_cast<int>(rows.at(0).size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m.at(i, j) = rf(rows[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return m;
}

Mat random_matrix(std::mt19937& rng, int rows, int cols, int rankBound) {
  // Product of random thin factors => rank <= rankBound.
  std::uniform_int_distribution<int> coeff(-3, 3), deg(0, 2);
  auto rand_entry = [&] {
    Poly p;
    for (int d = deg(rng); d >= 0; --d) p += Poly::monomial(coeff(rng), d);
    Poly den = Poly::monomial(1, deg(rng));  // powers of q only: no surprise poles
    if (p.is_zero()) return RatFunc(0);
    return RatFunc(p, den);
  };
  Mat left(rows, rankBound), right(rankBound, cols);
  for (auto* m : {&left, &right})
    for (auto& v : m->a) v = rand_entry();
  return left * right;
}

}  // namespace

TEST_CASE("rref canonical form and pivots") {
  Mat m = from_rows({{"q", "q^2", "0"},
                     {"1", "q", "1"},
                     {"0", "1", "q"}});
  std::vector<int> piv;
  Mat r = rref(m, &piv);
  REQUIRE(r.rows == 3);
  REQUIRE(piv == std::vector<int>{0, 1, 2});
  REQUIRE(r == Mat::identity(3));

  Mat sing = from_rows({{"1", "q"},
                        {"q", "q^2"}});
  Mat rs = rref(sing, &piv);
  REQUIRE(rs.rows == 1);
  REQUIRE(piv == std::vector<int>{0});
  REQUIRE(rs.at(0, 0) == RatFunc(1));
  REQUIRE(rs.at(0, 1) == rf("q"));
}

TEST_CASE("rref is invariant under row scaling and permutation") {
  Mat m = from_rows({{"q", "1", "q^2"},
                     {"0", "q-1", "1"}});
  Mat scrambled = from_rows({{"0", "(q-1)*(q+1)", "q+1"},
                             {"q^2", "q", "q^3"}});
  REQUIRE(rref(m) == rref(scrambled));
}

TEST_CASE("rank: exact, probe, and precheck agree on full-rank input") {
  Mat m = from_rows({{"q", "1/q", "0"},
                     {"0", "q^2-1", "2"},
                     {"1", "0", "q+1"}});
  REQUIRE(rank_exact(m) == 3);
  REQUIRE(rank_precheck(m) == 3);
  auto at2 = rank_at(m, Rational(2));
  REQUIRE(at2.has_value());
  REQUIRE(*at2 == 3);
}

TEST_CASE("rank precheck can undershoot at special points but never overshoots") {
  // The 1x1 matrix [q - 1/q] vanishes at q0 = 1: the probe there reports
  // rank 0 while the exact rank is 1.
  Mat m(1, 1);
  m.at(0, 0) = rf("q") - rf("1/q");
  auto at1 = rank_at(m, Rational(1));
  REQUIRE(at1.has_value());
  REQUIRE(*at1 == 0);
  REQUIRE(rank_exact(m) == 1);
  REQUIRE(rank_precheck(m) <= rank_exact(m));
}

TEST_CASE("rank_at reports poles") {
  Mat m(1, 2);
  m.at(0, 0) = rf("1/(q-1)");
  m.at(0, 1) = RatFunc(1);
  REQUIRE_FALSE(rank_at(m, Rational(1)).has_value());
  REQUIRE(rank_at(m, Rational(2)).has_value());
  REQUIRE(rank_exact(m) == 1);
  REQUIRE(rank_precheck(m) == 1);  // probes avoid the pole eventually
}

TEST_CASE("randomized rank consistency") {
  std::mt19937 rng(20260822u);
  for (int trial = 0; trial < 25; ++trial) {
    int rows = 1 + static_cast<int>(rng() % 5);
    int cols = 1 + static_cast<int>(rng() % 5);
    int bound = 1 + static_cast<int>(rng() % 3);
    Mat m = random_matrix(rng, rows, cols, bound);
    int exact = rank_exact(m, rng());
    REQUIRE(exact <= std::min({rows, cols, bound}));
    REQUIRE(rank_precheck(m, rng()) <= exact);
    REQUIRE(rref(m).rows == exact);
    // Nullspace dimension complements the rank.
    auto ns = nullspace(m);
    REQUIRE(static_cast<int>(ns.size()) == cols - exact);
    for (const auto& v : ns) REQUIRE(is_zero(mat_vec(m, v)));
  }
}

TEST_CASE("nullspace basis is canonical") {
  Mat m = from_rows({{"1", "q", "0", "q^2"},
                     {"0", "0", "1", "q"}});
  auto ns = nullspace(m);
  REQUIRE(ns.size() == 2);
  // Free columns are 1 and 3; each vector carries 1 at its free column.
  REQUIRE(ns[0][1] == RatFunc(1));
  REQUIRE(ns[0][0] == rf("-q"));
  REQUIRE(ns[0][2] == RatFunc(0));
  REQUIRE(ns[0][3] == RatFunc(0));
  REQUIRE(ns[1][3] == RatFunc(1));
  REQUIRE(ns[1][0] == rf("-q^2"));
  REQUIRE(ns[1][2] == rf("-q"));
}

TEST_CASE("inverse and solve") {
  Mat m = from_rows({{"q", "1"},
                     {"1", "q"}});
  Mat mi = inverse(m);
  REQUIRE(m * mi == Mat::identity(2));
  REQUIRE(mi * m == Mat::identity(2));

  Vec b{rf("q^2+1"), rf("2*q")};
  Vec x;
  REQUIRE(solve(m, b, x));
  REQUIRE(x[0] == rf("q"));
  REQUIRE(x[1] == RatFunc(1));

  Mat sing = from_rows({{"1", "q"},
                        {"q", "q^2"}});
  REQUIRE_THROWS_AS(inverse(sing), std::runtime_error);
  Vec bad{RatFunc(1), RatFunc(0)};
  Vec y;
  REQUIRE_FALSE(solve(sing, bad, y));
  Vec good{RatFunc(1), rf("q")};
  REQUIRE(solve(sing, good, y));
  REQUIRE(y[0] == RatFunc(1));
  REQUIRE(y[1] == RatFunc(0));  // free variable pinned to zero
}

TEST_CASE("echelon membership and canonical basis") {
  Echelon e(3);
  REQUIRE(e.insert({rf("q"), rf("q^2"), RatFunc(0)}));
  REQUIRE_FALSE(e.insert({rf("2*q"), rf("2*q^2"), RatFunc(0)}));
  REQUIRE(e.insert({RatFunc(1), RatFunc(0), rf("q")}));
  REQUIRE(e.rank() == 2);
  REQUIRE(e.contains({RatFunc(0), rf("q^2"), rf("-q^2")}));  // row1 - q*row2
  REQUIRE_FALSE(e.contains({RatFunc(0), RatFunc(0), RatFunc(1)}));
  // Basis rows are fully reduced with unit pivots in pivot order.
  auto basis = e.canonical_basis();
  REQUIRE(basis[0][0] == RatFunc(1));
  REQUIRE(basis[0][1] == RatFunc(0));
  REQUIRE(basis[0][2] == rf("q"));
  REQUIRE(basis[1][1] == RatFunc(1));
  REQUIRE(basis[1][2] == RatFunc(-1));
}

TEST_CASE("matrix algebra basics") {
  Mat a = from_rows({{"q", "0"}, {"1", "1/q"}});
  Mat b = from_rows({{"1", "q"}, {"0", "q^2"}});
  Mat ab = a * b;
  REQUIRE(ab.at(0, 0) == rf("q"));
  REQUIRE(ab.at(0, 1) == rf("q^2"));
  REQUIRE(ab.at(1, 0) == RatFunc(1));
  REQUIRE(ab.at(1, 1) == rf("q") + rf("q"));
  REQUIRE(transpose(transpose(a)) == a);
  Vec v{RatFunc(1), rf("q")};
  Vec mv = mat_vec(a, v);
  REQUIRE(mv[0] == rf("q"));
  REQUIRE(mv[1] == RatFunc(2));
  Vec vm = vec_mat(v, a);
  REQUIRE(vm[0] == rf("2*q"));
  REQUIRE(vm[1] == RatFunc(1));
}

TEST_CASE("parallel_for matches serial execution and propagates errors") {
  const int n = 257;
  std::vector<long> serial(n), parallel(n);
  auto work = [](int i) { return static_cast<long>(i) * i + 7; };
  parallel_for(n, 1, [&](int i) { serial[static_cast<size_t>(i)] = work(i); });
  parallel_for(n, 8, [&](int i) { parallel[static_cast<size_t>(i)] = work(i); });
  REQUIRE(serial == parallel);
  REQUIRE_THROWS_AS(
      parallel_for(64, 4, [](int i) { if (i == 13) throw std::runtime_error("boom"); }),
      std::runtime_error);
}
