#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "qgr/tangent.hpp"

using namespace qgr;

namespace {

RatFunc qp(int e) { return RatFunc::q_power(e); }

Vec unit_vec(int dim, int at) {
  Vec v(static_cast<size_t>(dim));
  v[static_cast<size_t>(at)] = RatFunc(1);
  return v;
}

int class_index(const UbarModel& M, int fdeg, int edeg) {
  for (int c = 0; c < M.dim(); ++c) {
    const PbwMonomial& mu = M.basis()[static_cast<size_t>(c)];
    if (mu.f_total() == fdeg && mu.e_total() == edeg) return c;
  }
  return -1;
}

bool mats_equal(const Mat& a, const Mat& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j)
      if (!(a.at(i, j) == b.at(i, j))) return false;
  return true;
}

Mat mat_add(const Mat& a, const Mat& b) {
  Mat out(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) out.at(i, j) = a.at(i, j) + b.at(i, j);
  return out;
}

std::vector<std::string> names_of(const ClassifyResult& res) {
  std::vector<std::string> names;
  for (const auto& T : res.spaces) names.push_back(T.name);
  return names;
}

std::vector<int> gamma_dims_of(const ClassifyResult& res) {
  std::vector<int> dims;
  for (const auto& T : res.spaces) dims.push_back(T.gammaDim);
  return dims;
}

}  // namespace

TEST_CASE("parameter polynomials and exact square roots") {
  TPoly p = TPoly::var(0) * TPoly::var(0) - TPoly::constant(qp(2));
  REQUIRE(p.deg(0) == 2);
  REQUIRE(!p.depends(1));
  REQUIRE(p.eval(qp(1), RatFunc()).is_zero());

  RatFunc x = (qp(2) - RatFunc(1)) * (qp(2) - RatFunc(1)) / qp(2);
  auto s = ratfunc_sqrt(x);
  REQUIRE(s.has_value());
  REQUIRE(((*s) * (*s)) == x);
  REQUIRE(!ratfunc_sqrt(RatFunc::q()).has_value());
}

TEST_CASE("rational root isolation") {
  // (t - q)(t - q^{-1})
  std::vector<RatFunc> c{RatFunc(1), -(qp(1) + qp(-1)), RatFunc(1)};
  RootResult rr = univariate_roots(c);
  REQUIRE(rr.complete);
  REQUIRE(rr.roots.size() == 2);
  REQUIRE(std::count(rr.roots.begin(), rr.roots.end(), qp(1)) == 1);
  REQUIRE(std::count(rr.roots.begin(), rr.roots.end(), qp(-1)) == 1);

  // t^2 - q has no roots over Q(q)
  std::vector<RatFunc> irr{-qp(1), RatFunc(), RatFunc(1)};
  RootResult ri = univariate_roots(irr);
  REQUIRE(ri.complete);
  REQUIRE(ri.roots.empty());
  REQUIRE(ri.discardedIrrational);

  // t^3: the single root 0
  std::vector<RatFunc> cube{RatFunc(), RatFunc(), RatFunc(), RatFunc(1)};
  RootResult rc = univariate_roots(cube);
  REQUIRE(rc.complete);
  REQUIRE(rc.roots == std::vector<RatFunc>{RatFunc()});
}

TEST_CASE("parametric condition solving") {
  // single parameter: (s - q)(s - 1) = 0
  {
    TPoly p = (TPoly::var(0) - TPoly::constant(qp(1))) *
              (TPoly::var(0) - TPoly::constant(RatFunc(1)));
    SolveResult sol = solve_conditions({p}, 1);
    REQUIRE(sol.solved);
    REQUIRE(sol.points.size() == 2);
  }
  // two parameters, linear elimination: s*t = 1, s + t = q + q^{-1}
  {
    TPoly e1 = TPoly::var(0) * TPoly::var(1) - TPoly::constant(RatFunc(1));
    TPoly e2 = TPoly::var(0) + TPoly::var(1) - TPoly::constant(qp(1) + qp(-1));
    SolveResult sol = solve_conditions({e1, e2}, 2);
    REQUIRE(sol.solved);
    REQUIRE(sol.points.size() == 2);
    for (const auto& pt : sol.points) {
      REQUIRE((pt[0] * pt[1]) == RatFunc(1));
      REQUIRE((pt[0] + pt[1]) == (qp(1) + qp(-1)));
    }
  }
  // inconsistent constants
  {
    TPoly e = TPoly::var(0) - TPoly::var(0) + TPoly::constant(RatFunc(1));
    SolveResult sol = solve_conditions({e}, 1);
    REQUIRE(sol.solved);
    REQUIRE(sol.points.empty());
    REQUIRE(!sol.wholeSpace);
  }
  // empty system
  {
    SolveResult sol = solve_conditions({}, 2);
    REQUIRE(sol.solved);
    REQUIRE(sol.wholeSpace);
  }
}

TEST_CASE("isotypic blocks of the degree-two components") {
  {
    UbarModel M(4, 1, 2);
    auto rows = isotypic_decompose(M, 2, +1);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].dim == 6);
    REQUIRE(rows[0].multiplicity == 1);
    auto deg1 = isotypic_decompose(M, 1, +1);
    REQUIRE(deg1.size() == 1);
    REQUIRE(deg1[0].dim == 3);
  }
  {
    UbarModel M(4, 2, 2);
    auto rows = isotypic_decompose(M, 2, +1);
    std::multiset<int> dims;
    for (const auto& r : rows) {
      dims.insert(r.dim);
      REQUIRE(r.multiplicity == 1);
    }
    REQUIRE(dims == std::multiset<int>{1, 9});
    auto deg1 = isotypic_decompose(M, 1, +1);
    REQUIRE(deg1.size() == 1);
    REQUIRE(deg1[0].dim == 4);
    REQUIRE(deg1[0].multiplicity == 1);
  }
}

TEST_CASE("isotypic decomposition is semisimple and closed") {
  UbarModel M(3, 1, 2);
  KDecomposition D(M, 0, 1, 2);
  REQUIRE(D.semisimple_certified());
  REQUIRE(D.total_dim() == D.expected_dim());
  REQUIRE(D.verify_closure());
  REQUIRE(D.min_irrep_dim(1) == 2);
  REQUIRE(D.min_irrep_dim(2) == 1);
}

TEST_CASE("classification at the smallest flag") {
  UbarModel M(2, 1, 3);
  ClassifyResult res = classify(M, 2);
  REQUIRE(!res.refusedAudit);
  REQUIRE(!res.unsupported);
  REQUIRE(res.audit.certified);
  REQUIRE(res.spaces.size() == 6);
  REQUIRE(names_of(res) ==
          std::vector<std::string>{"T0", "T+", "T-", "T", "T1,+", "T1,-"});
  REQUIRE(gamma_dims_of(res) == std::vector<int>{0, 1, 1, 2, 2, 2});
  for (const auto& T : res.spaces) {
    REQUIRE(T.certs.pass());
    REQUIRE(T.dim == T.gammaDim + 1);
  }
  // rerun is byte-stable
  ClassifyResult again = classify(M, 2);
  REQUIRE(names_of(again) == names_of(res));
  for (size_t i = 0; i < res.spaces.size(); ++i)
    REQUIRE(again.spaces[i].basis == res.spaces[i].basis);
}

TEST_CASE("classification at the next flag") {
  UbarModel M(3, 1, 3);
  ClassifyResult res = classify(M, 4);
  REQUIRE(!res.refusedAudit);
  REQUIRE(!res.unsupported);
  REQUIRE(res.spaces.size() == 4);
  REQUIRE(names_of(res) == std::vector<std::string>{"T0", "T+", "T-", "T"});
  REQUIRE(gamma_dims_of(res) == std::vector<int>{0, 2, 2, 4});
  for (const auto& T : res.spaces) REQUIRE(T.certs.pass());
}

TEST_CASE("search beyond the classified bound still certifies its findings") {
  UbarModel M(2, 1, 3);
  ClassifyResult res = classify(M, 3);
  REQUIRE(res.beyondAuto);
  REQUIRE(!res.refusedAudit);
  REQUIRE(!res.unsupported);
  std::vector<std::string> names = names_of(res);
  for (const char* want : {"T0", "T+", "T-", "T", "T1,+", "T1,-"})
    REQUIRE(std::count(names.begin(), names.end(), want) == 1);
  REQUIRE(res.spaces.size() >= 6);
  for (const auto& T : res.spaces) REQUIRE(T.certs.pass());
}

TEST_CASE("certificates reject the non-coideal span") {
  UbarModel M(2, 1, 3);
  int e2 = class_index(M, 0, 2);
  REQUIRE(e2 >= 0);
  TangentSpace bad = make_space(M, {unit_vec(M.dim(), e2)});
  Certificates c = is_tangent_space(M, bad);
  REQUIRE(c.counit);
  REQUIRE(c.kstable);
  REQUIRE(!c.coideal);
  REQUIRE(c.witness.find("leaves the span") != std::string::npos);
  REQUIRE(c.witness.find("E") != std::string::npos);
}

TEST_CASE("ideal round trip and the dimension law") {
  UbarModel M(2, 1, 3);
  ClassifyResult res = classify(M, 2);
  for (const auto& T : res.spaces) {
    IdealTruncation L = ideal_of(M, T);
    REQUIRE(static_cast<int>(L.basis.size()) == (M.dim() - 1) - T.gammaDim);
    TangentSpace back = tangent_of(M, L);
    REQUIRE(back.basis == T.basis);
    REQUIRE(back.dim == T.dim);
  }
}

TEST_CASE("induced representation of the zero calculus") {
  UbarModel M(2, 1, 3);
  ClassifyResult res = classify(M, 2);
  const TangentSpace& T0 = res.spaces[0];
  REQUIRE(T0.name == "T0");
  InducedRep rep = induced_rep(M, T0);
  REQUIRE(rep.d == 1);
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; l <= 2; ++l)
      REQUIRE(rep.rho_at(2, k, l).at(0, 0) == eps_letter(k, l, 2, 1));
}

TEST_CASE("induced representation of the half calculus") {
  UbarModel M(2, 1, 3);
  ClassifyResult res = classify(M, 2);
  const TangentSpace* Tp = nullptr;
  for (const auto& T : res.spaces)
    if (T.name == "T+") Tp = &T;
  REQUIRE(Tp != nullptr);
  InducedRep rep = induced_rep(M, *Tp);
  REQUIRE(rep.d == 2);
  const Mat& z12 = rep.rho_at(2, 1, 2);
  bool nonzero = false;
  for (const auto& x : z12.a) nonzero = nonzero || !x.is_zero();
  REQUIRE(nonzero);
  REQUIRE(detail_tangent::is_zero_mat(detail_tangent::mat_mul(z12, z12)));

  // Leibniz identity over products of coordinate words.
  for (size_t ai = 0; ai < M.chosen_words().size(); ++ai)
    for (size_t bi = 0; bi < M.chosen_words().size(); ++bi) {
      const ZWord& wa = M.chosen_words()[ai];
      const ZWord& wb = M.chosen_words()[bi];
      if (wa.empty() || wb.empty()) continue;
      if (static_cast<int>(wa.size() + wb.size()) > M.truncation()) continue;
      BElement a = BElement::from_word(wa);
      BElement b = BElement::from_word(wb);
      BElement ab = a * b;
      Mat Ra = rho_of_element(rep, a, 2);
      for (int i = 1; i < rep.d; ++i) {
        RatFunc lhs = M.apply_t(rep.chi[static_cast<size_t>(i - 1)], ab);
        RatFunc rhs = M.apply_t(rep.chi[static_cast<size_t>(i - 1)], a) * epsilon(b, 2, 1);
        for (int j = 1; j < rep.d; ++j)
          rhs += Ra.at(i, j) * M.apply_t(rep.chi[static_cast<size_t>(j - 1)], b);
        REQUIRE(lhs == rhs);
      }
    }

  // rho respects every relation instance as an exact matrix identity.
  for (const RewriteRule& rule : relation_table(2, 1)) {
    Mat L = rho_of_element(rep, rule.lhs, 2);
    Mat R = rho_of_element(rep, rule.rhs, 2);
    REQUIRE(mats_equal(L, R));
  }
}

TEST_CASE("trace identity in the full calculus") {
  UbarModel M(2, 1, 3);
  ClassifyResult res = classify(M, 2);
  const TangentSpace* Tfull = nullptr;
  for (const auto& T : res.spaces)
    if (T.name == "T") Tfull = &T;
  REQUIRE(Tfull != nullptr);
  InducedRep rep = induced_rep(M, *Tfull);
  REQUIRE(rep.d == 3);
  Mat sum = mat_add(rep.rho_at(2, 1, 1), rep.rho_at(2, 2, 2));
  Mat expect = Mat::identity(3);
  for (int i = 0; i < 3; ++i) expect.at(i, i) = qp(-1);
  REQUIRE(mats_equal(sum, expect));
}

TEST_CASE("spectrum report certifies nilpotency and transitions") {
  UbarModel M(2, 1, 3);
  ClassifyResult res = classify(M, 2);
  for (const auto& T : res.spaces) {
    InducedRep rep = induced_rep(M, T);
    SpectrumReport sr = nilpotency_report(M, rep);
    INFO(T.name);
    for (const auto& v : sr.violations) INFO(v);
    REQUIRE(sr.pass());
    if (T.name == "T+") REQUIRE(sr.muPlusChecked >= 1);
  }
  REQUIRE(eps_letter(1, 1, 2, 1).is_zero());
  REQUIRE(eps_letter(2, 2, 2, 1) == qp(-1));
}

TEST_CASE("truncation audit") {
  {
    UbarModel M(2, 1, 3);
    AuditReport a = step4_audit(2, 1, 2, &M);
    REQUIRE(a.certified);
    REQUIRE(a.chainBound == 4);
  }
  {
    UbarModel M(3, 1, 3);
    AuditReport a = step4_audit(3, 1, 4, &M);
    REQUIRE(a.certified);
    REQUIRE(a.chainBound == 6);
  }
  {
    AuditReport a = step4_audit(7, 2, 20);
    REQUIRE(!a.certified);
    REQUIRE(a.boundaryCase);
    REQUIRE(a.dimV2 == 10);
  }
  {
    AuditReport a = step4_audit(4, 2, 8);
    REQUIRE(a.dimV1 == 9);
    REQUIRE(a.dimV2 == 1);
    REQUIRE(!a.boundaryCase);
  }
}

TEST_CASE("functional wrappers for the right action") {
  UbarModel M(2, 1, 3);
  Functional fE = functional_of(UElement::gen(GK::E, 1), M.context());
  Functional acted = k_action(M, fE, {GK::K, 1});
  for (size_t i = 0; i < acted.coords.size(); ++i)
    REQUIRE(acted.coords[i] == qp(-2) * fE.coords[i]);
  REQUIRE_THROWS_AS(k_action(M, fE, GenSym{GK::E, 1}), std::invalid_argument);

  std::vector<Functional> span = right_translates(M, fE);
  REQUIRE(span.size() == 2);

  std::vector<Functional> prim = primitives(M, 2);
  REQUIRE(prim.size() == 2);
}

TEST_CASE("shifted product splitting") {
  UbarModel M(2, 1, 3);
  for (int c : {1, 2, 4}) {
    Vec t = unit_vec(M.dim(), c);
    for (int k = 1; k <= 2; ++k)
      for (int l = 1; l <= 2; ++l)
        for (int w : {0, 1, 2}) {
          const ZWord& word = M.chosen_words()[static_cast<size_t>(w)];
          if (static_cast<int>(word.size()) + 1 > M.truncation()) continue;
          BElement plainProd =
              BElement::from_word({ZGen{k, l}}) * expand_shifted(word, 2, 1);
          RatFunc direct = M.apply_t(t, plainProd);
          RatFunc split = M.apply_shifted_product(t, ZGen{k, l}, w) +
                          eps_letter(k, l, 2, 1) * M.vals_of_t(t)[static_cast<size_t>(w)];
          REQUIRE(direct == split);
        }
  }
}
