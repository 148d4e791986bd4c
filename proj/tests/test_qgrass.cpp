#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "qgr/qgrass.hpp"

using namespace qgr;

namespace {
RatFunc Q(int e) { return RatFunc::q_power(e); }
ZGen Z(int i, int j) { return ZGen{i, j}; }
BElement W(std::initializer_list<ZGen> gens, RatFunc c = RatFunc(1)) {
  return BElement::from_word(ZWord(gens), std::move(c));
}
}  // namespace

TEST_CASE("counit on generators", "[qgrass][counit]") {
  // eps(z_NN) = q^{-1} for every (N, r).
  CHECK(z_epsilon_gen(Z(2, 2), 2, 1) == Q(-1));
  CHECK(z_epsilon_gen(Z(3, 3), 3, 1) == Q(-1));
  CHECK(z_epsilon_gen(Z(4, 4), 4, 1) == Q(-1));
  CHECK(z_epsilon_gen(Z(4, 4), 4, 2) == Q(-1));
  // Off-diagonal and upper-left diagonal generators die.
  CHECK(z_epsilon_gen(Z(1, 2), 2, 1).is_zero());
  CHECK(z_epsilon_gen(Z(2, 1), 2, 1).is_zero());
  CHECK(z_epsilon_gen(Z(1, 1), 2, 1).is_zero());
  CHECK(z_epsilon_gen(Z(2, 2), 4, 2).is_zero());
  // Interior values.
  CHECK(z_epsilon_gen(Z(3, 3), 4, 2) == Q(-3));
  CHECK(z_epsilon_gen(Z(2, 2), 3, 1) == Q(-3));
  CHECK(z_epsilon_gen(Z(2, 2), 4, 1) == Q(-5));
}

TEST_CASE("counit is multiplicative and matches the trace value", "[qgrass][counit]") {
  // eps(sum_i z_ii) = (1 - q^{-2s})/(q - q^{-1}).
  for (auto [N, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {4, 1}, {4, 2}}) {
    BElement tr;
    for (int i = 1; i <= N; ++i) tr += BElement::gen(Z(i, i));
    RatFunc expected =
        (RatFunc(1) - RatFunc::q_power(-2 * (N - r))) / RatFunc::qhat();
    CHECK(epsilon(tr, N, r) == expected);
  }
  // At (2,1) the value is q^{-1}.
  BElement tr21 = BElement::gen(Z(1, 1)) + BElement::gen(Z(2, 2));
  CHECK(epsilon(tr21, 2, 1) == Q(-1));
  // Products multiply under eps.
  BElement w = W({Z(3, 3), Z(4, 4)});
  CHECK(epsilon(w, 4, 2) == Q(-3) * Q(-1));
  BElement dead = W({Z(3, 3), Z(1, 2)});
  CHECK(epsilon(dead, 4, 2).is_zero());
}

TEST_CASE("weights of generators and words", "[qgrass][weight]") {
  CHECK(z_weight_gen(Z(1, 2), 2).alpha == std::vector<long long>{1});
  CHECK(z_weight_gen(Z(2, 1), 2).alpha == std::vector<long long>{-1});
  CHECK(z_weight_gen(Z(1, 3), 3).alpha == std::vector<long long>{1, 1});
  CHECK(z_weight_gen(Z(3, 1), 3).alpha == std::vector<long long>{-1, -1});
  CHECK(z_weight_gen(Z(2, 2), 3).alpha == std::vector<long long>{0, 0});
  CHECK(z_weight_gen(Z(2, 4), 4).alpha == std::vector<long long>{0, 1, 1});
  // Additivity on words.
  Weight w = z_weight(ZWord{Z(1, 3), Z(3, 1), Z(1, 2)}, 3);
  CHECK(w.alpha == std::vector<long long>{1, 0});
}

TEST_CASE("K acts on a word by minus the Cartan pairing with its weight",
          "[qgrass][weight][act]") {
  const int N = 4;
  std::vector<ZWord> words = {{Z(1, 2)},
                              {Z(3, 1), Z(2, 4)},
                              {Z(2, 2), Z(4, 1), Z(1, 3), Z(3, 3)}};
  for (const auto& w : words) {
    Weight wt = z_weight(w, N);
    for (int k = 1; k <= N - 1; ++k) {
      // (A wt)_k with A the Cartan matrix of sl_N.
      int cart = 2 * wt.alpha[static_cast<size_t>(k - 1)];
      if (k - 2 >= 0) cart -= wt.alpha[static_cast<size_t>(k - 2)];
      if (k < N - 1) cart -= wt.alpha[static_cast<size_t>(k)];
      BElement expect = Q(-cart) * BElement::from_word(w);
      CHECK(act(GenSym{GK::K, k}, BElement::from_word(w), N) == expect);
      CHECK(act(GenSym{GK::Kinv, k}, BElement::from_word(w), N) ==
            Q(cart) * BElement::from_word(w));
    }
  }
}

TEST_CASE("action on single generators", "[qgrass][act]") {
  // E_r  z_{r,r+1} = q^{-1} z_{r+1,r+1} - q z_{r,r}.
  for (auto [N, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {4, 2}}) {
    BElement got = act(GenSym{GK::E, r}, BElement::gen(Z(r, r + 1)), N);
    BElement expect = Q(-1) * BElement::gen(Z(r + 1, r + 1)) - Q(1) * BElement::gen(Z(r, r));
    CHECK(got == expect);
  }
  // K_k fixes every diagonal generator.
  for (int N : {2, 3, 4})
    for (int k = 1; k <= N - 1; ++k)
      for (int j = 1; j <= N; ++j)
        CHECK(act(GenSym{GK::K, k}, BElement::gen(Z(j, j)), N) == BElement::gen(Z(j, j)));
  // F_1 z_21 = z_11 - q^{-2} z_22 at N = 2.
  BElement got = act(GenSym{GK::F, 1}, BElement::gen(Z(2, 1)), 2);
  CHECK(got == BElement::gen(Z(1, 1)) - Q(-2) * BElement::gen(Z(2, 2)));
  // E_1 (z_11 z_11) = q z_21 z_11 + q z_11 z_21 at N = 2.
  BElement prod = act(GenSym{GK::E, 1}, W({Z(1, 1), Z(1, 1)}), 2);
  CHECK(prod == Q(1) * W({Z(2, 1), Z(1, 1)}) + Q(1) * W({Z(1, 1), Z(2, 1)}));
}

TEST_CASE("action extends through products by the coproduct", "[qgrass][act]") {
  const int N = 3;
  std::vector<BElement> elems = {
      BElement::gen(Z(1, 2)) + Q(2) * BElement::gen(Z(3, 1)),
      W({Z(2, 2), Z(1, 3)}),
      W({Z(3, 2)}) - W({Z(2, 1), Z(1, 1)}),
  };
  for (const auto& a : elems)
    for (const auto& b : elems)
      for (int k = 1; k <= N - 1; ++k) {
        GenSym E{GK::E, k}, F{GK::F, k}, K{GK::K, k}, Kinv{GK::Kinv, k};
        CHECK(act(E, a * b, N) == act(E, a, N) * act(K, b, N) + a * act(E, b, N));
        CHECK(act(F, a * b, N) == act(F, a, N) * b + act(Kinv, a, N) * act(F, b, N));
        CHECK(act(K, a * b, N) == act(K, a, N) * act(K, b, N));
      }
}

TEST_CASE("defining relations of U act as zero", "[qgrass][act]") {
  const int N = 3, r = 1;
  std::vector<BElement> probes = {
      BElement::gen(Z(1, 2)), BElement::gen(Z(2, 1)), BElement::gen(Z(2, 2)),
      W({Z(1, 3), Z(3, 1)}), W({Z(2, 3), Z(1, 1), Z(3, 2)})};
  auto E = [](int k) { return UElement::gen(GK::E, k); };
  auto F = [](int k) { return UElement::gen(GK::F, k); };
  auto K = [](int k) { return UElement::gen(GK::K, k); };
  auto Ki = [](int k) { return UElement::gen(GK::Kinv, k); };
  std::vector<UElement> rels;
  // [E_i, F_j] = delta_ij (K_i - K_i^{-1})/(q - q^{-1}).
  for (int i = 1; i <= N - 1; ++i)
    for (int j = 1; j <= N - 1; ++j) {
      UElement lhs = E(i) * F(j) - F(j) * E(i);
      if (i == j) lhs -= (K(i) - Ki(i)) * (RatFunc(1) / RatFunc::qhat());
      rels.push_back(lhs);
    }
  // K E K^{-1} = q^{a_kj} E and the q-Serre relations.
  for (int k = 1; k <= N - 1; ++k)
    for (int j = 1; j <= N - 1; ++j) {
      int a = k == j ? 2 : (std::abs(k - j) == 1 ? -1 : 0);
      rels.push_back(K(k) * E(j) * Ki(k) - RatFunc::q_power(a) * E(j));
      rels.push_back(K(k) * F(j) * Ki(k) - RatFunc::q_power(-a) * F(j));
    }
  RatFunc two_q = Q(1) + Q(-1);
  rels.push_back(E(1) * E(1) * E(2) - two_q * E(1) * E(2) * E(1) + E(2) * E(1) * E(1));
  rels.push_back(F(2) * F(2) * F(1) - two_q * F(2) * F(1) * F(2) + F(1) * F(2) * F(2));
  for (const auto& x : rels)
    for (const auto& b : probes) {
      CAPTURE(x.str());
      CHECK(act(x, b, N).is_zero());
    }
  (void)r;
}

TEST_CASE("counit intertwines the action", "[qgrass][act][counit]") {
  // eps(g  x) = eps_U(g) eps(x): zero for E and F, identity for K.
  for (auto [N, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {4, 2}}) {
    std::vector<BElement> probes;
    for (int i = 1; i <= N; ++i) probes.push_back(BElement::gen(Z(i, i)));
    probes.push_back(W({Z(N, N), Z(N, N)}));
    for (int k = 1; k <= N - 1; ++k)
      for (const auto& b : probes) {
        CHECK(epsilon(act(GenSym{GK::E, k}, b, N), N, r).is_zero());
        CHECK(epsilon(act(GenSym{GK::F, k}, b, N), N, r).is_zero());
        CHECK(epsilon(act(GenSym{GK::K, k}, b, N), N, r) == epsilon(b, N, r));
      }
  }
}

TEST_CASE("embedding of generators and products", "[qgrass][embed]") {
  // At (2,1): i(z_ij) = q^{-1} u^2_i S(u^j_2) -- a single mixed word.
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      MixedElement got = embed(BElement::gen(Z(i, j)), 2, 1);
      REQUIRE(got.size() == 1);
      MixedWord w{{SlotKind::U, 2, i}, {SlotKind::SU, j, 2}};
      REQUIRE(got.count(w) == 1);
      CHECK(got.at(w) == Q(-1));
    }
  // At (4,2): z_11 z_22 embeds as 2x2 = 4 mixed words of 4 letters each.
  MixedElement big = embed(W({Z(1, 1), Z(2, 2)}), 4, 2);
  CHECK(big.size() == 4);
  for (const auto& [w, c] : big) CHECK(w.size() == 4);
  // Coefficients multiply: the k=(3,3) word carries q^{-3} * q^{-3}.
  MixedWord w33{{SlotKind::U, 3, 1},
                {SlotKind::SU, 1, 3},
                {SlotKind::U, 3, 2},
                {SlotKind::SU, 2, 3}};
  REQUIRE(big.count(w33) == 1);
  CHECK(big.at(w33) == Q(-6));
  // The empty word embeds as 1.
  MixedElement unit = embed(BElement::one(), 3, 1);
  REQUIRE(unit.size() == 1);
  CHECK(unit.at(MixedWord{}) == RatFunc(1));
}

TEST_CASE("relation table: named instances", "[qgrass][relations]") {
  auto table = relation_table(3, 1);
  auto find = [&](const std::string& tag, const BElement& lhs) -> const RewriteRule* {
    for (const auto& rule : table)
      if (rule.caseTag == tag && rule.lhs == lhs) return &rule;
    return nullptr;
  };
  // 5.2 at (c,b,a) = (1,2,3): z_12 z_13 = q^{-1} z_13 z_12.
  const RewriteRule* r52 = find("5.2", W({Z(1, 2), Z(1, 3)}));
  REQUIRE(r52 != nullptr);
  CHECK(r52->rhs == Q(-1) * W({Z(1, 3), Z(1, 2)}));
  // 4.2 at (d,b=a,c) = (1,2,3): z_12 z_32 = q z_32 z_12.
  const RewriteRule* r42 = find("4.2", W({Z(1, 2), Z(3, 2)}));
  REQUIRE(r42 != nullptr);
  CHECK(r42->rhs == Q(1) * W({Z(3, 2), Z(1, 2)}));
  // Projector instance i = k = N at (2,1):
  // q^3 z_21 z_12 + q z_22 z_22 = z_22.
  auto table2 = relation_table(2, 1);
  bool found = false;
  for (const auto& rule : table2)
    if (rule.caseTag == "proj" &&
        rule.lhs == Q(3) * W({Z(2, 1), Z(1, 2)}) + Q(1) * W({Z(2, 2), Z(2, 2)})) {
      found = true;
      CHECK(rule.rhs == W({Z(2, 2)}));
    }
  CHECK(found);
  // Trace rule present with the exact constant.
  bool traced = false;
  for (const auto& rule : table2)
    if (rule.caseTag == "trace") {
      traced = true;
      CHECK(rule.lhs == W({Z(1, 1)}) + W({Z(2, 2)}));
      CHECK(rule.rhs == BElement((RatFunc(1) - Q(-2)) / RatFunc::qhat()));
    }
  CHECK(traced);
}

TEST_CASE("relation table: counit kills every rule", "[qgrass][relations]") {
  for (auto [N, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {4, 2}}) {
    auto table = relation_table(N, r);
    REQUIRE(!table.empty());
    for (const auto& rule : table) {
      CAPTURE(N, r, rule.caseTag, rule.lhs.str(), rule.rhs.str());
      CHECK(epsilon(rule.lhs, N, r) == epsilon(rule.rhs, N, r));
    }
  }
}

TEST_CASE("relation table: every rule is weight-homogeneous", "[qgrass][relations]") {
  for (auto [N, r] : std::vector<std::pair<int, int>>{{3, 1}, {4, 2}}) {
    auto table = relation_table(N, r);
    for (const auto& rule : table) {
      CAPTURE(N, r, rule.caseTag, rule.lhs.str());
      std::set<std::vector<long long>> weights;
      for (const auto& [w, c] : rule.lhs.terms())
        if (!w.empty()) weights.insert(z_weight(w, N).alpha);
      for (const auto& [w, c] : rule.rhs.terms())
        if (!w.empty()) weights.insert(z_weight(w, N).alpha);
      CHECK(weights.size() <= 1);
      // Scalars only appear at weight zero.
      bool scalarLhs = rule.lhs.terms().count(ZWord{}) > 0;
      bool scalarRhs = rule.rhs.terms().count(ZWord{}) > 0;
      if ((scalarLhs || scalarRhs) && !weights.empty())
        CHECK(*weights.begin() == std::vector<long long>(static_cast<size_t>(N - 1), 0));
    }
  }
}

TEST_CASE("standard order predicate", "[qgrass][reorder]") {
  // V- before V0 before V+.
  CHECK(z_before(Z(3, 1), Z(2, 2)));
  CHECK(z_before(Z(2, 2), Z(1, 3)));
  CHECK(z_before(Z(3, 1), Z(1, 3)));
  // V-: rows descending, then columns descending.
  CHECK(z_before(Z(4, 2), Z(3, 2)));
  CHECK(z_before(Z(4, 3), Z(4, 1)));
  CHECK_FALSE(z_before(Z(3, 2), Z(4, 2)));
  // V0 ascending.
  CHECK(z_before(Z(1, 1), Z(2, 2)));
  CHECK_FALSE(z_before(Z(2, 2), Z(1, 1)));
  // V+: rows ascending, then columns ascending.
  CHECK(z_before(Z(1, 2), Z(1, 3)));
  CHECK(z_before(Z(1, 4), Z(2, 3)));
  CHECK_FALSE(z_before(Z(2, 3), Z(1, 4)));
  // Standard words.
  CHECK(is_standard(ZWord{Z(4, 1), Z(2, 1), Z(2, 2), Z(1, 3)}));
  CHECK_FALSE(is_standard(ZWord{Z(1, 3), Z(2, 2)}));
  CHECK(is_standard(ZWord{}));
  CHECK(is_standard(ZWord{Z(1, 2), Z(1, 2)}));
}

TEST_CASE("reorder reproduces the exchange example", "[qgrass][reorder]") {
  // z_12 z_21 at (2,1) -> z_21 z_12 + q^{-1} qh z_11 z_22 - q qh z_11 z_11.
  RatFunc qh = RatFunc::qhat();
  BElement got = reorder(W({Z(1, 2), Z(2, 1)}), 2, 1);
  BElement expect = W({Z(2, 1), Z(1, 2)}) + Q(-1) * qh * W({Z(1, 1), Z(2, 2)}) -
                    Q(1) * qh * W({Z(1, 1), Z(1, 1)});
  CHECK(got == expect);
}

TEST_CASE("reorder reproduces the filtration example", "[qgrass][reorder]") {
  // z_13 z_32 at (3,1) -> q z_32 z_13 + q qh z_33 z_12 - qh z_12.
  RatFunc qh = RatFunc::qhat();
  BElement got = reorder(W({Z(1, 3), Z(3, 2)}), 3, 1);
  BElement expect = Q(1) * W({Z(3, 2), Z(1, 3)}) + Q(1) * qh * W({Z(3, 3), Z(1, 2)}) -
                    qh * W({Z(1, 2)});
  CHECK(got == expect);
}

TEST_CASE("reorder: exact two-letter exchanges", "[qgrass][reorder]") {
  RatFunc qh = RatFunc::qhat();
  // V+ with a genuine correction term: the interlocking columns contribute
  // the opposite-corner product with coefficient -qh.
  CHECK(reorder(W({Z(2, 3), Z(1, 4)}), 4, 1) ==
        W({Z(1, 4), Z(2, 3)}) - qh * W({Z(1, 3), Z(2, 4)}));
  // V- mirror: z_32 z_41 -> z_41 z_32 + qh z_42 z_31.
  CHECK(reorder(W({Z(3, 2), Z(4, 1)}), 4, 1) ==
        W({Z(4, 1), Z(3, 2)}) + qh * W({Z(4, 2), Z(3, 1)}));
  // Plain swaps.
  CHECK(reorder(W({Z(2, 2), Z(1, 1)}), 2, 1) == W({Z(1, 1), Z(2, 2)}));
  CHECK(reorder(W({Z(3, 4), Z(1, 2)}), 4, 2) == W({Z(1, 2), Z(3, 4)}));
}

TEST_CASE("reorder fixes standard words", "[qgrass][reorder]") {
  std::vector<ZWord> words = {{},
                              {Z(2, 1)},
                              {Z(4, 1), Z(3, 2), Z(2, 2), Z(1, 3)},
                              {Z(3, 1), Z(1, 1), Z(3, 3), Z(1, 2), Z(2, 4)},
                              {Z(1, 2), Z(1, 2), Z(1, 2)}};
  for (const auto& w : words) {
    REQUIRE(is_standard(w));
    CHECK(reorder(BElement::from_word(w), 4, 2) == BElement::from_word(w));
  }
}

TEST_CASE("reorder handles every out-of-order pair at N = 4", "[qgrass][reorder]") {
  const int N = 4, r = 2;
  ReorderEngine engine(N, r);
  auto gens = all_zgens(N);
  int rewritten = 0;
  for (const auto& x : gens)
    for (const auto& y : gens) {
      BElement word = W({x, y});
      BElement out = engine.reorder(word);
      CAPTURE(zgen_name(x), zgen_name(y));
      for (const auto& [w, c] : out.terms()) CHECK(is_standard(w));
      if (z_out_of_order(x, y)) {
        ++rewritten;
      } else {
        CHECK(out == word);
      }
      // Weights survive the rewrite.
      Weight in = z_weight(ZWord{x, y}, N);
      for (const auto& [w, c] : out.terms())
        if (!w.empty()) CHECK(z_weight(w, N).alpha == in.alpha);
    }
  CHECK(rewritten > 0);
}

TEST_CASE("reorder terminates on longer words", "[qgrass][reorder]") {
  const int N = 4, r = 2;
  ReorderEngine engine(N, r);
  std::vector<ZWord> words = {
      {Z(1, 4), Z(4, 1), Z(2, 3)},  {Z(1, 2), Z(2, 1), Z(1, 2)},
      {Z(2, 4), Z(4, 2), Z(3, 3)},  {Z(1, 3), Z(3, 2), Z(2, 1)},
      {Z(4, 4), Z(1, 4), Z(4, 1)},  {Z(3, 4), Z(4, 3), Z(3, 4), Z(4, 3)},
  };
  for (const auto& w : words) {
    BElement out = engine.reorder(BElement::from_word(w), 200000);
    CAPTURE(zword_name(w));
    CHECK(!out.is_zero());
    for (const auto& [sw, c] : out.terms()) {
      CHECK(is_standard(sw));
      if (!sw.empty()) CHECK(z_weight(sw, N).alpha == z_weight(w, N).alpha);
    }
  }
}

TEST_CASE("reorder budget exhaustion raises a traceable error", "[qgrass][reorder]") {
  try {
    reorder(W({Z(1, 2), Z(2, 1)}), 2, 1, 0);
    FAIL("expected ReorderError");
  } catch (const ReorderError& e) {
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
  }
}

TEST_CASE("projector identity for the shifted corner generator", "[qgrass][relations]") {
  // -z+_NN = sum_{i<N} q^{2N+1-2i} z_Ni z_iN + q (z+_NN)^2 rearranges the
  // projector instance at (N, N); verify the difference matches exactly in
  // the free algebra.
  for (auto [N, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}}) {
    BElement zp = shifted_gen(Z(N, N), N, r);
    BElement A;
    for (int i = 1; i < N; ++i)
      A += Q(2 * N + 1 - 2 * i) * W({Z(N, i), Z(i, N)});
    A += Q(1) * (zp * zp) + (RatFunc(2)) * zp;
    BElement projLhs;
    for (int n = 1; n <= N; ++n) projLhs += Q(2 * N + 1 - 2 * n) * W({Z(N, n), Z(n, N)});
    BElement projRhs = W({Z(N, N)});
    CHECK(A - zp == projLhs - projRhs);
  }
}

TEST_CASE("spanning words are graded-lexicographic", "[qgrass][spanning]") {
  auto words21 = spanning_words(2, 1, 1);
  REQUIRE(words21.size() == 5);
  CHECK(words21[0] == ZWord{});
  CHECK(words21[1] == ZWord{Z(1, 1)});
  CHECK(words21[2] == ZWord{Z(1, 2)});
  CHECK(words21[3] == ZWord{Z(2, 1)});
  CHECK(words21[4] == ZWord{Z(2, 2)});
  CHECK(spanning_words(2, 1, 0) == std::vector<ZWord>{ZWord{}});
  CHECK(spanning_words(3, 1, 2).size() == 1 + 9 + 81);
  CHECK(spanning_words(4, 2, 2).size() == 1 + 16 + 256);
  auto words213 = spanning_words(2, 1, 3);
  CHECK(words213.size() == 1 + 4 + 16 + 64);
  // Graded: lengths never decrease; lexicographic within a grade.
  for (size_t t = 1; t < words213.size(); ++t) {
    CHECK(words213[t - 1].size() <= words213[t].size());
    if (words213[t - 1].size() == words213[t].size())
      CHECK(words213[t - 1] < words213[t]);
  }
}

TEST_CASE("shifted words expand against the counit", "[qgrass][spanning]") {
  // z+_22 at (2,1) = z_22 - q^{-1}.
  BElement zp = expand_shifted(ZWord{Z(2, 2)}, 2, 1);
  CHECK(zp == BElement::gen(Z(2, 2)) - BElement(Q(-1)));
  // Two-letter shifted word picks up cross terms.
  BElement w = expand_shifted(ZWord{Z(2, 2), Z(1, 2)}, 2, 1);
  CHECK(w == W({Z(2, 2), Z(1, 2)}) - Q(-1) * W({Z(1, 2)}));
  // Every expanded shifted word has vanishing counit... (shifted
  // generators are counit-free by construction).
  for (const auto& sw : spanning_words(2, 1, 2))
    if (!sw.empty()) CHECK(epsilon(expand_shifted(sw, 2, 1), 2, 1).is_zero());
}
