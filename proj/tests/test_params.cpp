#include <catch_amalgamated.hpp>

#include <random>

#include "arthur/packet.hpp"
#include "arthur/params.hpp"

using namespace arthur;

namespace {

CuspidalLabel orth(const std::string& id = "rho") { return {id, 1, SelfdualKind::orthogonal}; }
CuspidalLabel symp(const std::string& id = "tau") { return {id, 2, SelfdualKind::symplectic}; }

GroupType orth_group() { return {Sign::plus, RGKind::sym2, SelfdualKind::orthogonal}; }

PsiParameter make_psi(std::vector<std::pair<long long, long long>> abs,
                      GroupType g = orth_group(), CuspidalLabel rho = orth()) {
  PsiParameter psi;
  psi.group = g;
  PacketPoint pt;
  for (auto [a, b] : abs)
    insert_block_ordered(psi, pt, block_from_ab(rho, a, b), 0, Sign::plus, psi.size());
  return psi;
}

}  // namespace

TEST_CASE("half-integer arithmetic is exact") {
  HalfInt h = HalfInt::half(3);  // 3/2
  CHECK(h.tw == 3);
  CHECK_FALSE(h.integral());
  CHECK((h + h).as_int() == 3);
  CHECK((h - HalfInt::half(1)).as_int() == 1);
  CHECK(h.str() == "3/2");
  CHECK(HalfInt::whole(-2).str() == "-2");
  CHECK(HalfInt::half(-3).floor() == -2);
  CHECK(HalfInt::half(3).floor() == 1);
  CHECK_THROWS_AS(h.as_int(), std::domain_error);
  CHECK(Sign::minus * HalfInt::half(3) == HalfInt::half(-3));
  CHECK(sign_pow(Sign::minus, 4) == Sign::plus);
  CHECK(parity_sign(3) == Sign::minus);
}

TEST_CASE("block encodings round-trip") {
  auto rho = orth();
  SECTION("worked conversions") {
    JordanBlock b = block_from_ab(rho, 3, 2);
    CHECK(b.A == HalfInt::half(3));
    CHECK(b.B == HalfInt::half(1));
    CHECK(b.zeta == Sign::plus);
    b = block_from_ab(rho, 1, 1);
    CHECK(b.A == HalfInt(0));
    CHECK(b.B == HalfInt(0));
    CHECK(b.zeta == Sign::plus);
    b = block_from_ab(rho, 2, 5);
    CHECK(b.A == HalfInt::half(5));
    CHECK(b.B == HalfInt::half(3));
    CHECK(b.zeta == Sign::minus);
  }
  SECTION("inverse on the full small grid") {
    for (long long a = 1; a <= 40; ++a)
      for (long long b = 1; b <= 40; ++b) {
        auto [a2, b2] = block_to_ab(block_from_ab(rho, a, b));
        REQUIRE(a2 == a);
        REQUIRE(b2 == b);
      }
  }
  CHECK_THROWS_AS(block_from_ab(rho, 0, 1), std::invalid_argument);
}

TEST_CASE("good parity via the tensor-type rule") {
  GroupType g = orth_group();
  CHECK(good_parity(block_from_ab(orth(), 1, 1), g));
  CHECK_FALSE(good_parity(block_from_ab(orth(), 2, 1), g));
  CHECK(good_parity(block_from_ab(symp(), 2, 1), g));

  // brute-force oracle: type of rho tensor [a] tensor [b] as a sign product
  auto type_sign = [](SelfdualKind k) { return k == SelfdualKind::orthogonal ? 1 : -1; };
  for (int rk = 0; rk < 2; ++rk)
    for (long long a = 1; a <= 6; ++a)
      for (long long b = 1; b <= 6; ++b) {
        CuspidalLabel rho{"x", 1, rk ? SelfdualKind::symplectic : SelfdualKind::orthogonal};
        int prod = type_sign(rho.kind) * (a % 2 ? 1 : -1) * (b % 2 ? 1 : -1);
        bool expect = prod == type_sign(g.star);
        REQUIRE(good_parity(block_from_ab(rho, a, b), g) == expect);
      }
}

TEST_CASE("diagonal restriction and discreteness") {
  auto psi = make_psi({{3, 1}, {1, 3}});
  auto diag = restriction_to_diagonal(psi);
  REQUIRE(diag.size() == 2);
  CHECK(diag[0].second == 3);
  CHECK(diag[1].second == 3);
  CHECK_FALSE(is_discrete_diagonal(psi));

  CHECK(is_discrete_diagonal(make_psi({{3, 1}, {5, 1}})));
  CHECK(is_discrete_diagonal(PsiParameter{{}, orth_group()}));
}

TEST_CASE("support predicates on tempered parameters") {
  auto psi = make_psi({{2, 1}, {4, 1}});
  auto p = cuspidal_support_predicates(psi, {Sign::minus, Sign::plus});
  CHECK(p.discret);
  CHECK(p.sans_trou);
  CHECK(p.alterne);

  auto p2 = cuspidal_support_predicates(make_psi({{4, 1}}), {Sign::plus});
  CHECK_FALSE(p2.sans_trou);

  auto p3 = cuspidal_support_predicates(make_psi({{2, 1}}), {Sign::plus});
  CHECK_FALSE(p3.alterne);

  CHECK_THROWS_AS(cuspidal_support_predicates(make_psi({{2, 2}}), {Sign::plus}),
                  std::invalid_argument);
}

TEST_CASE("measures") {
  auto m = make_psi({{3, 5}}).measures();
  CHECK(m.ell_plus == 0);
  CHECK(m.ell_minus == 2);
  CHECK(m.n_minus == 1);

  m = make_psi({{5, 3}, {2, 2}}).measures();
  CHECK(m.ell_plus == 3);
  CHECK(m.ell_minus == 0);
  CHECK(m.n_minus == 0);

  m = PsiParameter{{}, orth_group()}.measures();
  CHECK(m.ell() == 0);
  CHECK(m.n_minus == 0);

  SECTION("additivity under disjoint union") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long long> d(1, 9);
    for (int it = 0; it < 50; ++it) {
      std::vector<std::pair<long long, long long>> xs, ys;
      for (int i = 0; i < 3; ++i) xs.emplace_back(d(rng), d(rng));
      for (int i = 0; i < 3; ++i) ys.emplace_back(d(rng), d(rng));
      auto mx = make_psi(xs).measures(), my = make_psi(ys).measures();
      auto zs = xs;
      zs.insert(zs.end(), ys.begin(), ys.end());
      auto mz = make_psi(zs).measures();
      REQUIRE(mz.ell_plus == mx.ell_plus + my.ell_plus);
      REQUIRE(mz.ell_minus == mx.ell_minus + my.ell_minus);
      REQUIRE(mz.n_minus == mx.n_minus + my.n_minus);
    }
  }
}

TEST_CASE("order property (P)") {
  auto rho = orth();
  PsiParameter psi;
  psi.group = orth_group();
  psi.blocks = {block_from_ab(rho, 7, 3), block_from_ab(rho, 3, 1)};
  REQUIRE(psi.order_violation().has_value());

  std::swap(psi.blocks[0], psi.blocks[1]);
  CHECK(psi.order_valid());

  SECTION("subsequences of valid orders stay valid") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<long long> d(1, 8);
    for (int it = 0; it < 60; ++it) {
      PsiParameter p;
      p.group = orth_group();
      PacketPoint pt;
      for (int i = 0; i < 6; ++i)
        insert_block_ordered(p, pt, block_from_ab(rho, d(rng), d(rng)), 0, Sign::plus, p.size());
      REQUIRE(p.order_valid());
      PsiParameter q;
      q.group = p.group;
      for (size_t i = 0; i < p.size(); ++i)
        if (rng() & 1) q.blocks.push_back(p.blocks[i]);
      REQUIRE(q.order_valid());
    }
  }
}

TEST_CASE("dominance") {
  CHECK(dominates(make_psi({{9, 1}}), make_psi({{5, 1}})));
  CHECK_FALSE(dominates(make_psi({{1, 9}}), make_psi({{5, 1}})));
  CHECK_FALSE(dominates(make_psi({{6, 4}}), make_psi({{5, 3}})));  // inf 4 vs 3
  CHECK(dominates(make_psi({{7, 3}}), make_psi({{5, 3}})));
}

TEST_CASE("build_dominant") {
  SECTION("worked example, gap 4") {
    PsiParameter psi;
    psi.group = orth_group();
    auto rho = orth();
    JordanBlock b1{rho, HalfInt::whole(1), HalfInt(0), Sign::plus};
    JordanBlock b2{rho, HalfInt::whole(2), HalfInt::whole(2), Sign::plus};
    psi.blocks = {b1, b2};
    auto res = build_dominant(psi, 4);
    CHECK(res.shifts == std::vector<long long>{0, 4});
    CHECK(is_discrete_diagonal(res.psi_big));
    CHECK(dominates(res.psi_big, psi));
  }
  SECTION("single block needs no raise") {
    PsiParameter psi = make_psi({{1, 1}});
    auto res = build_dominant(psi, 3);
    CHECK(res.shifts == std::vector<long long>{0});
    CHECK(res.psi_big.blocks[0].same_block(psi.blocks[0]));
  }
  SECTION("bad parity rejected") {
    auto psi = make_psi({{2, 1}});  // orth rho, [2]x[1] is symplectic
    CHECK_THROWS_AS(build_dominant(psi, 1), std::invalid_argument);
  }
  SECTION("randomized invariants") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<long long> d(1, 10), nd(1, 8), gap(1, 4);
    for (int it = 0; it < 200; ++it) {
      PsiParameter psi;
      psi.group = orth_group();
      PacketPoint pt;
      int n = static_cast<int>(nd(rng));
      for (int i = 0; i < n; ++i) {
        long long a = d(rng), b = d(rng);
        JordanBlock blk = block_from_ab(orth(), a, b);
        if (blk.A > HalfInt::whole(10)) continue;
        if (!good_parity(blk, psi.group)) continue;
        insert_block_ordered(psi, pt, blk, 0, Sign::plus, psi.size());
      }
      auto res = build_dominant(psi, gap(rng));
      REQUIRE(res.psi_big.order_valid());
      REQUIRE(is_discrete_diagonal(res.psi_big));
      REQUIRE(dominates(res.psi_big, psi));
    }
  }
}

TEST_CASE("the rigid order validator") {
  auto rho = orth();
  PsiParameter psi;
  psi.group = orth_group();
  psi.blocks = {block_from_ab(rho, 3, 3), block_from_ab(rho, 5, 1)};
  CHECK(psi.order_valid());  // property (P) does not order this nested pair
  CHECK(psi.canonical_strong_order_valid());
  std::swap(psi.blocks[0], psi.blocks[1]);
  CHECK(psi.order_valid());
  CHECK_FALSE(psi.canonical_strong_order_valid());  // |a-b| must grow
  psi.blocks = {block_from_ab(rho, 1, 3), block_from_ab(rho, 3, 1)};
  CHECK(psi.canonical_strong_order_valid());
  std::swap(psi.blocks[0], psi.blocks[1]);
  CHECK_FALSE(psi.canonical_strong_order_valid());  // a >= b comes later
}
