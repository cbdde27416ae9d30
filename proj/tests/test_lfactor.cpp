#include <catch_amalgamated.hpp>

#include "arthur/lfactor.hpp"

using namespace arthur;

namespace {

CuspidalLabel orth(const std::string& id = "rho") { return {id, 1, SelfdualKind::orthogonal}; }
GroupType orth_group() { return {Sign::plus, RGKind::sym2, SelfdualKind::orthogonal}; }

PsiParameter make_psi(std::vector<std::pair<long long, long long>> abs) {
  PsiParameter psi;
  psi.group = orth_group();
  for (auto [a, b] : abs) psi.blocks.push_back(block_from_ab(orth(), a, b));
  return psi;
}

}  // namespace

TEST_CASE("Shahidi index sets") {
  auto as_ints = [](const std::vector<HalfInt>& v) {
    std::vector<long long> out;
    for (auto h : v) out.push_back(h.tw);
    return out;
  };
  CHECK(as_ints(shahidi_shifts(2, 4)) == std::vector<long long>{2, 4});   // {1, 2}
  CHECK(as_ints(shahidi_shifts(1, 1)) == std::vector<long long>{0});      // {0}
  CHECK(as_ints(shahidi_shifts(3, 1)) == std::vector<long long>{2});      // {1}
  CHECK(shahidi_shifts(5, 5).size() == 5);
}

TEST_CASE("pole of a single pair term") {
  auto rho = orth(), tau = orth("tau");
  CHECK(pole_order_of_term(rho, rho, HalfInt::whole(-1), HalfInt::whole(1)) == 1);
  CHECK(pole_order_of_term(rho, rho, HalfInt::whole(2), HalfInt::whole(1)) == 0);
  CHECK(pole_order_of_term(rho, tau, HalfInt::whole(-1), HalfInt::whole(1)) == 0);
}

TEST_CASE("r(s,psi) as a formal product") {
  auto rho = orth();
  SECTION("(rho,1,3) against a0 = 1") {
    auto r = r_of_psi(make_psi({{1, 3}}), rho, 1);
    REQUIRE(r.terms.size() == 2);
    CHECK(r.terms.at(make_key(rho, rho, HalfInt::whole(-1))) == 1);
    CHECK(r.terms.at(make_key(rho, rho, HalfInt::whole(2))) == -1);
    CHECK(r.rg_exponent == 1);
  }
  SECTION("empty parameter leaves the r_G factor") {
    auto r = r_of_psi(make_psi({}), rho, 1);
    CHECK(r.terms.empty());
    CHECK(r.rg_exponent == 1);
  }
  SECTION("(rho,5,3) against a0 = 5 expands over five Shahidi shifts") {
    // prod_{k=0..4} L(s-1+k)/L(s+2+k); the overlap at shifts 2 and 3 cancels
    auto r = r_of_psi(make_psi({{5, 3}}), rho, 5);
    REQUIRE(r.terms.size() == 6);
    for (long long v : {-1, 0, 1})
      CHECK(r.terms.at(make_key(rho, rho, HalfInt::whole(v))) == 1);
    for (long long v : {4, 5, 6})
      CHECK(r.terms.at(make_key(rho, rho, HalfInt::whole(v))) == -1);
  }
}

TEST_CASE("order_at") {
  auto rho = orth();
  SECTION("worked orders") {
    CHECK(order_at(r_of_psi(make_psi({{1, 3}}), rho, 1), HalfInt::whole(1)).order() == -1);
    CHECK(order_at(r_of_psi(make_psi({{5, 1}}), rho, 3), HalfInt::whole(1)).order() == 0);
    CHECK(order_at(r_of_psi(make_psi({}), rho, 4), HalfInt::half(5)).order() == 0);
  }
  SECTION("the r_G term widens s0 = 0 into an interval") {
    auto r = r_of_psi(make_psi({}), rho, 1);
    auto res = order_at(r, HalfInt(0));
    CHECK_FALSE(res.exact());
    CHECK(res.lo == -1);
    CHECK(res.hi == 0);
    CHECK_THROWS_AS(res.order(), std::domain_error);
  }
  SECTION("order is never positive at s0 > 0") {
    for (long long a = 1; a <= 7; ++a)
      for (long long b = 1; b <= 7; ++b)
        for (long long a0 = 1; a0 <= 5; ++a0)
          for (long long s2 = 1; s2 <= 8; ++s2) {
            auto res = order_at(r_of_psi(make_psi({{a, b}}), rho, a0), HalfInt(s2));
            REQUIRE(res.order() <= 0);
          }
  }
  CHECK_THROWS_AS(order_at(LFormalProduct{}, HalfInt::whole(-1)), std::invalid_argument);
}

TEST_CASE("pole-contribution table") {
  auto rho = orth();
  SECTION("worked cells") {
    CHECK(contribution_table(block_from_ab(rho, 1, 3), 1, 3));
    CHECK(contribution_table(block_from_ab(rho, 5, 3), 5, 3));
    CHECK_FALSE(contribution_table(block_from_ab(rho, 5, 1), 1, 3));
    CHECK_THROWS_AS(contribution_table(block_from_ab(rho, 1, 1), 3, 1), std::invalid_argument);
  }
  SECTION("table matches the direct order computation") {
    for (long long a0 = 1; a0 <= 8; ++a0)
      for (long long b0 = 2; b0 <= 8; ++b0)
        for (long long a = 1; a <= 8; ++a)
          for (long long b = 1; b <= 8; ++b) {
            JordanBlock blk = block_from_ab(rho, a, b);
            long long ord =
                order_at(block_normalization_factor(blk, rho, a0), HalfInt(b0 - 1)).order();
            REQUIRE((ord == 0 || ord == -1));
            REQUIRE(contribution_table(blk, a0, b0) == (ord == -1));
          }
  }
}

TEST_CASE("two-segment normalizer lemma") {
  auto rho = orth();
  SECTION("worked cases") {
    auto r = pair_normalizer_order(HalfInt::whole(2), HalfInt(0), HalfInt::whole(2),
                                   HalfInt::whole(1));
    CHECK(r.std_pole == 1);
    r = pair_normalizer_order(HalfInt::whole(3), HalfInt::whole(2), HalfInt::whole(2), HalfInt(0));
    CHECK(r.std_pole == 0);
    CHECK(r.normalized_holomorphic);
    r = pair_normalizer_order(HalfInt::whole(1), HalfInt::whole(1), HalfInt::whole(5),
                              HalfInt::whole(3));
    CHECK(r.std_pole == 0);
  }
  SECTION("pole flag matches the normalizer quotient's order at 0") {
    for (long long A0p = 0; A0p <= 8; ++A0p)
      for (long long B0p = 0; B0p <= A0p; ++B0p)
        for (long long A = 0; A <= 8; ++A)
          for (long long B = 0; B <= A; ++B) {
            auto r = pair_normalizer_order(HalfInt::whole(A0p), HalfInt::whole(B0p),
                                           HalfInt::whole(A), HalfInt::whole(B));
            long long ord =
                order_at(pair_normalizer_quotient(rho, HalfInt::whole(A0p), HalfInt::whole(B0p),
                                                  HalfInt::whole(A), HalfInt::whole(B)),
                         HalfInt(0))
                    .order();
            REQUIRE(r.std_pole == (ord == -1 ? 1 : 0));
            REQUIRE((r.std_pole == 0 || r.std_pole == 1));
          }
  }
}

TEST_CASE("exchange factors") {
  auto rho = orth();
  SECTION("a Speh rectangle's factors reproduce the block factor") {
    for (long long a = 1; a <= 5; ++a)
      for (long long b = 1; b <= 5; ++b)
        for (long long a0 = 1; a0 <= 5; ++a0) {
          JordanBlock blk = block_from_ab(rho, a, b);
          LadderMatrix m = speh_matrix(rho, a, b);
          REQUIRE(exchange_factor_right(m, rho, a0) == block_normalization_factor(blk, rho, a0));
          REQUIRE(exchange_factor_left(m, rho, a0) == block_normalization_factor(blk, rho, a0));
        }
  }
  SECTION("flat rows agree under both telescopes") {
    Segment s{HalfInt::whole(2), HalfInt::whole(2)};
    auto f = row_exchange_factor(rho, s, rho, 3);
    LFormalProduct expect;
    expect.mul_term(rho, rho, HalfInt::whole(3), +1);   // 2 + (3-1)/2
    expect.mul_term(rho, rho, HalfInt::whole(4), -1);
    CHECK(f == expect);
  }
}

TEST_CASE("Shahidi factorization is consistent with the unfactored symbol") {
  // oracle: treat L(St(rho,a0) x St(tau,a), s+c) as a single symbol whose
  // pole set at s0 is read off its index interval, without ever expanding
  auto rho = orth();
  auto symbol_order = [&](long long a0, long long a, long long b, HalfInt s0) {
    long long ord = 0;
    auto pole = [&](HalfInt c) {  // pole of the unfactored symbol at s0
      for (HalfInt k : shahidi_shifts(a0, a))
        if (s0 + c + k == HalfInt(0)) return 1;
      return 0;
    };
    ord -= pole(HalfInt(-(b - 1)));  // numerator at s - (b-1)/2
    ord += pole(HalfInt(b + 1));     // denominator at s + (b+1)/2
    return ord;
  };
  for (long long a0 = 1; a0 <= 6; ++a0)
    for (long long a = 1; a <= 6; ++a)
      for (long long b = 1; b <= 6; ++b)
        for (long long s2 = 1; s2 <= 9; ++s2) {
          JordanBlock blk = block_from_ab(rho, a, b);
          long long expanded =
              order_at(block_normalization_factor(blk, rho, a0), HalfInt(s2)).order();
          REQUIRE(expanded == symbol_order(a0, a, b, HalfInt(s2)));
        }
}
