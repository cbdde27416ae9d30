#include <catch_amalgamated.hpp>

#include <random>

#include "arthur/multiseg.hpp"
#include "arthur/packet.hpp"

using namespace arthur;

namespace {

CuspidalLabel orth(const std::string& id = "rho") { return {id, 1, SelfdualKind::orthogonal}; }
GroupType orth_group() { return {Sign::plus, RGKind::sym2, SelfdualKind::orthogonal}; }

Segment seg(long long from, long long to) { return {HalfInt::whole(from), HalfInt::whole(to)}; }

std::vector<Segment> rows_of(const LadderMatrix& m) { return m.rows; }

}  // namespace

TEST_CASE("Zelevinsky linkage") {
  CHECK(linked(seg(0, 2), seg(1, 3)));
  CHECK_FALSE(linked(seg(0, 3), seg(1, 2)));  // containment
  CHECK_FALSE(linked(seg(0, 1), seg(3, 4)));  // gap
  CHECK(linked(seg(0, 0), seg(1, 1)));
  CHECK_FALSE(linked(seg(0, 0), seg(0, 0)));
}

TEST_CASE("Speh rectangles and Z tableaux") {
  auto rho = orth();
  SECTION("Speh(St(rho,2),2)") {
    auto m = speh_matrix(rho, 2, 2);
    REQUIRE(m.rows.size() == 2);
    CHECK(m.rows[0] == seg(0, -1));
    CHECK(m.rows[1] == seg(1, 0));
    CHECK(m.valid());
  }
  SECTION("Speh(St(rho,1),1)") {
    auto m = speh_matrix(rho, 1, 1);
    REQUIRE(m.rows.size() == 1);
    CHECK(m.rows[0] == seg(0, 0));
  }
  SECTION("a Steinberg is a one-column rectangle") {
    auto m = speh_matrix(rho, 3, 1);
    REQUIRE(m.rows.size() == 1);
    CHECK(m.rows[0] == seg(1, -1));
    // rectangle = tableau of the corresponding block
    CHECK(m == Z_of_block(block_from_ab(rho, 3, 1)));
  }
  SECTION("the Speh rectangle is the tableau of its block") {
    // the rectangle keeps Steinberg rows; on the a >= b side this is the
    // same matrix as the block tableau, on the other side its transpose
    for (long long a = 1; a <= 5; ++a)
      for (long long b = 1; b <= 5; ++b) {
        auto m = speh_matrix(rho, a, b);
        REQUIRE(m.valid());
        if (a >= b) REQUIRE(m == Z_of_block(block_from_ab(rho, a, b)));
        REQUIRE(m.entries() == a * b);
        REQUIRE(m.theta() == m);
      }
  }
  SECTION("Z tableau shapes") {
    JordanBlock blk{orth(), HalfInt(0), HalfInt(0), Sign::plus};
    CHECK(rows_of(Z_of_block(blk)) == std::vector<Segment>{seg(0, 0)});
    blk = JordanBlock{orth(), HalfInt::whole(1), HalfInt(0), Sign::plus};
    CHECK(rows_of(Z_of_block(blk)) == std::vector<Segment>{seg(0, -1), seg(1, 0)});
    blk = JordanBlock{orth(), HalfInt::whole(1), HalfInt::whole(1), Sign::minus};
    CHECK(rows_of(Z_of_block(blk)) == std::vector<Segment>{seg(-1, 1)});
  }
}

TEST_CASE("left derivative on ladders") {
  auto rho = orth();
  auto z10 = Z_of_block(JordanBlock{rho, HalfInt::whole(1), HalfInt(0), Sign::plus});
  SECTION("only the top-left start responds on a fresh tableau") {
    auto out = jac_left_ladder(z10, HalfInt(0));
    REQUIRE(out.size() == 1);
    CHECK(rows_of(out[0]) == std::vector<Segment>{seg(-1, -1), seg(1, 0)});
    CHECK(jac_left_ladder(z10, HalfInt::whole(5)).empty());
    CHECK(jac_left_ladder(z10, HalfInt::whole(1)).empty());  // second row blocked
  }
  SECTION("column move frees the next row") {
    auto step1 = jac_left_ladder(z10, HalfInt(0)).at(0);
    auto step2 = jac_left_ladder(step1, HalfInt::whole(1));
    REQUIRE(step2.size() == 1);
    CHECK(rows_of(step2[0]) == std::vector<Segment>{seg(-1, -1), seg(0, 0)});
  }
  SECTION("negative-side tableau start") {
    auto zm = Z_of_block(JordanBlock{rho, HalfInt::whole(1), HalfInt::whole(1), Sign::minus});
    auto out = jac_left_ladder(zm, HalfInt::whole(-1));
    REQUIRE(out.size() == 1);
    CHECK(rows_of(out[0]) == std::vector<Segment>{seg(0, 1)});
  }
}

TEST_CASE("the two theta halves commute at paired exponents") {
  // Jac^g at x against Jac^d at -x, in either order; this is the identity
  // the theta functor rests on (unpaired exponents need not commute in the
  // filtered calculus)
  auto rho = orth();
  std::vector<GLObject> objects;
  for (long long A2 = 0; A2 <= 6; ++A2)
    for (long long B2 = A2 % 2; B2 <= A2; B2 += 2)
      for (Sign z : {Sign::plus, Sign::minus}) {
        if (B2 == 0 && z == Sign::minus) continue;
        JordanBlock blk{rho, HalfInt(A2), HalfInt(B2), z};
        GLObject g;
        g.factors = {Z_of_block(blk)};
        objects.push_back(g);
        GLObject two;
        two.factors = {Z_of_block(blk),
                       Z_of_block(JordanBlock{rho, HalfInt(A2 + 4), HalfInt(A2 + 4), Sign::plus})};
        two.normalize();
        objects.push_back(two);
      }
  for (const auto& g : objects)
    for (long long x2 = -8; x2 <= 8; ++x2) {
      FormalSum gl = jac_right(jac_left(g, rho, HalfInt(x2)), rho, HalfInt(-x2));
      FormalSum lg = jac_left(jac_right(single(g), rho, HalfInt(-x2)), rho, HalfInt(x2));
      REQUIRE(gl == lg);
    }
}

TEST_CASE("theta chains") {
  auto rho = orth();
  SECTION("single block raise comes back down") {
    JordanBlock raised{rho, HalfInt::whole(2), HalfInt::whole(1), Sign::plus};
    GLObject g;
    g.factors = {Z_of_block(raised)};
    auto res = jac_theta_chain(g, rho, Sign::plus, HalfInt::whole(1), HalfInt::whole(2));
    REQUIRE(res.decoupages == 1);
    GLObject expect;
    expect.factors = {Z_of_block(JordanBlock{rho, HalfInt::whole(1), HalfInt(0), Sign::plus})};
    expect.normalize();
    REQUIRE(res.sum.size() == 1);
    CHECK(res.sum.begin()->first == expect);
  }
  SECTION("empty chain is the identity") {
    GLObject g;
    g.factors = {speh_matrix(rho, 2, 2)};
    g.normalize();
    auto res = jac_theta_chain(g, rho, Sign::plus, HalfInt::whole(3), HalfInt::whole(2));
    REQUIRE(res.decoupages == 1);
    REQUIRE(res.sum.size() == 1);
    CHECK(res.sum.begin()->first == g);
  }
  SECTION("chain hitting no start dies") {
    GLObject g;
    g.factors = {speh_matrix(rho, 2, 2)};
    auto res = jac_theta_chain(g, rho, Sign::plus, HalfInt::whole(7), HalfInt::whole(7));
    CHECK(res.sum.empty());
    CHECK(res.decoupages == 0);
  }
}

TEST_CASE("unlinked product criterion") {
  auto rho = orth();
  LadderMatrix m1{rho, {seg(3, 2)}}, m2{rho, {seg(6, 5)}};
  CHECK(unlinked_product_irreducible(m1, m2));
  LadderMatrix m3{rho, {seg(2, 0)}}, m4{rho, {seg(3, 1)}};
  CHECK_FALSE(unlinked_product_irreducible(m3, m4));
  LadderMatrix m5{rho, {seg(3, 0)}}, m6{rho, {seg(2, 1)}};
  CHECK(unlinked_product_irreducible(m5, m6));  // nested is unlinked
}

namespace {

// raise one admissible block by one and check the chain comes back: the
// raised position must dominate its neighbours the way the descent needs
struct RaiseCase {
  PsiParameter psi;
  size_t pos;
};

std::optional<RaiseCase> random_raise_case(std::mt19937& rng, int max_blocks, long long max_a) {
  std::uniform_int_distribution<long long> d(1, max_a);
  std::uniform_int_distribution<int> nd(1, max_blocks);
  PsiParameter psi;
  psi.group = orth_group();
  PacketPoint dummy;
  int n = nd(rng);
  for (int i = 0; i < n; ++i) {
    JordanBlock blk = block_from_ab(orth(), d(rng), d(rng));
    if (blk.A > HalfInt::whole(5)) continue;
    insert_block_ordered(psi, dummy, blk, 0, Sign::plus, psi.size());
  }
  if (psi.size() == 0) return std::nullopt;
  // candidate positions: every later same-(rho,zeta) block far above, every
  // earlier one below in the lemma's sense
  std::vector<size_t> ok;
  for (size_t k = 0; k < psi.size(); ++k) {
    const auto& b = psi.blocks[k];
    bool good = true;
    for (size_t j = 0; j < psi.size() && good; ++j) {
      if (j == k) continue;
      const auto& o = psi.blocks[j];
      if (o.rho != b.rho) continue;
      if (j > k) {
        if (o.zeta == b.zeta && !(o.B >= b.A + HalfInt::whole(2))) good = false;
        if (o.zeta != b.zeta && o.B == HalfInt(0)) good = false;
      } else {
        if (o.zeta == b.zeta && !(o.B <= b.B || o.A <= b.A)) good = false;
        if (o.zeta != b.zeta && o.B == HalfInt(0)) good = false;
      }
    }
    if (good) ok.push_back(k);
  }
  if (ok.empty()) return std::nullopt;
  return RaiseCase{psi, ok[rng() % ok.size()]};
}

}  // namespace

TEST_CASE("theta chain identity: a raise of one block descends uniquely") {
  std::mt19937 rng(61);
  int done = 0;
  while (done < 60) {
    auto rc = random_raise_case(rng, 4, 5);
    if (!rc) continue;
    const auto& blk = rc->psi.blocks[rc->pos];
    PsiParameter raised = rc->psi;
    raised.blocks[rc->pos].A += HalfInt::whole(1);
    raised.blocks[rc->pos].B += HalfInt::whole(1);
    auto res = jac_theta_chain(pi_gl(raised), blk.rho, blk.zeta, blk.B + HalfInt::whole(1),
                               blk.A + HalfInt::whole(1));
    REQUIRE(res.decoupages == 1);
    REQUIRE(res.sum.size() == 1);
    REQUIRE(res.sum.begin()->first == pi_gl(rc->psi));
    ++done;
  }
}
