#include <catch_amalgamated.hpp>

#include "arthur/cert_json.hpp"
#include "arthur/certificate.hpp"
#include "arthur/io.hpp"

using namespace arthur;

namespace {

const char* kSample = R"(# fixture
cuspidal rho d=1 kind=orth
group hasse=+ rG=sym2 star=orth
block rho a=1 b=1
block rho a=5 b=3
point t=0,1 eta=-,+
target rho a0=5 s0=3/2
)";

}  // namespace

TEST_CASE("parameter files parse") {
  ParamFile pf = parse_param_string(kSample);
  REQUIRE(pf.psi.size() == 2);
  CHECK(pf.psi.blocks[1].a() == 5);
  CHECK(pf.psi.blocks[1].b() == 3);
  CHECK(pf.psi.group.hasse == Sign::plus);
  REQUIRE(pf.point);
  CHECK(pf.point->t == std::vector<long long>{0, 1});
  REQUIRE(pf.has_target());
  Target t = pf.target();
  CHECK(t.a0 == 5);
  CHECK(t.s0 == HalfInt::half(3));
  CHECK(t.b0() == 4);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_param_string("cuspidal rho d=1 kind=orth\nblock tau a=1 b=1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  CHECK_THROWS_AS(parse_param_string("block rho a=1 b=1\n"), ParseError);
  CHECK_THROWS_AS(parse_param_string("cuspidal rho kind=weird\n"), ParseError);
}

TEST_CASE("order violations are rejected unless the repair flag is set") {
  std::string text =
      "cuspidal rho d=1 kind=orth\n"
      "group hasse=+ rG=sym2 star=orth\n"
      "block rho a=7 b=3\n"
      "block rho a=3 b=1\n";
  CHECK_THROWS_AS(parse_param_string(text), ParseError);
  ParamFile pf = parse_param_string(text, true);
  CHECK(pf.psi.order_valid());
  REQUIRE(pf.psi.size() == 2);
  CHECK(pf.psi.blocks[0].a() == 3);  // the smaller block moved in front
}

TEST_CASE("parameter files round-trip") {
  ParamFile pf = parse_param_string(kSample);
  std::string text = write_param_file(pf);
  ParamFile pf2 = parse_param_string(text);
  REQUIRE(pf2.psi.size() == pf.psi.size());
  for (size_t i = 0; i < pf.psi.size(); ++i)
    CHECK(pf.psi.blocks[i].same_block(pf2.psi.blocks[i]));
  CHECK(pf2.point == pf.point);
  CHECK(pf2.a0 == pf.a0);
  CHECK(*pf2.s0 == *pf.s0);
}

TEST_CASE("certificates round-trip through JSON") {
  ParamFile pf = parse_param_string(
      "cuspidal rho d=1 kind=orth\n"
      "group hasse=+ rG=sym2 star=orth\n"
      "block rho a=1 b=3\n"
      "point t=0 eta=+\n"
      "target rho a0=1 s0=1\n");
  Certificate cert = run_reduction(pf.target());
  REQUIRE(verify_certificate(cert).ok);

  nlohmann::json j = to_json(cert);
  Certificate back = certificate_from_json(j);
  REQUIRE(verify_certificate(back).ok);
  CHECK(certificate_text(back) == certificate_text(cert));
  CHECK(to_json(back) == j);

  SECTION("tampering survives the round trip into a rejection") {
    nlohmann::json bad = j;
    bad["nodes"][0]["edges"][0]["ledger"][0]["expect"] =
        bad["nodes"][0]["edges"][0]["ledger"][0]["expect"].get<long long>() + 1;
    CHECK_FALSE(verify_certificate(certificate_from_json(bad)).ok);
  }
}

TEST_CASE("branching certificates round-trip through JSON") {
  // elementary descent with two reachable stop levels gives a two-edge root
  ParamFile pf = parse_param_string(
      "cuspidal rho d=1 kind=orth\n"
      "group hasse=- rG=wedge2 star=symp\n"
      "block rho a=2 b=1\n"
      "block rho a=1 b=6\n"
      "point t=0,0 eta=+,-\n"
      "target rho a0=4 s0=1/2\n");
  Certificate cert = run_reduction(pf.target());
  REQUIRE(cert.nodes[cert.root].edges.size() >= 2);
  REQUIRE(verify_certificate(cert).ok);
  Certificate back = certificate_from_json(to_json(cert));
  REQUIRE(verify_certificate(back).ok);
  CHECK(certificate_text(back) == certificate_text(cert));
}
