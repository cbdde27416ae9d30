// Command-line front end: parse a parameter file, run each computation, emit
// human-readable traces and machine-readable certificates.
//
// Exit codes: 0 success/verified, 1 parse error, 2 precondition error,
// 3 verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "arthur/cert_json.hpp"
#include "arthur/certificate.hpp"
#include "arthur/io.hpp"

namespace {

using namespace arthur;

constexpr int kExitOk = 0, kExitParse = 1, kExitPrecondition = 2, kExitVerify = 3;

ParamFile load(const std::string& path, bool allow_reorder) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_param_file(in, allow_reorder);
}

nlohmann::json block_json(const JordanBlock& b) {
  return {{"rho", b.rho.id}, {"a", b.a()},     {"b", b.b()},
          {"A", b.A.str()},  {"B", b.B.str()}, {"zeta", sign_char(b.zeta) == '+' ? 1 : -1}};
}

int cmd_validate(const ParamFile& pf, bool json_out) {
  Measures m = pf.psi.measures();
  auto bad = pf.psi.bad_parity_positions();
  bool discrete = is_discrete_diagonal(pf.psi);
  if (json_out) {
    nlohmann::json j = {{"ok", true},
                        {"blocks", pf.psi.size()},
                        {"order_valid", pf.psi.order_valid()},
                        {"good_parity", bad.empty()},
                        {"bad_parity_positions", bad},
                        {"discrete_diagonal", discrete},
                        {"ell_plus", m.ell_plus},
                        {"ell_minus", m.ell_minus},
                        {"n_minus", m.n_minus}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "OK: " << pf.psi.size() << " block(s) " << psi_brief(pf.psi) << "\n";
  std::cout << "  order property (P): valid\n";
  std::cout << "  good parity: " << (bad.empty() ? "yes" : "no");
  if (!bad.empty()) {
    std::cout << " (positions";
    for (auto i : bad) std::cout << " " << i + 1;
    std::cout << ")";
  }
  std::cout << "\n  discrete diagonal restriction: " << (discrete ? "yes" : "no") << "\n";
  std::cout << "  ell(+) = " << m.ell_plus << ", ell(-) = " << m.ell_minus
            << ", n(-) = " << m.n_minus << "\n";
  return kExitOk;
}

int cmd_packet(const ParamFile& pf, bool json_out) {
  if (!is_discrete_diagonal(pf.psi)) {
    std::cerr << "packet: psi does not have discrete diagonal restriction; raise it first\n"
                 "  (build a dominating parameter of discrete restriction and descend by\n"
                 "   the Jacquet schedule; see README on dominance)\n";
    return kExitPrecondition;
  }
  auto entries = enumerate_packet(pf.psi);
  if (json_out) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : entries) {
      nlohmann::json eps = nlohmann::json::array(), eta = nlohmann::json::array();
      for (Sign s : e.eps) eps.push_back(sign_int(s));
      for (Sign s : e.point.eta) eta.push_back(sign_int(s));
      rows.push_back({{"t", e.point.t},
                      {"eta", eta},
                      {"eps", eps},
                      {"stable_sign", sign_int(e.stable_sign)}});
    }
    std::cout << nlohmann::json{{"count", entries.size()}, {"points", rows}}.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << entries.size() << " packet point(s), center product " << sign_char(pf.psi.group.hasse)
            << "\n";
  for (const auto& e : entries) {
    std::cout << "  " << point_brief(e.point) << "  eps=";
    for (Sign s : e.eps) std::cout << sign_char(s);
    std::cout << "  eps(s_psi)=" << sign_char(e.stable_sign) << "\n";
  }
  return kExitOk;
}

int cmd_order(const ParamFile& pf, bool json_out) {
  if (!pf.has_target()) {
    std::cerr << "order: the file declares no target\n";
    return kExitPrecondition;
  }
  Target t = pf.target();
  LFormalProduct r = r_of_psi(t.psi, t.rho0, t.a0);
  OrderResult res = order_at(r, t.s0);
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& b : t.psi.blocks) {
    bool applies = b.rho == t.rho0 && t.b0() >= 2;
    bool hit = applies && contribution_table(b, t.a0, t.b0());
    verdicts.push_back({{"block", block_json(b)}, {"contributes_pole", hit}});
  }
  if (json_out) {
    nlohmann::json j = {{"s0", t.s0.str()},
                        {"order_lo", res.lo},
                        {"order_hi", res.hi},
                        {"table", verdicts}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  if (res.exact()) std::cout << "order of r(s,psi) at s0=" << t.s0.str() << ": " << res.order() << "\n";
  else
    std::cout << "order of r(s,psi) at s0=0: in [" << res.lo << ", " << res.hi
              << "] (the r_G factor may carry the pole of L(rho x rho, s) at 0)\n";
  for (const auto& [key, e] : res.contributing)
    std::cout << "  term L(" << key.rho1 << " x " << key.rho2 << ", s" << (key.shift < HalfInt(0) ? "" : "+")
              << key.shift.str() << ")^" << e << " hits s0\n";
  if (t.b0() >= 2) {
    std::cout << "pole-contribution table:\n";
    for (size_t i = 0; i < t.psi.blocks.size(); ++i) {
      const auto& b = t.psi.blocks[i];
      bool hit = b.rho == t.rho0 && contribution_table(b, t.a0, t.b0());
      std::cout << "  block " << i + 1 << " (" << b.rho.id << ",a=" << b.a() << ",b=" << b.b()
                << "): " << (hit ? "contributes a pole" : "no contribution") << "\n";
    }
  }
  return kExitOk;
}

int cmd_table(const ParamFile& pf, bool json_out) {
  if (!pf.has_target() || pf.target().b0() < 2) {
    std::cerr << "table: needs a target with s0 >= 1/2\n";
    return kExitPrecondition;
  }
  Target t = pf.target();
  nlohmann::json rows = nlohmann::json::array();
  bool all_match = true;
  for (const auto& b : t.psi.blocks) {
    bool table = b.rho == t.rho0 && contribution_table(b, t.a0, t.b0());
    PsiParameter one;
    one.group = t.psi.group;
    one.blocks = {b};
    LFormalProduct r = block_normalization_factor(b, t.rho0, t.a0);
    long long ord = order_at(r, t.s0).order();
    bool match = table == (ord == -1);
    all_match = all_match && match;
    rows.push_back({{"block", block_json(b)}, {"table", table}, {"order", ord}, {"match", match}});
    if (!json_out)
      std::cout << "block (" << b.rho.id << ",a=" << b.a() << ",b=" << b.b() << "): table "
                << (table ? "pole" : "none") << ", order " << ord << (match ? "" : "  MISMATCH")
                << "\n";
  }
  if (json_out) std::cout << nlohmann::json{{"rows", rows}, {"all_match", all_match}}.dump(2) << "\n";
  return all_match ? kExitOk : kExitVerify;
}

int cmd_reduce(const ParamFile& pf, bool json_out, const std::string& out_prefix) {
  if (!pf.has_target()) {
    std::cerr << "reduce: the file declares no target\n";
    return kExitPrecondition;
  }
  Target t = pf.target();
  Certificate cert = run_reduction(t);
  VerifyResult v = verify_certificate(cert);
  if (!out_prefix.empty()) {
    std::ofstream txt(out_prefix + ".cert.txt");
    txt << certificate_text(cert);
    std::ofstream js(out_prefix + ".cert.json");
    js << to_json(cert).dump(2) << "\n";
  }
  if (json_out) {
    std::cout << nlohmann::json{{"nodes", cert.nodes.size()},
                                {"verified", v.ok},
                                {"diagnostic", v.diagnostic},
                                {"certificate", to_json(cert)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << certificate_text(cert);
    std::cout << (v.ok ? "verified: every branch checks out\n"
                       : "VERIFICATION FAILED: " + v.diagnostic + "\n");
  }
  return v.ok ? kExitOk : kExitVerify;
}

/* ------------------------------- selftest ------------------------------- */

struct RandomTargets {
  std::mt19937 rng;
  explicit RandomTargets(uint64_t seed) : rng(seed) {}

  Target next() {
    std::uniform_int_distribution<int> kindd(0, 1), stard(0, 1), nb(1, 5), ab(1, 6);
    GroupType g;
    g.star = stard(rng) ? SelfdualKind::orthogonal : SelfdualKind::symplectic;
    g.rg = g.star == SelfdualKind::orthogonal ? RGKind::sym2 : RGKind::wedge2;
    CuspidalLabel rho{"rho", 1, kindd(rng) ? SelfdualKind::orthogonal : SelfdualKind::symplectic};
    PsiParameter psi;
    psi.group = g;
    int n = nb(rng);
    PacketPoint pt;
    for (int i = 0; i < n; ++i) {
      for (int tries = 0; tries < 64; ++tries) {
        long long a = ab(rng), b = ab(rng);
        JordanBlock blk = block_from_ab(rho, a, b);
        if (!good_parity(blk, g)) continue;
        PsiParameter trial = psi;
        PacketPoint tp = pt;
        std::uniform_int_distribution<long long> td(0, blk.inf() / 2);
        long long tv = td(rng);
        Sign ev = (2 * tv == blk.inf()) ? Sign::plus
                                        : (rng() & 1 ? Sign::plus : Sign::minus);
        insert_block_ordered(trial, tp, blk, tv, ev, trial.size());
        psi = trial;
        pt = tp;
        break;
      }
    }
    Target t;
    t.psi = psi;
    t.point = pt;
    t.rho0 = rho;
    std::uniform_int_distribution<long long> a0d(1, 9), s0d(1, 7);
    t.a0 = a0d(rng);
    t.s0 = HalfInt(s0d(rng));  // 1/2 .. 7/2
    t.psi.group.hasse = center_product(t.psi, t.point);
    return t;
  }
};

int cmd_selftest(long long n, bool json_out) {
  RandomTargets gen(20260810);
  long long failures = 0, nodes = 0;
  for (long long i = 0; i < n; ++i) {
    Target t = gen.next();
    try {
      Certificate cert = run_reduction(t);
      nodes += static_cast<long long>(cert.nodes.size());
      VerifyResult v = verify_certificate(cert);
      if (!v.ok) {
        ++failures;
        std::cerr << "selftest failure at sample " << i << ": " << v.diagnostic << "\n";
      }
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "selftest exception at sample " << i << ": " << e.what() << "\n";
    }
  }
  if (json_out)
    std::cout << nlohmann::json{{"samples", n}, {"failures", failures}, {"nodes", nodes}}.dump(2)
              << "\n";
  else
    std::cout << n << " random targets, " << failures << " failure(s), " << nodes
              << " certificate nodes total\n";
  return failures == 0 ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic toolkit for Arthur-packet parameters of classical p-adic groups"};
  app.require_subcommand(1);
  bool json_out = false;
  bool allow_reorder = false;
  app.add_flag("--json", json_out, "machine-readable output");
  app.add_flag("--allow-reorder", allow_reorder, "repair block order instead of rejecting");

  std::string file;
  auto* validate = app.add_subcommand("validate", "check a parameter file");
  validate->add_option("file", file)->required();
  auto* packet = app.add_subcommand("packet", "enumerate the packet points");
  packet->add_option("file", file)->required();
  auto* order = app.add_subcommand("order", "order of r(s,psi) at the target point");
  order->add_option("file", file)->required();
  auto* table = app.add_subcommand("table", "pole table vs direct order, per block");
  table->add_option("file", file)->required();
  auto* reduce = app.add_subcommand("reduce", "build and verify a reduction certificate");
  reduce->add_option("file", file)->required();
  std::string out_prefix;
  reduce->add_option("-o,--output", out_prefix, "write <prefix>.cert.txt and <prefix>.cert.json");
  auto* selftest = app.add_subcommand("selftest", "random reduction sweep");
  long long selftest_n = 100;
  selftest->add_option("-n,--samples", selftest_n, "number of random targets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest->parsed()) return cmd_selftest(selftest_n, json_out);
    ParamFile pf = load(file, allow_reorder);
    if (validate->parsed()) return cmd_validate(pf, json_out);
    if (packet->parsed()) return cmd_packet(pf, json_out);
    if (order->parsed()) return cmd_order(pf, json_out);
    if (table->parsed()) return cmd_table(pf, json_out);
    if (reduce->parsed()) return cmd_reduce(pf, json_out, out_prefix);
  } catch (const arthur::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerify;
  }
  return kExitOk;
}
