#pragma once

#include <json.hpp>

#include "arthur/certificate.hpp"

namespace arthur {

// JSON form of certificates; the inverse reconstructs a value that verifies
// and serializes identically.

inline nlohmann::json to_json(const CuspidalLabel& r) {
  return {{"id", r.id}, {"d", r.dim}, {"kind", kind_name(r.kind)}};
}

inline CuspidalLabel label_from_json(const nlohmann::json& j) {
  CuspidalLabel r;
  r.id = j.at("id").get<std::string>();
  r.dim = j.at("d").get<int>();
  r.kind = j.at("kind") == "orth" ? SelfdualKind::orthogonal : SelfdualKind::symplectic;
  return r;
}

inline nlohmann::json to_json(const Target& t) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : t.psi.blocks)
    blocks.push_back({{"rho", to_json(b.rho)}, {"A2", b.A.tw}, {"B2", b.B.tw},
                      {"zeta", sign_char(b.zeta) == '+' ? 1 : -1}});
  nlohmann::json pt = {{"t", t.point.t}, {"eta", nlohmann::json::array()}};
  for (Sign s : t.point.eta) pt["eta"].push_back(sign_int(s));
  return {{"blocks", blocks},
          {"group",
           {{"hasse", sign_int(t.psi.group.hasse)},
            {"rG", rg_name(t.psi.group.rg)},
            {"star", kind_name(t.psi.group.star)}}},
          {"point", pt},
          {"rho0", to_json(t.rho0)},
          {"a0", t.a0},
          {"s0_2", t.s0.tw}};
}

inline Target target_from_json(const nlohmann::json& j) {
  Target t;
  for (const auto& jb : j.at("blocks")) {
    JordanBlock b;
    b.rho = label_from_json(jb.at("rho"));
    b.A = HalfInt(jb.at("A2").get<long long>());
    b.B = HalfInt(jb.at("B2").get<long long>());
    b.zeta = jb.at("zeta").get<int>() > 0 ? Sign::plus : Sign::minus;
    t.psi.blocks.push_back(b);
  }
  const auto& jg = j.at("group");
  t.psi.group.hasse = jg.at("hasse").get<int>() > 0 ? Sign::plus : Sign::minus;
  t.psi.group.rg = jg.at("rG") == "sym2" ? RGKind::sym2 : RGKind::wedge2;
  t.psi.group.star = jg.at("star") == "orth" ? SelfdualKind::orthogonal : SelfdualKind::symplectic;
  t.point.t = j.at("point").at("t").get<std::vector<long long>>();
  for (const auto& s : j.at("point").at("eta"))
    t.point.eta.push_back(s.get<int>() > 0 ? Sign::plus : Sign::minus);
  t.rho0 = label_from_json(j.at("rho0"));
  t.a0 = j.at("a0").get<long long>();
  t.s0 = HalfInt(j.at("s0_2").get<long long>());
  return t;
}

inline nlohmann::json to_json(const LFormalProduct& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, e] : p.terms)
    terms.push_back({k.rho1, k.rho2, k.shift.tw, e});
  return {{"terms", terms}, {"rg_exponent", p.rg_exponent}, {"rg_rho", p.rg_rho}};
}

inline LFormalProduct product_from_json(const nlohmann::json& j) {
  LFormalProduct p;
  for (const auto& t : j.at("terms")) {
    LTermKey k{t.at(0).get<std::string>(), t.at(1).get<std::string>(),
               HalfInt(t.at(2).get<long long>())};
    p.terms[k] = t.at(3).get<long long>();
  }
  p.rg_exponent = j.at("rg_exponent").get<long long>();
  p.rg_rho = j.at("rg_rho").get<std::string>();
  return p;
}

inline nlohmann::json to_json(const LedgerEntry& le) {
  const char* kind = le.check == LedgerEntry::Check::exact_empty ? "empty"
                     : le.check == LedgerEntry::Check::order_eq  ? "eq"
                                                                 : "ge";
  return {{"what", le.what},    {"product", to_json(le.product)}, {"check", kind},
          {"expect", le.expect}, {"at_2", le.at.tw},              {"prefactor", le.prefactor}};
}

inline LedgerEntry ledger_from_json(const nlohmann::json& j) {
  LedgerEntry le;
  le.what = j.at("what").get<std::string>();
  le.product = product_from_json(j.at("product"));
  std::string kind = j.at("check").get<std::string>();
  le.check = kind == "empty" ? LedgerEntry::Check::exact_empty
             : kind == "eq"  ? LedgerEntry::Check::order_eq
                             : LedgerEntry::Check::order_ge;
  le.expect = j.at("expect").get<long long>();
  le.at = HalfInt(j.at("at_2").get<long long>());
  le.prefactor = j.at("prefactor").get<bool>();
  return le;
}

inline nlohmann::json to_json(const LadderMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : m.rows) rows.push_back({r.from.tw, r.to.tw});
  return {{"rho", to_json(m.rho)}, {"rows", rows}};
}

inline LadderMatrix ladder_from_json(const nlohmann::json& j) {
  LadderMatrix m;
  m.rho = label_from_json(j.at("rho"));
  for (const auto& r : j.at("rows"))
    m.rows.push_back(Segment{HalfInt(r.at(0).get<long long>()), HalfInt(r.at(1).get<long long>())});
  return m;
}

inline nlohmann::json to_json(const Certificate& cert) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& node : cert.nodes) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : node.edges) {
      nlohmann::json segs = nlohmann::json::array(), ledger = nlohmann::json::array();
      for (const auto& s : e.segments) segs.push_back(to_json(s));
      for (const auto& le : e.ledger) ledger.push_back(to_json(le));
      edges.push_back({{"child", e.child},
                       {"segments", segs},
                       {"ledger", ledger},
                       {"budget", e.budget},
                       {"note", e.note}});
    }
    nlohmann::json ledger = nlohmann::json::array();
    for (const auto& le : node.ledger) ledger.push_back(to_json(le));
    nodes.push_back({{"target", to_json(node.target)},
                     {"tag", case_name(node.tag)},
                     {"edges", edges},
                     {"ledger", ledger}});
  }
  return {{"format", "arthur-certificate"}, {"version", 1}, {"root", cert.root}, {"nodes", nodes}};
}

inline CaseTag tag_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(CaseTag::BottomFinal); ++i)
    if (s == case_name(static_cast<CaseTag>(i))) return static_cast<CaseTag>(i);
  throw std::invalid_argument("unknown case tag '" + s + "'");
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
  if (j.at("format") != "arthur-certificate" || j.at("version") != 1)
    throw std::invalid_argument("not an arthur certificate (v1)");
  Certificate cert;
  cert.root = j.at("root").get<size_t>();
  for (const auto& jn : j.at("nodes")) {
    CertNode node;
    node.target = target_from_json(jn.at("target"));
    node.tag = tag_from_name(jn.at("tag").get<std::string>());
    for (const auto& je : jn.at("edges")) {
      ReductionEdge e;
      e.child = je.at("child").get<size_t>();
      for (const auto& js : je.at("segments")) e.segments.push_back(ladder_from_json(js));
      for (const auto& jl : je.at("ledger")) e.ledger.push_back(ledger_from_json(jl));
      e.budget = je.at("budget").get<long long>();
      e.note = je.at("note").get<std::string>();
      node.edges.push_back(std::move(e));
    }
    for (const auto& jl : jn.at("ledger")) node.ledger.push_back(ledger_from_json(jl));
    cert.nodes.push_back(std::move(node));
  }
  return cert;
}

}  // namespace arthur
