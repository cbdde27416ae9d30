#pragma once

#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arthur/packet.hpp"
#include "arthur/params.hpp"
#include "arthur/reduce.hpp"

namespace arthur {

/*
  Parameter files: UTF-8 text, '#' comments, one declaration per line.

    cuspidal rho d=1 kind=orth
    group hasse=+ rG=sym2 star=orth
    block rho a=5 b=3
    block rho A=2 B=1 zeta=-
    point t=0,1 eta=+,-
    target rho a0=5 s0=3/2

  Blocks are listed in the chosen total order; property (P) is validated on
  load unless the caller asks for the reordering fallback.
*/

struct ParseError : std::runtime_error {
  int line;
  ParseError(int l, const std::string& msg)
      : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}
};

struct ParamFile {
  PsiParameter psi;
  std::optional<PacketPoint> point;
  std::optional<CuspidalLabel> rho0;
  long long a0 = 0;
  std::optional<HalfInt> s0;

  bool has_target() const { return rho0 && s0; }
  Target target() const {
    if (!has_target()) throw std::invalid_argument("param file has no target declaration");
    Target t;
    t.psi = psi;
    t.point = point ? *point : PacketPoint{std::vector<long long>(psi.size(), 0),
                                           std::vector<Sign>(psi.size(), Sign::plus)};
    t.rho0 = *rho0;
    t.a0 = a0;
    t.s0 = *s0;
    return t;
  }
};

namespace iodetail {

inline HalfInt parse_half(const std::string& s, int line) {
  size_t slash = s.find('/');
  try {
    if (slash == std::string::npos) return HalfInt::whole(std::stoll(s));
    if (s.substr(slash + 1) != "2") throw ParseError(line, "half-integers use denominator 2");
    return HalfInt(std::stoll(s.substr(0, slash)));
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    throw ParseError(line, "bad number '" + s + "'");
  }
}

inline Sign parse_sign(const std::string& s, int line) {
  if (s == "+" || s == "+1") return Sign::plus;
  if (s == "-" || s == "-1") return Sign::minus;
  throw ParseError(line, "bad sign '" + s + "'");
}

inline std::map<std::string, std::string> keyvals(const std::vector<std::string>& words,
                                                  size_t from, int line) {
  std::map<std::string, std::string> kv;
  for (size_t i = from; i < words.size(); ++i) {
    size_t eq = words[i].find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key=value, got '" + words[i] + "'");
    kv[words[i].substr(0, eq)] = words[i].substr(eq + 1);
  }
  return kv;
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else cur.push_back(c);
  }
  out.push_back(cur);
  return out;
}

}  // namespace iodetail

inline ParamFile parse_param_file(std::istream& in, bool allow_reorder = false) {
  ParamFile pf;
  std::map<std::string, CuspidalLabel> cuspidals;
  std::string raw;
  int line = 0;
  std::optional<std::vector<long long>> pt_t;
  std::optional<std::vector<Sign>> pt_eta;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    std::istringstream ls(raw);
    std::vector<std::string> w;
    std::string tok;
    while (ls >> tok) w.push_back(tok);
    if (w.empty()) continue;
    using namespace iodetail;
    if (w[0] == "cuspidal") {
      if (w.size() < 2) throw ParseError(line, "cuspidal needs a name");
      auto kv = keyvals(w, 2, line);
      CuspidalLabel rho;
      rho.id = w[1];
      if (kv.count("d")) rho.dim = static_cast<int>(parse_half(kv["d"], line).as_int());
      if (kv.count("kind")) {
        if (kv["kind"] == "orth") rho.kind = SelfdualKind::orthogonal;
        else if (kv["kind"] == "symp") rho.kind = SelfdualKind::symplectic;
        else throw ParseError(line, "kind is orth or symp");
      }
      if (!cuspidals.emplace(rho.id, rho).second)
        throw ParseError(line, "cuspidal '" + rho.id + "' declared twice");
    } else if (w[0] == "group") {
      auto kv = keyvals(w, 1, line);
      if (kv.count("hasse")) pf.psi.group.hasse = parse_sign(kv["hasse"], line);
      if (kv.count("rG")) {
        if (kv["rG"] == "sym2") pf.psi.group.rg = RGKind::sym2;
        else if (kv["rG"] == "wedge2") pf.psi.group.rg = RGKind::wedge2;
        else throw ParseError(line, "rG is sym2 or wedge2");
      }
      if (kv.count("star")) {
        if (kv["star"] == "orth") pf.psi.group.star = SelfdualKind::orthogonal;
        else if (kv["star"] == "symp") pf.psi.group.star = SelfdualKind::symplectic;
        else throw ParseError(line, "star is orth or symp");
      }
    } else if (w[0] == "block") {
      if (w.size() < 2) throw ParseError(line, "block needs a cuspidal name");
      auto it = cuspidals.find(w[1]);
      if (it == cuspidals.end()) throw ParseError(line, "unknown cuspidal '" + w[1] + "'");
      auto kv = keyvals(w, 2, line);
      JordanBlock blk;
      if (kv.count("a") || kv.count("b")) {
        if (!kv.count("a") || !kv.count("b")) throw ParseError(line, "block needs both a and b");
        blk = block_from_ab(it->second, parse_half(kv["a"], line).as_int(),
                            parse_half(kv["b"], line).as_int());
      } else {
        if (!kv.count("A") || !kv.count("B")) throw ParseError(line, "block needs a,b or A,B");
        blk.rho = it->second;
        blk.A = parse_half(kv["A"], line);
        blk.B = parse_half(kv["B"], line);
        blk.zeta = kv.count("zeta") ? parse_sign(kv["zeta"], line) : Sign::plus;
        if (blk.B == HalfInt(0)) blk.zeta = Sign::plus;
      }
      try {
        blk.check();
      } catch (const std::exception& e) {
        throw ParseError(line, e.what());
      }
      pf.psi.blocks.push_back(blk);
    } else if (w[0] == "point") {
      auto kv = keyvals(w, 1, line);
      if (kv.count("t")) {
        pt_t = std::vector<long long>{};
        for (auto& s : split_commas(kv["t"])) pt_t->push_back(parse_half(s, line).as_int());
      }
      if (kv.count("eta")) {
        pt_eta = std::vector<Sign>{};
        for (auto& s : split_commas(kv["eta"])) pt_eta->push_back(parse_sign(s, line));
      }
    } else if (w[0] == "target") {
      if (w.size() < 2) throw ParseError(line, "target needs a cuspidal name");
      auto it = cuspidals.find(w[1]);
      if (it == cuspidals.end()) throw ParseError(line, "unknown cuspidal '" + w[1] + "'");
      auto kv = keyvals(w, 2, line);
      if (!kv.count("a0") || !kv.count("s0")) throw ParseError(line, "target needs a0 and s0");
      pf.rho0 = it->second;
      pf.a0 = parse_half(kv["a0"], line).as_int();
      pf.s0 = parse_half(kv["s0"], line);
    } else {
      throw ParseError(line, "unknown declaration '" + w[0] + "'");
    }
  }
  if (pt_t || pt_eta) {
    PacketPoint pt;
    pt.t = pt_t ? *pt_t : std::vector<long long>(pf.psi.size(), 0);
    pt.eta = pt_eta ? *pt_eta : std::vector<Sign>(pf.psi.size(), Sign::plus);
    pf.point = pt;
  }
  if (!pf.psi.order_valid()) {
    if (!allow_reorder) {
      auto bad = *pf.psi.order_violation();
      throw ParseError(0, "order violates property (P) at block positions " +
                              std::to_string(bad.first + 1) + " and " +
                              std::to_string(bad.second + 1) + " (use the reorder option)");
    }
    // insertion repair: rebuild keeping relative order where allowed
    PsiParameter fixed;
    fixed.group = pf.psi.group;
    PacketPoint dummy;
    for (size_t i = 0; i < pf.psi.size(); ++i)
      insert_block_ordered(fixed, dummy, pf.psi.blocks[i],
                           pf.point ? pf.point->t[i] : 0,
                           pf.point ? pf.point->eta[i] : Sign::plus, fixed.size());
    pf.psi = fixed;
    if (pf.point) pf.point = dummy;
  }
  try {
    pf.psi.check();
    if (pf.point) check_point(pf.psi, *pf.point);
  } catch (const std::exception& e) {
    throw ParseError(0, e.what());
  }
  return pf;
}

inline ParamFile parse_param_string(const std::string& text, bool allow_reorder = false) {
  std::istringstream in(text);
  return parse_param_file(in, allow_reorder);
}

inline std::string write_param_file(const ParamFile& pf) {
  std::ostringstream os;
  std::map<std::string, CuspidalLabel> cuspidals;
  for (const auto& b : pf.psi.blocks) cuspidals.emplace(b.rho.id, b.rho);
  if (pf.rho0) cuspidals.emplace(pf.rho0->id, *pf.rho0);
  for (const auto& [id, rho] : cuspidals)
    os << "cuspidal " << id << " d=" << rho.dim << " kind=" << kind_name(rho.kind) << "\n";
  os << "group hasse=" << sign_char(pf.psi.group.hasse) << " rG=" << rg_name(pf.psi.group.rg)
     << " star=" << kind_name(pf.psi.group.star) << "\n";
  for (const auto& b : pf.psi.blocks)
    os << "block " << b.rho.id << " a=" << b.a() << " b=" << b.b() << "\n";
  if (pf.point) {
    os << "point t=";
    for (size_t i = 0; i < pf.point->t.size(); ++i) os << (i ? "," : "") << pf.point->t[i];
    os << " eta=";
    for (size_t i = 0; i < pf.point->eta.size(); ++i)
      os << (i ? "," : "") << sign_char(pf.point->eta[i]);
    os << "\n";
  }
  if (pf.has_target())
    os << "target " << pf.rho0->id << " a0=" << pf.a0 << " s0=" << pf.s0->str() << "\n";
  return os.str();
}

}  // namespace arthur
