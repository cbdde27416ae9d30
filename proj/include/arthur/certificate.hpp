#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "arthur/reduce.hpp"

namespace arthur {

/*
  Certificate checking. Everything a reduction step asserts is re-derived
  here from the target data alone: classification, preconditions, measure
  descent, ledger orders, and the per-edge budget. A certificate that was
  tampered with (a ledger value, a spliced step) fails with a diagnostic
  naming the node.
*/

struct VerifyResult {
  bool ok = true;
  std::string diagnostic;

  explicit operator bool() const { return ok; }
};

namespace detail {

inline VerifyResult fail(size_t node, const std::string& why) {
  VerifyResult r;
  r.ok = false;
  r.diagnostic = "node " + std::to_string(node) + ": " + why;
  return r;
}

inline bool verify_entry(const LedgerEntry& le, std::string& why) {
  switch (le.check) {
    case LedgerEntry::Check::exact_empty:
      if (!le.product.trivial()) {
        why = "formal product does not cancel: " + le.what;
        return false;
      }
      return true;
    case LedgerEntry::Check::order_eq: {
      OrderResult r = order_at(le.product, le.at);
      if (!r.exact() || r.order() != le.expect) {
        why = "order mismatch (" + le.what + "): expected " + std::to_string(le.expect);
        return false;
      }
      return true;
    }
    case LedgerEntry::Check::order_ge: {
      OrderResult r = order_at(le.product, le.at);
      if (r.lo < le.expect) {
        why = "order below bound (" + le.what + ")";
        return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace detail

inline VerifyResult verify_certificate(const Certificate& cert) {
  if (cert.nodes.empty() || cert.root >= cert.nodes.size())
    return detail::fail(0, "empty or malformed certificate");
  std::vector<int> seen(cert.nodes.size(), 0);
  std::vector<size_t> stack{cert.root};
  std::string why;
  while (!stack.empty()) {
    size_t idx = stack.back();
    stack.pop_back();
    if (seen[idx]++) return detail::fail(idx, "not a tree");
    const CertNode& node = cert.nodes[idx];
    const Target& t = node.target;
    try {
      t.check();
    } catch (const std::exception& e) {
      return detail::fail(idx, std::string("invalid target: ") + e.what());
    }
    CaseTag expect_tag;
    try {
      expect_tag = classify_case(t);
    } catch (const std::exception& e) {
      return detail::fail(idx, std::string("classification failed: ") + e.what());
    }
    bool family_ok = expect_tag == node.tag ||
                     (expect_tag == CaseTag::NonIsole_2 && node.tag == CaseTag::NonIsole_1);
    if (!family_ok) return detail::fail(idx, std::string("tag disagrees with classification: ") +
                                                 case_name(node.tag) + " vs " +
                                                 case_name(expect_tag));
    for (const auto& le : node.ledger)
      if (!detail::verify_entry(le, why)) return detail::fail(idx, why);

    if (node.edges.empty()) {
      if (node.tag == CaseTag::BaseTempered) {
        if (!t.psi.tempered()) return detail::fail(idx, "leaf claims tempered psi");
      } else if (node.tag == CaseTag::BaseS0Zero) {
        if (t.s0 != HalfInt(0)) return detail::fail(idx, "leaf claims s0 = 0");
      } else {
        return detail::fail(idx, "non-base leaf");
      }
      continue;
    }
    if (node.tag == CaseTag::BaseTempered || node.tag == CaseTag::BaseS0Zero)
      return detail::fail(idx, "base case with outgoing edges");

    for (const auto& e : node.edges) {
      if (e.child >= cert.nodes.size()) return detail::fail(idx, "edge child out of range");
      const Target& c = cert.nodes[e.child].target;
      if (c.rho0 != t.rho0 || c.a0 != t.a0 || c.s0 != t.s0)
        return detail::fail(idx, "edge changes the intertwining datum");
      if (!(measure(c) < measure(t))) return detail::fail(idx, "measure does not decrease");
      if (c.psi.group.hasse != center_product(c.psi, c.point))
        return detail::fail(idx, "child Hasse sign disagrees with its center product");
      for (const auto& m : e.segments)
        if (!m.valid()) return detail::fail(idx, "invalid segment matrix on edge");
      long long budget = 0;
      for (const auto& le : e.ledger) {
        if (!detail::verify_entry(le, why)) return detail::fail(idx, why);
        if (le.prefactor && le.check != LedgerEntry::Check::exact_empty) budget += le.expect;
      }
      if (budget != e.budget) return detail::fail(idx, "budget does not match its ledger");
      if (budget < 0) return detail::fail(idx, "negative order budget");
      stack.push_back(e.child);
    }
  }
  return {};
}

/* ------------------------------ text format ------------------------------ */

inline std::string psi_brief(const PsiParameter& psi) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < psi.blocks.size(); ++i) {
    const auto& b = psi.blocks[i];
    if (i) os << ",";
    os << "(" << b.rho.id << "," << b.A.str() << "," << b.B.str() << "," << sign_char(b.zeta)
       << ")";
  }
  os << "}";
  return os.str();
}

inline std::string point_brief(const PacketPoint& pt) {
  std::ostringstream os;
  os << "t=";
  for (size_t i = 0; i < pt.t.size(); ++i) os << (i ? "," : "") << pt.t[i];
  os << " eta=";
  for (size_t i = 0; i < pt.eta.size(); ++i) os << (i ? "," : "") << sign_char(pt.eta[i]);
  return os.str();
}

inline uint64_t target_hash(const Target& t) {
  std::ostringstream os;
  os << psi_brief(t.psi) << "|" << point_brief(t.point) << "|" << t.rho0.id << "|" << t.a0 << "|"
     << t.s0.str();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

// versioned, line oriented, one step per line; deterministic given the tree
inline std::string certificate_text(const Certificate& cert) {
  std::ostringstream os;
  os << "arthur-certificate v1\n";
  std::vector<size_t> stack{cert.root};
  // preorder with stable child order
  std::vector<size_t> order;
  while (!stack.empty()) {
    size_t idx = stack.back();
    stack.pop_back();
    order.push_back(idx);
    const auto& node = cert.nodes[idx];
    for (auto it = node.edges.rbegin(); it != node.edges.rend(); ++it) stack.push_back(it->child);
  }
  for (size_t idx : order) {
    const auto& node = cert.nodes[idx];
    os << "node " << idx << " tag=" << case_name(node.tag) << std::hex << " before=0x"
       << target_hash(node.target) << std::dec << " psi=" << psi_brief(node.target.psi) << " "
       << point_brief(node.target.point);
    if (node.edges.empty()) os << " leaf";
    os << "\n";
    for (const auto& e : node.edges) {
      os << "  edge -> " << e.child << " budget=" << e.budget;
      if (!e.note.empty()) os << " note=\"" << e.note << "\"";
      os << "\n";
      for (const auto& le : e.ledger) {
        os << "    ledger ";
        switch (le.check) {
          case LedgerEntry::Check::exact_empty: os << "empty"; break;
          case LedgerEntry::Check::order_eq: os << "ord=" << le.expect; break;
          case LedgerEntry::Check::order_ge: os << "ord>=" << le.expect; break;
        }
        os << " at=" << le.at.str() << " " << le.what << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace arthur
