#pragma once

#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arthur/lfactor.hpp"
#include "arthur/multiseg.hpp"
#include "arthur/packet.hpp"
#include "arthur/params.hpp"

namespace arthur {

/*
  The reduction engine. A target fixes a parameter with a packet point, a
  self-dual cuspidal rho0 with a Steinberg size a0, and a positive real
  half-integer s0. The engine replays the holomorphy induction as a tree of
  parameter transformations. Every edge carries

    - the transformed target (child),
    - the inducing segment data (ladders),
    - a ledger of order identities on formal L-products, checkable by the
      lfactor module alone, whose prefactor entries sum to the claimed order
      budget of the scalar function relating the two normalized operators.

  A branch point with several children records a dichotomy the point data
  does not resolve; soundness requires every child to verify. Vanishing
  branches (certified through sign alternation) are simply absent.
*/

enum class CaseTag {
  BaseTempered,
  BaseS0Zero,
  Multiplicity,
  Isole_t0,
  Isole_tpos,
  Consecutif,
  NonIsole_1,
  NonIsole_2,
  NonIsole_3,
  NonIsoleSameSign,
  BottomHalfInt_i,
  BottomHalfInt_ii,
  BottomInt_iii,
  BottomFinal,
};

inline const char* case_name(CaseTag t) {
  switch (t) {
    case CaseTag::BaseTempered: return "BaseTempered";
    case CaseTag::BaseS0Zero: return "BaseS0Zero";
    case CaseTag::Multiplicity: return "Multiplicity";
    case CaseTag::Isole_t0: return "Isole_t0";
    case CaseTag::Isole_tpos: return "Isole_tpos";
    case CaseTag::Consecutif: return "Consecutif";
    case CaseTag::NonIsole_1: return "NonIsole_1";
    case CaseTag::NonIsole_2: return "NonIsole_2";
    case CaseTag::NonIsole_3: return "NonIsole_3";
    case CaseTag::NonIsoleSameSign: return "NonIsoleSameSign";
    case CaseTag::BottomHalfInt_i: return "BottomHalfInt_i";
    case CaseTag::BottomHalfInt_ii: return "BottomHalfInt_ii";
    case CaseTag::BottomInt_iii: return "BottomInt_iii";
    case CaseTag::BottomFinal: return "BottomFinal";
  }
  return "?";
}

struct Target {
  PsiParameter psi;
  PacketPoint point;
  CuspidalLabel rho0;
  long long a0 = 1;
  HalfInt s0;

  // b0 = 2 s0 + 1, so s0 = (b0-1)/2
  long long b0() const { return (s0 + s0).as_int() + 1; }
  HalfInt A0() const { return HalfInt(a0 + b0() - 2); }
  HalfInt B0() const { return HalfInt(std::llabs(a0 - b0())); }
  Sign zeta0() const { return a0 >= b0() ? Sign::plus : Sign::minus; }

  void check() const {
    psi.check();
    check_point(psi, point);
    if (psi.group.hasse != center_product(psi, point))
      throw std::invalid_argument(
          "target: the point's center product disagrees with the Hasse sign");
    if (a0 < 1) throw std::invalid_argument("target: a0 >= 1");
    if (s0 < HalfInt(0) || !(s0 + s0).integral())
      throw std::invalid_argument("target: s0 must be a nonnegative half-integer");
  }
};

using MeasureTuple = std::array<long long, 4>;

// Strictly decreasing along every reduction edge. The leading components
// follow the induction scheme (n(psi,-) then ell(psi,+) when zeta0 = -,
// ell(psi) then n(psi,-) when zeta0 = +); block count and total size break
// the ties left by the pair removals and the x-shrink steps.
inline MeasureTuple measure(const Target& t) {
  Measures m = t.psi.measures();
  long long count = static_cast<long long>(t.psi.size());
  long long size = 0;
  for (const auto& blk : t.psi.blocks) size += (blk.A + blk.B).tw;
  if (t.zeta0() == Sign::minus) return {m.n_minus, m.ell_plus, count, size};
  return {m.ell(), m.n_minus, count, size};
}

struct LedgerEntry {
  std::string what;
  LFormalProduct product;
  enum class Check { exact_empty, order_eq, order_ge } check = Check::order_eq;
  long long expect = 0;
  HalfInt at;              // evaluation point
  bool prefactor = false;  // participates in the edge's order budget
};

struct ReductionEdge {
  size_t child = 0;
  std::vector<LadderMatrix> segments;
  std::vector<LedgerEntry> ledger;
  long long budget = 0;
  std::string note;
};

struct CertNode {
  Target target;
  CaseTag tag = CaseTag::BaseTempered;
  std::vector<ReductionEdge> edges;       // empty iff leaf
  std::vector<LedgerEntry> ledger;        // leaf-level claims
};

struct Certificate {
  std::vector<CertNode> nodes;
  size_t root = 0;
};

namespace engine {

inline LFormalProduct ratio_after_before(const Target& after, const Target& before) {
  return r_of_psi(after.psi, before.rho0, before.a0) /
         r_of_psi(before.psi, before.rho0, before.a0);
}

inline LedgerEntry entry(std::string what, LFormalProduct p, LedgerEntry::Check c,
                         long long expect, HalfInt at, bool prefactor) {
  LedgerEntry e;
  e.what = std::move(what);
  e.product = std::move(p);
  e.check = c;
  e.expect = expect;
  e.at = at;
  e.prefactor = prefactor;
  return e;
}

// positions of picking interest
struct SelectedBlock {
  size_t pos = 0;
  std::vector<size_t> flats;  // same rho, same zeta, flat, B' in ]B, A[, sorted by B'
};

inline std::optional<SelectedBlock> select_nonflat(const Target& t, Sign side) {
  std::optional<size_t> best;
  for (size_t i = 0; i < t.psi.size(); ++i) {
    const auto& blk = t.psi.blocks[i];
    if (blk.zeta != side || blk.flat()) continue;
    if (!best || blk.B > t.psi.blocks[*best].B) best = i;
  }
  if (!best) return std::nullopt;
  SelectedBlock sel;
  sel.pos = *best;
  const auto& b = t.psi.blocks[*best];
  for (size_t i = 0; i < t.psi.size(); ++i) {
    const auto& f = t.psi.blocks[i];
    if (i != *best && f.rho == b.rho && f.zeta == b.zeta && f.flat() && f.B > b.B && f.B < b.A)
      sel.flats.push_back(i);
  }
  std::sort(sel.flats.begin(), sel.flats.end(),
            [&](size_t x, size_t y) { return t.psi.blocks[x].B < t.psi.blocks[y].B; });
  return sel;
}

// eta-equal consecutive flat pair (both same rho/zeta, nothing of that rho
// and zeta strictly between); the vanishing dichotomy is exact, so an
// eta-equal pair is exactly a removable one.
struct FlatPair {
  size_t lo = 0, hi = 0;
};

// every same-(rho,zeta) block other than the pair sits above hi or at lo and
// below; in particular nothing else reaches the upper level
inline bool pair_consecutive(const Target& t, size_t i, size_t j) {
  const auto &lo = t.psi.blocks[i], &hi = t.psi.blocks[j];
  for (size_t k = 0; k < t.psi.size(); ++k) {
    if (k == i || k == j) continue;
    const auto& blk = t.psi.blocks[k];
    if (blk.rho == lo.rho && blk.zeta == lo.zeta && blk.B > lo.B && blk.B <= hi.B) return false;
  }
  return true;
}

inline std::optional<FlatPair> find_consecutif_pair(const Target& t, Sign side,
                                                    bool same_sign_rule) {
  for (size_t i = 0; i < t.psi.size(); ++i) {
    const auto& x = t.psi.blocks[i];
    if (x.zeta != side || !x.flat()) continue;
    for (size_t j = 0; j < t.psi.size(); ++j) {
      if (j == i) continue;
      const auto& y = t.psi.blocks[j];
      if (y.rho != x.rho || y.zeta != side || !y.flat()) continue;
      if (!(y.B > x.B)) continue;
      if (!pair_consecutive(t, i, j)) continue;
      if (t.point.eta[i] != t.point.eta[j]) continue;  // Jacquet module vanishes
      if (same_sign_rule && !(t.B0() >= y.B || t.B0() < x.B)) continue;
      return FlatPair{i, j};
    }
  }
  return std::nullopt;
}

inline Target child_target(const Target& t, PsiParameter psi, PacketPoint pt) {
  Target c = t;
  c.psi = std::move(psi);
  c.point = std::move(pt);
  c.psi.group.hasse = center_product(c.psi, c.point);
  return c;
}

inline void erase_block(PsiParameter& psi, PacketPoint& pt, size_t pos) {
  psi.blocks.erase(psi.blocks.begin() + pos);
  pt.t.erase(pt.t.begin() + pos);
  pt.eta.erase(pt.eta.begin() + pos);
}

inline LadderMatrix one_row(const CuspidalLabel& rho, HalfInt from, HalfInt to) {
  LadderMatrix m;
  m.rho = rho;
  m.rows.push_back(Segment{from, to});
  return m;
}

}  // namespace engine

/* ------------------------------ classification ------------------------------ */

inline CaseTag classify_case(const Target& t) {
  t.check();
  if (t.s0 == HalfInt(0)) return CaseTag::BaseS0Zero;
  if (t.psi.tempered()) return CaseTag::BaseTempered;
  if (t.psi.duplicate_pair()) return CaseTag::Multiplicity;
  Sign z0 = t.zeta0();
  Measures m = t.psi.measures();
  long long ell_opp = (z0 == Sign::plus) ? m.ell_minus : m.ell_plus;
  if (ell_opp > 0) {
    if (engine::find_consecutif_pair(t, -z0, false)) return CaseTag::Consecutif;
    auto sel = engine::select_nonflat(t, -z0);
    if (sel->flats.empty())
      return t.point.t[sel->pos] == 0 ? CaseTag::Isole_t0 : CaseTag::Isole_tpos;
    return t.point.t[sel->pos] == 0 ? CaseTag::NonIsole_3 : CaseTag::NonIsole_2;
  }
  if (z0 == Sign::plus && m.ell_plus > 0) {
    if (engine::find_consecutif_pair(t, Sign::plus, true)) return CaseTag::Consecutif;
    auto sel = engine::select_nonflat(t, Sign::plus);
    if (sel->flats.empty())
      return t.point.t[sel->pos] == 0 ? CaseTag::Isole_t0 : CaseTag::Isole_tpos;
    return CaseTag::NonIsoleSameSign;
  }
  if (z0 == Sign::minus && m.n_minus > 0) {
    if (engine::find_consecutif_pair(t, Sign::plus, false)) return CaseTag::Consecutif;
    std::optional<size_t> pos;
    for (size_t i = 0; i < t.psi.size(); ++i)
      if (t.psi.blocks[i].zeta == Sign::minus &&
          (!pos || t.psi.blocks[i].B < t.psi.blocks[*pos].B))
        pos = i;
    const auto& blk = t.psi.blocks[*pos];
    if (blk.B.integral()) return CaseTag::BottomInt_iii;
    if (t.point.t[*pos] != 0 || t.point.eta[*pos] == Sign::plus) return CaseTag::BottomHalfInt_i;
    return CaseTag::BottomHalfInt_ii;
  }
  if (z0 == Sign::plus && m.n_minus > 0) return CaseTag::BottomFinal;
  throw std::logic_error("classify_case: no case applies");
}

/* ------------------------------- the builder ------------------------------- */

class ReductionBuilder {
 public:
  explicit ReductionBuilder(Certificate& cert) : cert_(cert) {}

  size_t expand(const Target& t) {
    t.check();
    size_t idx = cert_.nodes.size();
    cert_.nodes.push_back({});
    CertNode node;
    node.target = t;
    node.tag = classify_case(t);
    switch (node.tag) {
      case CaseTag::BaseS0Zero:
        break;  // duality argument; axiom leaf
      case CaseTag::BaseTempered:
        node.ledger.push_back(engine::entry("r(psi) at s0", r_of_psi(t.psi, t.rho0, t.a0),
                                            LedgerEntry::Check::order_eq, 0, t.s0, false));
        break;
      case CaseTag::Multiplicity:
        node.edges.push_back(multiplicity_edge(t));
        break;
      case CaseTag::Consecutif:
        node.edges.push_back(consecutif_edge(t));
        break;
      case CaseTag::Isole_t0:
      case CaseTag::Isole_tpos:
      case CaseTag::NonIsole_2:
      case CaseTag::NonIsole_3: {
        Measures m = t.psi.measures();
        long long ell_opp = t.zeta0() == Sign::plus ? m.ell_minus : m.ell_plus;
        if (ell_opp > 0) {
          opposite_family_edges(t, node);
        } else {
          // same-sign isolated position (zeta0 = + here)
          auto sel = *engine::select_nonflat(t, Sign::plus);
          if (t.point.t[sel.pos] == 0) node.edges.push_back(isole_t0_edge(t, sel.pos));
          else node.edges.push_back(shrink_edge(t, sel.pos, node.tag));
        }
        break;
      }
      case CaseTag::NonIsoleSameSign:
        same_sign_edges(t, node);
        break;
      case CaseTag::BottomHalfInt_i:
      case CaseTag::BottomHalfInt_ii:
      case CaseTag::BottomInt_iii:
        node.edges.push_back(bottom_edge(t, node.tag));
        break;
      case CaseTag::BottomFinal:
        bottom_final_edges(t, node);
        break;
      case CaseTag::NonIsole_1:
        throw std::logic_error("unreachable: NonIsole_1 is emitted as a sibling edge");
    }
    for (auto& e : node.edges) {
      e.budget = 0;
      for (const auto& le : e.ledger)
        if (le.prefactor && le.check != LedgerEntry::Check::exact_empty) e.budget += le.expect;
      if (e.budget < 0) throw std::logic_error("reduction edge with negative order budget");
      MeasureTuple before = measure(t), after = measure(cert_.nodes[e.child].target);
      if (!(after < before)) throw std::logic_error("reduction step does not decrease the measure");
    }
    cert_.nodes[idx] = std::move(node);
    return idx;
  }

 private:
  Certificate& cert_;

  size_t child(const Target& c) { return expand(c); }

  /* ---- individual steps; the ledger values are the case-by-case claims ---- */

  ReductionEdge multiplicity_edge(const Target& t) {
    auto dup = *t.psi.duplicate_pair();
    const JordanBlock blk = t.psi.blocks[dup.first];
    PsiParameter psi = t.psi;
    PacketPoint pt = t.point;
    engine::erase_block(psi, pt, dup.second);
    engine::erase_block(psi, pt, dup.first);
    Target c = engine::child_target(t, std::move(psi), std::move(pt));

    ReductionEdge e;
    e.child = child(c);
    LadderMatrix speh = speh_matrix(blk.rho, blk.a(), blk.b());
    e.segments.push_back(speh);
    LFormalProduct both = exchange_factor_left(speh, t.rho0, t.a0) *
                          exchange_factor_right(speh, t.rho0, t.a0) *
                          engine::ratio_after_before(c, t);
    e.ledger.push_back(engine::entry("f1*f3*r(psi')/r(psi)", std::move(both),
                                     LedgerEntry::Check::exact_empty, 0, t.s0, true));
    e.note = "remove two copies of a block";
    return e;
  }

  ReductionEdge consecutif_edge(const Target& t) {
    Sign z0 = t.zeta0();
    Measures m = t.psi.measures();
    long long ell_opp = (z0 == Sign::plus) ? m.ell_minus : m.ell_plus;
    bool same_sign = (z0 == Sign::plus && ell_opp == 0);
    Sign side = same_sign ? Sign::plus : -z0;
    auto pair = *engine::find_consecutif_pair(t, side, same_sign);
    const JordanBlock lo = t.psi.blocks[pair.lo], hi = t.psi.blocks[pair.hi];

    PsiParameter psi = t.psi;
    PacketPoint pt = t.point;
    if (pair.lo < pair.hi) {
      engine::erase_block(psi, pt, pair.hi);
      engine::erase_block(psi, pt, pair.lo);
    } else {
      engine::erase_block(psi, pt, pair.lo);
      engine::erase_block(psi, pt, pair.hi);
    }
    Target c = engine::child_target(t, std::move(psi), std::move(pt));

    ReductionEdge e;
    e.child = child(c);
    LadderMatrix seg = engine::one_row(lo.rho, side * hi.B, -(side * lo.B));
    e.segments.push_back(seg);
    LFormalProduct ratio = engine::ratio_after_before(c, t);
    if (side == -z0 && z0 == Sign::plus) {
      // both Shahidi factors telescope against the two removed blocks
      LFormalProduct all = exchange_factor_left(seg, t.rho0, t.a0) *
                           exchange_factor_right(seg, t.rho0, t.a0) * ratio;
      e.ledger.push_back(engine::entry("f1*f3*r(psi')/r(psi)", std::move(all),
                                       LedgerEntry::Check::exact_empty, 0, t.s0, true));
    } else if (side == -z0) {  // zeta0 = -
      e.ledger.push_back(engine::entry("r(psi')/r(psi)", std::move(ratio),
                                       LedgerEntry::Check::order_eq, 0, t.s0, true));
      e.ledger.push_back(engine::entry("left exchange factor",
                                       exchange_factor_left(seg, t.rho0, t.a0),
                                       LedgerEntry::Check::order_eq, 0, t.s0, true));
    } else {
      // same sign: both standard exchanges are pole-free at the pair lemma
      // level (different cuspidals never interact)
      e.ledger.push_back(engine::entry("r(psi')/r(psi)", std::move(ratio),
                                       LedgerEntry::Check::order_eq, 0, t.s0, true));
      if (lo.rho == t.rho0) {
        e.ledger.push_back(engine::entry(
            "pair lemma, incoming exchange",
            pair_normalizer_quotient(t.rho0, t.A0(), -t.B0(), hi.B, -lo.B),
            LedgerEntry::Check::order_eq, 0, HalfInt(0), false));
        e.ledger.push_back(engine::entry(
            "pair lemma, outgoing exchange",
            pair_normalizer_quotient(t.rho0, t.A0(), -t.B0(), lo.B, -hi.B),
            LedgerEntry::Check::order_eq, 0, HalfInt(0), false));
      }
    }
    e.note = "remove an eta-equal consecutive flat pair";
    return e;
  }

  // shared ledger shape for the shrink moves (A,B) -> (A-1,B+1); exact order
  // zero of f_left * f_right * r(psi')/r(psi) at s0, both signs
  void shrink_ledger(ReductionEdge& e, const Target& t, const Target& c, const LadderMatrix& seg) {
    if (t.zeta0() == Sign::minus) {
      e.ledger.push_back(engine::entry("r(psi')/r(psi)", engine::ratio_after_before(c, t),
                                       LedgerEntry::Check::order_eq, 0, t.s0, true));
      e.ledger.push_back(engine::entry("right exchange factor",
                                       exchange_factor_right(seg, t.rho0, t.a0),
                                       LedgerEntry::Check::order_eq, 0, t.s0, true));
    } else {
      LFormalProduct all = exchange_factor_left(seg, t.rho0, t.a0) *
                           exchange_factor_right(seg, t.rho0, t.a0) *
                           engine::ratio_after_before(c, t);
      e.ledger.push_back(engine::entry("f_l*f_r*r(psi')/r(psi)", std::move(all),
                                       LedgerEntry::Check::order_eq, 0, t.s0, true));
    }
  }

  ReductionEdge isole_t0_edge(const Target& t, size_t pos) {
    const JordanBlock blk = t.psi.blocks[pos];
    PsiParameter psi = t.psi;
    PacketPoint pt = t.point;
    engine::erase_block(psi, pt, pos);
    long long width = int_gap(blk.A, blk.B);
    size_t at = pos;
    for (long long k = 0; k <= width; ++k) {
      JordanBlock nb;
      nb.rho = blk.rho;
      nb.A = blk.B + HalfInt::whole(k);
      nb.B = nb.A;
      nb.zeta = nb.B == HalfInt(0) ? Sign::plus : blk.zeta;
      at = insert_block_ordered(psi, pt, nb, 0, t.point.eta[pos] * parity_sign(k), at) + 1;
    }
    Target c = engine::child_target(t, std::move(psi), std::move(pt));

    ReductionEdge e;
    e.child = child(c);
    long long cell = 0;
    if (blk.rho == t.rho0 && blk.zeta == Sign::plus && t.zeta0() == Sign::plus)
      cell = contribution_table(blk, t.a0, t.b0()) ? 1 : 0;  // the fan contributes nothing
    e.ledger.push_back(engine::entry("r(psi')/r(psi)", engine::ratio_after_before(c, t),
                                     LedgerEntry::Check::order_eq, cell, t.s0, true));
    e.note = "t = 0: block opens into the flat fan [B, A]";
    return e;
  }

  ReductionEdge shrink_edge(const Target& t, size_t pos, CaseTag) {
    const JordanBlock blk = t.psi.blocks[pos];
    PsiParameter psi = t.psi;
    PacketPoint pt = t.point;
    engine::erase_block(psi, pt, pos);
    if (blk.inf() > 2) {
      JordanBlock nb = blk;
      nb.A -= HalfInt::whole(1);
      nb.B += HalfInt::whole(1);
      insert_block_ordered(psi, pt, nb, t.point.t[pos] - 1, t.point.eta[pos], pos);
    }
    Target c = engine::child_target(t, std::move(psi), std::move(pt));

    ReductionEdge e;
    e.child = child(c);
    LadderMatrix seg = engine::one_row(blk.rho, blk.zeta * blk.B, -(blk.zeta * blk.A));
    e.segments.push_back(seg);
    shrink_ledger(e, t, c, seg);
    e.note = "t >= 1: inf drops by two on the same side";
    return e;
  }

  // {(A,B), (B_l,B_l)} -> {(A,A), (A-1,B+1)} with the segment <zeta B ... -zeta B_l>
  ReductionEdge trade_edge(const Target& t, size_t pos, size_t flat_top) {
    const JordanBlock blk = t.psi.blocks[pos];
    const JordanBlock fl = t.psi.blocks[flat_top];
    PsiParameter psi = t.psi;
    PacketPoint pt = t.point;
    Sign eta_flat = t.point.eta[flat_top];
    long long tt = t.point.t[pos];
    Sign eta = t.point.eta[pos];
    if (pos > flat_top) {
      engine::erase_block(psi, pt, pos);
      engine::erase_block(psi, pt, flat_top);
    } else {
      engine::erase_block(psi, pt, flat_top);
      engine::erase_block(psi, pt, pos);
    }
    JordanBlock top;
    top.rho = blk.rho;
    top.A = blk.A;
    top.B = blk.A;
    top.zeta = blk.zeta;
    JordanBlock inner = blk;
    inner.A -= HalfInt::whole(1);
    inner.B += HalfInt::whole(1);
    size_t at = insert_block_ordered(psi, pt, inner, tt - 1, eta, std::min(pos, flat_top));
    insert_block_ordered(psi, pt, top, 0, eta_flat, at + 1);
    Target c = engine::child_target(t, std::move(psi), std::move(pt));

    ReductionEdge e;
    e.child = child(c);
    LadderMatrix seg = engine::one_row(blk.rho, blk.zeta * blk.B, -(blk.zeta * fl.B));
    e.segments.push_back(seg);
    shrink_ledger(e, t, c, seg);
    e.note = "t >= 1: the top in-between flat absorbs the stripped row";
    return e;
  }

  // remove the in-between flats, open the block into the fan [B, A-l]
  ReductionEdge fan_edge(const Target& t, size_t pos, const std::vector<size_t>& flats) {
    const JordanBlock blk = t.psi.blocks[pos];
    long long l = static_cast<long long>(flats.size());
    PsiParameter psi = t.psi;
    PacketPoint pt = t.point;
    std::vector<size_t> kill = flats;
    kill.push_back(pos);
    std::sort(kill.rbegin(), kill.rend());
    for (size_t k : kill) engine::erase_block(psi, pt, k);
    long long width = int_gap(blk.A, blk.B) - l;
    size_t at = std::min(pos, flats.empty() ? pos : flats.front());
    for (long long k = 0; k <= width; ++k) {
      JordanBlock nb;
      nb.rho = blk.rho;
      nb.A = blk.B + HalfInt::whole(k);
      nb.B = nb.A;
      nb.zeta = nb.B == HalfInt(0) ? Sign::plus : blk.zeta;
      at = insert_block_ordered(psi, pt, nb, 0, t.point.eta[pos] * parity_sign(k), at) + 1;
    }
    Target c = engine::child_target(t, std::move(psi), std::move(pt));

    ReductionEdge e;
    e.child = child(c);
    LFormalProduct all = engine::ratio_after_before(c, t);
    for (long long i = 1; i <= l; ++i) {
      LadderMatrix seg = engine::one_row(blk.rho, blk.zeta * t.psi.blocks[flats[i - 1]].B,
                                         -(blk.zeta * (blk.A - HalfInt::whole(i - 1))));
      all *= exchange_factor_right(seg, t.rho0, t.a0);
      if (t.zeta0() == Sign::plus) all *= exchange_factor_left(seg, t.rho0, t.a0);
      else
        e.ledger.push_back(engine::entry("right exchange factor " + std::to_string(i),
                                         exchange_factor_right(seg, t.rho0, t.a0),
                                         LedgerEntry::Check::order_eq, 0, t.s0, false));
      e.segments.push_back(std::move(seg));
    }
    // the staircase factors cancel the flats' contributions exactly
    e.ledger.insert(e.ledger.begin(),
                    engine::entry("staircase factors * r(psi')/r(psi)", std::move(all),
                                  LedgerEntry::Check::order_eq, 0, t.s0, true));
    e.note = "t = 0: flats absorbed, fan [B, A-l]";
    return e;
  }

  void opposite_family_edges(const Target& t, CertNode& node) {
    auto sel = *engine::select_nonflat(t, -t.zeta0());
    if (sel.flats.empty()) {
      if (t.point.t[sel.pos] == 0) node.edges.push_back(isole_t0_edge(t, sel.pos));
      else node.edges.push_back(shrink_edge(t, sel.pos, CaseTag::Isole_tpos));
      return;
    }
    if (t.point.t[sel.pos] == 0) {
      node.edges.push_back(fan_edge(t, sel.pos, sel.flats));
    } else {
      node.edges.push_back(trade_edge(t, sel.pos, sel.flats.back()));
      node.edges.push_back(shrink_edge(t, sel.pos, CaseTag::NonIsole_2));
    }
  }

  // x-shrink: a flat (x,x,+) with B < x <= B0 drops to (x-1,x-1,+)
  ReductionEdge x_shrink_edge(const Target& t, size_t flat) {
    const JordanBlock blk = t.psi.blocks[flat];
    PsiParameter psi = t.psi;
    PacketPoint pt = t.point;
    Sign eta = t.point.eta[flat];
    engine::erase_block(psi, pt, flat);
    if (blk.B > HalfInt::half(1)) {
      JordanBlock nb = blk;
      nb.A -= HalfInt::whole(1);
      nb.B -= HalfInt::whole(1);
      if (nb.B == HalfInt(0)) nb.zeta = Sign::plus;
      insert_block_ordered(psi, pt, nb, 0, eta, flat);
    }
    Target c = engine::child_target(t, std::move(psi), std::move(pt));

    ReductionEdge e;
    e.child = child(c);
    e.segments.push_back(engine::one_row(blk.rho, blk.B, blk.B));
    e.ledger.push_back(engine::entry("r(psi')/r(psi)", engine::ratio_after_before(c, t),
                                     LedgerEntry::Check::order_eq, 0, t.s0, true));
    if (blk.rho == t.rho0) {
      e.ledger.push_back(engine::entry("pair lemma, incoming exchange",
                                       pair_normalizer_quotient(t.rho0, t.A0(), -t.B0(), blk.B, blk.B),
                                       LedgerEntry::Check::order_eq, 0, HalfInt(0), false));
      e.ledger.push_back(engine::entry("pair lemma, outgoing exchange",
                                       pair_normalizer_quotient(t.rho0, t.A0(), -t.B0(), -blk.B, -blk.B),
                                       LedgerEntry::Check::order_eq, 0, HalfInt(0), false));
    }
    e.note = "possible Jacquet exponent in ]B, B0]: flat drops by one";
    return e;
  }

  // pairing edges: fan opens and v top fan values pair off with the lowest
  // high flats; all paired data stays strictly above B0
  ReductionEdge pairing_edge(const Target& t, size_t pos, const std::vector<size_t>& flats,
                             long long lprime, long long v) {
    const JordanBlock blk = t.psi.blocks[pos];
    PsiParameter psi = t.psi;
    PacketPoint pt = t.point;
    std::vector<size_t> kill;
    for (long long w = 1; w <= v; ++w) kill.push_back(flats[lprime + w - 1]);
    kill.push_back(pos);
    std::sort(kill.rbegin(), kill.rend());
    for (size_t k : kill) engine::erase_block(psi, pt, k);
    long long width = int_gap(blk.A, blk.B) - v;
    size_t at = pos;
    for (size_t k : kill) at = std::min(at, k);
    for (long long k = 0; k <= width; ++k) {
      JordanBlock nb;
      nb.rho = blk.rho;
      nb.A = blk.B + HalfInt::whole(k);
      nb.B = nb.A;
      nb.zeta = nb.B == HalfInt(0) ? Sign::plus : blk.zeta;
      at = insert_block_ordered(psi, pt, nb, 0, t.point.eta[pos] * parity_sign(k), at) + 1;
    }
    Target c = engine::child_target(t, std::move(psi), std::move(pt));

    ReductionEdge e;
    e.child = child(c);
    long long cell = blk.rho == t.rho0 && contribution_table(blk, t.a0, t.b0()) ? 1 : 0;
    e.ledger.push_back(engine::entry("r(psi')/r(psi)", engine::ratio_after_before(c, t),
                                     LedgerEntry::Check::order_eq, cell, t.s0, true));
    for (long long w = 1; w <= v; ++w) {
      const JordanBlock& fl = t.psi.blocks[flats[lprime + w - 1]];
      LadderMatrix seg = engine::one_row(blk.rho, fl.B, -(blk.A - HalfInt::whole(w - 1)));
      e.ledger.push_back(engine::entry("paired exchange, left",
                                       exchange_factor_left(seg, t.rho0, t.a0),
                                       LedgerEntry::Check::order_eq, 0, t.s0, true));
      e.ledger.push_back(engine::entry("paired exchange, right",
                                       exchange_factor_right(seg, t.rho0, t.a0),
                                       LedgerEntry::Check::order_eq, 0, t.s0, true));
      e.segments.push_back(std::move(seg));
    }
    std::ostringstream os;
    os << "t = 0 fan with " << v << " high flats paired off";
    e.note = os.str();
    return e;
  }

  void same_sign_edges(const Target& t, CertNode& node) {
    auto sel = *engine::select_nonflat(t, Sign::plus);
    const JordanBlock& blk = t.psi.blocks[sel.pos];
    // branch on every uncertified Jacquet exponent in ]B, B0]
    for (size_t i = 0; i < t.psi.size(); ++i) {
      const auto& f = t.psi.blocks[i];
      if (f.rho == blk.rho && f.zeta == Sign::plus && f.flat() && f.B > blk.B && f.B <= t.B0())
        node.edges.push_back(x_shrink_edge(t, i));
    }
    if (t.point.t[sel.pos] >= 1) {
      node.edges.push_back(shrink_edge(t, sel.pos, CaseTag::NonIsoleSameSign));
      return;
    }
    long long lprime = 0;
    for (size_t f : sel.flats)
      if (t.psi.blocks[f].B <= t.B0()) ++lprime;
    long long high = static_cast<long long>(sel.flats.size()) - lprime;
    long long vmax = 0;
    while (vmax < high) {
      HalfInt fan_val = blk.A - HalfInt::whole(vmax);
      if (!(fan_val > t.B0())) break;
      Sign fan_eta = t.point.eta[sel.pos] * parity_sign(int_gap(fan_val, blk.B));
      if (fan_eta != t.point.eta[sel.flats[lprime + vmax]]) break;
      ++vmax;
    }
    for (long long v = 0; v <= vmax; ++v)
      node.edges.push_back(pairing_edge(t, sel.pos, sel.flats, lprime, v));
  }

  ReductionEdge bottom_edge(const Target& t, CaseTag tag) {
    std::optional<size_t> posq;
    for (size_t i = 0; i < t.psi.size(); ++i)
      if (t.psi.blocks[i].zeta == Sign::minus &&
          (!posq || t.psi.blocks[i].B < t.psi.blocks[*posq].B))
        posq = i;
    size_t pos = *posq;
    const JordanBlock blk = t.psi.blocks[pos];
    HalfInt delta;
    JordanBlock nb;
    nb.rho = blk.rho;
    nb.zeta = Sign::plus;
    bool has_new = true;
    long long tt = t.point.t[pos];
    Sign eta = t.point.eta[pos];
    long long new_t = 0;
    Sign new_eta = Sign::plus;
    switch (tag) {
      case CaseTag::BottomHalfInt_i:
        delta = HalfInt::half(1);
        nb.A = blk.A - blk.B - HalfInt::half(1);
        nb.B = HalfInt::half(1);
        has_new = blk.A != blk.B;
        new_t = (eta == Sign::plus) ? tt : tt - 1;
        new_eta = -eta;
        break;
      case CaseTag::BottomHalfInt_ii:
        delta = HalfInt::half(3);
        nb.A = blk.A - blk.B + HalfInt::half(1);
        nb.B = HalfInt::half(1);
        new_t = 0;
        new_eta = eta;
        break;
      default:  // BottomInt_iii
        delta = HalfInt::whole(1);
        nb.A = blk.A - blk.B;
        nb.B = HalfInt(0);
        new_t = tt;
        new_eta = eta;
        break;
    }
    PsiParameter psi = t.psi;
    PacketPoint pt = t.point;
    engine::erase_block(psi, pt, pos);
    if (has_new) {
      if (nb.B == HalfInt(0)) nb.zeta = Sign::plus;
      long long inf_new = int_gap(nb.A, nb.B) + 1;
      new_t = std::max(0LL, std::min(new_t, inf_new / 2));
      if (2 * new_t == inf_new) new_eta = Sign::plus;
      insert_block_ordered(psi, pt, nb, new_t, new_eta, pos);
    }
    Target c = engine::child_target(t, std::move(psi), std::move(pt));

    ReductionEdge e;
    e.child = child(c);
    // the staircase sigma: rows zeta(B-j+1) ... zeta(A-j+1), j = 1..B-delta+1
    LadderMatrix stairs;
    stairs.rho = blk.rho;
    long long rows = int_gap(blk.B, delta) + 1;
    for (long long j = 1; j <= rows; ++j)
      stairs.rows.push_back(Segment{blk.zeta * (blk.B - HalfInt::whole(j - 1)),
                                    blk.zeta * (blk.A - HalfInt::whole(j - 1))});
    if (!stairs.rows.empty()) e.segments.push_back(stairs);

    long long cell = blk.rho == t.rho0 && contribution_table(blk, t.a0, t.b0()) ? 1 : 0;
    e.ledger.push_back(engine::entry("r(psi'')/r(psi)", engine::ratio_after_before(c, t),
                                     LedgerEntry::Check::order_eq, cell, t.s0, true));
    LFormalProduct stair_factor;
    for (const auto& row : stairs.rows)
      stair_factor *= row_exchange_factor(stairs.rho, row, t.rho0, t.a0);
    e.ledger.push_back(engine::entry("staircase exchange factor", std::move(stair_factor),
                                     LedgerEntry::Check::order_ge, -cell, t.s0, true));
    e.note = "lowest opposite-side block crosses to the plus side";
    return e;
  }

  // one elementary-descent outcome: the lowest minus-side flat crosses to the
  // plus side at level delta (absent in the eta = + variant), the chain flats
  // delta .. delta+k-1 each rise by one, and the inducing segment stops at
  // btilde = delta + k
  ReductionEdge bottom_final_edge(const Target& t, size_t pos, bool add_new, HalfInt delta,
                                  long long k) {
    const JordanBlock blk = t.psi.blocks[pos];
    Sign eta = t.point.eta[pos];
    PsiParameter psi = t.psi;
    PacketPoint pt = t.point;
    engine::erase_block(psi, pt, pos);
    for (long long j = k - 1; j >= 0; --j) {  // top of the chain first
      HalfInt level = delta + HalfInt::whole(j);
      for (size_t i = 0; i < psi.blocks.size(); ++i) {
        const auto fb = psi.blocks[i];
        if (fb.rho == blk.rho && fb.zeta == Sign::plus && fb.flat() && fb.B == level) {
          Sign fe = pt.eta[i];
          long long ft = pt.t[i];
          engine::erase_block(psi, pt, i);
          JordanBlock rb = fb;
          rb.A += HalfInt::whole(1);
          rb.B += HalfInt::whole(1);
          insert_block_ordered(psi, pt, rb, ft, fe, i);
          break;
        }
      }
    }
    if (add_new) {
      JordanBlock nb;
      nb.rho = blk.rho;
      nb.A = delta;
      nb.B = delta;
      nb.zeta = Sign::plus;
      insert_block_ordered(psi, pt, nb, 0, eta, 0);
    }
    Target c = engine::child_target(t, std::move(psi), std::move(pt));

    HalfInt btilde = add_new ? delta + HalfInt::whole(k) : HalfInt::half(-1);
    ReductionEdge e;
    e.child = child(c);
    bool same_rho = blk.rho == t.rho0;
    long long hit_b = (same_rho && t.A0() == blk.B) ? 1 : 0;
    e.ledger.push_back(engine::entry("r(psi~)/r(psi)", engine::ratio_after_before(c, t),
                                     LedgerEntry::Check::order_eq, hit_b, t.s0, true));
    if (btilde + HalfInt::whole(1) <= blk.B) {
      LadderMatrix seg = engine::one_row(blk.rho, -blk.B, -(btilde + HalfInt::whole(1)));
      e.segments.push_back(seg);
      long long hit_bt = (same_rho && t.A0() == btilde) ? 1 : 0;
      e.ledger.push_back(engine::entry("segment exchange factor",
                                       exchange_factor_right(seg, t.rho0, t.a0),
                                       LedgerEntry::Check::order_eq, -hit_b + hit_bt, t.s0, true));
      e.ledger.push_back(engine::entry("segment exchange factor, left",
                                       exchange_factor_left(seg, t.rho0, t.a0),
                                       LedgerEntry::Check::order_eq, 0, t.s0, true));
    }
    std::ostringstream os;
    os << "elementary descent, stop level " << btilde.str();
    e.note = os.str();
    return e;
  }

  void bottom_final_edges(const Target& t, CertNode& node) {
    std::optional<size_t> posq;
    for (size_t i = 0; i < t.psi.size(); ++i)
      if (t.psi.blocks[i].zeta == Sign::minus &&
          (!posq || t.psi.blocks[i].B < t.psi.blocks[*posq].B))
        posq = i;
    size_t pos = *posq;
    const JordanBlock blk = t.psi.blocks[pos];
    bool half = !blk.B.integral();

    if (half && (t.point.t[pos] != 0 || t.point.eta[pos] == Sign::plus)) {
      node.edges.push_back(bottom_final_edge(t, pos, false, HalfInt::half(1), 0));
      return;
    }
    HalfInt delta = half ? HalfInt::half(1) : HalfInt(0);
    auto chain_flat_at = [&](HalfInt level) {
      for (const auto& fb : t.psi.blocks)
        if (fb.rho == blk.rho && fb.zeta == Sign::plus && fb.flat() && fb.B == level) return true;
      return false;
    };
    if (blk.B == delta) {  // the block swaps sides in place, no segment
      node.edges.push_back(bottom_final_edge(t, pos, true, delta, 0));
      return;
    }
    for (long long k = 0;; ++k) {
      if (!(delta + HalfInt::whole(k) <= blk.B - HalfInt::whole(1))) break;
      if (k > 0 && !chain_flat_at(delta + HalfInt::whole(k - 1))) break;
      node.edges.push_back(bottom_final_edge(t, pos, true, delta, k));
    }
  }
};

inline Certificate run_reduction(const Target& t) {
  Certificate cert;
  ReductionBuilder builder(cert);
  cert.root = builder.expand(t);
  return cert;
}

}  // namespace arthur
