#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "arthur/params.hpp"

namespace arthur {

/*
  Packet combinatorics: points (t, eta) on the ordered block list, the sign
  character eps_{t,eta}, packet enumeration under the center constraint, the
  elementary three-case classification, and the bookkeeping side of the
  Jacquet-module constructions (descent schedules, support criterion).

  Points index blocks by *position* in the ordered sequence, never by value,
  so multiplicity needs no special casing.
*/

struct PacketPoint {
  std::vector<long long> t;
  std::vector<Sign> eta;

  bool operator==(const PacketPoint&) const = default;
};

inline long long t_range_max(const JordanBlock& blk) { return blk.inf() / 2; }

inline void check_point(const PsiParameter& psi, const PacketPoint& pt) {
  if (pt.t.size() != psi.size() || pt.eta.size() != psi.size())
    throw std::invalid_argument("point: size mismatch with psi");
  for (size_t i = 0; i < psi.size(); ++i) {
    long long inf = psi.blocks[i].inf();
    if (pt.t[i] < 0 || pt.t[i] > inf / 2)
      throw std::invalid_argument("point: t out of range at position " + std::to_string(i));
    if (2 * pt.t[i] == inf && pt.eta[i] != Sign::plus)
      throw std::invalid_argument("point: eta forced to + at position " + std::to_string(i));
  }
}

// eps_{t,eta}(rho,a,b) = eta^{inf} * (-1)^{[inf/2] + t}
inline Sign epsilon_of(const JordanBlock& blk, long long t, Sign eta) {
  long long inf = blk.inf();
  return sign_pow(eta, inf) * parity_sign(inf / 2 + t);
}

inline Sign center_product(const PsiParameter& psi, const PacketPoint& pt) {
  Sign s = Sign::plus;
  for (size_t i = 0; i < psi.size(); ++i)
    s = s * epsilon_of(psi.blocks[i], pt.t[i], pt.eta[i]);
  return s;
}

// eps(s_psi) = prod eps^{b-1}; its sign weights the stable combination.
inline Sign epsilon_s_psi(const PsiParameter& psi, const PacketPoint& pt) {
  Sign s = Sign::plus;
  for (size_t i = 0; i < psi.size(); ++i)
    s = s * sign_pow(epsilon_of(psi.blocks[i], pt.t[i], pt.eta[i]), psi.blocks[i].b() - 1);
  return s;
}

struct PacketEntry {
  PacketPoint point;
  std::vector<Sign> eps;  // per position
  Sign stable_sign = Sign::plus;
};

// All (t, eta) with t in [0, [inf/2]], eta = + forced at t = inf/2, and
// center product equal to the Hasse sign. Lexicographic in position, t
// ascending, eta = + before eta = -.
inline std::vector<PacketEntry> enumerate_packet(const PsiParameter& psi) {
  if (!is_discrete_diagonal(psi))
    throw std::invalid_argument("enumerate_packet: psi must have discrete diagonal restriction");
  std::vector<PacketEntry> out;
  PacketPoint pt;
  pt.t.assign(psi.size(), 0);
  pt.eta.assign(psi.size(), Sign::plus);
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == psi.size()) {
      if (center_product(psi, pt) != psi.group.hasse) return;
      PacketEntry e;
      e.point = pt;
      for (size_t k = 0; k < psi.size(); ++k)
        e.eps.push_back(epsilon_of(psi.blocks[k], pt.t[k], pt.eta[k]));
      e.stable_sign = epsilon_s_psi(psi, pt);
      out.push_back(std::move(e));
      return;
    }
    long long inf = psi.blocks[i].inf();
    for (long long t = 0; t <= inf / 2; ++t)
      for (Sign eta : {Sign::plus, Sign::minus}) {
        if (2 * t == inf && eta == Sign::minus) continue;
        pt.t[i] = t;
        pt.eta[i] = eta;
        rec(i + 1);
      }
  };
  rec(0);
  return out;
}

// Insert a block (with its point data) near hint_pos, moved just enough to
// keep property (P). In a valid order the feasible window is nonempty.
inline size_t insert_block_ordered(PsiParameter& psi, PacketPoint& pt, const JordanBlock& blk,
                                   long long t, Sign eta, size_t hint_pos) {
  if (pt.t.size() != psi.size() || pt.eta.size() != psi.size())
    throw std::logic_error("insert_block_ordered: point data out of step with psi");
  size_t lo = 0, hi = psi.size();
  for (size_t i = 0; i < psi.size(); ++i) {
    const auto& y = psi.blocks[i];
    if (y.rho != blk.rho || y.zeta != blk.zeta) continue;
    if (blk.A > y.A && blk.B > y.B) lo = std::max(lo, i + 1);
    if (y.A > blk.A && y.B > blk.B) hi = std::min(hi, i);
  }
  if (lo > hi) throw std::logic_error("insert_block_ordered: no valid slot");
  size_t pos = std::clamp(hint_pos, lo, hi);
  psi.blocks.insert(psi.blocks.begin() + pos, blk);
  pt.t.insert(pt.t.begin() + pos, t);
  pt.eta.insert(pt.eta.begin() + pos, eta);
  return pos;
}

struct SupportPredicates {
  bool discret = false;
  bool sans_trou = false;
  bool alterne = false;
};

// For psi trivial on the second SL(2) (all b = 1) and a sign map on its
// blocks: discreteness, the no-gap condition, and alternation of the signs.
inline SupportPredicates cuspidal_support_predicates(const PsiParameter& psi,
                                                     const std::vector<Sign>& eps) {
  if (eps.size() != psi.size()) throw std::invalid_argument("eps: size mismatch");
  for (const auto& blk : psi.blocks)
    if (blk.b() != 1) throw std::invalid_argument("cuspidal_support_predicates: need b = 1");
  SupportPredicates out;
  auto diag = restriction_to_diagonal(psi);
  out.discret = is_discrete_diagonal(psi);
  auto find_pos = [&](const CuspidalLabel& rho, long long a) -> std::optional<size_t> {
    for (size_t i = 0; i < psi.size(); ++i)
      if (psi.blocks[i].rho == rho && psi.blocks[i].a() == a) return i;
    return std::nullopt;
  };
  out.sans_trou = true;
  out.alterne = true;
  for (size_t i = 0; i < psi.size(); ++i) {
    long long a = psi.blocks[i].a();
    if (a > 2 && !find_pos(psi.blocks[i].rho, a - 2)) out.sans_trou = false;
    if (a == 2 && eps[i] != Sign::minus) out.alterne = false;
    if (auto j = find_pos(psi.blocks[i].rho, a - 2))
      if (eps[i] == eps[*j]) out.alterne = false;
  }
  return out;
}

/* ---------------- elementary morphisms: the three cases ---------------- */

enum class ElementaryTag { Cuspidal, Hole, TwoSubmodules };

struct ElementaryCase {
  ElementaryTag tag = ElementaryTag::Cuspidal;
  size_t pos = 0;                     // witness position (Hole / TwoSubmodules)
  std::optional<size_t> partner;      // second removed block (TwoSubmodules)
  PsiParameter psi_prime;
  PacketPoint point_prime;
  // inducing exponent data: Hole contributes the single exponent (a-b)/2,
  // TwoSubmodules the segment (a-b)/2 ... -(a'-b')/2; both submodule choices
  // of the third case are equally valid, which the flag records.
  std::vector<HalfInt> induced_exponents;
  bool submodule_ambiguous = false;
};

inline ElementaryCase elementary_classify(const PsiParameter& psi, const PacketPoint& pt) {
  check_point(psi, pt);
  if (psi.measures().ell() != 0)
    throw std::invalid_argument("elementary_classify: psi must be elementary");
  if (!is_discrete_diagonal(psi))
    throw std::invalid_argument("elementary_classify: psi must have discrete diagonal restriction");

  auto find_sup = [&](const CuspidalLabel& rho, long long s) -> std::optional<size_t> {
    for (size_t i = 0; i < psi.size(); ++i)
      if (psi.blocks[i].rho == rho && psi.blocks[i].sup() == s) return i;
    return std::nullopt;
  };
  auto erase_positions = [&](std::vector<size_t> kill) {
    ElementaryCase e;
    e.psi_prime = psi;
    e.point_prime = pt;
    std::sort(kill.rbegin(), kill.rend());
    for (size_t k : kill) {
      e.psi_prime.blocks.erase(e.psi_prime.blocks.begin() + k);
      e.point_prime.t.erase(e.point_prime.t.begin() + k);
      e.point_prime.eta.erase(e.point_prime.eta.begin() + k);
    }
    return e;
  };

  // genuine gap: (rho, sup) present with sup > 2, (rho, sup-2) absent
  for (size_t i = 0; i < psi.size(); ++i) {
    const auto& blk = psi.blocks[i];
    if (blk.sup() > 2 && !find_sup(blk.rho, blk.sup() - 2)) {
      ElementaryCase e = erase_positions({i});
      e.tag = ElementaryTag::Hole;
      e.pos = i;
      JordanBlock nb = blk;  // sup drops by 2, same side
      nb.A -= HalfInt::whole(1);
      nb.B = nb.A;
      if (nb.B == HalfInt(0)) nb.zeta = Sign::plus;
      insert_block_ordered(e.psi_prime, e.point_prime, nb, 0, pt.eta[i], i);
      e.induced_exponents = {HalfInt((blk.a() - blk.b()))};  // (a-b)/2 as HalfInt
      return e;
    }
  }
  // adjacent pair with equal sign: two submodules, both blocks removed
  for (size_t i = 0; i < psi.size(); ++i) {
    const auto& blk = psi.blocks[i];
    if (blk.sup() <= 2) continue;
    if (auto j = find_sup(blk.rho, blk.sup() - 2)) {
      Sign ei = epsilon_of(blk, pt.t[i], pt.eta[i]);
      Sign ej = epsilon_of(psi.blocks[*j], pt.t[*j], pt.eta[*j]);
      if (ei == ej) {
        ElementaryCase e = erase_positions({i, *j});
        e.tag = ElementaryTag::TwoSubmodules;
        e.pos = i;
        e.partner = *j;
        e.submodule_ambiguous = true;
        HalfInt from((blk.a() - blk.b()));
        HalfInt to(-(psi.blocks[*j].a() - psi.blocks[*j].b()));
        e.induced_exponents = {from, to};
        return e;
      }
    }
  }
  // sup = 2 with eta = +: treated with the gap case, the block disappears
  for (size_t i = 0; i < psi.size(); ++i) {
    const auto& blk = psi.blocks[i];
    if (blk.sup() == 2 && pt.eta[i] == Sign::plus) {
      ElementaryCase e = erase_positions({i});
      e.tag = ElementaryTag::Hole;
      e.pos = i;
      e.induced_exponents = {HalfInt((blk.a() - blk.b()))};
      return e;
    }
  }
  ElementaryCase e = erase_positions({});
  e.tag = ElementaryTag::Cuspidal;
  return e;
}

/* -------------- one step of the discrete-diagonal recursion -------------- */

struct RestrictionStep {
  PsiParameter psi_prime;
  PacketPoint point_prime;
  // present exactly when t > 0: the segment rho| |^{zeta B} ... rho| |^{-zeta A}
  std::optional<std::pair<HalfInt, HalfInt>> segment;
  CuspidalLabel rho;
};

inline RestrictionStep restriction_discrete_step(const PsiParameter& psi,
                                                 const PacketPoint& pt, size_t pos) {
  check_point(psi, pt);
  if (!is_discrete_diagonal(psi))
    throw std::invalid_argument("restriction_discrete_step: psi must have discrete diagonal restriction");
  if (pos >= psi.size()) throw std::invalid_argument("restriction_discrete_step: bad position");
  const JordanBlock blk = psi.blocks[pos];
  if (blk.inf() <= 1) throw std::invalid_argument("restriction_discrete_step: need inf(a,b) > 1");

  RestrictionStep out;
  out.psi_prime = psi;
  out.point_prime = pt;
  out.rho = blk.rho;
  out.psi_prime.blocks.erase(out.psi_prime.blocks.begin() + pos);
  out.point_prime.t.erase(out.point_prime.t.begin() + pos);
  out.point_prime.eta.erase(out.point_prime.eta.begin() + pos);

  if (pt.t[pos] == 0) {
    // replace the block by the fan (rho, C, C, zeta), C in [B, A]; the signs
    // alternate starting at eta, which is what makes the product of the fan's
    // eps values reproduce eta^inf (-1)^[inf/2]
    long long width = int_gap(blk.A, blk.B);
    size_t at = pos;
    for (long long k = 0; k <= width; ++k) {
      JordanBlock nb;
      nb.rho = blk.rho;
      nb.A = blk.B + HalfInt::whole(k);
      nb.B = nb.A;
      nb.zeta = (nb.B == HalfInt(0)) ? Sign::plus : blk.zeta;
      at = insert_block_ordered(out.psi_prime, out.point_prime, nb, 0,
                                pt.eta[pos] * parity_sign(k), at) + 1;
    }
  } else {
    // shrink inf by 2 on the same side; the block disappears when inf = 2
    if (blk.inf() > 2) {
      JordanBlock nb = blk;
      nb.A -= HalfInt::whole(1);
      nb.B += HalfInt::whole(1);
      insert_block_ordered(out.psi_prime, out.point_prime, nb, pt.t[pos] - 1, pt.eta[pos], pos);
    }
    out.segment = std::make_pair(blk.zeta * blk.B, -(blk.zeta * blk.A));
  }
  return out;
}

/* ------------------------- Jacquet bookkeeping ------------------------- */

struct JacStep {
  CuspidalLabel rho;
  Sign zeta = Sign::plus;
  HalfInt from, to;  // exponents zeta(B+j) ... zeta(A+j)
};

// The schedule computing the packet of psi from the packet of psi_big:
// blocks are lowered smallest first, each by rows j = T .. 1.
inline std::vector<JacStep> jac_psi_descent(const PsiParameter& psi_big,
                                            const PsiParameter& psi,
                                            const std::vector<long long>& shifts) {
  if (!dominates(psi_big, psi)) throw std::invalid_argument("jac_psi_descent: dominance fails");
  if (shifts.size() != psi.size()) throw std::invalid_argument("jac_psi_descent: shift count");
  for (size_t i = 0; i < psi.size(); ++i)
    if (psi.blocks[i].A + HalfInt::whole(shifts[i]) != psi_big.blocks[i].A)
      throw std::invalid_argument("jac_psi_descent: shifts do not match psi_big");
  std::vector<JacStep> steps;
  for (size_t i = 0; i < psi.size(); ++i) {
    const auto& blk = psi.blocks[i];
    for (long long j = shifts[i]; j >= 1; --j) {
      JacStep st;
      st.rho = blk.rho;
      st.zeta = blk.zeta;
      st.from = blk.zeta * (blk.B + HalfInt::whole(j));
      st.to = blk.zeta * (blk.A + HalfInt::whole(j));
      steps.push_back(st);
    }
  }
  return steps;
}

// Necessary condition for Jac_{zeta B, ..., zeta A} pi != 0 (B != 0): a chain
// (rho, A_i, B_i, zeta) in Jord(psi) with B_1 = B, B_i in ]B_{i-1}, A_{i-1}+1],
// A_v >= A. Exhaustive search; false certifies vanishing.
inline bool jac_support_check(const PsiParameter& psi, const CuspidalLabel& rho, Sign zeta,
                              HalfInt B, HalfInt A) {
  if (B == HalfInt(0)) throw std::invalid_argument("jac_support_check: B = 0 not covered");
  std::vector<size_t> cand;
  for (size_t i = 0; i < psi.size(); ++i)
    if (psi.blocks[i].rho == rho && psi.blocks[i].zeta == zeta) cand.push_back(i);
  std::vector<bool> used(psi.size(), false);
  std::function<bool(HalfInt, HalfInt)> grow = [&](HalfInt b_prev, HalfInt a_prev) -> bool {
    if (a_prev >= A) return true;
    for (size_t i : cand) {
      if (used[i]) continue;
      const auto& blk = psi.blocks[i];
      if (blk.B > b_prev && blk.B <= a_prev + 1) {
        used[i] = true;
        if (grow(blk.B, blk.A)) return true;
        used[i] = false;
      }
    }
    return false;
  };
  for (size_t i : cand) {
    if (psi.blocks[i].B != B) continue;
    used[i] = true;
    if (grow(psi.blocks[i].B, psi.blocks[i].A)) return true;
    used[i] = false;
  }
  return false;
}

}  // namespace arthur
