#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arthur/half_int.hpp"

namespace arthur {

/*
  Core bookkeeping for Arthur parameters of classical groups: an unramified
  datum is a totally ordered multiset of Jordan blocks (rho, a, b), stored
  canonically as (rho, A, B, zeta) with

      A = (a+b)/2 - 1,   B = |a-b|/2,   zeta = sign(a-b)  (+ when a = b).

  Everything here is an immutable value; operations are pure functions.
*/

enum class SelfdualKind { orthogonal, symplectic };
enum class RGKind { sym2, wedge2 };

inline const char* kind_name(SelfdualKind k) {
  return k == SelfdualKind::orthogonal ? "orth" : "symp";
}
inline const char* rg_name(RGKind k) { return k == RGKind::sym2 ? "sym2" : "wedge2"; }

// A cuspidal datum is opaque: an id, the dimension d_rho of the underlying
// Weil-group representation, and its self-dual type. Two labels agree iff
// their ids do; a parameter validates that equal ids carry equal data.
struct CuspidalLabel {
  std::string id;
  int dim = 1;
  SelfdualKind kind = SelfdualKind::orthogonal;

  bool operator==(const CuspidalLabel& o) const { return id == o.id; }
  bool operator!=(const CuspidalLabel& o) const { return id != o.id; }
  bool operator<(const CuspidalLabel& o) const { return id < o.id; }
};

struct GroupType {
  Sign hasse = Sign::plus;                      // epsilon_G
  RGKind rg = RGKind::sym2;                     // which factor of C^n (x) C^n is r_G
  SelfdualKind star = SelfdualKind::orthogonal; // type of G*
};

struct JordanBlock {
  CuspidalLabel rho;
  HalfInt A, B;
  Sign zeta = Sign::plus;

  bool flat() const { return A == B; }             // inf(a,b) = 1
  long long inf() const { return int_gap(A, B) + 1; }
  long long sup() const { return (A + B).as_int() + 1; }
  long long a() const { return zeta == Sign::plus ? sup() : inf(); }
  long long b() const { return zeta == Sign::plus ? inf() : sup(); }

  bool same_block(const JordanBlock& o) const {
    return rho == o.rho && A == o.A && B == o.B && zeta == o.zeta;
  }

  void check() const {
    if (B < HalfInt(0) || A < B) throw std::invalid_argument("block: need A >= B >= 0");
    if ((A - B).tw % 2 != 0 || (A + B).tw % 2 != 0)
      throw std::invalid_argument("block: A-B and A+B must be integers");
    if (B == HalfInt(0) && zeta != Sign::plus)
      throw std::invalid_argument("block: zeta = + when a = b");
  }
};

inline JordanBlock block_from_ab(const CuspidalLabel& rho, long long a, long long b) {
  if (a < 1 || b < 1) throw std::invalid_argument("block_from_ab: a, b >= 1");
  JordanBlock blk;
  blk.rho = rho;
  blk.A = HalfInt(a + b - 2);
  blk.B = HalfInt(std::llabs(a - b));
  blk.zeta = a >= b ? Sign::plus : Sign::minus;
  return blk;
}

inline std::pair<long long, long long> block_to_ab(const JordanBlock& blk) {
  return {blk.a(), blk.b()};
}

// Type of the m-dimensional SL(2) irreducible: orthogonal for m odd,
// symplectic for m even; types multiply like signs.
inline SelfdualKind sl2_type(long long m) {
  return m % 2 != 0 ? SelfdualKind::orthogonal : SelfdualKind::symplectic;
}
inline SelfdualKind kind_product(SelfdualKind x, SelfdualKind y) {
  return x == y ? SelfdualKind::orthogonal : SelfdualKind::symplectic;
}

inline bool good_parity(const JordanBlock& blk, const GroupType& g) {
  SelfdualKind t = kind_product(kind_product(sl2_type(blk.a()), sl2_type(blk.b())), blk.rho.kind);
  // kind(rho) * type[a] * type[b], associative and commutative
  return t == g.star;
}

struct Measures {
  long long ell_plus = 0, ell_minus = 0, n_minus = 0;
  long long ell() const { return ell_plus + ell_minus; }
  bool operator==(const Measures&) const = default;
};

struct PsiParameter {
  std::vector<JordanBlock> blocks;  // the chosen total order, multiplicity kept
  GroupType group;

  size_t size() const { return blocks.size(); }

  void check() const {
    std::map<std::string, std::pair<int, SelfdualKind>> seen;
    for (const auto& blk : blocks) {
      blk.check();
      auto [it, fresh] = seen.try_emplace(blk.rho.id, blk.rho.dim, blk.rho.kind);
      if (!fresh && (it->second.first != blk.rho.dim || it->second.second != blk.rho.kind))
        throw std::invalid_argument("psi: cuspidal id '" + blk.rho.id +
                                    "' used with inconsistent data");
    }
    if (auto bad = order_violation())
      throw std::invalid_argument("psi: order violates property (P) at positions " +
                                  std::to_string(bad->first) + "," +
                                  std::to_string(bad->second));
  }

  // Property (P): for equal rho and zeta, a block with strictly larger A and
  // strictly larger B must come later. Returns the offending pair if any.
  std::optional<std::pair<size_t, size_t>> order_violation() const {
    for (size_t i = 0; i < blocks.size(); ++i)
      for (size_t j = i + 1; j < blocks.size(); ++j) {
        const auto &x = blocks[i], &y = blocks[j];
        if (x.rho == y.rho && x.zeta == y.zeta && x.A > y.A && x.B > y.B)
          return std::make_pair(i, j);
      }
    return std::nullopt;
  }
  bool order_valid() const { return !order_violation().has_value(); }

  // The rigid total order (per cuspidal: by |a-b|, then a+b, then a >= b).
  // Nothing downstream depends on it; it is offered as a validator only.
  bool canonical_strong_order_valid() const {
    auto rank = [](const JordanBlock& b) {
      return std::tuple(b.B.tw, (b.A + b.B).tw, b.zeta == Sign::plus ? 1 : 0);
    };
    for (size_t i = 0; i < blocks.size(); ++i)
      for (size_t j = i + 1; j < blocks.size(); ++j)
        if (blocks[i].rho == blocks[j].rho && rank(blocks[j]) < rank(blocks[i])) return false;
    return true;
  }

  std::optional<std::pair<size_t, size_t>> duplicate_pair() const {
    for (size_t i = 0; i < blocks.size(); ++i)
      for (size_t j = i + 1; j < blocks.size(); ++j)
        if (blocks[i].same_block(blocks[j])) return std::make_pair(i, j);
    return std::nullopt;
  }

  bool good() const {
    return std::all_of(blocks.begin(), blocks.end(),
                       [&](const JordanBlock& b) { return good_parity(b, group); });
  }
  std::vector<size_t> bad_parity_positions() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < blocks.size(); ++i)
      if (!good_parity(blocks[i], group)) out.push_back(i);
    return out;
  }

  // trivial on the second SL(2): every block is (rho, a, 1)
  bool tempered() const {
    return std::all_of(blocks.begin(), blocks.end(),
                       [](const JordanBlock& b) { return b.flat() && b.zeta == Sign::plus; });
  }
  bool elementary() const {
    return std::all_of(blocks.begin(), blocks.end(),
                       [](const JordanBlock& b) { return b.flat(); });
  }

  Measures measures() const {
    Measures m;
    for (const auto& blk : blocks) {
      long long d = int_gap(blk.A, blk.B);
      if (blk.zeta == Sign::plus) m.ell_plus += d;
      else { m.ell_minus += d; ++m.n_minus; }
    }
    return m;
  }

  long long dim() const {  // dimension of the composed W_F x SL2 x SL2 representation
    long long n = 0;
    for (const auto& blk : blocks) n += blk.rho.dim * blk.a() * blk.b();
    return n;
  }
};

// psi restricted to W_F times the diagonal SL(2): each block contributes
// (rho, sup(a,b)); multiplicities kept.
inline std::vector<std::pair<CuspidalLabel, long long>>
restriction_to_diagonal(const PsiParameter& psi) {
  std::vector<std::pair<CuspidalLabel, long long>> out;
  out.reserve(psi.blocks.size());
  for (const auto& blk : psi.blocks) out.emplace_back(blk.rho, blk.sup());
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.first.id != y.first.id ? x.first.id < y.first.id : x.second < y.second;
  });
  return out;
}

inline bool is_discrete_diagonal(const PsiParameter& psi) {
  auto d = restriction_to_diagonal(psi);
  return std::adjacent_find(d.begin(), d.end(), [](const auto& x, const auto& y) {
           return x.first == y.first && x.second == y.second;
         }) == d.end();
}

// Positionwise dominance: same rho, equal inf, same side, sup grows.
inline bool dominates(const PsiParameter& big, const PsiParameter& psi) {
  if (big.blocks.size() != psi.blocks.size()) return false;
  for (size_t i = 0; i < psi.blocks.size(); ++i) {
    const auto &x = big.blocks[i], &y = psi.blocks[i];
    if (x.rho != y.rho) return false;
    if (x.inf() != y.inf()) return false;
    if ((x.a() - x.b()) * (y.a() - y.b()) < 0) return false;
    if (x.sup() < y.sup()) return false;
  }
  return true;
}

struct DominantResult {
  PsiParameter psi_big;
  std::vector<long long> shifts;  // per position
};

/*
  Raise psi to a parameter of discrete diagonal restriction dominating it:
  block i becomes (rho, A + T_i, B + T_i, zeta). The shifts are the smallest
  multiples of base_gap that are monotone along the order, make the shifted
  sizes strictly increase within each rho, and put each shifted B at least
  two above every earlier same-(rho,zeta) shifted A. The last condition is
  the separation the Jacquet descent schedule needs.
*/
inline DominantResult build_dominant(const PsiParameter& psi, long long base_gap = 1) {
  if (base_gap < 1) throw std::invalid_argument("build_dominant: base_gap >= 1");
  if (!psi.good()) throw std::invalid_argument("build_dominant: psi must have good parity");
  psi.check();

  DominantResult res;
  res.psi_big = psi;
  res.shifts.assign(psi.blocks.size(), 0);
  long long prev_t = 0;
  for (size_t i = 0; i < psi.blocks.size(); ++i) {
    const auto& blk = psi.blocks[i];
    long long t = (i == 0) ? 0 : prev_t;
    auto ok = [&](long long cand) {
      for (size_t j = 0; j < i; ++j) {
        const auto& prv = psi.blocks[j];
        if (prv.rho != blk.rho) continue;
        long long tj = res.shifts[j];
        // shifted sizes (= diagonal sups, up to 1) strictly increase
        if ((blk.A + blk.B).tw + 4 * cand <= (prv.A + prv.B).tw + 4 * tj) return false;
        if (prv.zeta == blk.zeta && (blk.B + cand) < (prv.A + tj) + 2) return false;
      }
      return true;
    };
    while (!ok(t)) t += base_gap;
    res.shifts[i] = t;
    prev_t = t;
    res.psi_big.blocks[i].A += HalfInt::whole(t);
    res.psi_big.blocks[i].B += HalfInt::whole(t);
  }
  return res;
}

}  // namespace arthur
