#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "arthur/multiseg.hpp"
#include "arthur/params.hpp"

namespace arthur {

/*
  Formal local L-factor arithmetic. A product is a multiset of terms

      L(rho x rho', s + shift)^exponent

  plus an optional power of the quotient L(rho, r_G, 2s)/L(rho, r_G, 2s+1).
  Orders of vanishing are exact integers: a cuspidal pair L(rho x rho', s)
  has a pole of order exactly one at s = 0 when rho' = rho (self-dual) and
  never a zero. Which of r_G, r'_G carries the pole of L(rho x rho, s) at
  s = 0 is not resolved; queries at s0 = 0 therefore return an interval.

  No analytic continuation, no values: only pole/zero bookkeeping.
*/

struct LTermKey {
  std::string rho1, rho2;  // sorted pair of cuspidal ids
  HalfInt shift;

  auto operator<=>(const LTermKey&) const = default;
};

inline LTermKey make_key(const CuspidalLabel& a, const CuspidalLabel& b, HalfInt shift) {
  if (a.id <= b.id) return LTermKey{a.id, b.id, shift};
  return LTermKey{b.id, a.id, shift};
}

// 1 iff L(rho x rho2, s + shift) has a pole at s = s0
inline int pole_order_of_term(const CuspidalLabel& rho, const CuspidalLabel& rho2, HalfInt shift,
                              HalfInt s0) {
  return (rho == rho2 && (s0 + shift) == HalfInt(0)) ? 1 : 0;
}

struct LFormalProduct {
  std::map<LTermKey, long long> terms;  // exponents, zero entries dropped
  long long rg_exponent = 0;
  std::string rg_rho;

  void mul_term(const CuspidalLabel& a, const CuspidalLabel& b, HalfInt shift, long long e) {
    if (e == 0) return;
    auto key = make_key(a, b, shift);
    auto it = terms.find(key);
    if (it == terms.end()) terms.emplace(key, e);
    else if ((it->second += e) == 0) terms.erase(it);
  }
  LFormalProduct& operator*=(const LFormalProduct& o) {
    for (auto& [k, e] : o.terms) {
      auto it = terms.find(k);
      if (it == terms.end()) terms.emplace(k, e);
      else if ((it->second += e) == 0) terms.erase(it);
    }
    rg_exponent += o.rg_exponent;
    if (rg_rho.empty()) rg_rho = o.rg_rho;
    return *this;
  }
  LFormalProduct inverse() const {
    LFormalProduct out = *this;
    for (auto& [k, e] : out.terms) e = -e;
    out.rg_exponent = -out.rg_exponent;
    return out;
  }
  bool trivial() const { return terms.empty() && rg_exponent == 0; }
  bool operator==(const LFormalProduct& o) const {
    return terms == o.terms && rg_exponent == o.rg_exponent;
  }
};

inline LFormalProduct operator*(LFormalProduct a, const LFormalProduct& b) { return a *= b; }
inline LFormalProduct operator/(LFormalProduct a, const LFormalProduct& b) {
  return a *= b.inverse();
}

// L(St(rho,a0) x St(rho',a), s) = prod_{k in [|a-a0|/2, (a+a0)/2)} L(rho x rho', s+k)
inline std::vector<HalfInt> shahidi_shifts(long long a0, long long a) {
  if (a0 < 1 || a < 1) throw std::invalid_argument("shahidi_shifts: a0, a >= 1");
  std::vector<HalfInt> out;
  for (HalfInt k(std::llabs(a - a0)); k < HalfInt(a + a0); ++k) out.push_back(k);
  return out;
}

// the factor a block (tau, a, b) contributes to r(s, psi):
// L(St(rho0,a0) x St(tau,a), s-(b-1)/2) / L(St(rho0,a0) x St(tau,a), s+(b+1)/2)
inline LFormalProduct block_normalization_factor(const JordanBlock& blk,
                                                 const CuspidalLabel& rho0, long long a0) {
  LFormalProduct out;
  for (HalfInt k : shahidi_shifts(a0, blk.a())) {
    out.mul_term(rho0, blk.rho, k - HalfInt(blk.b() - 1), +1);
    out.mul_term(rho0, blk.rho, k + HalfInt(blk.b() + 1), -1);
  }
  return out;
}

inline LFormalProduct r_of_psi(const PsiParameter& psi, const CuspidalLabel& rho0, long long a0) {
  LFormalProduct out;
  for (const auto& blk : psi.blocks) out *= block_normalization_factor(blk, rho0, a0);
  out.rg_exponent = 1;
  out.rg_rho = rho0.id;
  return out;
}

struct OrderResult {
  long long lo = 0, hi = 0;  // order of vanishing; lo < hi only at s0 = 0 via r_G
  std::vector<std::pair<LTermKey, long long>> contributing;

  bool exact() const { return lo == hi; }
  long long order() const {
    if (!exact()) throw std::domain_error("OrderResult: order undetermined at s0 = 0");
    return hi;
  }
};

// exact order of vanishing at s = s0 >= 0 (negative = pole)
inline OrderResult order_at(const LFormalProduct& prod, HalfInt s0) {
  if (s0 < HalfInt(0)) throw std::invalid_argument("order_at: s0 >= 0 required");
  OrderResult res;
  for (auto& [key, e] : prod.terms) {
    if (key.rho1 == key.rho2 && s0 + key.shift == HalfInt(0)) {
      res.lo -= e;
      res.hi -= e;
      res.contributing.emplace_back(key, e);
    }
  }
  if (s0 == HalfInt(0) && prod.rg_exponent != 0) {
    // L(rho, r_G, 2s) may or may not carry the pole of L(rho x rho, s) at 0
    long long e = prod.rg_exponent;
    res.lo += std::min(0LL, -e);
    res.hi += std::max(0LL, -e);
  }
  return res;
}

/* --------------------- the pole-contribution table --------------------- */

struct TableContext {
  HalfInt A0, B0;
  Sign zeta0 = Sign::plus;
  HalfInt s0;
  long long a0 = 1, b0 = 1;
};

inline TableContext table_context(long long a0, long long b0) {
  if (a0 < 1 || b0 < 1) throw std::invalid_argument("table_context: a0, b0 >= 1");
  TableContext c;
  c.a0 = a0;
  c.b0 = b0;
  c.A0 = HalfInt(a0 + b0 - 2);
  c.B0 = HalfInt(std::llabs(a0 - b0));
  c.zeta0 = a0 >= b0 ? Sign::plus : Sign::minus;
  c.s0 = HalfInt(b0 - 1);
  return c;
}

// Whether a block (rho, A, B, zeta), same rho as the Steinberg datum, makes
// its r-factor contribute a pole at s0 = (b0-1)/2. Requires b0 >= 2. The
// integrality of B - B0 is part of the condition: without matching parity
// the half-integer grids miss each other and no pole can occur.
inline bool contribution_table(const JordanBlock& blk, long long a0, long long b0) {
  if (b0 < 2) throw std::invalid_argument("contribution_table: b0 >= 2");
  TableContext c = table_context(a0, b0);
  if (!(blk.B - c.B0).integral()) return false;
  if (blk.zeta == Sign::plus && c.zeta0 == Sign::plus)
    return blk.B <= c.B0 && c.B0 <= c.A0 && c.A0 <= blk.A;
  if (blk.zeta == Sign::minus && c.zeta0 == Sign::plus)
    return blk.B <= c.A0 && c.A0 <= blk.A;
  if (blk.zeta == Sign::minus && c.zeta0 == Sign::minus)
    return c.B0 <= blk.B && blk.B <= c.A0 && c.A0 <= blk.A;
  return false;  // zeta = +, zeta0 = -: never
}

/* ------------------- the two-segment normalizer lemma ------------------- */

struct PairNormalizer {
  int std_pole = 0;              // order of the standard operator's pole at s = 0
  bool normalized_holomorphic = false;
};

// normalizer quotient L(rho x rho, s + sup(A0p-A, B0p-B)) / L(rho x rho, s + A0p - B + 1)
inline LFormalProduct pair_normalizer_quotient(const CuspidalLabel& rho, HalfInt A0p, HalfInt B0p,
                                               HalfInt A, HalfInt B) {
  LFormalProduct out;
  out.mul_term(rho, rho, std::max(A0p - A, B0p - B), +1);
  out.mul_term(rho, rho, A0p - B + HalfInt::whole(1), -1);
  return out;
}

inline PairNormalizer pair_normalizer_order(HalfInt A0p, HalfInt B0p, HalfInt A, HalfInt B) {
  if (B0p > A0p || B > A) throw std::invalid_argument("pair_normalizer_order: need B0p <= A0p, B <= A");
  if (!(A0p + B0p).integral() || !(A + B).integral())
    throw std::invalid_argument("pair_normalizer_order: sums must be integers");
  PairNormalizer out;
  out.std_pole = (B >= B0p && A >= A0p && (B == B0p || A == A0p)) ? 1 : 0;
  out.normalized_holomorphic = (B0p >= B || A0p >= A);
  return out;
}

/* ---------------- normalization factors of ladder exchanges ---------------- */

// L(<row> x St(rho0,a0), s) / L(<row> x St(rho0,a0), s+1), reduced.
// Decreasing rows are twisted Steinbergs and Shahidi's product telescopes in
// its index; increasing rows have split parameter and telescope across the
// exponents. Flat rows agree under both readings.
inline LFormalProduct row_exchange_factor(const CuspidalLabel& rho_row, const Segment& row,
                                          const CuspidalLabel& rho0, long long a0) {
  LFormalProduct out;
  if (row.step() <= 0) {
    long long n = row.len();
    HalfInt center = HalfInt((row.from.tw + row.to.tw) / 2);
    out.mul_term(rho_row, rho0, center + HalfInt(std::llabs(n - a0)), +1);
    out.mul_term(rho_row, rho0, center + HalfInt(n + a0), -1);
  } else {
    HalfInt kappa = HalfInt(a0 - 1);
    out.mul_term(rho_row, rho0, row.from + kappa, +1);
    out.mul_term(rho_row, rho0, row.to + HalfInt::whole(1) + kappa, -1);
  }
  return out;
}

// factor of sigma x St(rho0,a0)| |^{-s} -> St(rho0,a0)| |^{-s} x sigma
inline LFormalProduct exchange_factor_right(const LadderMatrix& sigma, const CuspidalLabel& rho0,
                                            long long a0) {
  LFormalProduct out;
  for (const auto& row : sigma.rows) out *= row_exchange_factor(sigma.rho, row, rho0, a0);
  return out;
}

// factor of St(rho0,a0)| |^{s} x sigma -> sigma x St(rho0,a0)| |^{s}
inline LFormalProduct exchange_factor_left(const LadderMatrix& sigma, const CuspidalLabel& rho0,
                                           long long a0) {
  return exchange_factor_right(sigma.theta(), rho0, a0);
}

}  // namespace arthur
