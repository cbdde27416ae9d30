#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "arthur/params.hpp"

namespace arthur {

/*
  Segment and ladder combinatorics on the general linear side.

  A LadderMatrix is a matrix of linked segments over one cuspidal, displayed
  top to bottom; <matrix> denotes the irreducible subrepresentation of the
  induced product of its rows in that order. The shapes in play are the
  rectangles Speh(St(rho,a),b), the tableaux Z(rho,A,B,zeta), their images
  under partial Jacquet functors, and the staircases of the reduction steps.

  The Jacquet calculus here is formal: a left derivative at exponent x eats
  the first entry of a row starting at x, and a candidate survives exactly
  when the result is again a ladder. Chaining these rules along a segment of
  exponents reproduces the two tableau moves the theory prescribes (eating
  along the first row, or down the first column), and everything else dies.
*/

struct Segment {
  HalfInt from, to;

  long long step() const { return to.tw == from.tw ? 0 : (to > from ? 1 : -1); }
  long long len() const { return std::llabs((to - from).tw) / 2 + 1; }
  HalfInt lo() const { return std::min(from, to); }
  HalfInt hi() const { return std::max(from, to); }
  bool flat() const { return from == to; }
  bool contains_value(HalfInt x) const { return lo() <= x && x <= hi(); }

  auto operator<=>(const Segment&) const = default;
};

// Zelevinsky linkage: neither contains the other and the union is a segment.
inline bool linked(const Segment& s1, const Segment& s2) {
  bool union_segment = s2.lo() <= s1.hi() + 1 && s1.lo() <= s2.hi() + 1;
  bool s1_in_s2 = s2.lo() <= s1.lo() && s1.hi() <= s2.hi();
  bool s2_in_s1 = s1.lo() <= s2.lo() && s2.hi() <= s1.hi();
  return union_segment && !s1_in_s2 && !s2_in_s1;
}

struct LadderMatrix {
  CuspidalLabel rho;
  std::vector<Segment> rows;

  bool valid() const {
    long long dir = 0;
    for (const auto& r : rows)
      if (r.step() != 0) {
        if (dir == 0) dir = r.step();
        else if (dir != r.step()) return false;
      }
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
      if (!linked(rows[i], rows[i + 1])) return false;
      long long d = (rows[i + 1].from - rows[i].from).tw;
      if (d == 0) return false;
      if (dir != 0 && d * dir > 0) return false;  // starts move against the row step
    }
    if (dir == 0)  // all rows flat: require strictly monotone starts
      for (size_t i = 0; i + 1 < rows.size(); ++i)
        if (!(rows[i].from < rows[i + 1].from || rows[i].from > rows[i + 1].from)) return false;
    return true;
  }

  long long entries() const {
    long long n = 0;
    for (const auto& r : rows) n += r.len();
    return n;
  }

  // exponent negation with left/right reversal; an involution on ladders
  LadderMatrix theta() const {
    LadderMatrix out;
    out.rho = rho;
    out.rows.reserve(rows.size());
    for (auto it = rows.rbegin(); it != rows.rend(); ++it)
      out.rows.push_back(Segment{-it->to, -it->from});
    return out;
  }

  auto operator<=>(const LadderMatrix& o) const {
    if (auto c = rho.id <=> o.rho.id; c != 0) return c;
    return rows <=> o.rows;
  }
  bool operator==(const LadderMatrix& o) const { return rho.id == o.rho.id && rows == o.rows; }
};

// b, 2b, ..: the rectangle of Speh(St(rho,a),b): rows St(rho,a)| |^x for
// x = -(b-1)/2 ... (b-1)/2, each row the decreasing segment of length a.
inline LadderMatrix speh_matrix(const CuspidalLabel& rho, long long a, long long b) {
  if (a < 1 || b < 1) throw std::invalid_argument("speh_matrix: a, b >= 1");
  LadderMatrix m;
  m.rho = rho;
  for (long long r = 0; r < b; ++r) {
    HalfInt center = HalfInt(-(b - 1) + 2 * r);  // -(b-1)/2 + r
    m.rows.push_back(Segment{center + HalfInt(a - 1), center - HalfInt(a - 1)});
  }
  return m;
}

// The tableau with rows zeta(B+r) ... -zeta(A-r), r = 0 .. A-B.
inline LadderMatrix Z_of_block(const JordanBlock& blk) {
  LadderMatrix m;
  m.rho = blk.rho;
  long long depth = int_gap(blk.A, blk.B);
  for (long long r = 0; r <= depth; ++r)
    m.rows.push_back(Segment{blk.zeta * (blk.B + HalfInt::whole(r)),
                             -(blk.zeta * (blk.A - HalfInt::whole(r)))});
  return m;
}

// every row of m1 unlinked with every row of m2: the product exchange criterion
inline bool unlinked_product_irreducible(const LadderMatrix& m1, const LadderMatrix& m2) {
  if (m1.rho != m2.rho) throw std::invalid_argument("unlinked_product_irreducible: same rho required");
  for (const auto& r1 : m1.rows)
    for (const auto& r2 : m2.rows)
      if (linked(r1, r2)) return false;
  return true;
}

/* --------------------- formal products and derivatives --------------------- */

struct GLObject {
  std::vector<LadderMatrix> factors;  // kept sorted: commutative formal product

  void normalize() { std::sort(factors.begin(), factors.end()); }
  auto operator<=>(const GLObject&) const = default;
};

inline GLObject pi_gl(const PsiParameter& psi) {
  GLObject g;
  for (const auto& blk : psi.blocks) g.factors.push_back(Z_of_block(blk));
  g.normalize();
  return g;
}

// multiset of objects with integer multiplicities
using FormalSum = std::map<GLObject, long long>;

inline FormalSum single(GLObject g) {
  g.normalize();
  return FormalSum{{std::move(g), 1}};
}
inline long long total_mass(const FormalSum& s) {
  long long n = 0;
  for (auto& [g, c] : s) n += c;
  return n;
}

// left derivative of one ladder at exponent x: eat the first entry of any
// row starting at x, keep the candidates that are still ladders
inline std::vector<LadderMatrix> jac_left_ladder(const LadderMatrix& m, HalfInt x) {
  std::vector<LadderMatrix> out;
  for (size_t i = 0; i < m.rows.size(); ++i) {
    if (m.rows[i].from != x) continue;
    LadderMatrix cand = m;
    if (cand.rows[i].flat()) cand.rows.erase(cand.rows.begin() + i);
    else cand.rows[i].from = cand.rows[i].from + HalfInt::whole(cand.rows[i].step());
    if (cand.valid()) out.push_back(std::move(cand));
  }
  return out;
}

inline std::vector<LadderMatrix> jac_right_ladder(const LadderMatrix& m, HalfInt x) {
  auto mirrored = jac_left_ladder(m.theta(), -x);
  for (auto& c : mirrored) c = c.theta();
  return mirrored;
}

namespace detail {

template <typename PerLadder>
inline FormalSum derive(const FormalSum& sum, const CuspidalLabel& rho, PerLadder&& per) {
  FormalSum out;
  for (const auto& [obj, mult] : sum) {
    for (size_t i = 0; i < obj.factors.size(); ++i) {
      if (obj.factors[i].rho != rho) continue;
      for (auto& repl : per(obj.factors[i])) {
        GLObject next = obj;
        if (repl.rows.empty()) next.factors.erase(next.factors.begin() + i);
        else next.factors[i] = std::move(repl);
        next.normalize();
        out[std::move(next)] += mult;
      }
    }
  }
  return out;
}

}  // namespace detail

// Bernstein-Zelevinsky first derivative at rho| |^x, summed over the factor
// receiving it (the Leibniz fan-out); multiplicities count the assignments.
inline FormalSum jac_left(const FormalSum& sum, const CuspidalLabel& rho, HalfInt x) {
  return detail::derive(sum, rho, [&](const LadderMatrix& m) { return jac_left_ladder(m, x); });
}
inline FormalSum jac_left(const GLObject& g, const CuspidalLabel& rho, HalfInt x) {
  return jac_left(single(g), rho, x);
}

inline FormalSum jac_right(const FormalSum& sum, const CuspidalLabel& rho, HalfInt x) {
  return detail::derive(sum, rho, [&](const LadderMatrix& m) { return jac_right_ladder(m, x); });
}
inline FormalSum jac_right(const GLObject& g, const CuspidalLabel& rho, HalfInt x) {
  return jac_right(single(g), rho, x);
}

struct ThetaChainResult {
  FormalSum sum;
  long long decoupages = 0;  // surviving assignments, with multiplicity
};

// Jac^theta along the exponents zeta*c, c = from..to: at each exponent apply
// the left derivative at zeta*c and the right one at -zeta*c. Assignments of
// the exponent sequence to factors that die under the ladder rules drop out;
// the count of survivors is the number of decoupages left.
inline ThetaChainResult jac_theta_chain(const GLObject& obj, const CuspidalLabel& rho, Sign zeta,
                                        HalfInt from, HalfInt to) {
  ThetaChainResult res;
  res.sum = single(obj);
  if (from > to) {  // empty chain: identity
    res.decoupages = 1;
    return res;
  }
  if (from.integral() != to.integral())
    throw std::invalid_argument("jac_theta_chain: endpoints must differ by an integer");
  for (HalfInt c = from; c <= to; ++c) {
    res.sum = jac_left(res.sum, rho, zeta * c);
    res.sum = jac_right(res.sum, rho, -(zeta * c));
    if (res.sum.empty()) break;
  }
  res.decoupages = total_mass(res.sum);
  return res;
}

}  // namespace arthur
