#pragma once

#include <cstddef>
#include <vector>

#include "gl3m/arith.hpp"

namespace gl3m {

// Frequencies are in the order of the factorization lemma:
//   S(m1,m2,n1,n2;D1,D2) = sum e((n1*B1 + m2*(Y1*D2 - Z1*B2))/D1
//                               + (n2*B2 + m1*(Y2*D1 - Z2*B1))/D2)
// over B1,C1 mod D1, B2,C2 mod D2 with B1*B2 + D1*C2 + D2*C1 = 0 mod D1*D2,
// gcd(Bi,Ci,Di) = 1, N | B1, and Yi*Bi + Zi*Ci = 1 mod Di.
// gl3_modified_sum_raw takes the frequencies in the order of the defining
// display instead: raw(a1,a2,b1,b2) has phase (a1*B1 + b1*(...))/D1 + (a2*B2 + b2*(...))/D2.
struct GL3SumSpec {
  i64 m1 = 0, m2 = 0, n1 = 0, n2 = 0;
  i64 D1 = 1, D2 = 1;
  i64 N = 1;
};

enum class PhaseVariant {
  Z2,  // Z2 multiplies B1 in the second numerator
  Z1,  // Z1 in both numerators, as typeset
};

struct ModifiedSumOptions {
  PhaseVariant variant = PhaseVariant::Z2;
  i64 yz_shift = 0;  // use (Y + C*t, Z - B*t) in place of the canonical solution
};

struct BoundReport {
  double sum_modulus = 0;
  double bound_value = 0;
  double margin = 0;  // bound/|S|, +inf when S vanishes
};

cplx kloosterman_classical(i64 a, i64 b, i64 c);

// Uses m1, n1, n2 of spec. Throws DivisibilityViolation unless D1 | D2.
cplx gl3_tilde_sum(const GL3SumSpec& spec);

// Admissible (B1,P1,B2,P2) tuples for fixed (D1,D2,N) with multiplicities,
// where P1 = Y1*D2 - Z1*B2 mod D1 and P2 = Y2*D1 - Z*B1 mod D2. Evaluating a
// frequency vector costs O(#tuples + D1*D2).
class GL3SumTable {
 public:
  GL3SumTable(i64 D1, i64 D2, i64 N = 1, ModifiedSumOptions opt = {});

  cplx raw(i64 a1, i64 a2, i64 b1, i64 b2) const;
  cplx eval(i64 m1, i64 m2, i64 n1, i64 n2) const { return raw(n1, n2, m2, m1); }
  std::size_t tuple_count() const { return tuples_.size(); }
  i64 admissible_count() const { return admissible_; }

 private:
  struct Tuple {
    i64 b1, p1, b2, p2, mult;
  };
  i64 D1_, D2_;
  std::vector<Tuple> tuples_;
  i64 admissible_ = 0;
  UnitTable units_;
};

// Throws LevelViolation when N does not divide both moduli.
cplx gl3_modified_sum(const GL3SumSpec& spec, ModifiedSumOptions opt = {});
cplx gl3_modified_sum_raw(const GL3SumSpec& spec, ModifiedSumOptions opt = {});

// Sum over d | (D1,D2) of products of classical sums. Requires N = 1.
cplx factorization_lemma_rhs(const GL3SumSpec& spec);

struct TwistCheck {
  cplx lhs;
  cplx rhs;
};

// lhs: S^(q)(m1,m2,n1,n2; qD1,qD2). rhs: q * factorization_lemma_rhs at
// (q'm1, q'm2, n1, n2; D1, D2) with q' the inverse of q mod D1*D2; this is
// the single product prime_twist_product when gcd(D1,D2) = 1.
// Throws HypothesisViolation unless q is prime, gcd(m2*n2,q) = 1 and
// gcd(D1*D2,q) = 1.
TwistCheck prime_twist_identity_check(i64 m1, i64 m2, i64 n1, i64 n2, i64 q, i64 D1, i64 D2);

// q * S(n1, q'm2D2; D1) * S(m1, q'n2D1; D2)
cplx prime_twist_product(i64 m1, i64 m2, i64 n1, i64 n2, i64 q, i64 D1, i64 D2);

double weil_bound(const GL3SumSpec& spec);
BoundReport weil_margin(const GL3SumSpec& spec, ModifiedSumOptions opt = {});
BoundReport weil_margin_from(const GL3SumSpec& spec, cplx value);

struct SweepRow {
  GL3SumSpec spec;
  cplx enumerated;
  cplx factorized;
  BoundReport bound;
};

// All D1,D2 <= dmax and frequencies drawn from freqs, N = 1.
std::vector<SweepRow> factorization_sweep(i64 dmax, const std::vector<i64>& freqs, int jobs = 1);

}  // namespace gl3m
