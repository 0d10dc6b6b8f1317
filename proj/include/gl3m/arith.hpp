#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace gl3m {

using i64 = std::int64_t;
using i128 = __int128;
using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Residue {
  i64 value = 0;
  i64 modulus = 1;
  bool operator==(const Residue&) const = default;
};

struct RationalPhase {
  i64 num = 0;
  i64 den = 1;
};

// least nonnegative representative
inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}
inline i64 mod(i128 a, i64 m) {
  i128 r = a % m;
  return static_cast<i64>(r < 0 ? r + m : r);
}
inline i64 mul_mod(i64 a, i64 b, i64 m) { return mod(static_cast<i128>(a) * b, m); }

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);

Residue make_residue(i64 value, i64 modulus);

// Throws NotInvertible when gcd(a, m) != 1. For m = 1 the result is 0 mod 1.
Residue inv_mod(i64 a, i64 m);

cplx unit_phase(RationalPhase p);
inline cplx unit_phase(i64 num, i64 den) { return unit_phase(RationalPhase{num, den}); }

// Throws NotCoprime when gcd(m1, m2) != 1 and InvalidArgument when
// alpha.modulus != m1*m2.
std::pair<Residue, Residue> crt_split(Residue alpha, i64 m1, i64 m2);
Residue crt_combine(Residue a1, Residue a2);

std::vector<i64> divisors(i64 n);
std::vector<std::pair<i64, int>> factorize(i64 n);
int moebius(i64 n);
i64 euler_phi(i64 n);
bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 n);
i64 ipow(i64 b, int e);

// Table of e(k/L), k = 0..L-1.
class UnitTable {
 public:
  explicit UnitTable(i64 L);
  i64 modulus() const { return L_; }
  const cplx& operator[](i64 k) const { return t_[static_cast<std::size_t>(k)]; }
  cplx at(i64 k) const { return t_[static_cast<std::size_t>(mod(k, L_))]; }

 private:
  i64 L_;
  std::vector<cplx> t_;
};

// Kahan-Neumaier compensated complex accumulation.
class CompensatedSum {
 public:
  void add(cplx z) {
    add_part(re_, cre_, z.real());
    add_part(im_, cim_, z.imag());
  }
  cplx value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double re_ = 0, cre_ = 0, im_ = 0, cim_ = 0;
};

}  // namespace gl3m
