#include "gl3m/arith.hpp"

#include <cmath>
#include <numeric>

#include "gl3m/errors.hpp"

namespace gl3m {

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

i64 lcm(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  return std::abs(a / gcd(a, b) * b);
}

Residue make_residue(i64 value, i64 modulus) {
  if (modulus < 1) throw InvalidArgument("modulus must be positive");
  return {mod(value, modulus), modulus};
}

Residue inv_mod(i64 a, i64 m) {
  if (m < 1) throw InvalidArgument("modulus must be positive");
  if (m == 1) return {0, 1};
  i64 r0 = m, r1 = mod(a, m);
  i64 s0 = 0, s1 = 1;
  while (r1 != 0) {
    i64 t = r0 / r1;
    i64 r2 = r0 - t * r1;
    r0 = r1;
    r1 = r2;
    i64 s2 = s0 - t * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw NotInvertible("gcd(" + std::to_string(a) + ", " + std::to_string(m) + ") != 1");
  return {mod(s0, m), m};
}

cplx unit_phase(RationalPhase p) {
  if (p.den < 1) throw InvalidArgument("phase denominator must be positive");
  i64 r = mod(p.num, p.den);
  if (r == 0) return {1.0, 0.0};
  i128 r4 = static_cast<i128>(r) * 4;
  if (r4 == p.den) return {0.0, 1.0};
  if (r4 == 2 * static_cast<i128>(p.den)) return {-1.0, 0.0};
  if (r4 == 3 * static_cast<i128>(p.den)) return {0.0, -1.0};
  // symmetric reduction keeps the angle in [-pi, pi]
  double x = 2 * r > p.den ? -static_cast<double>(p.den - r) / static_cast<double>(p.den)
                           : static_cast<double>(r) / static_cast<double>(p.den);
  return {std::cos(kTwoPi * x), std::sin(kTwoPi * x)};
}

std::pair<Residue, Residue> crt_split(Residue alpha, i64 m1, i64 m2) {
  if (m1 < 1 || m2 < 1) throw InvalidArgument("moduli must be positive");
  if (gcd(m1, m2) != 1) throw NotCoprime("gcd(" + std::to_string(m1) + ", " + std::to_string(m2) + ") != 1");
  if (static_cast<i128>(m1) * m2 != alpha.modulus) throw InvalidArgument("alpha modulus must equal m1*m2");
  return {make_residue(alpha.value, m1), make_residue(alpha.value, m2)};
}

Residue crt_combine(Residue a1, Residue a2) {
  i64 m1 = a1.modulus, m2 = a2.modulus;
  if (gcd(m1, m2) != 1) throw NotCoprime("crt_combine moduli not coprime");
  i64 M = m1 * m2;
  i64 e1 = mul_mod(m2, inv_mod(m2, m1).value, M);
  i64 e2 = mul_mod(m1, inv_mod(m1, m2).value, M);
  i64 v = mod(static_cast<i128>(a1.value) * e1 + static_cast<i128>(a2.value) * e2, M);
  return {v, M};
}

std::vector<i64> divisors(i64 n) {
  if (n < 1) throw InvalidArgument("divisors needs n >= 1");
  std::vector<i64> lo, hi;
  for (i64 d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    lo.push_back(d);
    if (d != n / d) hi.push_back(n / d);
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
  if (n < 1) throw InvalidArgument("factorize needs n >= 1");
  std::vector<std::pair<i64, int>> f;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) n /= p, ++e;
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

int moebius(i64 n) {
  int s = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    s = -s;
  }
  return s;
}

i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> ps;
  if (n < 2) return ps;
  std::vector<bool> comp(static_cast<std::size_t>(n + 1), false);
  for (i64 i = 2; i <= n; ++i) {
    if (comp[static_cast<std::size_t>(i)]) continue;
    ps.push_back(i);
    for (i64 j = i * i; j <= n; j += i) comp[static_cast<std::size_t>(j)] = true;
  }
  return ps;
}

i64 ipow(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

UnitTable::UnitTable(i64 L) : L_(L), t_(static_cast<std::size_t>(L)) {
  if (L < 1) throw InvalidArgument("UnitTable needs L >= 1");
  for (i64 k = 0; k < L; ++k) t_[static_cast<std::size_t>(k)] = unit_phase(k, L);
}

}  // namespace gl3m
