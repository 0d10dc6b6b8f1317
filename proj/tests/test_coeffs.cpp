#include "doctest.h"

#include <cmath>

#include "gl3m/coeffs.hpp"
#include "gl3m/errors.hpp"

using namespace gl3m;

TEST_CASE("tau from the q-expansion") {
  const std::vector<long long> known{1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944};
  auto tau = ramanujan_tau(12);
  for (std::size_t n = 1; n <= 12; ++n) CHECK(static_cast<long long>(tau[n]) == known[n - 1]);
  CHECK(tau[6] == tau[2] * tau[3]);
  auto big = ramanujan_tau(200);
  for (i64 m = 2; m <= 14; ++m)
    for (i64 n = 2; m * n <= 200; ++n)
      if (gcd(m, n) == 1) CHECK(big[m * n] == big[m] * big[n]);
  // tau(p^2) = tau(p)^2 - p^11
  for (i64 p : {2, 3, 5, 7, 11, 13}) CHECK(big[p * p] == big[p] * big[p] - static_cast<i128>(ipow(p, 11)));
}

TEST_CASE("weight 16 form") {
  auto f = weight16_eigenvalues(7);
  const std::vector<long long> known{1, 216, -3348, 13888, 52110, -723168, 2822456};
  for (std::size_t n = 1; n <= 7; ++n) CHECK(static_cast<long long>(f.a[n]) == known[n - 1]);
  CHECK(f.weight == 16);
  CHECK(form_by_weight(12, 5).weight == 12);
  CHECK_THROWS(form_by_weight(14, 5));
}

TEST_CASE("Deligne bound and Hecke relations") {
  auto f = delta_eigenvalues(10000);
  for (i64 n = 1; n <= 10000; ++n)
    CHECK(std::abs(f.lambda[n]) <= static_cast<double>(divisors(n).size()) + 1e-9);
  CHECK(hecke_relation_audit(f, 50) == 0);
  CHECK(hecke_relation_audit(f, 1) == 0);
  auto bad = f;
  bad.lambda[4] += 1e-3;
  CHECK(hecke_relation_audit(bad, 50) >= 1);
  CHECK_THROWS_AS(hecke_relation_audit(delta_eigenvalues(100), 50), InsufficientTable);
}

TEST_CASE("eigenvalue extension past the table") {
  auto f = delta_eigenvalues(100);
  auto g = delta_eigenvalues(400);
  CHECK(f.eigenvalue(6 * 49) == doctest::Approx(g.lambda[294]).epsilon(1e-12));
  CHECK_THROWS_AS(f.eigenvalue(101 * 2), InsufficientTable);
}

TEST_CASE("symmetric square lift") {
  auto f = delta_eigenvalues(2000);
  auto A = sym_square_gl3(f, 40, 40);
  CHECK(A(1, 1) == cplx(1, 0));
  CHECK(A(2, 1).real() == doctest::Approx(f.lambda[4]));
  CHECK(A(4, 1).real() == doctest::Approx(f.lambda[16] + 1));
  // Satake (a^2, 1, b^2) at p: A(p,1) = lambda(p)^2 - 1
  for (i64 p : {2, 3, 5, 7, 11}) CHECK(A(p, 1).real() == doctest::Approx(f.lambda[p] * f.lambda[p] - 1));
  CHECK(std::abs(A(2, 1) * A(3, 1) - A(6, 1)) < 1e-9);
  for (i64 m = 1; m <= 40; ++m)
    for (i64 n = 1; n <= 40; ++n) {
      CHECK(std::abs(A(m, n).imag()) < 1e-12);
      for (i64 m2 = 1; m * m2 <= 40; ++m2)
        for (i64 n2 = 1; n * n2 <= 40; ++n2)
          if (gcd(m * n, m2 * n2) == 1) CHECK(std::abs(A(m * m2, n * n2) - A(m, n) * A(m2, n2)) < 1e-9);
    }
  CHECK_THROWS_AS(A(41, 1), InsufficientTable);
}

TEST_CASE("trivial coefficients") {
  auto t = GL3Coeffs::trivial();
  CHECK(t(1, 1) == cplx(1, 0));
  CHECK(t(2, 1) == cplx(0, 0));
  CHECK(t(1000, 7) == cplx(0, 0));
  CHECK(t.finite_support());
}
