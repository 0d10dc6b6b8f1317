#include "doctest.h"

#include <cmath>

#include "gl3m/errors.hpp"
#include "gl3m/kuznetsov.hpp"

using namespace gl3m;

TEST_CASE("test function") {
  TestFunctionH H;
  CHECK(H(1.5, 1.5) == doctest::Approx(1));
  CHECK(H(0.99, 1.5) == 0);
  CHECK(H(1.5, 2.0) == 0);
  TestFunctionH K{1, 2, 3, 5};
  CHECK(K.swapped()(4.0, 1.3) == K(1.3, 4.0));
  H.zero = true;
  CHECK(H(1.5, 1.5) == 0);
}

TEST_CASE("Jtilde support") {
  TestFunctionH H;
  CHECK(jtilde_support_edge(H) == doctest::Approx(1));
  for (double A : {0.01, 0.05, 0.5, 0.99}) CHECK(kernel_Jtilde(A, 1, H).value == 0.0);
  TestFunctionH Z;
  Z.zero = true;
  CHECK(kernel_Jtilde(1.5, 1, Z).value == 0.0);
}

TEST_CASE("Jtilde self-convergence") {
  TestFunctionH H;
  auto a = kernel_Jtilde(1.5, 1, H, {48, 1, 4.0 / 3});
  auto b = kernel_Jtilde(1.5, 1, H, {96, 1, 4.0 / 3});
  CHECK(std::abs(a.value) > 0);
  CHECK(std::abs(a.value - b.value) <= std::max(1e-4 * std::abs(b.value), 2 * a.error + 1e-12));
  auto p = kernel_Jtilde(1.5, 1, H), m = kernel_Jtilde(1.5, -1, H);
  CHECK(std::abs(p.value - m.value) > 0);
}

TEST_CASE("swapped profile") {
  TestFunctionH H{1, 2, 1, 3};
  TestFunctionH S{1, 3, 1, 2};
  auto a = kernel_Jtilde(2.0, 1, H.swapped());
  auto b = kernel_Jtilde(2.0, 1, S);
  CHECK(a.value == b.value);
}

TEST_CASE("J support and value") {
  TestFunctionH H;
  CHECK_FALSE(j_support_possible(0.01, 1.0, H));
  CHECK(kernel_J(0.01, 1.0, 1, 1, H).value == 0.0);
  CHECK(kernel_J(1e-4, 1.0, 1, -1, H).value == 0.0);
  CHECK(j_support_possible(1.5, 1.5, H));
  const QuadratureBudget coarse{24, 1, 4.0 / 3, 5e-2, 1e-3};
  auto a = kernel_J(1.5, 1.5, 1, 1, H, coarse);
  auto b = kernel_J(1.5, 1.5, 1, 1, H, {28, 1, 4.0 / 3, 5e-2, 1e-3});
  CHECK(std::abs(a.value) > 1e-6);
  CHECK(std::abs(a.value - b.value) <= 2 * (a.error + b.error));
}

TEST_CASE("derivative probe") {
  TestFunctionH H;
  const QuadratureBudget coarse{24, 1, 4.0 / 3, 5e-2, 1e-3};
  auto r0 = derivative_ratio_probe(1.5, 1.5, 1, 1, 0, 0, H, coarse);
  CHECK(r0.derivative == doctest::Approx(std::abs(kernel_J(1.5, 1.5, 1, 1, H, coarse).value)).epsilon(1e-12));
  auto r1 = derivative_ratio_probe(1.5, 1.5, 1, 1, 1, 0, H, coarse);
  auto r2 = derivative_ratio_probe(1.5, 1.5, 1, 1, 1, 0, H, coarse, 0.05);
  CHECK(std::isfinite(r1.ratio));
  CHECK(r1.ratio == doctest::Approx(r2.ratio).epsilon(0.05));
}

TEST_CASE("calibration") {
  TestFunctionH H;
  auto c = calibrate_jtilde_support(H, QuadratureBudget::jtilde_default(), 1e-3, 0.5, 2.0, 6);
  CHECK(c.scan.size() == 6);
  CHECK(c.threshold >= 1.0);
  CHECK(c.peak > 0);
  for (auto [A, v] : c.scan)
    if (A < c.threshold) CHECK(v <= 1e-3 * c.peak);
}
