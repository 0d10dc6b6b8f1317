#include "doctest.h"

#include <cmath>

#include "gl3m/analytic_kernels.hpp"
#include "gl3m/errors.hpp"
#include "gl3m/special.hpp"

using namespace gl3m;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

WeightParams generic() {
  WeightParams wp;
  wp.langlands.rho = {cplx(0, 2), cplx(0, -1), cplx(0, -1)};
  wp.langlands.lambda = {cplx(0, 0.3), cplx(0, -0.1), cplx(0, -0.2)};
  return wp;
}

}  // namespace

TEST_CASE("gamma factors") {
  WeightParams wp;
  CHECK(rel(gamma_factor_gF(0.5, wp), std::pow(2 * M_PI, -1.5) * std::pow(720.0, 3)) < 1e-13);
  // mpmath: (2 pi)^(-3/2) Gamma(7+2i) Gamma(7-i)^2
  CHECK(std::abs(gamma_factor_gF(0.5, generic()) / cplx(15025611.660693374922, 341779.32309241685289) - 1.0) < 1e-12);
  // mpmath: prod pi^(-a/2) Gamma(a/2), a = 1/2 + lambda_i + rho_j
  CHECK(std::abs(gamma_factor_PiF(0.5, generic()) / cplx(-0.08675299028256490335, 0.018951599446225073851) - 1.0) <
        1e-12);
  WeightParams lit;
  lit.pi = PiConvention::Literal;
  CHECK(rel(gamma_factor_PiF(0.5, lit), std::pow(M_PI, 4.5) * std::pow(std::tgamma(0.25), 9)) < 1e-12);
  WeightFunction v(WeightKind::V, wp, {1.0, 0, 4096});
  CHECK(std::abs(v.kernel(cplx(1e-9, 0)) * cplx(1e-9, 0) - 1.0) < 1e-6);
}

TEST_CASE("contour shift invariance") {
  for (auto kind : {WeightKind::V, WeightKind::Vtilde, WeightKind::W}) {
    for (const auto& wp : {WeightParams{}, generic()})
      for (double y : {0.03, 1.0, 40.0, 2000.0}) {
        cplx a = WeightFunction(kind, wp, {0.5, 0, 4096})(y);
        CHECK(rel(WeightFunction(kind, wp, {1.0, 0, 4096})(y), a) < 1e-8);
        CHECK(rel(WeightFunction(kind, wp, {2.0, 0, 4096})(y), a) < 1e-8);
      }
  }
  // Wtilde has a gamma pole at u = 1/2
  for (double y : {0.03, 1.0, 40.0}) {
    WeightParams wp;
    CHECK(rel(WeightFunction(WeightKind::Wtilde, wp, {0.1, 0, 4096})(y),
              WeightFunction(WeightKind::Wtilde, wp, {0.25, 0, 4096})(y)) < 1e-8);
  }
  CHECK_THROWS_AS(WeightFunction(WeightKind::Wtilde, WeightParams{}, {0.5, 0, 4096}), ContourOnPole);
  CHECK_THROWS_AS(weight_V(1.0, WeightParams{}, {-0.5, 0, 4096}), ContourOnPole);
  CHECK_THROWS_AS(WeightFunction(WeightKind::V, WeightParams{}, {4.5, 0, 4096}), OutsideStrip);
}

TEST_CASE("height doubling") {
  WeightParams wp;
  WeightFunction a(WeightKind::V, wp, {1.0, 0, 4096});
  WeightFunction b(WeightKind::V, wp, {1.0, 2 * a.height(), 8192});
  for (double y : {0.1, 10.0, 1000.0}) CHECK(std::abs(a(y) - b(y)) < 1e-10);
}

TEST_CASE("residue at the origin") {
  for (const auto& wp : {WeightParams{}, generic()})
    for (double y : {0.1, 3.0, 500.0}) {
      cplx d = WeightFunction(WeightKind::V, wp, {1.0, 0, 4096})(y) -
               WeightFunction(WeightKind::V, wp, {-1.0 / 18, 0, 4096})(y);
      CHECK(std::abs(d - weight_plateau(WeightKind::V, wp)) < 1e-8);
    }
}

TEST_CASE("decay above the transition") {
  WeightParams wp;
  const double T3 = 1000.0;
  for (double y = 100 * T3; y <= 1e8; y *= 3) CHECK(std::abs(weight_V(y, wp, {2.0, 0, 4096})) <= T3 * T3 / (y * y));
}

TEST_CASE("Wtilde plateau product") {
  CHECK(std::abs(wtilde_plateau_product(WeightParams{}) - 1.0) < 1e-14);
  WeightParams wp = generic();
  cplx direct = 1;
  for (cplx l : wp.langlands.lambda)
    for (cplx r : wp.langlands.rho) direct *= gamma_fn(0.25 + 0.5 * (l + r)) / gamma_fn(0.25 - 0.5 * (l + r));
  CHECK(rel(wtilde_plateau_product(wp), direct) < 1e-12);
  WeightFunction w(WeightKind::Wtilde, WeightParams{}, {0.25, 0, 4096});
  CHECK(std::abs(w(1e-6) - 1.0) < 1e-6);
}

TEST_CASE("parameter validation") {
  WeightParams wp;
  wp.langlands.rho = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(WeightFunction(WeightKind::V, wp, {1.0, 0, 4096}), HypothesisViolation);
  CHECK_THROWS_AS(WeightFunction(WeightKind::V, WeightParams{}, {1.0, 0, 10}), InvalidArgument);
  CHECK_THROWS_AS(weight_V(0.0, WeightParams{}, {1.0, 0, 4096}), InvalidArgument);
}
