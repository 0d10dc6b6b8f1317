#include "doctest.h"

#include <cmath>

#include "gl3m/errors.hpp"
#include "gl3m/special.hpp"

using namespace gl3m;

namespace {

// loggamma from mpmath at 30 digits
struct Frozen {
  double re, im, lre, lim;
};
const Frozen kLogGamma[] = {
    {0.5, 0.5, 0.11238724280962311252, -0.75072920212205074465},
    {10, 20, -1.7029804439565110603, 52.660660425584719482},
    {-3.5, 0.1, -1.3563202092968518733, -12.427473264110871357},
    {0.1, -30, -47.565423555699172694, -71.406325063462139443},
    {100, 0.5, 359.13294910402940782, 2.3000830306239336492},
    {0.001, 0.001, 6.5606044738375526187, -0.78597373492965343485},
    {-0.5, -7, -12.025090438168652537, -4.9852267654119522785},
    {2.25, 150, -225.93186226423313384, 604.3342573252552912},
};

}  // namespace

TEST_CASE("log gamma against frozen values") {
  for (const auto& f : kLogGamma) {
    CAPTURE(f.re);
    CAPTURE(f.im);
    cplx v = log_gamma({f.re, f.im});
    CHECK(v.real() == doctest::Approx(f.lre).epsilon(1e-13));
    CHECK(v.imag() == doctest::Approx(f.lim).epsilon(1e-13));
  }
}

TEST_CASE("gamma identities") {
  CHECK(std::abs(gamma_fn(1.0) - 1.0) < 1e-14);
  CHECK(std::abs(gamma_fn(0.5) - std::sqrt(M_PI)) < 1e-14);
  CHECK(std::abs(gamma_fn({1, 5})) == doctest::Approx(std::sqrt(5 * M_PI / std::sinh(5 * M_PI))).epsilon(1e-13));
  for (double x = -7.7; x < 20; x += 0.9)
    for (double y : {-3.0, 0.0, 0.2, 11.0}) {
      if (y == 0 && x < 0 && std::abs(x - std::round(x)) < 1e-9) continue;
      cplx z(x, y);
      CHECK(std::abs(log_gamma(z + 1.0) - log_gamma(z) - std::log(z)) < 1e-11 * (1 + std::abs(log_gamma(z))));
      CHECK(std::abs(log_gamma(std::conj(z)) - std::conj(log_gamma(z))) < 1e-12 * (1 + std::abs(log_gamma(z))));
    }
  CHECK_THROWS_AS(log_gamma(-3.0), PoleAt);
  CHECK_THROWS_AS(log_gamma(0.0), PoleAt);
}

TEST_CASE("archimedean factors") {
  cplx s(0.3, 2.0);
  CHECK(std::abs(std::exp(log_gamma_R(s)) - std::pow(M_PI, -s / 2.0) * gamma_fn(s / 2.0)) < 1e-13);
  CHECK(std::abs(std::exp(log_gamma_C(s)) - 2.0 * std::pow(2 * M_PI, -s) * gamma_fn(s)) < 1e-13);
  // duplication: Gamma_R(s) Gamma_R(s+1) = Gamma_C(s)
  CHECK(std::abs(log_gamma_R(s) + log_gamma_R(s + 1.0) - log_gamma_C(s)) < 1e-12);
  CHECK(std::abs(log_cos({0.3, 40.0}) - std::log(std::cos(cplx(0.3, 40.0)))) < 1e-12);
  CHECK(std::abs(log_cos({0.3, 900.0}).real() - (900.0 - std::log(2.0))) < 1e-9);
}

TEST_CASE("mollifiers") {
  CHECK(std::abs(mollifier(0.0, 2, 12) - 1.0) < 1e-15);
  CHECK(std::abs(mollifier(0.0, 2, 24) - 1.0) < 1e-15);
  for (double sigma : {-1.0, 0.25, 1.5})
    for (double H = 4; H <= 20; H += 2) {
      // |cos(x + iy)| >= sinh(y) gives |G1(sigma + iH)| <= (2 / (1 - e^(-pi H/4)))^24 e^(-3 pi H)
      const double c = std::pow(2.0 / (1.0 - std::exp(-M_PI * H / 4)), 24);
      CHECK(std::abs(mollifier({sigma, H}, 2, 12)) <= c * std::exp(-3 * M_PI * H));
    }
  CHECK_THROWS_AS(mollifier(4.0, 2, 12), OutsideStrip);
}
