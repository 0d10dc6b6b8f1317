#include "gl3m/special.hpp"

#include <array>
#include <cmath>
#include <string>

#include "gl3m/errors.hpp"

namespace gl3m {

namespace {

const double kHalfLog2Pi = 0.5 * std::log(kTwoPi);
const double kLogPi = std::log(kPi);

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,           -1.0 / 360.0,          1.0 / 1260.0,          -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0,     1.0 / 156.0,           -3617.0 / 122400.0,
    43867.0 / 244188.0,   -174611.0 / 125400.0,
};

// Re z >= 0.5
cplx log_gamma_right(cplx z) {
  cplx shift = 0;
  while (std::abs(z) < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  cplx zi = 1.0 / z, zi2 = zi * zi, p = zi, series = 0;
  for (double c : kStirling) {
    series += c * p;
    p *= zi2;
  }
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series - shift;
}

// log sin(pi z) for Im z >= 0, up to a multiple of 2 pi i
cplx log_sin_pi(cplx z) {
  const cplx i(0.0, 1.0);
  cplx w = kPi * z;
  return -i * w + std::log(1.0 - std::exp(2.0 * i * w)) + cplx(std::log(0.5), 0.5 * kPi);
}

}  // namespace

cplx log_gamma(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidArgument("log_gamma of non-finite value");
  if (z.real() < 0.5) {
    double n = std::round(z.real());
    if (n <= 0 && std::abs(z - cplx(n, 0.0)) < 1e-12) throw PoleAt("Gamma pole at " + std::to_string(n));
  }
  if (z.imag() < 0) return std::conj(log_gamma(std::conj(z)));
  if (z.real() >= 0.5) return log_gamma_right(z);

  cplx v = kLogPi - log_sin_pi(z) - log_gamma_right(1.0 - z);
  // branch from the recurrence log Gamma(z) = log Gamma(z+n) - sum log(z+k)
  int n = static_cast<int>(std::ceil(0.5 - z.real()));
  double im_ref = log_gamma_right(z + static_cast<double>(n)).imag();
  for (int k = 0; k < n; ++k) im_ref -= std::arg(z + static_cast<double>(k));
  double k = std::round((im_ref - v.imag()) / kTwoPi);
  return {v.real(), v.imag() + kTwoPi * k};
}

cplx gamma_fn(cplx z) { return std::exp(log_gamma(z)); }

cplx log_gamma_R(cplx s) { return -0.5 * s * kLogPi + log_gamma(0.5 * s); }

cplx log_gamma_C(cplx s) { return std::log(2.0) - s * std::log(kTwoPi) + log_gamma(s); }

cplx log_cos(cplx w) {
  if (w.imag() < 0) return std::conj(log_cos(std::conj(w)));
  const cplx i(0.0, 1.0);
  cplx v = -i * w + std::log(1.0 + std::exp(2.0 * i * w)) - std::log(2.0);
  double im = std::remainder(v.imag(), kTwoPi);
  return {v.real(), im};
}

cplx log_mollifier(cplx u, int B, int power) {
  if (B < 1) throw InvalidArgument("mollifier needs B >= 1");
  if (std::abs(u.real()) >= 2.0 * B) throw OutsideStrip("|Re u| >= 2B");
  return -static_cast<double>(power) * B * log_cos(kPi * u / (4.0 * B));
}

cplx mollifier(cplx u, int B, int power) { return std::exp(log_mollifier(u, B, power)); }

}  // namespace gl3m
