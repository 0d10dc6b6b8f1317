#include "gl3m/lfunction.hpp"

#include <algorithm>
#include <cmath>

#include "gl3m/errors.hpp"
#include "gl3m/special.hpp"

namespace gl3m {

namespace {
constexpr double kStep = 0.2;
constexpr double kAbscissa = 2.0;
constexpr double kCut = 40.0;
constexpr double kRotation = 0.75;
constexpr double kGrowth = 8.0;  // e-folds below the peak where the w-integral is truncated
}  // namespace

LFunction::LFunction(LSeriesData data) : d_(std::move(data)) {
  if (d_.coeffs.size() < 2) throw InvalidArgument("L-series needs at least one coefficient");
}

cplx LFunction::log_gamma_factor(cplx s) const {
  cplx v = 0;
  for (double r : d_.gamma_r) v += log_gamma_R(s + r);
  for (double c : d_.gamma_c) v += log_gamma_C(s + c);
  return v;
}

// sum b(n) n^-s V_s(n / x_scale), V_s(x) = (1/2 pi i) int gamma(s+w)/gamma(s) x^-w dw/w
cplx LFunction::smoothed_sum(cplx s, double x_scale, bool dual) const {
  const cplx lg0 = log_gamma_factor(s);
  // G(w) = exp(-i beta w) balances the exponential size of gamma(s+w)/gamma(s)
  // when |Im s| is large; G(0) = 1 and the dual side uses G(-w), i.e. -beta.
  const double rate = kPi / 4.0 * static_cast<double>(d_.gamma_r.size() + 2 * d_.gamma_c.size());
  const double tau = s.imag();
  // residual growth exp(kGrowth) is tolerated; the rotation also slows the
  // decay of V in x, so it is capped at kRotation of the full rate
  const double beta = (tau > 0 ? 1.0 : -1.0) * std::min(kRotation * rate, std::max(0.0, rate - kGrowth / std::abs(tau)));
  auto log_kernel = [&](double t) {
    cplx w(kAbscissa, t);
    return log_gamma_factor(s + w) - lg0 - std::log(w) - cplx(0, beta) * w;
  };
  double peak = log_kernel(0).real();
  double t_lo = 0, t_hi = 0;
  for (;;) {
    double v = log_kernel(t_hi + 1.0).real();
    peak = std::max(peak, v);
    t_hi += 1.0;
    if (v < peak - kCut && t_hi > -tau + 1) break;
  }
  for (;;) {
    double v = log_kernel(t_lo - 1.0).real();
    peak = std::max(peak, v);
    t_lo -= 1.0;
    if (v < peak - kCut && t_lo < -tau - 1) break;
  }
  const int nodes = static_cast<int>(std::ceil((t_hi - t_lo) / kStep));
  std::vector<cplx> omega(static_cast<std::size_t>(nodes + 1));
  for (int j = 0; j <= nodes; ++j) omega[static_cast<std::size_t>(j)] = kStep / kTwoPi * std::exp(log_kernel(t_lo + j * kStep));

  auto V = [&](double x) {
    const double lx = std::log(x);
    const cplx rot = std::exp(cplx(0, -kStep * lx));
    cplx e = std::pow(x, -kAbscissa) * std::exp(cplx(0, -t_lo * lx)), acc = 0;
    for (const auto& o : omega) {
      acc += o * e;
      e *= rot;
    }
    return acc;
  };
  // V decays exponentially; stop at the first dyadic n past which the terms are negligible
  const i64 K = static_cast<i64>(d_.coeffs.size()) - 1;
  const double growth = std::max(0.0, -s.real()) + 0.5;
  double mass = 0;
  for (const auto& o : omega) mass += std::abs(o);
  auto negligible = [&](i64 n) {
    const double x = static_cast<double>(n) / x_scale;
    const double v = std::abs(V(x));
    return v * std::pow(static_cast<double>(n), growth) < 1e-17 || v < 1e-14 * mass * std::pow(x, -kAbscissa);
  };
  i64 n_stop = 1;
  while (!(negligible(n_stop) && negligible(2 * n_stop))) {
    n_stop *= 2;
    if (n_stop > K) throw InsufficientTable("L-series table too short for the approximate functional equation");
  }
  n_stop = std::min(2 * n_stop, K);
  CompensatedSum acc;
  for (i64 n = 1; n <= n_stop; ++n) {
    const cplx b = d_.coeffs[static_cast<std::size_t>(n)];
    if (b == 0.0) continue;
    const cplx bn = dual ? std::conj(b) : b;
    acc.add(bn * std::exp(-s * std::log(static_cast<double>(n))) * V(static_cast<double>(n) / x_scale));
  }
  return acc.value();
}

std::pair<cplx, cplx> LFunction::afe_parts(cplx s, double X) const {
  cplx first = smoothed_sum(s, X, false);
  cplx second = std::exp(log_gamma_factor(1.0 - s) - log_gamma_factor(s)) * smoothed_sum(1.0 - s, 1.0 / X, true);
  return {first, second};
}

cplx LFunction::operator()(cplx s, double X) const {
  if (d_.finite) {
    CompensatedSum acc;
    for (std::size_t n = 1; n < d_.coeffs.size(); ++n)
      if (d_.coeffs[n] != 0.0) acc.add(d_.coeffs[n] * std::exp(-s * std::log(static_cast<double>(n))));
    return acc.value();
  }
  auto [a, b] = afe_parts(s, X);
  return a + d_.root_number * b;
}

cplx estimate_root_number(const LFunction& L, cplx s0, double X1, double X2, double tol) {
  auto [a1, b1] = L.afe_parts(s0, X1);
  auto [a2, b2] = L.afe_parts(s0, X2);
  cplx eps = (a1 - a2) / (b2 - b1);
  for (double sgn : {1.0, -1.0})
    if (std::abs(eps - sgn) < tol) return sgn;
  throw NotConverged("root number estimate " + std::to_string(eps.real()) + "+" + std::to_string(eps.imag()) + "i");
}

LSeriesData gl2_lseries(const GL2Form& g, i64 terms) {
  LSeriesData d;
  d.coeffs.assign(static_cast<std::size_t>(terms + 1), 0.0);
  for (i64 n = 1; n <= terms; ++n) d.coeffs[static_cast<std::size_t>(n)] = g.eigenvalue(n);
  d.gamma_c = {0.5 * (g.weight - 1)};
  d.root_number = (g.weight % 4 == 0) ? 1.0 : -1.0;
  return d;
}

LSeriesData rankin_selberg_lseries(const GL2Form& g, const GL3Coeffs& Pi, i64 terms) {
  LSeriesData d;
  d.coeffs.assign(static_cast<std::size_t>(terms + 1), 0.0);
  for (i64 m = 1; m * m <= terms; ++m)
    for (i64 n = 1; m * m * n <= terms; ++n) {
      cplx a = Pi(m, n);
      if (a != 0.0) d.coeffs[static_cast<std::size_t>(m * m * n)] += g.eigenvalue(n) * a;
    }
  d.finite = Pi.finite_support();
  const double h = 0.5 * (g.weight - 1);
  d.gamma_c = {h, h, 3 * h};
  return d;
}

std::vector<cplx> rankin_selberg_euler_coeffs(const GL2Form& g, i64 terms) {
  std::vector<cplx> b(static_cast<std::size_t>(terms + 1), 0.0);
  b[1] = 1.0;
  for (i64 p : primes_up_to(terms)) {
    double lp = g.eigenvalue(p);
    double th = std::acos(std::clamp(0.5 * lp, -1.0, 1.0));
    cplx a = std::polar(1.0, th);
    std::vector<cplx> roots;
    for (cplx x : {a, std::conj(a)})
      for (cplx y : {a * a, cplx(1.0), std::conj(a) * std::conj(a)}) roots.push_back(x * y);
    int E = 0;
    for (i64 pe = p; pe <= terms; pe *= p) ++E;
    // complete homogeneous symmetric polynomials h_j(roots), j <= E
    std::vector<cplx> h(static_cast<std::size_t>(E + 1), 0.0);
    h[0] = 1.0;
    for (cplx r : roots)
      for (int j = 1; j <= E; ++j) h[static_cast<std::size_t>(j)] += r * h[static_cast<std::size_t>(j - 1)];
    // multiply into b: b(n p^j) for n coprime to p
    for (i64 n = terms / p; n >= 1; --n) {
      if (n % p == 0 || b[static_cast<std::size_t>(n)] == 0.0) continue;
      i64 pe = p;
      for (int j = 1; j <= E && n * pe <= terms; ++j, pe *= p)
        b[static_cast<std::size_t>(n * pe)] = b[static_cast<std::size_t>(n)] * h[static_cast<std::size_t>(j)];
    }
  }
  return b;
}

}  // namespace gl3m
