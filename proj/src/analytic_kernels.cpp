#include "gl3m/analytic_kernels.hpp"

#include <cmath>

#include "gl3m/errors.hpp"
#include "gl3m/special.hpp"

namespace gl3m {

namespace {

struct GammaArg {
  cplx a;
  double b;  // Gamma(a + b*u)
};

bool tilde(WeightKind k) { return k == WeightKind::Vtilde || k == WeightKind::Wtilde; }
bool is_pi(WeightKind k) { return k == WeightKind::W || k == WeightKind::Wtilde; }

std::vector<GammaArg> gamma_args(WeightKind kind, const WeightParams& wp) {
  std::vector<GammaArg> out;
  const auto& L = wp.langlands;
  double sgn = tilde(kind) ? -1.0 : 1.0;
  double s0 = tilde(kind) ? 1.0 - wp.s : wp.s;
  if (!is_pi(kind)) {
    for (cplx r : L.rho) out.push_back({s0 + 0.5 * (wp.k + 1) + r, sgn});
  } else {
    for (cplx l : L.lambda)
      for (cplx r : L.rho) out.push_back({0.5 * (s0 + l + r), 0.5 * sgn});
  }
  return out;
}

}  // namespace

void LanglandsParams::validate() const {
  auto check = [](const std::array<cplx, 3>& t, const char* name) {
    if (std::abs(t[0] + t[1] + t[2]) > 1e-12) throw HypothesisViolation(std::string(name) + " does not sum to zero");
  };
  check(rho, "rho");
  check(lambda, "lambda");
  check(alpha, "alpha");
  if (!(T > 0)) throw HypothesisViolation("T must be positive");
}

const char* weight_name(WeightKind kind) {
  switch (kind) {
    case WeightKind::V: return "V";
    case WeightKind::Vtilde: return "Vtilde";
    case WeightKind::W: return "W";
    case WeightKind::Wtilde: return "Wtilde";
  }
  return "?";
}

cplx log_gamma_factor_gF(cplx s, const WeightParams& wp) {
  cplx v = -3.0 * s * std::log(kTwoPi);
  for (cplx r : wp.langlands.rho) v += log_gamma(s + 0.5 * (wp.k + 1) + r);
  return v;
}

cplx gamma_factor_gF(cplx s, const WeightParams& wp) { return std::exp(log_gamma_factor_gF(s, wp)); }

cplx log_gamma_factor_PiF(cplx s, const WeightParams& wp) {
  const double lp = std::log(kPi);
  cplx v = 0;
  for (cplx l : wp.langlands.lambda)
    for (cplx r : wp.langlands.rho) {
      cplx a = s + l + r;
      v += (wp.pi == PiConvention::Literal ? a : -0.5 * a) * lp + log_gamma(0.5 * a);
    }
  return v;
}

cplx gamma_factor_PiF(cplx s, const WeightParams& wp) { return std::exp(log_gamma_factor_PiF(s, wp)); }

WeightFunction::WeightFunction(WeightKind kind, const WeightParams& wp, const ContourSpec& c)
    : kind_(kind), wp_(wp), sigma_(c.sigma) {
  wp.langlands.validate();
  if (c.nodes < 64) throw InvalidArgument("contour needs at least 64 nodes");
  const int power = is_pi(kind) ? 24 : 12;
  if (std::abs(sigma_) >= 2.0 * wp.B) throw OutsideStrip("abscissa outside the mollifier strip");
  if (std::abs(sigma_) < 1e-12) throw ContourOnPole("abscissa through u = 0");
  for (const auto& g : gamma_args(kind, wp)) {
    for (int j = 0; j < 400; ++j) {
      cplx u = (-static_cast<double>(j) - g.a) / g.b;
      if (std::abs(u.real() - sigma_) < 1e-9) throw ContourOnPole("abscissa through a gamma pole");
    }
  }
  H_ = c.height;
  if (H_ <= 0) {
    const double ref = log_mollifier(sigma_, wp.B, power).real();
    H_ = 0.5;
    while (log_mollifier(cplx(sigma_, H_), wp.B, power).real() - ref > std::log(1e-14)) H_ += 0.05;
  }
  const int n = c.nodes;
  const double h = 2.0 * H_ / n;
  u_.resize(static_cast<std::size_t>(n + 1));
  w_.resize(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    cplx u(sigma_, -H_ + h * i);
    double end = (i == 0 || i == n) ? 0.5 : 1.0;
    u_[static_cast<std::size_t>(i)] = u;
    w_[static_cast<std::size_t>(i)] = end * h / kTwoPi * kernel(u);
  }
}

cplx WeightFunction::kernel(cplx u) const {
  const bool pi = is_pi(kind_);
  const int power = pi ? 24 : 12;
  cplx arg = tilde(kind_) ? 1.0 - wp_.s - u : wp_.s + u;
  cplx lg = pi ? log_gamma_factor_PiF(arg, wp_) - log_gamma_factor_PiF(wp_.s, wp_)
               : log_gamma_factor_gF(arg, wp_) - log_gamma_factor_gF(wp_.s, wp_);
  return std::exp(log_mollifier(u, wp_.B, power) + lg) / u;
}

cplx WeightFunction::operator()(double y) const {
  if (!(y > 0)) throw InvalidArgument("weight argument must be positive");
  const double ly = std::log(y);
  CompensatedSum s;
  for (std::size_t i = 0; i < u_.size(); ++i) s.add(w_[i] * std::exp(-u_[i] * ly));
  return s.value();
}

namespace {

cplx checked_weight(WeightKind kind, double y, const WeightParams& wp, const ContourSpec& c) {
  if (!(c.sigma > 0)) throw ContourOnPole("weight needs sigma > 0");
  return WeightFunction(kind, wp, c)(y);
}

}  // namespace

cplx weight_V(double y, const WeightParams& wp, const ContourSpec& c) { return checked_weight(WeightKind::V, y, wp, c); }
cplx weight_Vtilde(double y, const WeightParams& wp, const ContourSpec& c) {
  return checked_weight(WeightKind::Vtilde, y, wp, c);
}
cplx weight_W(double y, const WeightParams& wp, const ContourSpec& c) { return checked_weight(WeightKind::W, y, wp, c); }
cplx weight_Wtilde(double y, const WeightParams& wp, const ContourSpec& c) {
  return checked_weight(WeightKind::Wtilde, y, wp, c);
}

cplx weight_plateau(WeightKind kind, const WeightParams& wp) {
  if (!tilde(kind)) return 1.0;
  cplx a = 1.0 - wp.s, b = wp.s;
  return kind == WeightKind::Vtilde ? std::exp(log_gamma_factor_gF(a, wp) - log_gamma_factor_gF(b, wp))
                                    : std::exp(log_gamma_factor_PiF(a, wp) - log_gamma_factor_PiF(b, wp));
}

cplx wtilde_plateau_product(const WeightParams& wp) {
  cplx v = 0;
  for (cplx l : wp.langlands.lambda)
    for (cplx r : wp.langlands.rho) v += log_gamma(0.25 + 0.5 * (l + r)) - log_gamma(0.25 - 0.5 * (l + r));
  return std::exp(v);
}

std::vector<ProfileRow> weight_profile(WeightKind kind, const WeightParams& wp, const ContourSpec& c,
                                       const std::vector<double>& ys) {
  WeightFunction f(kind, wp, c);
  std::vector<ProfileRow> out;
  out.reserve(ys.size());
  for (double y : ys) out.push_back({y, f(y)});
  return out;
}

}  // namespace gl3m
