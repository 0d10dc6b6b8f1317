#pragma once

#include <vector>

#include "gl3m/analytic_kernels.hpp"
#include "gl3m/arith.hpp"
#include "gl3m/coeffs.hpp"

namespace gl3m {

// phi(t) = bump(t/scale) on [lo, hi]; zero selects phi = 0.
struct VoronoiTestFunction {
  double lo = 0.5, hi = 2.5;
  double scale = 1.0;
  bool zero = false;

  double operator()(double t) const;
  double support_lo() const { return lo * scale; }
  double support_hi() const { return hi * scale; }
};

// int phi(t) t^(s-1) dt, trapezoid in log t.
cplx mellin_of_phi(const VoronoiTestFunction& phi, cplx s, int nodes = 2048);

// Mellin transform on many points sharing one log-grid.
class MellinTable {
 public:
  explicit MellinTable(const VoronoiTestFunction& phi, int nodes = 2048);
  cplx operator()(cplx s) const;
  // values at s0 + i*k*dt for k = 0..count-1
  std::vector<cplx> on_line(cplx s0, double dt, int count) const;

 private:
  std::vector<double> u_, g_;
};

// As displayed for spherical parameters: the two gamma quotients in
// (s + alpha_j)/2 combined with -+i. Throws PoleAt at a numerator pole.
cplx gamma_pm(cplx s, const std::array<cplx, 3>& alpha, int sign);
inline cplx gamma_pm(cplx s, const LanglandsParams& lp, int sign) { return gamma_pm(s, lp.alpha, sign); }

// Kernel of the Voronoi transform for general archimedean data:
// (eps_even R_even(s) + sign * eps_odd R_odd(s)) / 2 with
// R(s) = prod Gamma_R(1 + s + dual_j) / prod Gamma_R(-s + shift_j).
// For spherical alpha this equals pi^(-3s-3/2)/2 * gamma_pm(s + 1, alpha, sign).
cplx voronoi_kernel(cplx s, const ArchimedeanType& arch, int sign);

struct VoronoiContour {
  double sigma = -0.5;
  double height = 1500.0;
  double step = 0.1;
  int mellin_nodes = 2048;
};

// Omega_+-(y) = (1/2 pi i) int_(sigma) y^-s K_+-(s) phi~(-s) ds for fixed
// archimedean data and test function. Throws ContourOnPole when sigma meets a
// kernel pole.
class OmegaTransform {
 public:
  OmegaTransform(const ArchimedeanType& arch, const VoronoiTestFunction& phi, const VoronoiContour& c = {});
  cplx operator()(double y, int sign) const;
  std::pair<cplx, cplx> both(double y) const;  // (Omega_+, Omega_-)
  double tail_ratio() const { return tail_ratio_; }

 private:
  std::pair<cplx, cplx> parts(double y) const;  // even and odd integrals
  ArchimedeanType arch_;
  double sigma_, t0_, dt_;
  std::vector<cplx> we_, wo_;
  double tail_ratio_ = 0;
};

cplx omega_pm(double x, const VoronoiTestFunction& phi, const std::array<cplx, 3>& alpha, int sign,
              const VoronoiContour& c = {});

struct VoronoiInstance {
  const GL3Coeffs* coeffs = nullptr;
  i64 a = 1, c = 2, m = 1;
  double x = 20.0;
  VoronoiTestFunction phi;
};

struct VoronoiCutoffRow {
  i64 cutoff;
  cplx rhs;
  double residual;
  double tail;  // magnitude of the last dyadic block
};

struct VoronoiReport {
  cplx lhs, rhs;
  double residual = 0;  // |lhs - rhs| / (1 + |lhs|) at the largest cutoff
  double tail = 0;
  std::vector<VoronoiCutoffRow> rows;
  bool monotone = true;  // residuals non-increasing up to the tail estimates
};

// Dual sum evaluated at cutoffs max_cutoff / 2^k down to first_cutoff.
// Throws InsufficientTable when the coefficients do not reach max_cutoff.
VoronoiReport voronoi_two_sides(const VoronoiInstance& inst, i64 max_cutoff, i64 first_cutoff = 125,
                                const VoronoiContour& c = {});

}  // namespace gl3m
