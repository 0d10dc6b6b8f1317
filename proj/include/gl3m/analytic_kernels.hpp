#pragma once

#include <array>
#include <vector>

#include "gl3m/arith.hpp"

namespace gl3m {

struct LanglandsParams {
  std::array<cplx, 3> rho{};     // F
  std::array<cplx, 3> lambda{};  // Pi
  std::array<cplx, 3> alpha{};   // Voronoi parameters of Pi
  double T = 10.0;

  // Throws HypothesisViolation when a triple does not sum to zero.
  void validate() const;
};

struct ContourSpec {
  double sigma = 1.0;
  double height = 0.0;  // 0 selects the height where the mollifier has decayed by 1e-14
  int nodes = 4096;
};

// Power of pi in gamma(Pi x F, s): Standard is prod pi^(-(s+l+r)/2),
// Literal is prod pi^(s+l+r).
enum class PiConvention { Standard, Literal };

struct WeightParams {
  int B = 2;
  int k = 12;
  LanglandsParams langlands;
  double s = 0.5;
  PiConvention pi = PiConvention::Standard;
};

enum class WeightKind { V, Vtilde, W, Wtilde };

const char* weight_name(WeightKind kind);

// (2 pi)^(-3s) prod Gamma(s + (k+1)/2 + rho_i)
cplx log_gamma_factor_gF(cplx s, const WeightParams& wp);
cplx gamma_factor_gF(cplx s, const WeightParams& wp);

// prod_{i,j} pi^(...) Gamma((s + lambda_i + rho_j)/2), pi power per wp.pi
cplx log_gamma_factor_PiF(cplx s, const WeightParams& wp);
cplx gamma_factor_PiF(cplx s, const WeightParams& wp);

// Vertical-line integral (1/2 pi i) int y^-u G(u) gamma(...)/gamma(s) du/u
// at abscissa c.sigma without the sign restriction on sigma. Throws
// ContourOnPole when the line meets 0 or a gamma pole.
class WeightFunction {
 public:
  WeightFunction(WeightKind kind, const WeightParams& wp, const ContourSpec& c);
  cplx operator()(double y) const;
  double height() const { return H_; }
  WeightKind kind() const { return kind_; }
  // value of the integrand's non-oscillatory part at u
  cplx kernel(cplx u) const;

 private:
  WeightKind kind_;
  WeightParams wp_;
  double sigma_, H_;
  std::vector<cplx> u_, w_;
};

// Throw ContourOnPole unless sigma > 0.
cplx weight_V(double y, const WeightParams& wp, const ContourSpec& c);
cplx weight_Vtilde(double y, const WeightParams& wp, const ContourSpec& c);
cplx weight_W(double y, const WeightParams& wp, const ContourSpec& c);
cplx weight_Wtilde(double y, const WeightParams& wp, const ContourSpec& c);

// Limit of the weight for y -> 0: residue of the integrand at u = 0.
cplx weight_plateau(WeightKind kind, const WeightParams& wp);

// prod Gamma(1/4 + (l_i + r_j)/2) / Gamma(1/4 - (l_i + r_j)/2)
cplx wtilde_plateau_product(const WeightParams& wp);

struct ProfileRow {
  double y;
  cplx value;
};
std::vector<ProfileRow> weight_profile(WeightKind kind, const WeightParams& wp, const ContourSpec& c,
                                       const std::vector<double>& ys);

}  // namespace gl3m
