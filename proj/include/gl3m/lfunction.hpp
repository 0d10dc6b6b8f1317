#pragma once

#include <vector>

#include "gl3m/arith.hpp"
#include "gl3m/coeffs.hpp"

namespace gl3m {

// L(s) = sum b(n) n^-s with completion gamma(s) L(s) = eps * gamma(1-s) L(1-s),
// gamma(s) = prod Gamma_R(s + r_j) prod Gamma_C(s + c_j). Coefficients are
// assumed real, so the dual series has the same coefficients.
struct LSeriesData {
  std::vector<cplx> coeffs;  // coeffs[0] unused
  std::vector<double> gamma_r, gamma_c;
  cplx root_number{1.0, 0.0};
  bool finite = false;  // exact Dirichlet polynomial, no functional equation used
};

class LFunction {
 public:
  explicit LFunction(LSeriesData data);

  // Smoothed approximate functional equation with splitting parameter X.
  // Throws InsufficientTable when the required terms exceed the table.
  cplx operator()(cplx s, double X = 1.0) const;
  // The two sums of the approximate functional equation (first, dual without eps).
  std::pair<cplx, cplx> afe_parts(cplx s, double X) const;

  cplx log_gamma_factor(cplx s) const;
  const LSeriesData& data() const { return d_; }
  void set_root_number(cplx eps) { d_.root_number = eps; }

 private:
  cplx smoothed_sum(cplx s, double x_scale, bool dual) const;
  LSeriesData d_;
};

// Root number from two splitting parameters, rounded to +-1. Throws
// NotConverged when the estimate is not within tol of a sign.
cplx estimate_root_number(const LFunction& L, cplx s0, double X1, double X2, double tol = 1e-6);

// L(s, g)
LSeriesData gl2_lseries(const GL2Form& g, i64 terms);
// L(s, g x Pi) with b(N) = sum_{m^2 n = N} lambda_g(n) A(m,n)
LSeriesData rankin_selberg_lseries(const GL2Form& g, const GL3Coeffs& Pi, i64 terms);
// Same coefficients from the Euler factors prod (1 - alpha_i beta_j p^-s)^-1 of g x sym^2 g.
std::vector<cplx> rankin_selberg_euler_coeffs(const GL2Form& g, i64 terms);

}  // namespace gl3m
