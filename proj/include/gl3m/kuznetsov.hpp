#pragma once

#include <functional>
#include <vector>

#include "gl3m/arith.hpp"

namespace gl3m {

// Product bump phi1(y1) phi2(y2), phi(t) = exp(1 - 1/(1 - z^2)) with z the
// affine image of t in (-1, 1); unit peak, smooth, supported on the box.
struct TestFunctionH {
  double a1 = 1, b1 = 2, a2 = 1, b2 = 2;
  bool zero = false;

  double operator()(double y1, double y2) const;
  // H*(y1, y2) = H(y2, y1)
  TestFunctionH swapped() const { return {a2, b2, a1, b1, zero}; }
  static double bump(double t, double a, double b);
};

struct QuadratureBudget {
  int nodes = 24;          // midpoint nodes per dimension at the first level
  int levels = 1;          // refinements; the error is the change over the last one
  double growth = 4.0 / 3; // node multiplier per refinement
  double tol = 1e-3;       // relative, against max(|value|, abs_scale)
  double abs_scale = 1e-4;
  bool prune = true;       // restrict x to the region allowed by the H supports
  double box = 4.0;        // half-width of the x box when prune is off

  static QuadratureBudget jtilde_default() { return {48, 1, 4.0 / 3}; }
  static QuadratureBudget j_default() { return {32, 1, 4.0 / 3}; }
};

struct KernelValue {
  cplx value;
  double error = 0;
  int nodes = 0;
};

// A^-2 int e(-eps A x1 y1) e(y2 x1 x2/(x1^2+1)) e(A/(y1 y2) x2/(x1^2+x2^2+1))
//   H(y2 sqrt(x1^2+x2^2+1)/(x1^2+1), A/(y1 y2) sqrt(x1^2+1)/(x1^2+x2^2+1))
//   conj(H(A y1, y2)) dx1 dx2 dy1 dy2/(y1 y2^2)
// Throws BudgetExceeded when the refinement error exceeds the tolerance.
KernelValue kernel_Jtilde(double A, int eps, const TestFunctionH& H,
                          const QuadratureBudget& q = QuadratureBudget::jtilde_default());

// Five-fold transform with arguments (A1, A2) and signs (eps1, eps2).
KernelValue kernel_J(double A1, double A2, int eps1, int eps2, const TestFunctionH& H,
                     const QuadratureBudget& q = QuadratureBudget::j_default());

// Lower edge of the analytic support: Jtilde vanishes for A^2 < a1 a2^2 and J
// vanishes unless the box admits P, Q >= 1 (min(A1 A2^2, A2 A1^2) >= 1 for [1,2]^2).
double jtilde_support_edge(const TestFunctionH& H);
bool j_support_possible(double A1, double A2, const TestFunctionH& H);

// Smallest A on a geometric scan where |Jtilde(A)| exceeds frac * peak, with
// peak the maximum over the scan.
struct SupportCalibration {
  double threshold;
  double peak;
  std::vector<std::pair<double, double>> scan;  // (A, |Jtilde|)
};
SupportCalibration calibrate_jtilde_support(const TestFunctionH& H, const QuadratureBudget& q, double frac = 1e-3,
                                            double a_lo = 0.5, double a_hi = 2.2, int points = 18);

struct DerivativeRatio {
  double A1, A2;
  int i, j;
  double derivative;  // |d^i/dA1^i d^j/dA2^j J|
  double ratio;       // derivative / ((A1^(1/3) A2^(2/3))^i (A1^(2/3) A2^(1/3))^j)
  double step;
};

// Central differences with one Richardson step (h and h/2).
DerivativeRatio derivative_ratio_probe(double A1, double A2, int eps1, int eps2, int i, int j, const TestFunctionH& H,
                                       const QuadratureBudget& q = QuadratureBudget::j_default(),
                                       double h = 0.1);

}  // namespace gl3m
