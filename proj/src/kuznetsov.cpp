#include "gl3m/kuznetsov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gl3m/errors.hpp"

namespace gl3m {

double TestFunctionH::bump(double t, double a, double b) {
  if (t <= a || t >= b) return 0.0;
  double z = (2.0 * t - a - b) / (b - a);
  return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

double TestFunctionH::operator()(double y1, double y2) const {
  if (zero) return 0.0;
  double p = bump(y1, a1, b1);
  return p == 0.0 ? 0.0 : p * bump(y2, a2, b2);
}

namespace {

inline cplx e_phase(double x) { return {std::cos(kTwoPi * x), std::sin(kTwoPi * x)}; }

cplx jtilde_level(double A, int eps, const TestFunctionH& H, const QuadratureBudget& q, int n) {
  const double hw = (H.b1 - H.a1) / n, hy = (H.b2 - H.a2) / n;
  cplx acc = 0;
  for (int iw = 0; iw < n; ++iw) {
    const double w1 = H.a1 + (iw + 0.5) * hw;
    for (int iy = 0; iy < n; ++iy) {
      const double y2 = H.a2 + (iy + 0.5) * hy;
      const double hbar = H(w1, y2);
      if (hbar == 0.0) continue;
      const double c = A * A / (w1 * y2);  // A/(y1 y2) with y1 = w1/A
      const double R = c / H.a2;
      double X1 = q.box;
      if (q.prune) {
        if (R <= 1.0) continue;
        X1 = std::sqrt(R * R - 1.0);
      }
      const double h1 = 2.0 * X1 / n;
      cplx inner = 0;
      for (int i1 = 0; i1 < n; ++i1) {
        const double x1 = -X1 + (i1 + 0.5) * h1, s1 = x1 * x1 + 1.0;
        double X2 = q.box;
        if (q.prune) {
          double r2 = R * std::sqrt(s1) - s1;
          if (r2 <= 0) continue;
          X2 = std::sqrt(r2);
        }
        const double h2 = 2.0 * X2 / n;
        cplx row = 0;
        for (int i2 = 0; i2 < n; ++i2) {
          const double x2 = -X2 + (i2 + 0.5) * h2, s = s1 + x2 * x2;
          const double hv = H(y2 * std::sqrt(s) / s1, c * std::sqrt(s1) / s);
          if (hv == 0.0) continue;
          row += hv * e_phase(-eps * x1 * w1 + y2 * x1 * x2 / s1 + c * x2 / s);
        }
        inner += row * h2;
      }
      acc += inner * (h1 * hbar / (w1 * y2 * y2));
    }
  }
  return acc * (hw * hy / (A * A));
}

cplx j_level(double A1, double A2, int e1, int e2, const TestFunctionH& H, const QuadratureBudget& q, int n) {
  const double hw1 = (H.b1 - H.a1) / n, hw2 = (H.b2 - H.a2) / n;
  cplx acc = 0;
  for (int i = 0; i < n; ++i) {
    const double w1 = H.a1 + (i + 0.5) * hw1;
    const double b = A1 * A1 / w1;  // A1/y1
    for (int j = 0; j < n; ++j) {
      const double w2 = H.a2 + (j + 0.5) * hw2;
      const double hbar = H(w1, w2);
      if (hbar == 0.0) continue;
      const double a = A2 * A2 / w2;  // A2/y2
      double Xq = q.box, X1 = q.box;
      if (q.prune) {
        // Q <= (a/a1) sqrt(P) and P <= (b/a2) sqrt(Q)
        const double ah = a / H.a1, bh = b / H.a2;
        const double qmax = std::pow(ah * ah * bh, 2.0 / 3.0), pmax = std::pow(bh * bh * ah, 2.0 / 3.0);
        if (qmax <= 1.0 || pmax <= 1.0) continue;
        Xq = std::sqrt(qmax - 1.0);
        X1 = std::sqrt(pmax - 1.0);
      }
      const double h1 = 2.0 * X1 / n, h2 = 2.0 * Xq / n;
      cplx sub = 0;
      for (int k2 = 0; k2 < n; ++k2) {
        const double x2 = -Xq + (k2 + 0.5) * h2;
        double X3 = q.box;
        if (q.prune) {
          double r = Xq * Xq - x2 * x2;
          if (r <= 0) continue;
          X3 = std::sqrt(r);
        }
        const double h3 = 2.0 * X3 / n;
        cplx s3 = 0;
        for (int k3 = 0; k3 < n; ++k3) {
          const double x3 = -X3 + (k3 + 0.5) * h3;
          const double Q = x3 * x3 + x2 * x2 + 1.0, sq = std::sqrt(Q);
          cplx s1 = 0;
          for (int k1 = 0; k1 < n; ++k1) {
            const double x1 = -X1 + (k1 + 0.5) * h1;
            const double u = x1 * x2 - x3, P = u * u + x1 * x1 + 1.0, sp = std::sqrt(P);
            const double hv = H(a * sp / Q, b * sq / P);
            if (hv == 0.0) continue;
            const double ph = -e1 * x1 * w1 - e2 * x2 * w2 - a * (x1 * x3 + x2) / Q - b * (x2 * u + x1) / P;
            s1 += hv * e_phase(ph);
          }
          s3 += s1 * h3;
        }
        sub += s3 * h2;
      }
      acc += sub * (h1 * hbar / (w1 * w2));
    }
  }
  return acc * (hw1 * hw2 / (A1 * A1 * A2 * A2));
}

template <class F>
KernelValue refine(F&& level, const QuadratureBudget& q) {
  if (q.nodes < 2 || q.levels < 0 || !(q.growth > 1.0)) throw InvalidArgument("invalid quadrature budget");
  int n = q.nodes;
  cplx prev = level(n), cur = prev;
  for (int d = 0; d < q.levels; ++d) {
    n = std::max(n + 1, static_cast<int>(std::lround(n * q.growth)));
    prev = cur;
    cur = level(n);
  }
  KernelValue out{cur, q.levels > 0 ? std::abs(cur - prev) : 0.0, n};
  if (out.error > q.tol * std::max(std::abs(cur), q.abs_scale))
  {
    char msg[96];
    std::snprintf(msg, sizeof msg, "quadrature error %.3g above tolerance at |value| %.3g", out.error, std::abs(cur));
    throw BudgetExceeded(msg);
  }
  return out;
}

}  // namespace

KernelValue kernel_Jtilde(double A, int eps, const TestFunctionH& H, const QuadratureBudget& q) {
  if (!(A > 0)) throw InvalidArgument("A must be positive");
  if (eps != 1 && eps != -1) throw InvalidArgument("eps must be +-1");
  return refine([&](int n) { return jtilde_level(A, eps, H, q, n); }, q);
}

KernelValue kernel_J(double A1, double A2, int eps1, int eps2, const TestFunctionH& H, const QuadratureBudget& q) {
  if (!(A1 > 0) || !(A2 > 0)) throw InvalidArgument("A1, A2 must be positive");
  if (std::abs(eps1) != 1 || std::abs(eps2) != 1) throw InvalidArgument("signs must be +-1");
  return refine([&](int n) { return j_level(A1, A2, eps1, eps2, H, q, n); }, q);
}

double jtilde_support_edge(const TestFunctionH& H) { return std::sqrt(H.a1 * H.a2 * H.a2); }

bool j_support_possible(double A1, double A2, const TestFunctionH& H) {
  // largest admissible a = A2^2/(w2 a1), b = A1^2/(w1 a2) at w = lower box edges
  const double a = A2 * A2 / (H.a2 * H.a1), b = A1 * A1 / (H.a1 * H.a2);
  return a * a * b > 1.0 && b * b * a > 1.0;
}

SupportCalibration calibrate_jtilde_support(const TestFunctionH& H, const QuadratureBudget& q, double frac,
                                            double a_lo, double a_hi, int points) {
  SupportCalibration cal{a_hi, 0.0, {}};
  for (int i = 0; i < points; ++i) {
    double A = a_lo * std::pow(a_hi / a_lo, static_cast<double>(i) / (points - 1));
    double v = std::abs(kernel_Jtilde(A, 1, H, q).value);
    cal.scan.emplace_back(A, v);
    cal.peak = std::max(cal.peak, v);
  }
  for (auto [A, v] : cal.scan)
    if (v > frac * cal.peak) {
      cal.threshold = A;
      break;
    }
  return cal;
}

DerivativeRatio derivative_ratio_probe(double A1, double A2, int eps1, int eps2, int i, int j, const TestFunctionH& H,
                                       const QuadratureBudget& q, double h) {
  if (i < 0 || j < 0 || i > 2 || j > 2) throw InvalidArgument("derivative orders must be in 0..2");
  auto stencil = [](int order) -> std::vector<std::pair<int, double>> {
    if (order == 0) return {{0, 1.0}};
    if (order == 1) return {{-1, -0.5}, {1, 0.5}};
    return {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
  };
  auto diff = [&](double step) {
    if (A1 - step <= 0 || A2 - step <= 0) throw InvalidArgument("finite-difference step leaves A > 0");
    cplx acc = 0;
    for (auto [a, ca] : stencil(i))
      for (auto [b, cb] : stencil(j))
        acc += ca * cb * kernel_J(A1 + a * step, A2 + b * step, eps1, eps2, H, q).value;
    return acc / (std::pow(step, i) * std::pow(step, j));
  };
  cplx d = diff(h);
  if (i + j > 0) {
    cplx d2 = diff(0.5 * h);
    d = d2 + (d2 - d) / 3.0;
  }
  DerivativeRatio r{A1, A2, i, j, std::abs(d), 0.0, h};
  const double s1 = std::cbrt(A1) * std::pow(A2, 2.0 / 3.0), s2 = std::pow(A1, 2.0 / 3.0) * std::cbrt(A2);
  r.ratio = r.derivative / (std::pow(s1, i) * std::pow(s2, j));
  return r;
}

}  // namespace gl3m
