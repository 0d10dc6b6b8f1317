#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gl3m/analytic_kernels.hpp"
#include "gl3m/arith.hpp"
#include "gl3m/coeffs.hpp"
#include "gl3m/kuznetsov.hpp"
#include "gl3m/voronoi.hpp"

namespace gl3m {

// Index roles follow the off-diagonal displays: n runs with g, m with Pi, and
// l is the auxiliary index weighted by Wtilde(l).

struct DiagonalConfig {
  double step = 0.02;  // common to u and v so that u + v stays on one lattice
  double height_u = 4.0, height_v = 2.5;
  double rho = 0.25, tau = 0.25;                    // starting abscissae
  double shift_u = -1.0 / 18, shift_v = -1.0 / 12;  // shifted abscissae
  i64 terms = 20000;                                // coefficient table of L(s, g x Pi)
  bool zero_G2 = false;
};

struct Sigma6Config {
  std::vector<i64> q_grid{11, 23, 47, 97, 199};
  i64 m_budget = 512;  // desk cap on m <= q^(3/2)
  double a_lo = 0.5, a_hi = 2.0;
  int grid_points = 9;
  QuadratureBudget kernel_budget{24, 1, 4.0 / 3, 5e-2, 1e-3};
  bool evaluate_V = false;  // false: V = 1, the plateau value over the summation range
  bool zero_kernel = false;
};

struct WiltonConfig {
  std::vector<double> X_grid{1e3, 3e3, 1e4, 3e4, 1e5};
  int alpha_points = 200;
  VoronoiTestFunction h{1.0, 2.0};
};

struct MomentConfig {
  i64 q = 10007;
  i64 m_cut = -1, n_cut = -1;  // negative: q^(3/2) and q
  i64 l_cut = 16;
  double c_eps = 0.1;          // c1 <= q^(1/6 + c_eps), c2 <= q^(1/3 + c_eps)
  i64 q0 = 10000;
  int weight = 12;             // g of this weight, Pi = sym^2 g
  WeightParams weights;
  TestFunctionH H;
  double residue = 1.0;        // stand-in for Res L(s, F x F~) at s = 1
  double support_threshold = 0;  // 0: calibrate from the Jtilde scan
  double audit_floor = 1e-3;   // shapes with smaller kernel argument are certified in bulk
  double l1_tol = 1e-3;
  DiagonalConfig diagonal;
  Sigma6Config sigma6;
  WiltonConfig wilton;
  int alpha_cmax = 12;
  std::vector<i64> alpha_q{7, 11};

  i64 m_limit() const;
  i64 n_limit() const;
  i64 c1_limit(i64 level) const;
  i64 c2_limit(i64 level) const;
};

nlohmann::json to_json(const MomentConfig& cfg);
// Missing keys keep their defaults.
MomentConfig moment_config_from_json(const nlohmann::json& j);

// [SL(3,Z) : Gamma_0(q)] with Gamma_0(q) the matrices whose bottom row is
// (0, 0, *) mod q: q^2 prod_{p | q} (1 + 1/p + 1/p^2), i.e. q^2 + q + 1 for prime q.
struct NormalizationFactor {
  i64 q = 1;
  double residue = 1.0;

  static i64 index(i64 q);
  double value() const { return static_cast<double>(index(q)) * residue; }
};

struct L1Value {
  double value = 0;         // mean of the two smoothing scales
  double scale1 = 0, scale2 = 0;
  double root_number = 1;
  i64 terms = 0;
};

// L(1, g x Pi) from the approximate functional equation at splitting
// parameters 1 and 2. Throws NotConverged when they differ by more than tol
// (relative), InsufficientTable when the table is too short.
L1Value L1_g_cross_Pi(const GL2Form& g, const GL3Coeffs& Pi, double tol = 1e-3, i64 terms = 20000);

struct DiagonalReport {
  cplx main_term;          // residue at (0, 0): L(1, g x Pi) L(1, g)
  cplx contour_value;      // double integral at (rho, tau)
  cplx shifted_remainder;  // the three integrals on the shifted lines
  cplx u_line, v_line, double_line;
  double discrepancy = 0;  // |contour - main - shifted| / |contour|
  double l1_g_cross_pi = 0, l1_g = 0;
  double root_number = 1;
};

// (1/2 pi i)^2 int int L(1 + 3u, g x Pi) L(1 + u + v, g) G1(u) G2(v) du dv/(uv)
// evaluated directly and through the residue at the origin.
DiagonalReport diagonal_term(const MomentConfig& cfg);

struct ShapeRow {
  char sum;  // '4' or '5'
  i64 D1, D2;
  double argument;  // largest kernel argument over the cutoffs
};

struct SupportAudit {
  i64 q = 0, m_cut = 0, n_cut = 0, l_cut = 0;
  double threshold = 0;
  i64 shapes = 0;
  i64 above = 0;
  double max_argument = 0;
  bool below_q0 = false;
  std::vector<ShapeRow> worst;  // largest arguments, descending
  bool passed() const { return above == 0; }
};

// Divisor shapes of Sigma_4 (qD2 | D1 = n D2^2, argument sqrt(ml/(D1 D2))) and
// Sigma_5 (q | D1 | D2, ml D2 = D1^2, argument sqrt(mnl/(D1 D2))) within the
// cutoffs, against the Jtilde support threshold. Never throws on a failed
// audit: above-threshold shapes are counted.
SupportAudit sigma45_support_audit(const MomentConfig& cfg);

// sum_{alpha mod c2 c2'} S(alpha, qbar c1; c2) conj(S(alpha, qbar c1'; c2')),
// qbar the inverse of q mod c2 resp. c2'. Throws NotCoprime when q shares a
// factor with c2 c2', BudgetExceeded when c2 c2' > 1e5.
cplx alpha_sum_orthogonality(i64 c2, i64 c2p, i64 c1, i64 c1p, i64 q);
// Exact value: 0 for c2 != c2', c2^2 c_{c2}(c1 - c1') for c2 = c2'.
i64 alpha_sum_closed_form(i64 c2, i64 c2p, i64 c1, i64 c1p);
i64 ramanujan_sum(i64 c, i64 k);

struct OrthogonalityRow {
  i64 c2, c2p, c1, c1p, q;
  cplx value;
  double tolerance;
};

struct OrthogonalitySweep {
  std::vector<OrthogonalityRow> off_diagonal_failures;
  i64 off_diagonal = 0, diagonal = 0, skipped = 0;
  double worst_off_ratio = 0;  // max |value| / (c2 c2')^(3/2)
  double min_diagonal = 0;
  bool passed() const { return off_diagonal_failures.empty() && min_diagonal > 0; }
};

// All c2, c2' <= cmax with gcd(c2 c2', q) = 1, c1 = c1' = 1.
OrthogonalitySweep alpha_orthogonality_sweep(int cmax, const std::vector<i64>& qs, double rel = 1e-8);

// J_{eps1,eps2} on a log grid, bilinear in log A. Arguments without support
// are exactly 0; supported arguments outside the grid are reported.
class KernelGrid {
 public:
  KernelGrid() = default;
  KernelGrid(const TestFunctionH& H, const Sigma6Config& c);
  // index 0..3 encodes (eps1, eps2) = (+,+), (+,-), (-,+), (-,-)
  bool inside(double A1, double A2) const;
  cplx operator()(int sign_index, double A1, double A2) const;
  bool zero() const { return zero_; }
  int evaluations() const { return evaluations_; }

 private:
  TestFunctionH H_;
  double lo_ = 1, hi_ = 1;
  int n_ = 0;
  bool zero_ = true;
  int evaluations_ = 0;
  std::vector<cplx> v_[4];
};

struct Sigma6Point {
  i64 q;
  cplx value;
  i64 terms = 0;    // supported terms inside the kernel grid
  i64 dropped = 0;  // supported terms outside the kernel grid
  i64 c1_cut = 0, c2_cut = 0, m_cut = 0;
};

struct Sigma6Trend {
  std::vector<Sigma6Point> points;
  double slope = 0, slope_error = 0;
  double target = -1.0 / 6;
  int kernel_evaluations = 0;
};

Sigma6Point sigma6_single(const MomentConfig& cfg, i64 q, const GL2Form& g, const GL3Coeffs& Pi,
                          const KernelGrid& grid);
// Throws BudgetExceeded when a kernel grid value misses its quadrature tolerance.
Sigma6Trend sigma6_truncated(const MomentConfig& cfg);

struct WiltonRow {
  double X;
  double sup;
  double alpha;  // maximizer on the grid
  double at_zero;
};

struct WiltonReport {
  std::vector<WiltonRow> rows;
  double exponent = 0, exponent_error = 0;
};

// j-th point of the alpha grid: frac(j (sqrt 5 - 1)/2), so j = 0 is alpha = 0.
// Rational grids j/P make the smoothed sums collapse once X exceeds P^2.
double kronecker_point(int j);

// sup over the first alpha_points grid points of |sum lambda_f(n) e(n alpha) h(n/X)|.
// Throws InsufficientTable when the table misses a prime below max X * supp h.
WiltonReport wilton_experiment(const GL2Form& f, const std::vector<double>& X_grid, int alpha_points,
                               const VoronoiTestFunction& h);

// least squares slope of y on x with its standard error
std::pair<double, double> fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SqReport {
  MomentConfig config;
  NormalizationFactor normalization;
  DiagonalReport diagonal;
  SupportAudit audit;
  OrthogonalitySweep orthogonality;
  Sigma6Trend sigma6;
  WiltonReport wilton;
  cplx xi_estimate;  // diagonal main term plus the truncated Sigma_6 at the largest grid level
};

SqReport assemble_S_q_report(const MomentConfig& cfg);
nlohmann::json to_json(const SqReport& r);
SqReport sq_report_from_json(const nlohmann::json& j);

}  // namespace gl3m
