// One line per acceptance criterion. Exit status 1 when any gating criterion
// fails; the Voronoi identity only warns.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "gl3m/analytic_kernels.hpp"
#include "gl3m/coeffs.hpp"
#include "gl3m/exp_sums.hpp"
#include "gl3m/kuznetsov.hpp"
#include "gl3m/moment_harness.hpp"
#include "gl3m/voronoi.hpp"

using namespace gl3m;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, bool experimental, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = secs <= budget_s;
  bool ok = o.pass && in_time;
  const char* tag = ok ? "PASS" : (experimental ? "WARN" : "FAIL");
  std::printf("criterion %2d %s  %s: %s [%.1f s of %.0f s%s]\n", id, tag, name, o.detail.c_str(), secs, budget_s,
              in_time ? "" : ", over budget");
  std::fflush(stdout);
  if (!ok && !experimental) ++failures;
}

std::vector<SweepRow> sweep_rows;

}  // namespace

int main() {
  criterion(1, "factorization identity", 300, false, [] {
    sweep_rows = factorization_sweep(30, {0, 1, 2, 3}, 1);
    i64 bad = 0;
    for (const auto& r : sweep_rows) bad += std::abs(r.enumerated - r.factorized) > 1e-6 * (1 + std::abs(r.enumerated));
    return Outcome{bad == 0 && sweep_rows.size() >= 14000,
                   std::to_string(sweep_rows.size()) + " cases, " + std::to_string(bad) + " mismatches"};
  });

  criterion(2, "prime-twist identity", 60, false, [] {
    i64 cases = 0, bad = 0;
    for (i64 q : {3, 5, 7})
      for (i64 D1 = 1; D1 <= 12; ++D1)
        for (i64 D2 = 1; D2 <= 12; ++D2) {
          if (gcd(D1 * D2, q) != 1) continue;
          for (i64 m1 : {1, 2})
            for (i64 m2 : {1, 2})
              for (i64 n1 : {1, 2})
                for (i64 n2 : {1, 2}) {
                  auto t = prime_twist_identity_check(m1, m2, n1, n2, q, D1, D2);
                  ++cases;
                  bad += std::abs(t.lhs - t.rhs) > 1e-6 * std::max(1.0, std::abs(t.lhs));
                }
        }
    return Outcome{bad == 0, std::to_string(cases) + " cases, " + std::to_string(bad) + " mismatches"};
  });

  criterion(3, "Weil-type bound with constant 4", 10, false, [] {
    if (sweep_rows.empty()) sweep_rows = factorization_sweep(30, {0, 1, 2, 3}, 1);
    i64 above = 0;
    double worst = 0;
    for (const auto& r : sweep_rows) {
      double ratio = r.bound.sum_modulus / r.bound.bound_value;
      worst = std::max(worst, ratio);
      above += ratio > 4.0;
    }
    return Outcome{above == 0, std::to_string(above) + " cases above, calibrated constant " + fmt("%.4f", worst)};
  });

  criterion(4, "weight-function lemmas", 120, false, [] {
    WeightParams wp;
    const double T3 = std::pow(wp.langlands.T, 3), T6 = T3 * T3;
    const double plateau = std::abs(weight_V(1e-4 * T3, wp, {1.0, 0, 4096}) - 1.0);
    const double decay = std::abs(weight_V(1e2 * T3, wp, {2.0, 0, 4096}));
    double shift = 0;
    for (auto kind : {WeightKind::V, WeightKind::Vtilde, WeightKind::W})
      for (double y : {1e-4 * T3, T3, 1e2 * T3}) {
        cplx a = WeightFunction(kind, wp, {0.5, 0, 4096})(y);
        for (double s : {1.0, 2.0}) shift = std::max(shift, std::abs(WeightFunction(kind, wp, {s, 0, 4096})(y) - a));
      }
    WeightFunction wt(WeightKind::Wtilde, wp, {0.25, 0, 4096});
    const double wplateau = std::abs(wt(1e-4 * T6) - wtilde_plateau_product(wp));
    const double wdecay = std::abs(wt(1e2 * T6));
    for (double y : {1e-4 * T6, T6}) shift = std::max(shift, std::abs(WeightFunction(WeightKind::Wtilde, wp, {0.1, 0, 4096})(y) - wt(y)));
    bool ok = plateau <= 5e-3 && decay <= 1e-2 && shift <= 1e-8 && wplateau <= 5e-3 && wdecay <= 1e-2;
    return Outcome{ok, fmt("|V-1| %.3g at 1e-4 T^3, |V| %.3g at 1e2 T^3, ", plateau, decay) +
                           fmt("|Wt-prod| %.3g at 1e-4 T^6, |Wt| %.3g at 1e2 T^6, ", wplateau, wdecay) +
                           fmt("max contour shift %.3g", shift)};
  });

  criterion(5, "kernel support", 600, false, [] {
    TestFunctionH H;
    auto cal = calibrate_jtilde_support(H, QuadratureBudget::jtilde_default());
    // small arguments are integrated over the full box as well as the pruned region
    auto full_t = QuadratureBudget::jtilde_default();
    full_t.prune = false;
    double small = 0;
    for (double A : {0.001, 0.01, 0.02, 0.05})
      for (int e : {1, -1})
        small = std::max({small, std::abs(kernel_Jtilde(A, e, H).value), std::abs(kernel_Jtilde(A, e, H, full_t).value)});
    const auto coarse = QuadratureBudget::j_default();
    auto full = coarse;
    full.prune = false;
    double peak = 0;
    for (auto [a1, a2] : {std::pair{1.5, 1.5}, {2.0, 1.5}, {1.5, 2.0}, {2.0, 2.0}})
      peak = std::max(peak, std::abs(kernel_J(a1, a2, 1, 1, H, coarse).value));
    double jsmall = 0;
    for (auto [a1, a2] : {std::pair{1e-4, 1.0}, {1.0, 1e-4}, {0.01, 1.0}, {0.02, 0.5}, {0.04, 2.5}})
      for (int e1 : {1, -1})
        for (int e2 : {1, -1}) {
          if (std::min(a1 * a2 * a2, a2 * a1 * a1) > 1e-4) continue;
          jsmall = std::max({jsmall, std::abs(kernel_J(a1, a2, e1, e2, H, coarse).value),
                             std::abs(kernel_J(a1, a2, e1, e2, H, full).value)});
        }
    bool ok = small <= 1e-3 * cal.peak && jsmall <= 1e-3 * peak;
    return Outcome{ok, fmt("max |Jt(A<=0.05)| %.3g vs peak %.3g, ", small, cal.peak) +
                           fmt("max |J| below 1e-4 %.3g vs peak %.3g", jsmall, peak)};
  });

  criterion(6, "alpha-sum orthogonality", 60, false, [] {
    auto s = alpha_orthogonality_sweep(12, {7, 11});
    return Outcome{s.passed(), std::to_string(s.off_diagonal) + " off-diagonal pairs, " +
                                   std::to_string(s.off_diagonal_failures.size()) + " failures, worst ratio " +
                                   fmt("%.3g", s.worst_off_ratio) + ", " + std::to_string(s.diagonal) +
                                   " diagonal pairs, min diagonal " + fmt("%.3g", s.min_diagonal)};
  });

  criterion(7, "diagonal residue routes", 300, false, [] {
    MomentConfig cfg;
    auto d = diagonal_term(cfg);
    auto g = form_by_weight(cfg.weight, cfg.diagonal.terms);
    auto Pi = sym_square_gl3(g, cfg.diagonal.terms, cfg.diagonal.terms);
    auto l1 = L1_g_cross_Pi(g, Pi, cfg.l1_tol, cfg.diagonal.terms);
    const double self = std::abs(l1.scale1 - l1.scale2) / std::abs(l1.value);
    return Outcome{d.discrepancy <= 1e-3 && self <= 1e-3,
                   fmt("relative discrepancy %.3g, L(1, g x Pi) %.12f, smoothing scales differ by %.3g", d.discrepancy,
                       d.l1_g_cross_pi, self)};
  });

  criterion(8, "Sigma_4/Sigma_5 vanishing audit", 60, false, [] {
    MomentConfig cfg;
    cfg.q = 10000;
    auto a = sigma45_support_audit(cfg);
    MomentConfig neg;
    neg.q = 11;
    neg.m_cut = 100000;
    neg.support_threshold = a.threshold;
    auto n = sigma45_support_audit(neg);
    std::string worst =
        a.worst.empty() ? "" : fmt(", largest at D1 = %.0f, D2 = %.0f", double(a.worst[0].D1), double(a.worst[0].D2));
    return Outcome{a.passed() && n.above >= 1,
                   "q = 10^4: " + std::to_string(a.shapes) + " shapes, " + std::to_string(a.above) + " above " +
                       fmt("%.4f, max argument %.3g", a.threshold, a.max_argument) + worst + "; negative control " +
                       std::to_string(n.above) + " above"};
  });

  criterion(9, "Sigma_6 trend", 1800, false, [] {
    MomentConfig cfg;
    auto t = sigma6_truncated(cfg);
    return Outcome{t.slope < 0, fmt("slope %.3f +- %.3f over %.0f primes (target %.3f)", t.slope, t.slope_error,
                                    double(t.points.size()), t.target)};
  });

  criterion(10, "Wilton exponent", 300, false, [] {
    MomentConfig cfg;
    auto f = delta_eigenvalues(static_cast<i64>(std::ceil(1e5 * cfg.wilton.h.support_hi())) + 1);
    auto r = wilton_experiment(f, {1e3, 3e3, 1e4, 3e4, 1e5}, 200, cfg.wilton.h);
    return Outcome{r.exponent >= 0.40 && r.exponent <= 0.62, fmt("exponent %.3f +- %.3f", r.exponent, r.exponent_error)};
  });

  criterion(11, "Voronoi identity (experimental)", 900, true, [] {
    const i64 N = 10000;
    auto g = delta_eigenvalues(N);
    auto A = sym_square_gl3(g, N, N);
    VoronoiInstance in;
    in.coeffs = &A;
    auto r = voronoi_two_sides(in, N);
    std::string table;
    for (const auto& row : r.rows) table += fmt(" %.0f:%.2g", double(row.cutoff), row.residual);
    return Outcome{r.residual <= 5e-2 && r.monotone, fmt("residual %.3g, tail %.3g, ", r.residual, r.tail) +
                                                         (r.monotone ? "monotone" : "not monotone") + ", cutoffs" + table};
  });

  std::printf("%d gating criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
