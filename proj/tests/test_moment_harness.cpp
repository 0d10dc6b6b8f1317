#include "doctest.h"

#include <cmath>

#include "gl3m/errors.hpp"
#include "gl3m/exp_sums.hpp"
#include "gl3m/moment_harness.hpp"

using namespace gl3m;

namespace {

// points of P^2(Z/q): primitive vectors mod q up to units
i64 projective_points(i64 q) {
  i64 prim = 0;
  for (i64 a = 0; a < q; ++a)
    for (i64 b = 0; b < q; ++b)
      for (i64 c = 0; c < q; ++c) prim += gcd(gcd(gcd(a, b), c), q) == 1;
  return prim / euler_phi(q);
}

cplx brute_alpha_sum(i64 c2, i64 c2p, i64 c1, i64 c1p, i64 q) {
  const i64 M = c2 * c2p;
  cplx s = 0;
  for (i64 a = 0; a < M; ++a)
    s += kloosterman_classical(a, inv_mod(q, c2).value * c1, c2) *
         std::conj(kloosterman_classical(a, inv_mod(q, c2p).value * c1p, c2p));
  return s;
}

MomentConfig light() {
  MomentConfig c;
  c.sigma6.q_grid = {11, 13};
  c.sigma6.grid_points = 3;
  c.sigma6.m_budget = 64;
  c.sigma6.kernel_budget = {12, 1, 4.0 / 3, 10.0, 1e-3};  // plumbing only
  return c;
}

}  // namespace

TEST_CASE("normalization index") {
  for (i64 q = 1; q <= 30; ++q) CHECK(NormalizationFactor::index(q) == projective_points(q));
  CHECK(NormalizationFactor::index(10007) == 10007LL * 10007 + 10007 + 1);
  NormalizationFactor n{7, 0.5};
  CHECK(n.value() == doctest::Approx(28.5));
}

TEST_CASE("Ramanujan sums") {
  for (i64 c = 1; c <= 30; ++c)
    for (i64 k = -10; k <= 40; ++k) {
      cplx s = 0;
      for (i64 a = 1; a <= c; ++a)
        if (gcd(a, c) == 1) s += unit_phase(a * k, c);
      CHECK(std::abs(s - double(ramanujan_sum(c, k))) < 1e-9);
    }
}

TEST_CASE("alpha sums") {
  CHECK(std::abs(alpha_sum_orthogonality(3, 5, 1, 1, 7)) < 1e-8);
  cplx d = alpha_sum_orthogonality(4, 4, 1, 1, 7);
  CHECK(std::abs(d - brute_alpha_sum(4, 4, 1, 1, 7)) < 1e-9);
  CHECK(d.real() == doctest::Approx(32));
  CHECK(std::abs(d.imag()) < 1e-9);
  CHECK(alpha_sum_closed_form(4, 4, 1, 1) == 32);
  CHECK(alpha_sum_closed_form(5, 5, 1, 2) == -25);
  CHECK(alpha_sum_closed_form(5, 6, 1, 1) == 0);
  // c1 = c1' mod c2 keeps the diagonal value, c1 != c1' gives the Ramanujan sum instead of 0
  CHECK(std::abs(alpha_sum_orthogonality(5, 5, 1, 6, 7) - alpha_sum_orthogonality(5, 5, 1, 1, 7)) < 1e-9);
  CHECK(std::abs(alpha_sum_orthogonality(5, 5, 1, 2, 7) - (-25.0)) < 1e-9);
  for (i64 c2 = 1; c2 <= 8; ++c2)
    for (i64 c2p = 1; c2p <= 8; ++c2p)
      for (i64 c1p : {1, 2, 3}) {
        if (gcd(c2 * c2p, 11) != 1) continue;
        CHECK(std::abs(alpha_sum_orthogonality(c2, c2p, 1, c1p, 11) - brute_alpha_sum(c2, c2p, 1, c1p, 11)) < 1e-8);
        CHECK(std::abs(alpha_sum_orthogonality(c2, c2p, 1, c1p, 11) - double(alpha_sum_closed_form(c2, c2p, 1, c1p))) <
              1e-8);
      }
  CHECK_THROWS_AS(alpha_sum_orthogonality(7, 3, 1, 1, 7), NotCoprime);
  auto sw = alpha_orthogonality_sweep(8, {7, 11});
  CHECK(sw.passed());
  CHECK(sw.off_diagonal > 0);
  CHECK(sw.diagonal > 0);
  CHECK(sw.min_diagonal > 0);
}

TEST_CASE("support audit") {
  MomentConfig c;
  c.support_threshold = 1.3;
  c.m_cut = 0;
  auto e = sigma45_support_audit(c);
  CHECK(e.shapes == 0);
  CHECK(e.passed());
  MomentConfig neg;
  neg.q = 11;
  neg.m_cut = 100000;
  neg.support_threshold = 1.3;
  auto n = sigma45_support_audit(neg);
  CHECK(n.above >= 1);
  CHECK_FALSE(n.passed());
  CHECK(n.below_q0);
  CHECK(!n.worst.empty());
  for (std::size_t i = 1; i < n.worst.size(); ++i) CHECK(n.worst[i - 1].argument >= n.worst[i].argument);
}

TEST_CASE("kernel grid and Sigma_6") {
  auto c = light();
  c.sigma6.zero_kernel = true;
  auto z = sigma6_truncated(c);
  REQUIRE(z.points.size() == 2);
  for (const auto& p : z.points) CHECK(p.value == 0.0);

  auto d = light();
  KernelGrid grid(d.H, d.sigma6);
  CHECK(grid.evaluations() > 0);
  CHECK(grid(0, 0.6, 0.6) == 0.0);
  CHECK_FALSE(grid.inside(0.1, 1.0));
  auto g = delta_eigenvalues(2000);
  auto Pi = sym_square_gl3(g, 2000, 2000);
  auto a = sigma6_single(d, 11, g, Pi, grid);
  auto b = sigma6_single(d, 11, g, Pi, grid);
  CHECK(a.value == b.value);
  CHECK(a.terms == b.terms);
  CHECK_THROWS_AS(sigma6_single(d, 12, g, Pi, grid), HypothesisViolation);
}

TEST_CASE("slope fit") {
  auto [s, e] = fit_slope({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(s == doctest::Approx(2));
  CHECK(e == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("Wilton experiment") {
  CHECK(kronecker_point(0) == 0.0);
  for (int j = 1; j < 50; ++j) {
    CHECK(kronecker_point(j) >= 0.0);
    CHECK(kronecker_point(j) < 1.0);
  }
  auto f = delta_eigenvalues(2100);
  VoronoiTestFunction h{1.0, 2.0};
  auto r = wilton_experiment(f, {100, 300, 1000}, 50, h);
  REQUIRE(r.rows.size() == 3);
  for (const auto& w : r.rows) CHECK(w.sup >= w.at_zero);
  VoronoiTestFunction z = h;
  z.zero = true;
  auto rz = wilton_experiment(f, {100, 1000}, 20, z);
  for (const auto& w : rz.rows) CHECK(w.sup == 0.0);
  CHECK_THROWS_AS(wilton_experiment(f, {3000}, 10, h), InsufficientTable);
}

TEST_CASE("config JSON") {
  MomentConfig c = light();
  c.q = 101;
  c.m_cut = 77;
  c.diagonal.zero_G2 = true;
  c.wilton.X_grid = {10, 20};
  auto j = to_json(c);
  CHECK(to_json(moment_config_from_json(j)) == j);
  auto partial = moment_config_from_json(nlohmann::json{{"q", 13}});
  CHECK(partial.q == 13);
  CHECK(partial.l_cut == MomentConfig{}.l_cut);
  CHECK(MomentConfig{}.n_limit() == 10007);
  CHECK(MomentConfig{}.m_limit() == static_cast<i64>(std::pow(10007.0, 1.5)));
}

TEST_CASE("report JSON") {
  SqReport r;
  r.config = light();
  r.normalization = {11, 1.0};
  r.diagonal.main_term = {0.5, 0};
  r.diagonal.discrepancy = std::nan("");
  r.audit.q = 11;
  r.audit.worst.push_back({'4', 11, 1, 2.5});
  r.sigma6.points.push_back({11, cplx(1e-7, -2e-7), 5, 1, 2, 3, 4});
  r.wilton.rows.push_back({100, 3.0, 0.25, 1.0});
  auto j = to_json(r);
  CHECK(j.at("schema_version") == 1);
  CHECK(to_json(sq_report_from_json(j)) == j);
  CHECK(std::isnan(sq_report_from_json(j).diagonal.discrepancy));
}
