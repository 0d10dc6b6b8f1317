#include "gl3m/moment_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "gl3m/errors.hpp"
#include "gl3m/exp_sums.hpp"
#include "gl3m/lfunction.hpp"
#include "gl3m/special.hpp"

namespace gl3m {

using nlohmann::json;

namespace {

i64 floor_pow(i64 q, double e) {
  // floor(q^e) robust against q^e landing just below an integer
  return static_cast<i64>(std::floor(std::pow(static_cast<double>(q), e) + 1e-9));
}

const cplx kRootProbe{0.5, 0.37};

}  // namespace

i64 MomentConfig::m_limit() const { return m_cut >= 0 ? m_cut : floor_pow(q, 1.5); }
i64 MomentConfig::n_limit() const { return n_cut >= 0 ? n_cut : q; }
i64 MomentConfig::c1_limit(i64 level) const { return floor_pow(level, 1.0 / 6 + c_eps); }
i64 MomentConfig::c2_limit(i64 level) const { return floor_pow(level, 1.0 / 3 + c_eps); }

i64 NormalizationFactor::index(i64 q) {
  if (q < 1) throw InvalidArgument("level must be positive");
  // q^2 prod (1 + 1/p + 1/p^2) = prod p^(2(e-1)) (p^2 + p + 1)
  i64 r = 1;
  for (auto [p, e] : factorize(q)) r *= ipow(p, 2 * (e - 1)) * (p * p + p + 1);
  return r;
}

// ---------------------------------------------------------------- L-values

L1Value L1_g_cross_Pi(const GL2Form& g, const GL3Coeffs& Pi, double tol, i64 terms) {
  LFunction L(rankin_selberg_lseries(g, Pi, terms));
  L1Value out;
  out.terms = terms;
  if (!L.data().finite) {
    out.root_number = estimate_root_number(L, kRootProbe, 1.0, 2.0).real();
    L.set_root_number(out.root_number);
  }
  out.scale1 = L(1.0, 1.0).real();
  out.scale2 = L(1.0, 2.0).real();
  out.value = 0.5 * (out.scale1 + out.scale2);
  if (std::abs(out.scale1 - out.scale2) > tol * std::max(1.0, std::abs(out.value)))
    throw NotConverged("L(1, g x Pi) differs across smoothing scales");
  return out;
}

// ---------------------------------------------------------------- diagonal

DiagonalReport diagonal_term(const MomentConfig& cfg) {
  const DiagonalConfig& d = cfg.diagonal;
  if (!(d.step > 0) || !(d.height_u > 0) || !(d.height_v > 0)) throw InvalidArgument("bad diagonal grid");
  if (!(d.rho > 0) || !(d.tau > 0)) throw InvalidArgument("starting abscissae must be positive");
  if (!(d.shift_u < 0) || !(d.shift_v < 0)) throw InvalidArgument("shifted abscissae must be negative");

  const GL2Form g = form_by_weight(cfg.weight, d.terms);
  const GL3Coeffs Pi = sym_square_gl3(g, d.terms, d.terms);
  LFunction L6(rankin_selberg_lseries(g, Pi, d.terms));
  LFunction Lg(gl2_lseries(g, d.terms));
  DiagonalReport rep;
  rep.root_number = estimate_root_number(L6, kRootProbe, 1.0, 2.0).real();
  L6.set_root_number(rep.root_number);

  const int B = cfg.weights.B;
  const double h = d.step;
  const int nu = static_cast<int>(std::lround(2 * d.height_u / h));
  const int nv = static_cast<int>(std::lround(2 * d.height_v / h));
  auto tu = [&](int j) { return -d.height_u + j * h; };
  auto tv = [&](int k) { return -d.height_v + k * h; };
  const double w = h / kTwoPi;

  auto G1 = [&](cplx u) { return mollifier(u, B, 12); };
  auto G2 = [&](cplx v) { return d.zero_G2 ? cplx(0.0) : mollifier(v, B, 24); };

  // One line pair: f(u_j) = L6(1+3u) G1(u)/u, g(v_k) = G2(v)/v, Lg on the u+v lattice.
  struct Lines {
    std::vector<cplx> fu, gv, lsum, l6;
  };
  auto build = [&](double su, double sv) {
    Lines s;
    s.fu.resize(static_cast<std::size_t>(nu + 1));
    s.l6.resize(static_cast<std::size_t>(nu + 1));
    s.gv.resize(static_cast<std::size_t>(nv + 1));
    s.lsum.resize(static_cast<std::size_t>(nu + nv + 1));
    for (int j = 0; j <= nu; ++j) {
      cplx u(su, tu(j));
      cplx l = L6(1.0 + 3.0 * u);
      s.l6[static_cast<std::size_t>(j)] = l;
      s.fu[static_cast<std::size_t>(j)] = l * G1(u) / u;
    }
    for (int k = 0; k <= nv; ++k) {
      cplx v(sv, tv(k));
      s.gv[static_cast<std::size_t>(k)] = G2(v) / v;
    }
    for (int r = 0; r <= nu + nv; ++r)
      s.lsum[static_cast<std::size_t>(r)] = Lg(cplx(1.0 + su + sv, -d.height_u - d.height_v + r * h));
    return s;
  };
  auto double_integral = [&](const Lines& s) {
    CompensatedSum acc;
    for (int j = 0; j <= nu; ++j) {
      cplx inner = 0;
      for (int k = 0; k <= nv; ++k)
        inner += s.gv[static_cast<std::size_t>(k)] * s.lsum[static_cast<std::size_t>(j + k)];
      acc.add(s.fu[static_cast<std::size_t>(j)] * inner);
    }
    return acc.value() * w * w;
  };

  const Lines A = build(d.rho, d.tau);
  rep.contour_value = double_integral(A);

  const Lines S = build(d.shift_u, d.shift_v);
  const double l6_1 = L6(1.0).real(), lg_1 = Lg(1.0).real();
  rep.l1_g_cross_pi = l6_1;
  rep.l1_g = lg_1;
  rep.main_term = l6_1 * lg_1;
  rep.double_line = double_integral(S);
  {
    CompensatedSum acc;
    for (int j = 0; j <= nu; ++j) {
      cplx u(d.shift_u, tu(j));
      acc.add(S.fu[static_cast<std::size_t>(j)] * Lg(1.0 + u));
    }
    rep.u_line = acc.value() * w;
  }
  {
    CompensatedSum acc;
    for (int k = 0; k <= nv; ++k) {
      cplx v(d.shift_v, tv(k));
      acc.add(S.gv[static_cast<std::size_t>(k)] * Lg(1.0 + v));
    }
    rep.v_line = l6_1 * acc.value() * w;
  }
  rep.shifted_remainder = rep.u_line + rep.v_line + rep.double_line;
  const double scale = std::max(std::abs(rep.contour_value), 1e-300);
  rep.discrepancy = std::abs(rep.contour_value - rep.main_term - rep.shifted_remainder) / scale;
  return rep;
}

// ---------------------------------------------------------------- support audit

SupportAudit sigma45_support_audit(const MomentConfig& cfg) {
  SupportAudit a;
  a.q = cfg.q;
  a.m_cut = cfg.m_limit();
  a.n_cut = cfg.n_limit();
  a.l_cut = cfg.l_cut;
  a.below_q0 = cfg.q < cfg.q0;
  a.threshold = cfg.support_threshold > 0
                    ? cfg.support_threshold
                    : calibrate_jtilde_support(cfg.H, QuadratureBudget::jtilde_default()).threshold;
  if (cfg.q < 1) throw InvalidArgument("level must be positive");
  const i64 q = cfg.q, M = a.m_cut, N = a.n_cut, L = a.l_cut;
  if (M < 1 || N < 1 || L < 1) return a;

  const double floor2 = cfg.audit_floor * cfg.audit_floor;
  std::vector<ShapeRow> rows;
  auto record = [&](char s, i64 D1, i64 D2, double arg) {
    ++a.shapes;
    a.max_argument = std::max(a.max_argument, arg);
    if (arg > a.threshold) ++a.above;
    rows.push_back({s, D1, D2, arg});
    if (rows.size() > 4096) {
      std::partial_sort(rows.begin(), rows.begin() + 16, rows.end(),
                        [](const ShapeRow& x, const ShapeRow& y) { return x.argument > y.argument; });
      rows.resize(16);
    }
  };

  // Sigma_4: D1 = n D2^2 with q D2 | D1, i.e. q | n D2; argument^2 = ml/(n D2^3)
  const double ml = static_cast<double>(M) * static_cast<double>(L);
  for (i64 n = 1; n <= N; ++n) {
    const i64 step = q / gcd(n, q);
    for (i64 D2 = step;; D2 += step) {
      const double denom = static_cast<double>(n) * std::pow(static_cast<double>(D2), 3);
      const double arg2 = ml / denom;
      if (arg2 < floor2) break;
      record('4', n * D2 * D2, D2, std::sqrt(arg2));
    }
  }

  // Sigma_5: ml | D1, D1 = p t, D2 = p t^2 with p = ml, q | p t; argument^2 = n/(p t^3)
  for (i64 p = 1; p <= M * L; ++p) {
    bool admissible = p <= M;
    for (i64 l = std::max<i64>(1, (p + M - 1) / M); !admissible && l <= L; ++l) admissible = p % l == 0;
    if (!admissible) continue;
    const i64 step = q / gcd(p, q);
    for (i64 t = step;; t += step) {
      const double arg2 = static_cast<double>(N) / (static_cast<double>(p) * std::pow(static_cast<double>(t), 3));
      if (arg2 < floor2) break;
      record('5', p * t, p * t * t, std::sqrt(arg2));
    }
  }

  std::sort(rows.begin(), rows.end(), [](const ShapeRow& x, const ShapeRow& y) { return x.argument > y.argument; });
  if (rows.size() > 16) rows.resize(16);
  a.worst = std::move(rows);
  return a;
}

// ---------------------------------------------------------------- alpha sum

i64 ramanujan_sum(i64 c, i64 k) {
  if (c < 1) throw InvalidArgument("Ramanujan sum needs c >= 1");
  i64 s = 0;
  for (i64 d : divisors(gcd(c, k == 0 ? c : (k < 0 ? -k : k)))) s += moebius(c / d) * d;
  return s;
}

i64 alpha_sum_closed_form(i64 c2, i64 c2p, i64 c1, i64 c1p) {
  if (c2 != c2p) return 0;
  return c2 * c2 * ramanujan_sum(c2, c1 - c1p);
}

cplx alpha_sum_orthogonality(i64 c2, i64 c2p, i64 c1, i64 c1p, i64 q) {
  if (c2 < 1 || c2p < 1) throw InvalidArgument("moduli must be positive");
  if (c2 * c2p > 100000) throw BudgetExceeded("c2 c2' above 1e5");
  if (gcd(q, c2 * c2p) != 1) throw NotCoprime("q shares a factor with c2 c2'");
  const i64 b = mul_mod(inv_mod(q, c2).value, c1, c2);
  const i64 bp = mul_mod(inv_mod(q, c2p).value, c1p, c2p);
  std::vector<cplx> s(static_cast<std::size_t>(c2)), sp(static_cast<std::size_t>(c2p));
  for (i64 r = 0; r < c2; ++r) s[static_cast<std::size_t>(r)] = kloosterman_classical(r, b, c2);
  for (i64 r = 0; r < c2p; ++r) sp[static_cast<std::size_t>(r)] = std::conj(kloosterman_classical(r, bp, c2p));
  CompensatedSum acc;
  for (i64 al = 0; al < c2 * c2p; ++al)
    acc.add(s[static_cast<std::size_t>(al % c2)] * sp[static_cast<std::size_t>(al % c2p)]);
  return acc.value();
}

OrthogonalitySweep alpha_orthogonality_sweep(int cmax, const std::vector<i64>& qs, double rel) {
  OrthogonalitySweep sw;
  sw.min_diagonal = std::numeric_limits<double>::infinity();
  for (i64 q : qs)
    for (i64 c2 = 1; c2 <= cmax; ++c2)
      for (i64 c2p = 1; c2p <= cmax; ++c2p) {
        if (gcd(q, c2 * c2p) != 1) {
          ++sw.skipped;
          continue;
        }
        cplx v = alpha_sum_orthogonality(c2, c2p, 1, 1, q);
        const double scale = std::pow(static_cast<double>(c2 * c2p), 1.5);
        if (c2 == c2p) {
          ++sw.diagonal;
          sw.min_diagonal = std::min(sw.min_diagonal, v.real());
          continue;
        }
        ++sw.off_diagonal;
        sw.worst_off_ratio = std::max(sw.worst_off_ratio, std::abs(v) / scale);
        if (std::abs(v) > rel * scale) sw.off_diagonal_failures.push_back({c2, c2p, 1, 1, q, v, rel * scale});
      }
  if (sw.diagonal == 0) sw.min_diagonal = 0;
  return sw;
}

// ---------------------------------------------------------------- Sigma_6

namespace {
constexpr int kSigns[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
}

KernelGrid::KernelGrid(const TestFunctionH& H, const Sigma6Config& c)
    : H_(H), lo_(c.a_lo), hi_(c.a_hi), n_(c.grid_points), zero_(c.zero_kernel) {
  if (!(c.a_lo > 0) || !(c.a_hi > c.a_lo) || c.grid_points < 2) throw InvalidArgument("bad kernel grid");
  if (zero_) return;
  const std::size_t cells = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  for (auto& v : v_) v.assign(cells, 0.0);
  struct Job {
    int s, i, j;
  };
  std::vector<Job> jobs;
  auto node = [&](int i) { return lo_ * std::pow(hi_ / lo_, static_cast<double>(i) / (n_ - 1)); };
  for (int s = 0; s < 4; ++s)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (j_support_possible(node(i), node(j), H_)) jobs.push_back({s, i, j});
  evaluations_ = static_cast<int>(jobs.size());
  const unsigned nt = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::exception_ptr> errors(nt);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t k = t; k < jobs.size(); k += nt) {
          const Job& jb = jobs[k];
          v_[jb.s][static_cast<std::size_t>(jb.i * n_ + jb.j)] =
              kernel_J(node(jb.i), node(jb.j), kSigns[jb.s][0], kSigns[jb.s][1], H_, c.kernel_budget).value;
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

bool KernelGrid::inside(double A1, double A2) const {
  const double eps = 1e-12;
  return A1 >= lo_ * (1 - eps) && A1 <= hi_ * (1 + eps) && A2 >= lo_ * (1 - eps) && A2 <= hi_ * (1 + eps);
}

cplx KernelGrid::operator()(int sign_index, double A1, double A2) const {
  if (zero_ || !j_support_possible(A1, A2, H_)) return 0.0;
  if (!inside(A1, A2)) throw InvalidArgument("kernel argument outside the grid");
  const double span = std::log(hi_ / lo_);
  auto coord = [&](double A, int& i, double& f) {
    double x = std::clamp(std::log(A / lo_) / span, 0.0, 1.0) * (n_ - 1);
    i = std::min(static_cast<int>(x), n_ - 2);
    f = x - i;
  };
  int i, j;
  double fi, fj;
  coord(A1, i, fi);
  coord(A2, j, fj);
  const auto& v = v_[sign_index];
  auto at = [&](int a, int b) { return v[static_cast<std::size_t>(a * n_ + b)]; };
  return (1 - fi) * ((1 - fj) * at(i, j) + fj * at(i, j + 1)) + fi * ((1 - fj) * at(i + 1, j) + fj * at(i + 1, j + 1));
}

Sigma6Point sigma6_single(const MomentConfig& cfg, i64 q, const GL2Form& g, const GL3Coeffs& Pi,
                          const KernelGrid& grid) {
  if (!is_prime(q)) throw HypothesisViolation("Sigma_6 harness needs a prime level");
  Sigma6Point pt;
  pt.q = q;
  pt.c1_cut = cfg.c1_limit(q);
  pt.c2_cut = cfg.c2_limit(q);
  pt.m_cut = std::min(floor_pow(q, 1.5), cfg.sigma6.m_budget);
  const i64 N = q, M = pt.m_cut, L = cfg.l_cut;
  if (M < 1 || L < 1 || pt.c1_cut < 1 || pt.c2_cut < 1) return pt;

  std::vector<double> lam_g(static_cast<std::size_t>(N + 1)), lam_pi(static_cast<std::size_t>(M + 1));
  for (i64 n = 1; n <= N; ++n) lam_g[static_cast<std::size_t>(n)] = g.eigenvalue(n) / std::sqrt(static_cast<double>(n));
  for (i64 m = 1; m <= M; ++m) lam_pi[static_cast<std::size_t>(m)] = Pi.lambda(m).real() / std::sqrt(static_cast<double>(m));
  std::vector<cplx> wt(static_cast<std::size_t>(L + 1));
  {
    WeightFunction W(WeightKind::Wtilde, cfg.weights, {0.25, 0, 4096});
    for (i64 l = 1; l <= L; ++l) wt[static_cast<std::size_t>(l)] = W(static_cast<double>(l));
  }
  std::vector<double> V;
  if (cfg.sigma6.evaluate_V) {
    WeightFunction Vf(WeightKind::V, cfg.weights, {1.0, 0, 4096});
    V.resize(static_cast<std::size_t>((N + 1) * (M + 1)));
    for (i64 n = 1; n <= N; ++n)
      for (i64 m = 1; m <= M; ++m)
        V[static_cast<std::size_t>(n * (M + 1) + m)] = Vf(static_cast<double>(n) * m * m).real();
  }

  struct Task {
    int s;
    i64 c1, c2;
  };
  std::vector<Task> tasks;
  for (int s = 0; s < 4; ++s)
    for (i64 c1 = 1; c1 <= pt.c1_cut; ++c1)
      for (i64 c2 = 1; c2 <= pt.c2_cut; ++c2)
        if (gcd(c1 * c2, q) == 1) tasks.push_back({s, c1, c2});
  struct Partial {
    cplx value;
    i64 terms = 0, dropped = 0;
  };
  std::vector<Partial> part(tasks.size());
  const double sq = std::sqrt(static_cast<double>(q));

  auto run = [&](const Task& tk, Partial& out) {
    const int e1 = kSigns[tk.s][0], e2 = kSigns[tk.s][1];
    const i64 P = tk.c1 * tk.c2;
    const i64 qbar = inv_mod(q, P).value;
    // S^(q)(e2, e1 n, ml, 1; q c1, q c2) = q S(qbar e2, qbar e1 n, ml, 1; c1, c2), periodic mod c1 c2
    std::vector<cplx> K(static_cast<std::size_t>(P * P));
    for (i64 a = 0; a < P; ++a)
      for (i64 b = 0; b < P; ++b)
        K[static_cast<std::size_t>(a * P + b)] =
            factorization_lemma_rhs({mod(static_cast<i128>(qbar) * e2, P), mod(static_cast<i128>(qbar) * e1 * a, P), b, 1,
                                     tk.c1, tk.c2, 1});
    const double pref = 1.0 / (static_cast<double>(q) * static_cast<double>(P));
    CompensatedSum acc;
    for (i64 n = 1; n <= N; ++n) {
      if (n % q == 0) continue;
      const double A1 = std::sqrt(static_cast<double>(n * tk.c1)) / (static_cast<double>(tk.c2) * sq);
      cplx row = 0;
      for (i64 m = 1; m <= M; ++m) {
        if (m % q == 0) continue;
        cplx inner = 0;
        for (i64 l = 1; l <= L; ++l) {
          const double A2 = std::sqrt(static_cast<double>(m * l * tk.c2)) / (static_cast<double>(tk.c1) * sq);
          if (!j_support_possible(A1, A2, cfg.H)) continue;
          if (!grid.inside(A1, A2)) {
            ++out.dropped;
            continue;
          }
          ++out.terms;
          inner += K[static_cast<std::size_t>((n % P) * P + (m * l) % P)] * grid(tk.s, A1, A2) * wt[static_cast<std::size_t>(l)];
        }
        double v = V.empty() ? 1.0 : V[static_cast<std::size_t>(n * (M + 1) + m)];
        row += lam_pi[static_cast<std::size_t>(m)] * v * inner;
      }
      acc.add(lam_g[static_cast<std::size_t>(n)] * row);
    }
    out.value = pref * acc.value();
  };

  const unsigned nt = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t k = t; k < tasks.size(); k += nt) run(tasks[k], part[k]);
    });
  for (auto& th : pool) th.join();

  CompensatedSum total;
  for (const auto& p : part) {
    total.add(p.value);
    pt.terms += p.terms;
    pt.dropped += p.dropped;
  }
  pt.value = total.value();
  return pt;
}

std::pair<double, double> fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InvalidArgument("slope fit needs two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw InvalidArgument("slope fit needs distinct abscissae");
  const double b = sxy / sxx;
  if (n == 2) return {b, 0.0};
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - my - b * (x[i] - mx);
    rss += r * r;
  }
  return {b, std::sqrt(rss / (static_cast<double>(n) - 2) / sxx)};
}

Sigma6Trend sigma6_truncated(const MomentConfig& cfg) {
  Sigma6Trend tr;
  const auto& qs = cfg.sigma6.q_grid;
  if (qs.empty()) return tr;
  const i64 qmax = *std::max_element(qs.begin(), qs.end());
  const i64 mmax = std::max<i64>(1, std::min(floor_pow(qmax, 1.5), cfg.sigma6.m_budget));
  const GL2Form g = form_by_weight(cfg.weight, std::max<i64>(qmax, mmax));
  const GL3Coeffs Pi = sym_square_gl3(g, mmax, mmax);
  const KernelGrid grid(cfg.H, cfg.sigma6);
  tr.kernel_evaluations = grid.evaluations();
  std::vector<double> lx, ly;
  for (i64 q : qs) {
    tr.points.push_back(sigma6_single(cfg, q, g, Pi, grid));
    const double mag = std::abs(tr.points.back().value);
    if (mag > 0) {
      lx.push_back(std::log(static_cast<double>(q)));
      ly.push_back(std::log(mag));
    }
  }
  if (lx.size() >= 2) {
    auto [b, e] = fit_slope(lx, ly);
    tr.slope = b;
    tr.slope_error = e;
  } else {
    tr.slope = std::numeric_limits<double>::quiet_NaN();
    tr.slope_error = std::numeric_limits<double>::quiet_NaN();
  }
  return tr;
}

// ---------------------------------------------------------------- Wilton

double kronecker_point(int j) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  return std::fmod(g * j, 1.0);
}

WiltonReport wilton_experiment(const GL2Form& f, const std::vector<double>& X_grid, int alpha_points,
                               const VoronoiTestFunction& h) {
  if (alpha_points < 1) throw InvalidArgument("alpha grid needs a point");
  WiltonReport rep;
  std::vector<double> lx, ly;
  for (double X : X_grid) {
    if (!(X > 0)) throw InvalidArgument("X must be positive");
    WiltonRow row{X, 0.0, 0.0, 0.0};
    if (!h.zero) {
      const i64 lo = std::max<i64>(1, static_cast<i64>(std::floor(X * h.support_lo())));
      const i64 hi = static_cast<i64>(std::ceil(X * h.support_hi()));
      std::vector<double> w;
      w.reserve(static_cast<std::size_t>(hi - lo + 1));
      for (i64 n = lo; n <= hi; ++n) {
        double c = h(static_cast<double>(n) / X);
        w.push_back(c == 0.0 ? 0.0 : c * f.eigenvalue(n));
      }
      for (int j = 0; j < alpha_points; ++j) {
        const double alpha = kronecker_point(j);
        const cplx step = std::polar(1.0, kTwoPi * alpha);
        cplx z;
        CompensatedSum acc;
        for (std::size_t k = 0; k < w.size(); ++k) {
          if ((k & 1023) == 0) z = std::polar(1.0, kTwoPi * std::fmod(alpha * static_cast<double>(lo + static_cast<i64>(k)), 1.0));
          acc.add(w[k] * z);
          z *= step;
        }
        const double mag = std::abs(acc.value());
        if (j == 0) row.at_zero = mag;
        if (mag > row.sup) {
          row.sup = mag;
          row.alpha = alpha;
        }
      }
    }
    rep.rows.push_back(row);
    if (row.sup > 0) {
      lx.push_back(std::log(X));
      ly.push_back(std::log(row.sup));
    }
  }
  if (lx.size() >= 2) {
    auto [b, e] = fit_slope(lx, ly);
    rep.exponent = b;
    rep.exponent_error = e;
  }
  return rep;
}

// ---------------------------------------------------------------- report

SqReport assemble_S_q_report(const MomentConfig& cfg) {
  SqReport r;
  r.config = cfg;
  r.normalization = {cfg.q, cfg.residue};
  r.diagonal = diagonal_term(cfg);
  r.audit = sigma45_support_audit(cfg);
  r.orthogonality = alpha_orthogonality_sweep(cfg.alpha_cmax, cfg.alpha_q);
  r.sigma6 = sigma6_truncated(cfg);
  const i64 wmax = cfg.wilton.X_grid.empty()
                       ? 1
                       : static_cast<i64>(std::ceil(*std::max_element(cfg.wilton.X_grid.begin(), cfg.wilton.X_grid.end()) *
                                                    cfg.wilton.h.support_hi()));
  r.wilton = wilton_experiment(form_by_weight(cfg.weight, std::max<i64>(wmax, 2)), cfg.wilton.X_grid,
                               cfg.wilton.alpha_points, cfg.wilton.h);
  r.xi_estimate = r.diagonal.main_term + (r.sigma6.points.empty() ? cplx(0.0) : r.sigma6.points.back().value);
  return r;
}

// ---------------------------------------------------------------- JSON

namespace {

json cj(cplx z) { return json::array({z.real(), z.imag()}); }
cplx jc(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json triple(const std::array<cplx, 3>& t) { return json::array({cj(t[0]), cj(t[1]), cj(t[2])}); }
std::array<cplx, 3> untriple(const json& j) { return {jc(j.at(0)), jc(j.at(1)), jc(j.at(2))}; }

// nan and inf are not JSON numbers
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
double unnum(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

template <class T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json budget_json(const QuadratureBudget& b) {
  return {{"nodes", b.nodes}, {"levels", b.levels}, {"growth", b.growth}, {"tol", b.tol},
          {"abs_scale", b.abs_scale}, {"prune", b.prune}, {"box", b.box}};
}

QuadratureBudget budget_from(const json& j, QuadratureBudget b) {
  get_if(j, "nodes", b.nodes);
  get_if(j, "levels", b.levels);
  get_if(j, "growth", b.growth);
  get_if(j, "tol", b.tol);
  get_if(j, "abs_scale", b.abs_scale);
  get_if(j, "prune", b.prune);
  get_if(j, "box", b.box);
  return b;
}

json phi_json(const VoronoiTestFunction& p) {
  return {{"lo", p.lo}, {"hi", p.hi}, {"scale", p.scale}, {"zero", p.zero}};
}

VoronoiTestFunction phi_from(const json& j, VoronoiTestFunction p) {
  get_if(j, "lo", p.lo);
  get_if(j, "hi", p.hi);
  get_if(j, "scale", p.scale);
  get_if(j, "zero", p.zero);
  return p;
}

}  // namespace

json to_json(const MomentConfig& c) {
  const auto& L = c.weights.langlands;
  return {
      {"q", c.q},
      {"m_cut", c.m_cut},
      {"n_cut", c.n_cut},
      {"l_cut", c.l_cut},
      {"c_eps", c.c_eps},
      {"q0", c.q0},
      {"weight", c.weight},
      {"weights",
       {{"B", c.weights.B},
        {"k", c.weights.k},
        {"s", c.weights.s},
        {"pi", c.weights.pi == PiConvention::Standard ? "standard" : "literal"},
        {"rho", triple(L.rho)},
        {"lambda", triple(L.lambda)},
        {"alpha", triple(L.alpha)},
        {"T", L.T}}},
      {"H", {{"a1", c.H.a1}, {"b1", c.H.b1}, {"a2", c.H.a2}, {"b2", c.H.b2}, {"zero", c.H.zero}}},
      {"residue", c.residue},
      {"support_threshold", c.support_threshold},
      {"audit_floor", c.audit_floor},
      {"l1_tol", c.l1_tol},
      {"diagonal",
       {{"step", c.diagonal.step},
        {"height_u", c.diagonal.height_u},
        {"height_v", c.diagonal.height_v},
        {"rho", c.diagonal.rho},
        {"tau", c.diagonal.tau},
        {"shift_u", c.diagonal.shift_u},
        {"shift_v", c.diagonal.shift_v},
        {"terms", c.diagonal.terms},
        {"zero_G2", c.diagonal.zero_G2}}},
      {"sigma6",
       {{"q_grid", c.sigma6.q_grid},
        {"m_budget", c.sigma6.m_budget},
        {"a_lo", c.sigma6.a_lo},
        {"a_hi", c.sigma6.a_hi},
        {"grid_points", c.sigma6.grid_points},
        {"kernel_budget", budget_json(c.sigma6.kernel_budget)},
        {"evaluate_V", c.sigma6.evaluate_V},
        {"zero_kernel", c.sigma6.zero_kernel}}},
      {"wilton", {{"X_grid", c.wilton.X_grid}, {"alpha_points", c.wilton.alpha_points}, {"h", phi_json(c.wilton.h)}}},
      {"alpha_cmax", c.alpha_cmax},
      {"alpha_q", c.alpha_q},
  };
}

MomentConfig moment_config_from_json(const json& j) {
  MomentConfig c;
  get_if(j, "q", c.q);
  get_if(j, "m_cut", c.m_cut);
  get_if(j, "n_cut", c.n_cut);
  get_if(j, "l_cut", c.l_cut);
  get_if(j, "c_eps", c.c_eps);
  get_if(j, "q0", c.q0);
  get_if(j, "weight", c.weight);
  if (j.contains("weights")) {
    const json& w = j.at("weights");
    get_if(w, "B", c.weights.B);
    get_if(w, "k", c.weights.k);
    get_if(w, "s", c.weights.s);
    if (w.contains("pi")) {
      std::string p = w.at("pi").get<std::string>();
      if (p == "standard") c.weights.pi = PiConvention::Standard;
      else if (p == "literal") c.weights.pi = PiConvention::Literal;
      else throw InvalidArgument("pi convention must be standard or literal");
    }
    if (w.contains("rho")) c.weights.langlands.rho = untriple(w.at("rho"));
    if (w.contains("lambda")) c.weights.langlands.lambda = untriple(w.at("lambda"));
    if (w.contains("alpha")) c.weights.langlands.alpha = untriple(w.at("alpha"));
    get_if(w, "T", c.weights.langlands.T);
  }
  if (j.contains("H")) {
    const json& h = j.at("H");
    get_if(h, "a1", c.H.a1);
    get_if(h, "b1", c.H.b1);
    get_if(h, "a2", c.H.a2);
    get_if(h, "b2", c.H.b2);
    get_if(h, "zero", c.H.zero);
  }
  get_if(j, "residue", c.residue);
  get_if(j, "support_threshold", c.support_threshold);
  get_if(j, "audit_floor", c.audit_floor);
  get_if(j, "l1_tol", c.l1_tol);
  if (j.contains("diagonal")) {
    const json& d = j.at("diagonal");
    get_if(d, "step", c.diagonal.step);
    get_if(d, "height_u", c.diagonal.height_u);
    get_if(d, "height_v", c.diagonal.height_v);
    get_if(d, "rho", c.diagonal.rho);
    get_if(d, "tau", c.diagonal.tau);
    get_if(d, "shift_u", c.diagonal.shift_u);
    get_if(d, "shift_v", c.diagonal.shift_v);
    get_if(d, "terms", c.diagonal.terms);
    get_if(d, "zero_G2", c.diagonal.zero_G2);
  }
  if (j.contains("sigma6")) {
    const json& s = j.at("sigma6");
    get_if(s, "q_grid", c.sigma6.q_grid);
    get_if(s, "m_budget", c.sigma6.m_budget);
    get_if(s, "a_lo", c.sigma6.a_lo);
    get_if(s, "a_hi", c.sigma6.a_hi);
    get_if(s, "grid_points", c.sigma6.grid_points);
    if (s.contains("kernel_budget")) c.sigma6.kernel_budget = budget_from(s.at("kernel_budget"), c.sigma6.kernel_budget);
    get_if(s, "evaluate_V", c.sigma6.evaluate_V);
    get_if(s, "zero_kernel", c.sigma6.zero_kernel);
  }
  if (j.contains("wilton")) {
    const json& w = j.at("wilton");
    get_if(w, "X_grid", c.wilton.X_grid);
    get_if(w, "alpha_points", c.wilton.alpha_points);
    if (w.contains("h")) c.wilton.h = phi_from(w.at("h"), c.wilton.h);
  }
  get_if(j, "alpha_cmax", c.alpha_cmax);
  get_if(j, "alpha_q", c.alpha_q);
  return c;
}

json to_json(const SqReport& r) {
  const auto& d = r.diagonal;
  json diag = {{"main_term", cj(d.main_term)},
               {"contour_value", cj(d.contour_value)},
               {"shifted_remainder", cj(d.shifted_remainder)},
               {"u_line", cj(d.u_line)},
               {"v_line", cj(d.v_line)},
               {"double_line", cj(d.double_line)},
               {"discrepancy", num(d.discrepancy)},
               {"l1_g_cross_pi", d.l1_g_cross_pi},
               {"l1_g", d.l1_g},
               {"root_number", d.root_number}};
  json worst = json::array();
  for (const auto& s : r.audit.worst)
    worst.push_back({{"sum", std::string(1, s.sum)}, {"D1", s.D1}, {"D2", s.D2}, {"argument", s.argument}});
  json audit = {{"q", r.audit.q},           {"m_cut", r.audit.m_cut},       {"n_cut", r.audit.n_cut},
                {"l_cut", r.audit.l_cut},   {"threshold", r.audit.threshold}, {"shapes", r.audit.shapes},
                {"above", r.audit.above},   {"max_argument", r.audit.max_argument},
                {"below_q0", r.audit.below_q0}, {"worst", worst}, {"passed", r.audit.passed()}};
  json fails = json::array();
  for (const auto& f : r.orthogonality.off_diagonal_failures)
    fails.push_back({{"c2", f.c2}, {"c2p", f.c2p}, {"c1", f.c1}, {"c1p", f.c1p}, {"q", f.q}, {"value", cj(f.value)},
                     {"tolerance", f.tolerance}});
  json orth = {{"off_diagonal", r.orthogonality.off_diagonal},
               {"diagonal", r.orthogonality.diagonal},
               {"skipped", r.orthogonality.skipped},
               {"worst_off_ratio", r.orthogonality.worst_off_ratio},
               {"min_diagonal", r.orthogonality.min_diagonal},
               {"failures", fails},
               {"passed", r.orthogonality.passed()}};
  json pts = json::array();
  for (const auto& p : r.sigma6.points)
    pts.push_back({{"q", p.q}, {"value", cj(p.value)}, {"terms", p.terms}, {"dropped", p.dropped},
                   {"c1_cut", p.c1_cut}, {"c2_cut", p.c2_cut}, {"m_cut", p.m_cut}});
  json s6 = {{"points", pts},
             {"slope", num(r.sigma6.slope)},
             {"slope_error", num(r.sigma6.slope_error)},
             {"target", r.sigma6.target},
             {"kernel_evaluations", r.sigma6.kernel_evaluations}};
  json wrows = json::array();
  for (const auto& w : r.wilton.rows)
    wrows.push_back({{"X", w.X}, {"sup", w.sup}, {"alpha", w.alpha}, {"at_zero", w.at_zero}});
  json wil = {{"rows", wrows}, {"exponent", r.wilton.exponent}, {"exponent_error", r.wilton.exponent_error}};
  return {{"schema_version", 1},
          {"config", to_json(r.config)},
          {"normalization",
           {{"q", r.normalization.q},
            {"index", NormalizationFactor::index(r.normalization.q)},
            {"residue", r.normalization.residue},
            {"value", r.normalization.value()}}},
          {"diagonal", diag},
          {"sigma45_audit", audit},
          {"alpha_orthogonality", orth},
          {"sigma6_trend", s6},
          {"wilton", wil},
          {"xi_estimate", cj(r.xi_estimate)},
          {"spectral_side", "not computed: arithmetic-side reconstruction only, no level-q GL(3) Maass basis"}};
}

SqReport sq_report_from_json(const json& j) {
  SqReport r;
  r.config = moment_config_from_json(j.at("config"));
  r.normalization = {j.at("normalization").at("q").get<i64>(), j.at("normalization").at("residue").get<double>()};
  const json& d = j.at("diagonal");
  r.diagonal.main_term = jc(d.at("main_term"));
  r.diagonal.contour_value = jc(d.at("contour_value"));
  r.diagonal.shifted_remainder = jc(d.at("shifted_remainder"));
  r.diagonal.u_line = jc(d.at("u_line"));
  r.diagonal.v_line = jc(d.at("v_line"));
  r.diagonal.double_line = jc(d.at("double_line"));
  r.diagonal.discrepancy = unnum(d.at("discrepancy"));
  r.diagonal.l1_g_cross_pi = d.at("l1_g_cross_pi").get<double>();
  r.diagonal.l1_g = d.at("l1_g").get<double>();
  r.diagonal.root_number = d.at("root_number").get<double>();
  const json& a = j.at("sigma45_audit");
  r.audit.q = a.at("q").get<i64>();
  r.audit.m_cut = a.at("m_cut").get<i64>();
  r.audit.n_cut = a.at("n_cut").get<i64>();
  r.audit.l_cut = a.at("l_cut").get<i64>();
  r.audit.threshold = a.at("threshold").get<double>();
  r.audit.shapes = a.at("shapes").get<i64>();
  r.audit.above = a.at("above").get<i64>();
  r.audit.max_argument = a.at("max_argument").get<double>();
  r.audit.below_q0 = a.at("below_q0").get<bool>();
  for (const auto& s : a.at("worst"))
    r.audit.worst.push_back({s.at("sum").get<std::string>().at(0), s.at("D1").get<i64>(), s.at("D2").get<i64>(),
                             s.at("argument").get<double>()});
  const json& o = j.at("alpha_orthogonality");
  r.orthogonality.off_diagonal = o.at("off_diagonal").get<i64>();
  r.orthogonality.diagonal = o.at("diagonal").get<i64>();
  r.orthogonality.skipped = o.at("skipped").get<i64>();
  r.orthogonality.worst_off_ratio = o.at("worst_off_ratio").get<double>();
  r.orthogonality.min_diagonal = o.at("min_diagonal").get<double>();
  for (const auto& f : o.at("failures"))
    r.orthogonality.off_diagonal_failures.push_back({f.at("c2").get<i64>(), f.at("c2p").get<i64>(), f.at("c1").get<i64>(),
                                                     f.at("c1p").get<i64>(), f.at("q").get<i64>(), jc(f.at("value")),
                                                     f.at("tolerance").get<double>()});
  const json& s = j.at("sigma6_trend");
  for (const auto& p : s.at("points")) {
    Sigma6Point pt;
    pt.q = p.at("q").get<i64>();
    pt.value = jc(p.at("value"));
    pt.terms = p.at("terms").get<i64>();
    pt.dropped = p.at("dropped").get<i64>();
    pt.c1_cut = p.at("c1_cut").get<i64>();
    pt.c2_cut = p.at("c2_cut").get<i64>();
    pt.m_cut = p.at("m_cut").get<i64>();
    r.sigma6.points.push_back(pt);
  }
  r.sigma6.slope = unnum(s.at("slope"));
  r.sigma6.slope_error = unnum(s.at("slope_error"));
  r.sigma6.target = s.at("target").get<double>();
  r.sigma6.kernel_evaluations = s.at("kernel_evaluations").get<int>();
  const json& w = j.at("wilton");
  for (const auto& row : w.at("rows"))
    r.wilton.rows.push_back({row.at("X").get<double>(), row.at("sup").get<double>(), row.at("alpha").get<double>(),
                             row.at("at_zero").get<double>()});
  r.wilton.exponent = w.at("exponent").get<double>();
  r.wilton.exponent_error = w.at("exponent_error").get<double>();
  r.xi_estimate = jc(j.at("xi_estimate"));
  return r;
}

}  // namespace gl3m
