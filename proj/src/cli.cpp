#include "gl3m/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gl3m/analytic_kernels.hpp"
#include "gl3m/coeffs.hpp"
#include "gl3m/errors.hpp"
#include "gl3m/exp_sums.hpp"
#include "gl3m/kuznetsov.hpp"
#include "gl3m/lfunction.hpp"
#include "gl3m/moment_harness.hpp"
#include "gl3m/voronoi.hpp"

namespace gl3m {

namespace {

constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string config = "default";
  std::string out = ".";
  double tol = -1;  // negative: the subcommand default
  int jobs = 1;
  std::uint64_t seed = 0;
  bool selftest = false;

  double tol_or(double d) const { return tol > 0 ? tol : d; }
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : cols_(header.size()) { row(header); }
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != cols_) throw InvalidArgument("CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) s_ << (i ? "," : "") << cells[i];
    s_ << '\n';
  }
  std::string str() const { return s_.str(); }

 private:
  std::size_t cols_;
  std::ostringstream s_;
};

std::filesystem::path write_artifact(const RunConfig& rc, const std::string& name, const std::string& body) {
  std::filesystem::path dir(rc.out);
  std::filesystem::create_directories(dir);
  std::filesystem::path p = dir / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + p.string());
  f << body;
  return p;
}

std::filesystem::path write_json(const RunConfig& rc, const std::string& name, nlohmann::json j) {
  if (!j.contains("schema_version")) j["schema_version"] = kSchemaVersion;
  return write_artifact(rc, name, j.dump(2) + "\n");
}

MomentConfig load_config(const RunConfig& rc) {
  if (rc.config.empty() || rc.config == "default") return {};
  std::ifstream f(rc.config);
  if (!f) throw InvalidArgument("cannot read config " + rc.config);
  return moment_config_from_json(nlohmann::json::parse(f));
}

int verdict(bool ok) { return ok ? kExitOk : kExitFalsified; }

void summary(const std::string& sub, bool ok, const std::string& text) {
  std::cout << sub << ": " << (ok ? "ok" : "FALSIFIED") << " " << text << "\n";
}

// ------------------------------------------------------------ self tests

struct Check {
  const char* name;
  std::function<bool()> pass;
};

int run_checks(const std::string& sub, const std::vector<Check>& checks) {
  int bad = 0;
  for (const auto& c : checks) {
    bool ok = false;
    try {
      ok = c.pass();
    } catch (const std::exception& e) {
      std::cout << "  " << c.name << ": exception " << e.what() << "\n";
    }
    std::cout << "  " << (ok ? "pass " : "FAIL ") << c.name << "\n";
    bad += !ok;
  }
  summary(sub + " --selftest", bad == 0, std::to_string(checks.size() - bad) + "/" + std::to_string(checks.size()));
  return verdict(bad == 0);
}

std::vector<Check> selftests(const std::string& sub) {
  if (sub == "kloosterman")
    return {{"yz shift invariance",
             [] {
               GL3SumSpec s{1, 2, 3, 1, 6, 4, 1};
               return std::abs(gl3_modified_sum(s) - gl3_modified_sum(s, {PhaseVariant::Z2, 3})) < 1e-9;
             }},
            {"weil bound with constant 4", [] {
               for (i64 D1 = 1; D1 <= 8; ++D1)
                 for (i64 D2 = 1; D2 <= 8; ++D2)
                   if (weil_margin({1, 2, 1, 3, D1, D2, 1}).margin < 0.25) return false;
               return true;
             }}};
  if (sub == "identity")
    return {{"factorization D <= 8",
             [] {
               for (const auto& r : factorization_sweep(8, {0, 1, 2}, 1))
                 if (std::abs(r.enumerated - r.factorized) > 1e-6 * std::max(1.0, std::abs(r.enumerated))) return false;
               return true;
             }},
            {"prime twist q = 5", [] {
               auto t = prime_twist_identity_check(1, 1, 1, 1, 5, 1, 1);
               return std::abs(t.lhs - t.rhs) < 1e-9 && std::abs(t.lhs - 5.0) < 1e-9;
             }}};
  if (sub == "weights")
    return {{"V contour shift", [] {
               WeightParams wp;
               return std::abs(weight_V(0.1, wp, {0.5, 0, 4096}) - weight_V(0.1, wp, {2.0, 0, 4096})) < 1e-8;
             }},
            {"V residue at u = 0", [] {
               WeightParams wp;
               cplx d = WeightFunction(WeightKind::V, wp, {1.0, 0, 4096})(0.1) -
                        WeightFunction(WeightKind::V, wp, {-1.0 / 18, 0, 4096})(0.1);
               return std::abs(d - 1.0) < 1e-8;
             }}};
  if (sub == "kernels")
    return {{"Jtilde vanishes below the edge", [] { return kernel_Jtilde(0.9, 1, TestFunctionH{}).value == 0.0; }},
            {"J vanishes without support", [] { return kernel_J(1.0, 0.9, 1, 1, TestFunctionH{}).value == 0.0; }}};
  if (sub == "voronoi")
    return {{"Omega contour shift",
             [] {
               VoronoiTestFunction phi;
               auto arch = ArchimedeanType::sym_square_holomorphic(12);
               cplx a = OmegaTransform(arch, phi, {-0.5})(1.0, 1), b = OmegaTransform(arch, phi, {0.0, 2500})(1.0, 1);
               return std::abs(a - b) <= 1e-6 * std::abs(a);
             }},
            {"phi = 0", [] {
               VoronoiInstance in;
               GL3Coeffs t = GL3Coeffs::trivial();
               in.coeffs = &t;
               in.phi.zero = true;
               auto r = voronoi_two_sides(in, 256, 128);
               return r.lhs == 0.0 && r.rhs == 0.0 && r.residual == 0.0;
             }}};
  if (sub == "diagonal")
    return {{"trivial Pi gives L = 1", [] {
               auto g = delta_eigenvalues(50);
               return std::abs(L1_g_cross_Pi(g, GL3Coeffs::trivial(), 1e-12, 50).value - 1.0) < 1e-12;
             }}};
  if (sub == "sigma-audit")
    return {{"empty cutoffs pass",
             [] {
               MomentConfig c;
               c.m_cut = 0;
               c.support_threshold = 1.3;
               return sigma45_support_audit(c).shapes == 0;
             }},
            {"negative control reports shapes", [] {
               MomentConfig c;
               c.q = 11;
               c.m_cut = 100000;
               c.support_threshold = 1.3;
               return sigma45_support_audit(c).above > 0;
             }}};
  if (sub == "sigma6")
    return {{"zero kernel gives 0", [] {
               MomentConfig c;
               c.sigma6.zero_kernel = true;
               c.sigma6.q_grid = {11, 23};
               for (const auto& p : sigma6_truncated(c).points)
                 if (p.value != 0.0) return false;
               return true;
             }}};
  if (sub == "wilton")
    return {{"h = 0 gives 0", [] {
               VoronoiTestFunction h{1.0, 2.0};
               h.zero = true;
               auto r = wilton_experiment(delta_eigenvalues(300), {100.0}, 10, h);
               return r.rows.at(0).sup == 0.0;
             }}};
  if (sub == "report" || sub == "config")
    return {{"config JSON round trip", [] {
               MomentConfig c;
               c.q = 101;
               c.sigma6.q_grid = {11, 13};
               return to_json(moment_config_from_json(to_json(c))) == to_json(c);
             }}};
  return {};
}

// ------------------------------------------------------------ subcommands

struct KloostermanArgs {
  i64 m1 = 1, m2 = 1, n1 = 1, n2 = 1, D1 = 1, D2 = 1, N = 1;
  std::string variant = "z2";
};

std::vector<std::string> sweep_header() {
  return {"m1", "m2", "n1", "n2", "D1", "D2", "N", "re", "im", "bound", "margin"};
}

std::vector<std::string> sweep_cells(const GL3SumSpec& s, cplx v, const BoundReport& b) {
  return {std::to_string(s.m1), std::to_string(s.m2), std::to_string(s.n1), std::to_string(s.n2), std::to_string(s.D1),
          std::to_string(s.D2), std::to_string(s.N),  fmt(v.real()),        fmt(v.imag()),        fmt(b.bound_value),
          fmt(b.margin)};
}

int cmd_kloosterman(const RunConfig& rc, const KloostermanArgs& a) {
  ModifiedSumOptions opt;
  if (a.variant == "z1") opt.variant = PhaseVariant::Z1;
  else if (a.variant != "z2") throw InvalidArgument("variant must be z1 or z2");
  GL3SumSpec s{a.m1, a.m2, a.n1, a.n2, a.D1, a.D2, a.N};
  cplx v = gl3_modified_sum(s, opt);
  Csv csv(sweep_header());
  csv.row(sweep_cells(s, v, a.N == 1 ? weil_margin_from(s, v) : BoundReport{}));
  write_artifact(rc, "kloosterman.csv", csv.str());
  summary("kloosterman", true, "S = " + fmt(v.real()) + " + " + fmt(v.imag()) + "i");
  return kExitOk;
}

struct IdentityArgs {
  i64 dmax = 30;
  i64 fmax = 3;
  std::vector<i64> twist_q{3, 5, 7};
  i64 twist_dmax = 12;
  int samples = 0;  // extra random frequency vectors per modulus pair, drawn from the seed
};

int cmd_identity(const RunConfig& rc, const IdentityArgs& a) {
  const double tol = rc.tol_or(1e-6);
  std::vector<i64> freqs;
  for (i64 f = 0; f <= a.fmax; ++f) freqs.push_back(f);
  auto rows = factorization_sweep(a.dmax, freqs, rc.jobs);
  i64 bad = 0, weil_bad = 0;
  double worst_ratio = 0;
  Csv csv({"D1", "D2", "cases", "mismatches", "max_abs_sum", "max_ratio_to_bound"});
  auto header = sweep_header();
  header.insert(header.end(), {"factorized_re", "factorized_im"});
  Csv full(header);
  std::map<std::pair<i64, i64>, std::array<double, 4>> agg;
  for (const auto& r : rows) {
    auto cells = sweep_cells(r.spec, r.enumerated, r.bound);
    cells.insert(cells.end(), {fmt(r.factorized.real()), fmt(r.factorized.imag())});
    full.row(cells);
    auto& g = agg[{r.spec.D1, r.spec.D2}];
    g[0] += 1;
    bool mis = std::abs(r.enumerated - r.factorized) > tol * std::max(1.0, std::abs(r.enumerated));
    g[1] += mis;
    bad += mis;
    g[2] = std::max(g[2], std::abs(r.enumerated));
    double ratio = r.bound.bound_value > 0 ? std::abs(r.enumerated) / r.bound.bound_value : 0.0;
    g[3] = std::max(g[3], ratio);
    worst_ratio = std::max(worst_ratio, ratio);
    weil_bad += ratio > 4.0;
  }
  std::mt19937_64 rng(rc.seed);
  std::uniform_int_distribution<i64> fd(-50, 50);
  i64 sampled = 0;
  for (int s = 0; s < a.samples; ++s) {
    std::uniform_int_distribution<i64> dd(1, a.dmax);
    GL3SumSpec sp{fd(rng), fd(rng), fd(rng), fd(rng), dd(rng), dd(rng), 1};
    cplx e = gl3_modified_sum(sp), f = factorization_lemma_rhs(sp);
    ++sampled;
    bad += std::abs(e - f) > tol * std::max(1.0, std::abs(e));
  }
  for (const auto& [k, g] : agg)
    csv.row({std::to_string(k.first), std::to_string(k.second), fmt(g[0]), fmt(g[1]), fmt(g[2]), fmt(g[3])});
  write_artifact(rc, "identity.csv", full.str());
  write_artifact(rc, "identity_summary.csv", csv.str());

  i64 twist_cases = 0, twist_bad = 0;
  Csv tw({"q", "D1", "D2", "m1", "m2", "n1", "n2", "lhs_re", "lhs_im", "rhs_re", "rhs_im"});
  for (i64 q : a.twist_q)
    for (i64 D1 = 1; D1 <= a.twist_dmax; ++D1)
      for (i64 D2 = 1; D2 <= a.twist_dmax; ++D2) {
        if (gcd(D1 * D2, q) != 1) continue;
        for (i64 m1 : {1, 2})
          for (i64 m2 : {1, 2})
            for (i64 n1 : {0, 1})
              for (i64 n2 : {1, 3}) {
                if (gcd(m2 * n2, q) != 1) continue;
                auto t = prime_twist_identity_check(m1, m2, n1, n2, q, D1, D2);
                ++twist_cases;
                bool mis = std::abs(t.lhs - t.rhs) > tol * std::max(1.0, std::abs(t.lhs));
                twist_bad += mis;
                if (mis)
                  tw.row({std::to_string(q), std::to_string(D1), std::to_string(D2), std::to_string(m1), std::to_string(m2),
                          std::to_string(n1), std::to_string(n2), fmt(t.lhs.real()), fmt(t.lhs.imag()),
                          fmt(t.rhs.real()), fmt(t.rhs.imag())});
              }
      }
  write_artifact(rc, "identity_twist_failures.csv", tw.str());
  const bool ok = bad == 0 && twist_bad == 0;
  summary("identity", ok,
          std::to_string(rows.size() + sampled) + " factorization cases, " + std::to_string(bad) + " mismatches; " +
              std::to_string(twist_cases) + " twist cases, " + std::to_string(twist_bad) + " mismatches; max |S|/bound " +
              fmt(worst_ratio) + " (" + std::to_string(weil_bad) + " above 4)");
  return verdict(ok);
}

struct WeightsArgs {
  std::string kind = "V";
  double sigma = 0;  // 0: 1 for V and W, 1/4 for the tilde weights
  double y_min = 1e-4, y_max = 1e5;
  int points = 19;
};

int cmd_weights(const RunConfig& rc, const WeightsArgs& a) {
  MomentConfig cfg = load_config(rc);
  WeightKind k;
  if (a.kind == "V") k = WeightKind::V;
  else if (a.kind == "Vtilde") k = WeightKind::Vtilde;
  else if (a.kind == "W") k = WeightKind::W;
  else if (a.kind == "Wtilde") k = WeightKind::Wtilde;
  else throw InvalidArgument("kind must be V, Vtilde, W or Wtilde");
  if (a.points < 2 || !(a.y_min > 0) || !(a.y_max > a.y_min)) throw InvalidArgument("bad y range");
  std::vector<double> ys;
  for (int i = 0; i < a.points; ++i) ys.push_back(a.y_min * std::pow(a.y_max / a.y_min, double(i) / (a.points - 1)));
  Csv csv({"y", "re", "im"});
  double sigma = a.sigma != 0 ? a.sigma : (k == WeightKind::V || k == WeightKind::W ? 1.0 : 0.25);
  for (const auto& r : weight_profile(k, cfg.weights, {sigma, 0, 4096}, ys))
    csv.row({fmt(r.y), fmt(r.value.real()), fmt(r.value.imag())});
  write_artifact(rc, "weights_" + a.kind + ".csv", csv.str());
  summary("weights", true, std::to_string(ys.size()) + " values of " + a.kind);
  return kExitOk;
}

struct KernelsArgs {
  std::string kind = "jtilde";
  std::vector<double> A{1.3, 1.6, 2.0};
  double A2 = 1.5;
  int eps1 = 1, eps2 = 1;
};

int cmd_kernels(const RunConfig& rc, const KernelsArgs& a) {
  MomentConfig cfg = load_config(rc);
  Csv csv({"kind", "A1", "A2", "eps1", "eps2", "re", "im", "error"});
  if (a.kind == "jtilde") {
    for (double A : a.A) {
      auto v = kernel_Jtilde(A, a.eps1, cfg.H);
      csv.row({"jtilde", fmt(A), "", std::to_string(a.eps1), "", fmt(v.value.real()), fmt(v.value.imag()), fmt(v.error)});
    }
  } else if (a.kind == "j") {
    for (double A : a.A) {
      auto v = kernel_J(A, a.A2, a.eps1, a.eps2, cfg.H, cfg.sigma6.kernel_budget);
      csv.row({"j", fmt(A), fmt(a.A2), std::to_string(a.eps1), std::to_string(a.eps2), fmt(v.value.real()),
               fmt(v.value.imag()), fmt(v.error)});
    }
  } else if (a.kind == "calibrate") {
    auto c = calibrate_jtilde_support(cfg.H, QuadratureBudget::jtilde_default(), rc.tol_or(1e-3));
    for (auto [A, v] : c.scan) csv.row({"jtilde_abs", fmt(A), "", "1", "", fmt(v), "0", "0"});
    std::cout << "threshold " << fmt(c.threshold) << " peak " << fmt(c.peak) << "\n";
  } else {
    throw InvalidArgument("kind must be jtilde, j or calibrate");
  }
  write_artifact(rc, "kernels_" + a.kind + ".csv", csv.str());
  summary("kernels", true, a.kind);
  return kExitOk;
}

struct VoronoiArgs {
  double x = 20;
  i64 c = 2, a = 1, m = 1;
  i64 cutoff = 10000, first = 125;
};

int cmd_voronoi(const RunConfig& rc, const VoronoiArgs& a) {
  MomentConfig cfg = load_config(rc);
  const double tol = rc.tol_or(5e-2);
  const i64 N = std::max<i64>(a.cutoff, static_cast<i64>(std::ceil(a.x * 2.5)) + 1);
  GL2Form g = form_by_weight(cfg.weight, N);
  GL3Coeffs A = sym_square_gl3(g, N, N);
  VoronoiInstance in;
  in.coeffs = &A;
  in.a = a.a;
  in.c = a.c;
  in.m = a.m;
  in.x = a.x;
  auto r = voronoi_two_sides(in, a.cutoff, a.first);
  Csv csv({"cutoff", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "tail"});
  for (const auto& row : r.rows)
    csv.row({std::to_string(row.cutoff), fmt(r.lhs.real()), fmt(r.lhs.imag()), fmt(row.rhs.real()), fmt(row.rhs.imag()),
             fmt(row.residual), fmt(row.tail)});
  write_artifact(rc, "voronoi.csv", csv.str());
  const bool ok = r.residual <= tol && r.monotone;
  summary("voronoi", ok, "residual " + fmt(r.residual) + (r.monotone ? " monotone" : " not monotone"));
  return verdict(ok);
}

int cmd_diagonal(const RunConfig& rc) {
  MomentConfig cfg = load_config(rc);
  const double tol = rc.tol_or(1e-3);
  auto d = diagonal_term(cfg);
  auto cj = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
  nlohmann::json j = {{"main_term", cj(d.main_term)},
                      {"contour_value", cj(d.contour_value)},
                      {"shifted_remainder", cj(d.shifted_remainder)},
                      {"u_line", cj(d.u_line)},
                      {"v_line", cj(d.v_line)},
                      {"double_line", cj(d.double_line)},
                      {"discrepancy", d.discrepancy},
                      {"l1_g_cross_pi", d.l1_g_cross_pi},
                      {"l1_g", d.l1_g},
                      {"root_number", d.root_number}};
  write_json(rc, "diagonal.json", j);
  const bool ok = d.discrepancy <= tol;
  summary("diagonal", ok, "discrepancy " + fmt(d.discrepancy) + ", L(1,g x Pi) " + fmt(d.l1_g_cross_pi));
  return verdict(ok);
}

struct AuditArgs {
  i64 q = -1, m_cut = -2;
};

int cmd_sigma_audit(const RunConfig& rc, const AuditArgs& a) {
  MomentConfig cfg = load_config(rc);
  if (a.q > 0) cfg.q = a.q;
  if (a.m_cut >= -1) cfg.m_cut = a.m_cut;
  auto r = sigma45_support_audit(cfg);
  Csv csv({"sum", "D1", "D2", "argument"});
  for (const auto& s : r.worst) csv.row({std::string(1, s.sum), std::to_string(s.D1), std::to_string(s.D2), fmt(s.argument)});
  write_artifact(rc, "sigma_audit.csv", csv.str());
  summary("sigma-audit", r.passed(),
          "q " + std::to_string(r.q) + ", " + std::to_string(r.shapes) + " shapes, " + std::to_string(r.above) +
              " above threshold " + fmt(r.threshold) + ", max argument " + fmt(r.max_argument));
  return verdict(r.passed());
}

int cmd_sigma6(const RunConfig& rc, const std::vector<i64>& qs) {
  MomentConfig cfg = load_config(rc);
  if (!qs.empty()) cfg.sigma6.q_grid = qs;
  auto t = sigma6_truncated(cfg);
  Csv csv({"q", "re", "im", "abs", "terms", "dropped", "c1_cut", "c2_cut", "m_cut"});
  for (const auto& p : t.points)
    csv.row({std::to_string(p.q), fmt(p.value.real()), fmt(p.value.imag()), fmt(std::abs(p.value)), std::to_string(p.terms),
             std::to_string(p.dropped), std::to_string(p.c1_cut), std::to_string(p.c2_cut), std::to_string(p.m_cut)});
  write_artifact(rc, "sigma6.csv", csv.str());
  const bool ok = t.slope < 0;
  summary("sigma6", ok, "slope " + fmt(t.slope) + " +- " + fmt(t.slope_error) + " (target " + fmt(t.target) + ")");
  return verdict(ok);
}

int cmd_wilton(const RunConfig& rc, const std::vector<double>& xs, int alpha_points) {
  MomentConfig cfg = load_config(rc);
  if (!xs.empty()) cfg.wilton.X_grid = xs;
  if (alpha_points > 0) cfg.wilton.alpha_points = alpha_points;
  double xmax = 1;
  for (double X : cfg.wilton.X_grid) xmax = std::max(xmax, X);
  auto f = form_by_weight(cfg.weight, static_cast<i64>(std::ceil(xmax * cfg.wilton.h.support_hi())) + 1);
  auto r = wilton_experiment(f, cfg.wilton.X_grid, cfg.wilton.alpha_points, cfg.wilton.h);
  Csv csv({"X", "sup", "alpha", "at_zero"});
  for (const auto& w : r.rows) csv.row({fmt(w.X), fmt(w.sup), fmt(w.alpha), fmt(w.at_zero)});
  write_artifact(rc, "wilton.csv", csv.str());
  const bool ok = r.exponent >= 0.40 && r.exponent <= 0.62;
  summary("wilton", ok, "exponent " + fmt(r.exponent) + " +- " + fmt(r.exponent_error));
  return verdict(ok);
}

int cmd_config(const RunConfig& rc) {
  auto p = write_json(rc, "config.json", to_json(load_config(rc)));
  summary("config", true, "written to " + p.string());
  return kExitOk;
}

int cmd_report(const RunConfig& rc) {
  MomentConfig cfg = load_config(rc);
  auto r = assemble_S_q_report(cfg);
  auto p = write_json(rc, "report.json", to_json(r));
  summary("report", true, "written to " + p.string());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Numerical toolkit for GL(3) Kloosterman sums, Kuznetsov and Voronoi kernels and a first-moment harness", "gl3m"};
  app.require_subcommand(1);
  RunConfig rc;
  app.add_option("--config", rc.config, "moment configuration JSON, or 'default'")->envname("GL3M_CONFIG");
  app.add_option("--out", rc.out, "output directory")->envname("GL3M_OUT");
  app.add_option("--tol", rc.tol, "tolerance override")->envname("GL3M_TOL");
  app.add_option("--jobs", rc.jobs, "worker threads where a module accepts them")->envname("GL3M_JOBS")->check(CLI::PositiveNumber);
  app.add_option("--seed", rc.seed, "seed for sampled grids")->envname("GL3M_SEED");
  app.add_flag("--selftest", rc.selftest, "run the subcommand's invariant checks");

  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  KloostermanArgs ka;
  auto* sk = sub("kloosterman", "evaluate one GL(3) Kloosterman sum");
  sk->add_option("--m1", ka.m1);
  sk->add_option("--m2", ka.m2);
  sk->add_option("--n1", ka.n1);
  sk->add_option("--n2", ka.n2);
  sk->add_option("--D1", ka.D1)->check(CLI::PositiveNumber);
  sk->add_option("--D2", ka.D2)->check(CLI::PositiveNumber);
  sk->add_option("--N", ka.N)->check(CLI::PositiveNumber);
  sk->add_option("--variant", ka.variant)->check(CLI::IsMember({"z1", "z2"}));

  IdentityArgs ia;
  auto* si = sub("identity", "factorization and prime-twist identity sweeps");
  si->add_option("--dmax", ia.dmax)->check(CLI::PositiveNumber);
  si->add_option("--fmax", ia.fmax)->check(CLI::NonNegativeNumber);
  si->add_option("--twist-q", ia.twist_q);
  si->add_option("--twist-dmax", ia.twist_dmax)->check(CLI::PositiveNumber);
  si->add_option("--samples", ia.samples)->check(CLI::NonNegativeNumber);

  WeightsArgs wa;
  auto* sw = sub("weights", "approximate functional equation weight profiles");
  sw->add_option("--kind", wa.kind)->check(CLI::IsMember({"V", "Vtilde", "W", "Wtilde"}));
  sw->add_option("--sigma", wa.sigma);
  sw->add_option("--y-min", wa.y_min);
  sw->add_option("--y-max", wa.y_max);
  sw->add_option("--points", wa.points);

  KernelsArgs kna;
  auto* skn = sub("kernels", "Kuznetsov kernel values and support calibration");
  skn->add_option("--kind", kna.kind)->check(CLI::IsMember({"jtilde", "j", "calibrate"}));
  skn->add_option("--A", kna.A);
  skn->add_option("--A2", kna.A2);
  skn->add_option("--eps1", kna.eps1);
  skn->add_option("--eps2", kna.eps2);

  VoronoiArgs va;
  auto* sv = sub("voronoi", "two-sided Voronoi identity with a cutoff convergence table");
  sv->add_option("--x", va.x);
  sv->add_option("--c", va.c)->check(CLI::PositiveNumber);
  sv->add_option("--a", va.a);
  sv->add_option("--m", va.m)->check(CLI::PositiveNumber);
  sv->add_option("--cutoff", va.cutoff)->check(CLI::PositiveNumber);
  sv->add_option("--first", va.first)->check(CLI::PositiveNumber);

  sub("diagonal", "diagonal term by both contour routes");

  AuditArgs aa;
  auto* sa = sub("sigma-audit", "support audit of the Sigma_4 and Sigma_5 divisor shapes");
  sa->add_option("--q", aa.q);
  sa->add_option("--m-cut", aa.m_cut);

  std::vector<i64> s6q;
  auto* s6 = sub("sigma6", "truncated Sigma_6 on a grid of prime levels");
  s6->add_option("--q-grid", s6q);

  std::vector<double> wx;
  int wap = 0;
  auto* swl = sub("wilton", "twisted GL(2) sums and their growth exponent");
  swl->add_option("--X", wx);
  swl->add_option("--alpha-points", wap);

  sub("report", "full JSON report of the moment harness");
  sub("config", "write the effective moment configuration");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (rc.selftest) return run_checks(name, selftests(name));
    if (name == "kloosterman") return cmd_kloosterman(rc, ka);
    if (name == "identity") return cmd_identity(rc, ia);
    if (name == "weights") return cmd_weights(rc, wa);
    if (name == "kernels") return cmd_kernels(rc, kna);
    if (name == "voronoi") return cmd_voronoi(rc, va);
    if (name == "diagonal") return cmd_diagonal(rc);
    if (name == "sigma-audit") return cmd_sigma_audit(rc, aa);
    if (name == "sigma6") return cmd_sigma6(rc, s6q);
    if (name == "wilton") return cmd_wilton(rc, wx, wap);
    if (name == "report") return cmd_report(rc);
    if (name == "config") return cmd_config(rc);
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace gl3m
