#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gl3m/cli.hpp"
#include "gl3m/moment_harness.hpp"

namespace fs = std::filesystem;
using gl3m::run;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("gl3m_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path light_config(const fs::path& dir) {
  gl3m::MomentConfig c;
  c.q = 11;
  c.m_cut = 200;
  c.support_threshold = 1.3;
  c.diagonal.terms = 6000;
  c.diagonal.step = 0.05;
  c.sigma6.q_grid = {11, 13};
  c.sigma6.grid_points = 3;
  c.sigma6.m_budget = 32;
  c.sigma6.kernel_budget = {12, 1, 4.0 / 3, 10.0, 1e-3};  // plumbing only
  c.wilton.X_grid = {100, 300};
  c.wilton.alpha_points = 20;
  c.alpha_cmax = 4;
  fs::create_directories(dir);
  fs::path p = dir / "light.json";
  std::ofstream(p) << gl3m::to_json(c).dump(2);
  return p;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run(std::vector<std::string>{}) == gl3m::kExitUsage);
  CHECK(run({"bogus"}) == gl3m::kExitUsage);
  CHECK(run({"identity", "--dmax", "abc"}) == gl3m::kExitUsage);
  CHECK(run({"kloosterman", "--variant", "z3"}) == gl3m::kExitUsage);
  CHECK(run({"--help"}) == gl3m::kExitOk);
}

TEST_CASE("identity sweep") {
  auto out = scratch("identity");
  CHECK(run({"identity", "--dmax", "6", "--fmax", "2", "--twist-dmax", "4", "--out", out.string()}) == gl3m::kExitOk);
  std::string csv = slurp(out / "identity.csv");
  CHECK(csv.rfind("m1,m2,n1,n2,D1,D2,N,re,im,bound,margin,factorized_re,factorized_im\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 36 * 81);
  CHECK(slurp(out / "identity_twist_failures.csv") == "q,D1,D2,m1,m2,n1,n2,lhs_re,lhs_im,rhs_re,rhs_im\n");
}

TEST_CASE("byte-identical outputs and seeds") {
  auto a = scratch("seed_a"), b = scratch("seed_b"), c = scratch("seed_c");
  std::vector<std::string> args{"identity", "--dmax", "4", "--fmax", "1", "--samples", "20", "--seed", "7"};
  auto with = [&](const fs::path& p) {
    auto v = args;
    v.insert(v.end(), {"--out", p.string()});
    return v;
  };
  CHECK(run(with(a)) == 0);
  CHECK(run(with(b)) == 0);
  CHECK(slurp(a / "identity.csv") == slurp(b / "identity.csv"));
  CHECK(run({"kloosterman", "--D1", "6", "--D2", "4", "--m1", "1", "--n2", "3", "--out", c.string()}) == 0);
  CHECK(slurp(c / "kloosterman.csv").rfind("m1,m2,n1,n2,D1,D2,N,re,im,bound,margin\n1,1,1,3,6,4,1,", 0) == 0);
}

TEST_CASE("environment overrides") {
  auto out = scratch("env");
  setenv("GL3M_OUT", out.string().c_str(), 1);
  CHECK(run({"kloosterman"}) == 0);
  unsetenv("GL3M_OUT");
  CHECK(fs::exists(out / "kloosterman.csv"));
}

TEST_CASE("falsified audits exit with 2") {
  auto out = scratch("audit");
  auto cfg = light_config(out);
  CHECK(run({"sigma-audit", "--config", cfg.string(), "--m-cut", "100000", "--out", out.string()}) ==
        gl3m::kExitFalsified);
  CHECK(slurp(out / "sigma_audit.csv").rfind("sum,D1,D2,argument\n", 0) == 0);
  CHECK(run({"sigma-audit", "--config", cfg.string(), "--m-cut", "0", "--out", out.string()}) == gl3m::kExitOk);
  CHECK(run({"sigma-audit", "--config", (out / "missing.json").string()}) == gl3m::kExitUsage);
}

TEST_CASE("selftests") {
  for (const char* s : {"kloosterman", "identity", "weights", "kernels", "sigma-audit", "report"})
    CHECK(run({s, "--selftest"}) == gl3m::kExitOk);
}

TEST_CASE("report") {
  auto out = scratch("report");
  auto cfg = light_config(out);
  CHECK(run({"report", "--config", cfg.string(), "--out", out.string()}) == gl3m::kExitOk);
  auto j = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(j.at("schema_version") == 1);
  auto r = gl3m::sq_report_from_json(j);
  CHECK(r.config.q == 11);
  CHECK(r.diagonal.main_term.real() == doctest::Approx(r.diagonal.l1_g_cross_pi * r.diagonal.l1_g));
  std::string first = slurp(out / "report.json");
  CHECK(run({"report", "--config", cfg.string(), "--out", out.string()}) == gl3m::kExitOk);
  CHECK(slurp(out / "report.json") == first);
}

TEST_CASE("config writes the effective configuration") {
  auto dir = scratch("config");
  auto cfg = light_config(dir);
  REQUIRE(run({"--config", cfg.string(), "--out", dir.string(), "config"}) == gl3m::kExitOk);
  auto j = nlohmann::json::parse(slurp(dir / "config.json"));
  CHECK(j["schema_version"] == 1);
  CHECK(j["q"] == 11);
  CHECK(gl3m::to_json(gl3m::moment_config_from_json(j)) == gl3m::to_json(gl3m::moment_config_from_json(
                                                               nlohmann::json::parse(slurp(cfg)))));
  REQUIRE(run({"--out", dir.string(), "config"}) == gl3m::kExitOk);
  CHECK(gl3m::moment_config_from_json(nlohmann::json::parse(slurp(dir / "config.json"))).q == 10007);
}
