#include "gl3m/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gl3m/errors.hpp"
#include "gl3m/exp_sums.hpp"
#include "gl3m/kuznetsov.hpp"
#include "gl3m/special.hpp"

namespace gl3m {

double VoronoiTestFunction::operator()(double t) const {
  if (zero) return 0.0;
  return TestFunctionH::bump(t / scale, lo, hi);
}

MellinTable::MellinTable(const VoronoiTestFunction& phi, int nodes) {
  if (nodes < 8) throw InvalidArgument("Mellin grid needs at least 8 nodes");
  if (phi.zero) return;
  const double u0 = std::log(phi.support_lo()), u1 = std::log(phi.support_hi());
  const double du = (u1 - u0) / nodes;
  for (int k = 1; k < nodes; ++k) {
    double u = u0 + k * du;
    double g = phi(std::exp(u));
    if (g == 0.0) continue;
    u_.push_back(u);
    g_.push_back(g * du);
  }
}

cplx MellinTable::operator()(cplx s) const {
  cplx acc = 0;
  for (std::size_t k = 0; k < u_.size(); ++k) acc += g_[k] * std::exp(s * u_[k]);
  return acc;
}

std::vector<cplx> MellinTable::on_line(cplx s0, double dt, int count) const {
  std::vector<cplx> out(static_cast<std::size_t>(count), 0.0);
  for (std::size_t k = 0; k < u_.size(); ++k) {
    const double u = u_[k];
    cplx z = g_[k] * std::exp(s0 * u);
    const cplx rot = std::polar(1.0, dt * u);
    for (int j = 0; j < count; ++j) {
      if ((j & 255) == 0) z = g_[k] * std::exp((s0 + cplx(0, j * dt)) * u);
      out[static_cast<std::size_t>(j)] += z;
      z *= rot;
    }
  }
  return out;
}

cplx mellin_of_phi(const VoronoiTestFunction& phi, cplx s, int nodes) { return MellinTable(phi, nodes)(s); }

namespace {

void check_numerator_pole(cplx arg, const char* what) {
  // Gamma(arg) with arg a non-positive integer
  if (arg.real() < 0.5 && std::abs(arg - std::round(arg.real())) < 1e-12) throw PoleAt(what);
}

bool at_gamma_r_pole(cplx w) {
  return w.real() < 0.5 && std::abs(w.imag()) < 1e-12 && std::abs(w.real() / 2.0 - std::round(w.real() / 2.0)) < 1e-12;
}

// prod Gamma_R(1 + s + d) / prod Gamma_R(-s + b); a denominator pole gives 0
cplx quotient(cplx s, const std::vector<cplx>& num_shift, const std::vector<cplx>& den_shift) {
  cplx acc = 0;
  for (cplx b : den_shift) {
    if (at_gamma_r_pole(-s + b)) return 0.0;
    acc -= log_gamma_R(-s + b);
  }
  for (cplx d : num_shift) acc += log_gamma_R(1.0 + s + d);
  return std::exp(acc);
}

void check_kernel_abscissa(double sigma, const std::vector<cplx>& dual) {
  for (cplx d : dual) {
    // poles of Gamma_R(1 + s + d) at s = -1 - d - 2k
    double r = -1.0 - d.real();
    if (sigma > r + 1e-9) continue;
    double k = (r - sigma) / 2.0;
    if (std::abs(k - std::round(k)) * 2.0 < 1e-9) throw ContourOnPole("Voronoi abscissa through a kernel pole");
  }
}

}  // namespace

cplx gamma_pm(cplx s, const std::array<cplx, 3>& alpha, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  cplx l1 = 0, l2 = 0;
  for (cplx a : alpha) {
    check_numerator_pole((s + a) / 2.0, "gamma_pm: pole of Gamma((s+alpha)/2)");
    check_numerator_pole((1.0 + s + a) / 2.0, "gamma_pm: pole of Gamma((1+s+alpha)/2)");
    l1 += log_gamma((s + a) / 2.0) - log_gamma((1.0 - s - a) / 2.0);
    l2 += log_gamma((1.0 + s + a) / 2.0) - log_gamma((2.0 - s - a) / 2.0);
  }
  return std::exp(l1) - static_cast<double>(sign) * cplx(0, 1) * std::exp(l2);
}

cplx voronoi_kernel(cplx s, const ArchimedeanType& arch, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  cplx re = quotient(s, arch.dual_shifts, arch.shifts);
  cplx ro = quotient(s, arch.twisted_dual_shifts, arch.twisted_shifts);
  return 0.5 * (arch.eps_even * re + static_cast<double>(sign) * arch.eps_odd * ro);
}

OmegaTransform::OmegaTransform(const ArchimedeanType& arch, const VoronoiTestFunction& phi, const VoronoiContour& c)
    : arch_(arch), sigma_(c.sigma), t0_(-c.height), dt_(c.step) {
  if (!(c.step > 0) || !(c.height > 0)) throw InvalidArgument("Voronoi contour needs positive step and height");
  check_kernel_abscissa(sigma_, arch.dual_shifts);
  check_kernel_abscissa(sigma_, arch.twisted_dual_shifts);
  const int n = static_cast<int>(std::floor(2.0 * c.height / c.step)) + 1;
  MellinTable mt(phi, c.mellin_nodes);
  // phi~(-s) along s = sigma + i t, t = t0 + j dt, i.e. -s = -sigma - i t
  std::vector<cplx> ph = mt.on_line(cplx(-sigma_, c.height), -c.step, n);
  we_.resize(static_cast<std::size_t>(n));
  wo_.resize(static_cast<std::size_t>(n));
  double peak = 0, edge = 0;
  const int rim = std::max(1, n / 20);
  for (int j = 0; j < n; ++j) {
    const cplx s(sigma_, t0_ + j * dt_);
    const cplx f = ph[static_cast<std::size_t>(j)] * (dt_ / kTwoPi);
    we_[static_cast<std::size_t>(j)] = f * quotient(s, arch.dual_shifts, arch.shifts);
    wo_[static_cast<std::size_t>(j)] = f * quotient(s, arch.twisted_dual_shifts, arch.twisted_shifts);
    double mag = std::abs(we_[static_cast<std::size_t>(j)]) + std::abs(wo_[static_cast<std::size_t>(j)]);
    peak = std::max(peak, mag);
    if (j < rim || j >= n - rim) edge = std::max(edge, mag);
  }
  tail_ratio_ = peak > 0 ? edge / peak : 0.0;
}

std::pair<cplx, cplx> OmegaTransform::parts(double y) const {
  if (!(y > 0)) throw InvalidArgument("Omega needs y > 0");
  const double ly = std::log(y);
  const cplx rot = std::polar(1.0, -dt_ * ly);
  cplx z, e = 0, o = 0;
  for (std::size_t j = 0; j < we_.size(); ++j) {
    if ((j & 255) == 0) z = std::polar(1.0, -(t0_ + static_cast<double>(j) * dt_) * ly);
    e += we_[j] * z;
    o += wo_[j] * z;
    z *= rot;
  }
  const double amp = std::exp(-sigma_ * ly);
  return {e * amp, o * amp};
}

std::pair<cplx, cplx> OmegaTransform::both(double y) const {
  auto [e, o] = parts(y);
  return {0.5 * (arch_.eps_even * e + arch_.eps_odd * o), 0.5 * (arch_.eps_even * e - arch_.eps_odd * o)};
}

cplx OmegaTransform::operator()(double y, int sign) const {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  auto [p, m] = both(y);
  return sign == 1 ? p : m;
}

cplx omega_pm(double x, const VoronoiTestFunction& phi, const std::array<cplx, 3>& alpha, int sign,
              const VoronoiContour& c) {
  return OmegaTransform(ArchimedeanType::spherical(alpha), phi, c)(x, sign);
}

VoronoiReport voronoi_two_sides(const VoronoiInstance& inst, i64 max_cutoff, i64 first_cutoff,
                                const VoronoiContour& contour) {
  if (inst.coeffs == nullptr) throw InvalidArgument("Voronoi instance without coefficients");
  if (inst.c < 1) throw InvalidArgument("Voronoi modulus must be positive");
  if (inst.m < 1 || !(inst.x > 0)) throw InvalidArgument("Voronoi needs m >= 1 and x > 0");
  if (gcd(inst.a, inst.c) != 1) throw NotCoprime("gcd(a, c) != 1");
  if (inst.phi.lo < 0.5 - 1e-12 || inst.phi.support_hi() > 2.5 + 1e-12)
    throw InvalidArgument("phi must be supported in [1/2, 5/2]");
  if (first_cutoff < 1 || max_cutoff < first_cutoff) throw InvalidArgument("bad Voronoi cutoffs");

  // max_cutoff / 2^j down to first_cutoff
  std::vector<i64> cutoffs;
  for (i64 N = max_cutoff; N >= first_cutoff; N /= 2) cutoffs.insert(cutoffs.begin(), N);

  VoronoiReport rep;
  if (inst.phi.zero) {
    for (i64 N : cutoffs) rep.rows.push_back({N, 0.0, 0.0, 0.0});
    return rep;
  }
  const GL3Coeffs& A = *inst.coeffs;
  const i64 a = inst.a, c = inst.c, m = inst.m;
  const i64 abar = inv_mod(a, c).value;

  const i64 nlo = std::max<i64>(1, static_cast<i64>(std::floor(inst.x * inst.phi.support_lo())));
  const i64 nhi = static_cast<i64>(std::ceil(inst.x * inst.phi.support_hi()));
  CompensatedSum lhs;
  for (i64 n = nlo; n <= nhi; ++n) {
    double w = inst.phi(static_cast<double>(n) / inst.x);
    if (w == 0.0) continue;
    lhs.add(A(m, n) * unit_phase(mul_mod(n, abar, c), c) * w);
  }
  rep.lhs = lhs.value();

  if (!A.finite_support() && A.limit() < std::max(max_cutoff, c * m))
    throw InsufficientTable("Voronoi dual sum needs A(n1, n2) up to " + std::to_string(max_cutoff));

  const OmegaTransform om(A.archimedean(), inst.phi, contour);
  const std::vector<i64> n1s = divisors(c * m);
  const double c3m = static_cast<double>(c) * c * c * m;

  // terms[n2 - 1] = contribution of n2 over all n1
  std::vector<cplx> terms(static_cast<std::size_t>(max_cutoff), 0.0);
  unsigned jobs = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      for (i64 n2 = 1 + w; n2 <= max_cutoff; n2 += jobs) {
        cplx t = 0;
        for (i64 n1 : n1s) {
          cplx coef = std::conj(A(n1, n2));
          if (coef == 0.0) continue;
          const i64 q = c * m / n1;
          auto [op, omn] = om.both(static_cast<double>(n2) * n1 * n1 * inst.x / c3m);
          t += coef / static_cast<double>(n1 * n2) *
               (kloosterman_classical(a * m, n2, q) * op + kloosterman_classical(a * m, -n2, q) * omn);
        }
        terms[static_cast<std::size_t>(n2 - 1)] = static_cast<double>(c) * t;
      }
    });
  }
  for (auto& th : pool) th.join();

  CompensatedSum acc;
  i64 done = 0;
  for (i64 N : cutoffs) {
    CompensatedSum block;
    for (i64 n2 = done + 1; n2 <= N; ++n2) block.add(terms[static_cast<std::size_t>(n2 - 1)]);
    acc.add(block.value());
    const double tail = done == 0 ? 0.0 : std::abs(block.value());
    done = N;
    const cplx rhs = acc.value();
    const double res = (std::abs(rep.lhs - rhs) + tail) / (1.0 + std::abs(rep.lhs));
    rep.rows.push_back({N, rhs, res, tail});
  }
  // the first row carries no tail estimate and is not compared
  for (std::size_t k = 2; k < rep.rows.size(); ++k) {
    double noise = rep.rows[k].tail / (1.0 + std::abs(rep.lhs)) + 1e-9;
    if (rep.rows[k].residual > rep.rows[k - 1].residual + noise) rep.monotone = false;
  }
  rep.rhs = rep.rows.back().rhs;
  rep.residual = rep.rows.back().residual;
  rep.tail = rep.rows.back().tail;
  return rep;
}

}  // namespace gl3m
