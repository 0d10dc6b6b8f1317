#include "gl3m/coeffs.hpp"

#include <algorithm>
#include <cmath>

#include "gl3m/errors.hpp"

namespace gl3m {

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  std::string s;
  while (v != 0) {
    int d = static_cast<int>(v % 10);
    s.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::vector<i128> ramanujan_tau(i64 n_max) {
  if (n_max < 1) throw InvalidArgument("n_max must be positive");
  const std::size_t L = static_cast<std::size_t>(n_max);  // exponents 0..n_max-1
  // Jacobi: prod (1-q^n)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}
  std::vector<std::pair<std::size_t, i64>> jac;
  for (i64 k = 0;; ++k) {
    std::size_t e = static_cast<std::size_t>(k * (k + 1) / 2);
    if (e >= L) break;
    jac.emplace_back(e, (k % 2 ? -1 : 1) * (2 * k + 1));
  }
  std::vector<i128> p(L, 0), next(L);
  for (auto [e, c] : jac) p[e] = c;
  for (int rep = 1; rep < 8; ++rep) {
    std::fill(next.begin(), next.end(), 0);
    for (auto [e, c] : jac)
      for (std::size_t i = 0; i + e < L; ++i) next[i + e] += p[i] * c;
    p.swap(next);
  }
  std::vector<i128> tau(L + 1, 0);
  for (std::size_t n = 1; n <= L; ++n) tau[n] = p[n - 1];
  return tau;
}

namespace {

GL2Form normalize(int k, std::vector<i128> a) {
  GL2Form f;
  f.weight = k;
  f.lambda.assign(a.size(), 0.0);
  for (std::size_t n = 1; n < a.size(); ++n)
    f.lambda[n] = static_cast<double>(a[n]) / std::pow(static_cast<double>(n), 0.5 * (k - 1));
  f.a = std::move(a);
  return f;
}

}  // namespace

GL2Form delta_eigenvalues(i64 n_max) { return normalize(12, ramanujan_tau(n_max)); }

GL2Form weight16_eigenvalues(i64 n_max) {
  auto tau = ramanujan_tau(n_max);
  std::vector<i128> e4(static_cast<std::size_t>(n_max + 1), 0);
  e4[0] = 1;
  for (i64 n = 1; n <= n_max; ++n) {
    i128 s3 = 0;
    for (i64 d = 1; d * d <= n; ++d) {
      if (n % d) continue;
      s3 += static_cast<i128>(d) * d * d;
      i64 e = n / d;
      if (e != d) s3 += static_cast<i128>(e) * e * e;
    }
    e4[static_cast<std::size_t>(n)] = 240 * s3;
  }
  std::vector<i128> a(static_cast<std::size_t>(n_max + 1), 0);
  for (i64 n = 1; n <= n_max; ++n) {
    i128 s = 0;
    for (i64 j = 1; j <= n; ++j) s += tau[static_cast<std::size_t>(j)] * e4[static_cast<std::size_t>(n - j)];
    a[static_cast<std::size_t>(n)] = s;
  }
  return normalize(16, std::move(a));
}

GL2Form form_by_weight(int k, i64 n_max) {
  if (k == 12) return delta_eigenvalues(n_max);
  if (k == 16) return weight16_eigenvalues(n_max);
  throw InvalidArgument("only weights 12 and 16 are available");
}

double GL2Form::eigenvalue(i64 n) const {
  if (n < 1) throw InvalidArgument("eigenvalue index must be positive");
  const i64 K = table_size();
  if (n <= K) return lambda[static_cast<std::size_t>(n)];
  double v = 1.0;
  for (auto [p, e] : factorize(n)) {
    if (p > K) throw InsufficientTable("prime " + std::to_string(p) + " beyond the eigenvalue table");
    double lp = lambda[static_cast<std::size_t>(p)], prev = 1.0, cur = lp;
    i64 pe = p;
    for (int j = 1; j < e; ++j) {
      pe *= p;
      double nx = pe <= K ? lambda[static_cast<std::size_t>(pe)] : lp * cur - prev;
      prev = cur;
      cur = nx;
    }
    v *= cur;
  }
  return v;
}

ArchimedeanType ArchimedeanType::spherical(const std::array<cplx, 3>& alpha) {
  ArchimedeanType t;
  for (cplx a : alpha) {
    t.shifts.push_back(-a);
    t.dual_shifts.push_back(a);
    t.twisted_shifts.push_back(1.0 - a);
    t.twisted_dual_shifts.push_back(1.0 + a);
  }
  return t;
}

ArchimedeanType ArchimedeanType::sym_square_holomorphic(int k) {
  // Gamma_R(s+1) Gamma_C(s+k-1); the sgn twist moves Gamma_R(s+1) to Gamma_R(s)
  ArchimedeanType t;
  t.shifts = t.dual_shifts = {1.0, static_cast<double>(k - 1), static_cast<double>(k)};
  t.twisted_shifts = t.twisted_dual_shifts = {0.0, static_cast<double>(k - 1), static_cast<double>(k)};
  return t;
}

GL3Coeffs::GL3Coeffs(std::vector<cplx> row, LanglandsParams lp, ArchimedeanType arch, CoeffProvenance prov)
    : row_(std::move(row)), lp_(lp), arch_(std::move(arch)), prov_(prov) {
  if (row_.size() < 2) throw InvalidArgument("GL3 row must contain A(1,1)");
}

GL3Coeffs GL3Coeffs::trivial() {
  return GL3Coeffs({0.0, 1.0}, LanglandsParams{}, ArchimedeanType::spherical({}), CoeffProvenance::Trivial);
}

cplx GL3Coeffs::operator()(i64 m, i64 n) const {
  if (m < 1 || n < 1) throw InvalidArgument("GL3 indices must be positive");
  if (prov_ == CoeffProvenance::Trivial) return (m == 1 && n == 1) ? 1.0 : 0.0;
  const i64 K = limit();
  if (m > K || n > K) throw InsufficientTable("A(" + std::to_string(m) + "," + std::to_string(n) + ") beyond table");
  if (m == 1) return std::conj(row_[static_cast<std::size_t>(n)]);
  if (n == 1) return row_[static_cast<std::size_t>(m)];
  cplx s = 0;
  for (i64 d : divisors(gcd(m, n))) {
    int mu = moebius(d);
    if (mu) s += static_cast<double>(mu) * row_[static_cast<std::size_t>(m / d)] * std::conj(row_[static_cast<std::size_t>(n / d)]);
  }
  return s;
}

GL3Coeffs sym_square_gl3(const GL2Form& f, i64 m_max, i64 n_max) {
  const i64 K = std::max<i64>({m_max, n_max, 1});
  if (f.table_size() < K) throw InsufficientTable("eigenvalue table shorter than the sym^2 range");
  std::vector<cplx> row(static_cast<std::size_t>(K + 1), 0.0);
  for (i64 n = 1; n <= K; ++n) {
    double s = 0;
    for (i64 d = 1; d * d <= n; ++d)
      if (n % (d * d) == 0) {
        i64 e = n / (d * d);
        s += f.eigenvalue(e * e);
      }
    row[static_cast<std::size_t>(n)] = s;
  }
  LanglandsParams lp;
  const double w = f.weight - 1;
  lp.lambda = lp.alpha = {cplx(w, 0), 0.0, cplx(-w, 0)};
  return GL3Coeffs(std::move(row), lp, ArchimedeanType::sym_square_holomorphic(f.weight), CoeffProvenance::SymSquareLift);
}

std::vector<HeckeViolation> hecke_relation_violations(const GL2Form& f, i64 limit, double tol) {
  std::vector<HeckeViolation> out;
  for (i64 m = 1; m <= limit; ++m)
    for (i64 n = 1; n <= limit; ++n) {
      if (m * n > f.table_size()) continue;
      double lhs = f.lambda[static_cast<std::size_t>(m)] * f.lambda[static_cast<std::size_t>(n)], rhs = 0;
      for (i64 d : divisors(gcd(m, n))) rhs += f.lambda[static_cast<std::size_t>(m * n / (d * d))];
      if (std::abs(lhs - rhs) > tol * (1 + std::abs(lhs))) out.push_back({m, n, lhs, rhs});
    }
  return out;
}

i64 hecke_relation_audit(const GL2Form& f, i64 limit, double tol) {
  if (f.table_size() < limit * limit) throw InsufficientTable("table must cover limit^2");
  return static_cast<i64>(hecke_relation_violations(f, limit, tol).size());
}

}  // namespace gl3m
