#pragma once

#include <string>
#include <vector>

#include "gl3m/analytic_kernels.hpp"
#include "gl3m/arith.hpp"

namespace gl3m {

struct GL2Form {
  int weight = 12;
  std::vector<i128> a;          // integer Fourier coefficients, a[0] unused
  std::vector<double> lambda;   // a(n)/n^((k-1)/2), lambda[0] unused

  i64 table_size() const { return static_cast<i64>(lambda.size()) - 1; }
  // Table value, extended past the table through Hecke multiplicativity when
  // every prime factor of n is tabulated. Throws InsufficientTable otherwise.
  double eigenvalue(i64 n) const;
};

// Delta = q prod (1 - q^n)^24, exact over the integers.
GL2Form delta_eigenvalues(i64 n_max);
// E4 * Delta, the weight-16 level-1 cusp form.
GL2Form weight16_eigenvalues(i64 n_max);
GL2Form form_by_weight(int k, i64 n_max);

std::vector<i128> ramanujan_tau(i64 n_max);

// Archimedean data of a GL(3) representation for Voronoi kernels:
// L_inf(s) = prod Gamma_R(s + shift_j), dual uses dual_shift_j; the
// twisted lists describe the representation twisted by sgn.
struct ArchimedeanType {
  std::vector<cplx> shifts, dual_shifts;
  std::vector<cplx> twisted_shifts, twisted_dual_shifts;
  cplx eps_even{1.0, 0.0};
  cplx eps_odd{0.0, -1.0};

  static ArchimedeanType spherical(const std::array<cplx, 3>& alpha);
  static ArchimedeanType sym_square_holomorphic(int k);
};

enum class CoeffProvenance { SymSquareLift, Trivial, Custom };

class GL3Coeffs {
 public:
  GL3Coeffs() = default;
  // row[n] = A(n,1) for n = 1..K (row[0] unused); A(1,n) = conj(A(n,1)).
  GL3Coeffs(std::vector<cplx> row, LanglandsParams lp, ArchimedeanType arch, CoeffProvenance prov);
  static GL3Coeffs trivial();

  i64 limit() const { return static_cast<i64>(row_.size()) - 1; }
  bool finite_support() const { return prov_ == CoeffProvenance::Trivial; }
  CoeffProvenance provenance() const { return prov_; }
  const LanglandsParams& langlands() const { return lp_; }
  const ArchimedeanType& archimedean() const { return arch_; }

  // A(m,n) = sum_{d | (m,n)} mu(d) A(m/d,1) A(1,n/d). Throws InsufficientTable
  // when m or n exceed the limit.
  cplx operator()(i64 m, i64 n) const;
  cplx lambda(i64 l) const { return (*this)(1, l); }

 private:
  std::vector<cplx> row_;
  LanglandsParams lp_;
  ArchimedeanType arch_;
  CoeffProvenance prov_ = CoeffProvenance::Custom;
};

// Gelbart-Jacquet lift: A(n,1) = sum_{d^2 | n} lambda_f(n^2/d^4) for
// n <= max(m_max, n_max). Needs lambda_f(p) for every prime p up to that bound.
GL3Coeffs sym_square_gl3(const GL2Form& f, i64 m_max, i64 n_max);

struct HeckeViolation {
  i64 m, n;
  double lhs, rhs;
};

// lambda(m)lambda(n) = sum_{d | (m,n)} lambda(mn/d^2) for m,n <= limit.
std::vector<HeckeViolation> hecke_relation_violations(const GL2Form& f, i64 limit, double tol = 1e-9);
i64 hecke_relation_audit(const GL2Form& f, i64 limit, double tol = 1e-9);

std::string to_string(i128 v);

}  // namespace gl3m
