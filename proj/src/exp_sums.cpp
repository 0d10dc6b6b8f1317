#include "gl3m/exp_sums.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "gl3m/errors.hpp"

namespace gl3m {

namespace {

struct YZ {
  bool ok = false;
  i64 y = 0, z = 0;
};

// y*b + z*c = 1 mod d, requires gcd(b, c, d) = 1.
YZ solve_yz(i64 b, i64 c, i64 d) {
  if (d == 1) return {true, 0, 0};
  if (gcd(gcd(b, c), d) != 1) return {};
  i64 r0 = b, r1 = c, u0 = 1, u1 = 0, v0 = 0, v1 = 1;
  while (r1 != 0) {
    i64 t = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
    std::tie(u0, u1) = std::make_pair(u1, u0 - t * u1);
    std::tie(v0, v1) = std::make_pair(v1, v0 - t * v1);
  }
  // u0*b + v0*c = r0 = gcd(b, c), coprime to d
  i64 gi = inv_mod(r0, d).value;
  return {true, mul_mod(mod(u0, d), gi, d), mul_mod(mod(v0, d), gi, d)};
}

}  // namespace

cplx kloosterman_classical(i64 a, i64 b, i64 c) {
  if (c < 1) throw InvalidArgument("kloosterman_classical needs c >= 1");
  if (c == 1) return {1.0, 0.0};
  i64 am = mod(a, c), bm = mod(b, c);
  CompensatedSum s;
  for (i64 x = 1; x < c; ++x) {
    if (gcd(x, c) != 1) continue;
    i64 xb = inv_mod(x, c).value;
    s.add(unit_phase(mod(static_cast<i128>(am) * x + static_cast<i128>(bm) * xb, c), c));
  }
  return s.value();
}

cplx gl3_tilde_sum(const GL3SumSpec& spec) {
  i64 D1 = spec.D1, D2 = spec.D2;
  if (D1 < 1 || D2 < 1) throw InvalidArgument("moduli must be positive");
  if (D2 % D1 != 0) throw DivisibilityViolation("D1 must divide D2");
  i64 Q = D2 / D1;
  // common denominator D2: n1*C1'*C2*Q + n2*C1'*D1 + m1*C1*Q
  CompensatedSum s;
  for (i64 c1 = 0; c1 < D1; ++c1) {
    if (gcd(c1, D1) != 1) continue;
    i64 c1b = inv_mod(c1, D1).value;
    for (i64 c2 = 0; c2 < D2; ++c2) {
      if (gcd(c2, Q) != 1) continue;
      i128 k = static_cast<i128>(spec.n1) * c1b % D1 * c2 % D1 * Q +
               static_cast<i128>(spec.n2) * c1b % Q * D1 + static_cast<i128>(spec.m1) * c1 % D1 * Q;
      s.add(unit_phase(mod(k, D2), D2));
    }
  }
  return s.value();
}

GL3SumTable::GL3SumTable(i64 D1, i64 D2, i64 N, ModifiedSumOptions opt)
    : D1_(D1), D2_(D2), units_(D1 * D2) {
  if (D1 < 1 || D2 < 1 || N < 1) throw InvalidArgument("moduli and level must be positive");
  if (D1 % N != 0 || D2 % N != 0) throw LevelViolation("N must divide D1 and D2");
  const i64 t = opt.yz_shift;
  std::vector<YZ> yz2(static_cast<std::size_t>(D2 * D2));
  for (i64 b = 0; b < D2; ++b)
    for (i64 c = 0; c < D2; ++c) yz2[static_cast<std::size_t>(b * D2 + c)] = solve_yz(b, c, D2);
  std::map<std::tuple<i64, i64, i64, i64>, i64> hist;
  for (i64 b1 = 0; b1 < D1; b1 += N) {
    for (i64 c1 = 0; c1 < D1; ++c1) {
      YZ s1 = solve_yz(b1, c1, D1);
      if (!s1.ok) continue;
      i64 y1 = s1.y + c1 * t, z1 = s1.z - b1 * t;
      for (i64 b2 = 0; b2 < D2; ++b2) {
        i128 r = static_cast<i128>(b1) * b2 + static_cast<i128>(D2) * c1;
        if (r % D1 != 0) continue;
        i64 c2 = mod(-static_cast<i128>(r / D1), D2);
        const YZ& s2 = yz2[static_cast<std::size_t>(b2 * D2 + c2)];
        if (!s2.ok) continue;
        i64 y2 = s2.y + c2 * t, z2 = s2.z - b2 * t;
        i64 zb = opt.variant == PhaseVariant::Z2 ? z2 : z1;
        i64 p1 = mod(static_cast<i128>(y1) * D2 - static_cast<i128>(z1) * b2, D1);
        i64 p2 = mod(static_cast<i128>(y2) * D1 - static_cast<i128>(zb) * b1, D2);
        ++hist[{b1, p1, b2, p2}];
        ++admissible_;
      }
    }
  }
  tuples_.reserve(hist.size());
  for (auto& [k, v] : hist) tuples_.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k), v});
}

cplx GL3SumTable::raw(i64 a1, i64 a2, i64 b1, i64 b2) const {
  const i64 L = D1_ * D2_;
  i64 fa1 = mod(a1, D1_), fb1 = mod(b1, D1_), fa2 = mod(a2, D2_), fb2 = mod(b2, D2_);
  std::vector<i64> counts(static_cast<std::size_t>(L), 0);
  for (const auto& tp : tuples_) {
    i64 k1 = (fa1 * tp.b1 + fb1 * tp.p1) % D1_;
    i64 k2 = (fa2 * tp.b2 + fb2 * tp.p2) % D2_;
    counts[static_cast<std::size_t>((k1 * D2_ + k2 * D1_) % L)] += tp.mult;
  }
  CompensatedSum s;
  for (i64 k = 0; k < L; ++k)
    if (counts[static_cast<std::size_t>(k)]) s.add(static_cast<double>(counts[static_cast<std::size_t>(k)]) * units_[k]);
  return s.value();
}

cplx gl3_modified_sum_raw(const GL3SumSpec& spec, ModifiedSumOptions opt) {
  GL3SumTable t(spec.D1, spec.D2, spec.N, opt);
  return t.raw(spec.m1, spec.m2, spec.n1, spec.n2);
}

cplx gl3_modified_sum(const GL3SumSpec& spec, ModifiedSumOptions opt) {
  GL3SumTable t(spec.D1, spec.D2, spec.N, opt);
  return t.eval(spec.m1, spec.m2, spec.n1, spec.n2);
}

cplx factorization_lemma_rhs(const GL3SumSpec& spec) {
  if (spec.N != 1) throw LevelViolation("factorization_lemma_rhs needs N = 1");
  const i64 D1 = spec.D1, D2 = spec.D2;
  if (D1 < 1 || D2 < 1) throw InvalidArgument("moduli must be positive");
  CompensatedSum s;
  for (i64 d : divisors(gcd(D1, D2))) {
    const i128 d2 = static_cast<i128>(d) * d;
    for (i64 g = 0; g < d; ++g) {
      if (gcd(g, d) != 1) continue;
      i128 a = static_cast<i128>(spec.n1) * D2 + static_cast<i128>(spec.m1) * D1 * g;
      if (a % d2 != 0) continue;
      i64 gb = inv_mod(g, d).value;
      i128 b = static_cast<i128>(spec.n1) * D2 * gb + static_cast<i128>(spec.m1) * D1;
      i64 e1 = D1 / d, e2 = D2 / d;
      i64 x = mod(a / d2, e1), y = mod(b / d2, e2);
      s.add(static_cast<double>(d) * kloosterman_classical(spec.m2, x, e1) * kloosterman_classical(spec.n2, y, e2));
    }
  }
  return s.value();
}

namespace {

void check_twist_hypotheses(i64 m2, i64 n2, i64 q, i64 D1, i64 D2) {
  if (!is_prime(q)) throw HypothesisViolation("q must be prime");
  if (gcd(mod(static_cast<i128>(m2) * n2, q), q) != 1) throw HypothesisViolation("gcd(m2*n2, q) != 1");
  if (gcd(D1, q) != 1 || gcd(D2, q) != 1) throw HypothesisViolation("gcd(D1*D2, q) != 1");
}

}  // namespace

TwistCheck prime_twist_identity_check(i64 m1, i64 m2, i64 n1, i64 n2, i64 q, i64 D1, i64 D2) {
  check_twist_hypotheses(m2, n2, q, D1, D2);
  TwistCheck out;
  out.lhs = gl3_modified_sum({m1, m2, n1, n2, q * D1, q * D2, q});
  i64 qb = inv_mod(q, D1 * D2).value;
  out.rhs = static_cast<double>(q) * factorization_lemma_rhs({qb * m1, qb * m2, n1, n2, D1, D2, 1});
  return out;
}

cplx prime_twist_product(i64 m1, i64 m2, i64 n1, i64 n2, i64 q, i64 D1, i64 D2) {
  check_twist_hypotheses(m2, n2, q, D1, D2);
  i64 qb1 = inv_mod(q, D1).value, qb2 = inv_mod(q, D2).value;
  return static_cast<double>(q) * kloosterman_classical(n1, mul_mod(mod(m2, D1), mul_mod(qb1, D2, D1), D1), D1) *
         kloosterman_classical(m1, mul_mod(mod(n2, D2), mul_mod(qb2, D1, D2), D2), D2);
}

double weil_bound(const GL3SumSpec& spec) {
  const i64 L = lcm(spec.D1, spec.D2);
  auto g = [L](i64 x) { return static_cast<double>(gcd(std::abs(x), L)); };
  double inner = static_cast<double>(gcd(spec.D1, spec.D2)) * g(spec.m1 * spec.n1) * g(spec.m2 * spec.n2);
  return std::sqrt(static_cast<double>(spec.D1) * static_cast<double>(spec.D2) * inner);
}

BoundReport weil_margin_from(const GL3SumSpec& spec, cplx value) {
  BoundReport r;
  r.sum_modulus = std::abs(value);
  r.bound_value = weil_bound(spec);
  r.margin = r.sum_modulus > 1e-9 ? r.bound_value / r.sum_modulus : std::numeric_limits<double>::infinity();
  return r;
}

BoundReport weil_margin(const GL3SumSpec& spec, ModifiedSumOptions opt) {
  return weil_margin_from(spec, gl3_modified_sum(spec, opt));
}

std::vector<SweepRow> factorization_sweep(i64 dmax, const std::vector<i64>& freqs, int jobs) {
  std::vector<std::pair<i64, i64>> pairs;
  for (i64 a = 1; a <= dmax; ++a)
    for (i64 b = 1; b <= dmax; ++b) pairs.emplace_back(a, b);
  const std::size_t F = freqs.size(), per = F * F * F * F;
  std::vector<SweepRow> rows(pairs.size() * per);
  auto work = [&](std::size_t lo, std::size_t step) {
    for (std::size_t i = lo; i < pairs.size(); i += step) {
      auto [D1, D2] = pairs[i];
      GL3SumTable table(D1, D2, 1);
      std::size_t j = i * per;
      for (i64 m1 : freqs)
        for (i64 m2 : freqs)
          for (i64 n1 : freqs)
            for (i64 n2 : freqs) {
              GL3SumSpec sp{m1, m2, n1, n2, D1, D2, 1};
              cplx e = table.eval(m1, m2, n1, n2);
              rows[j++] = {sp, e, factorization_lemma_rhs(sp), weil_margin_from(sp, e)};
            }
    }
  };
  const std::size_t nj = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < nj; ++w) pool.emplace_back(work, w, nj);
  work(0, nj);
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace gl3m
