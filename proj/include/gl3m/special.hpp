#pragma once

#include "gl3m/arith.hpp"

namespace gl3m {

// Principal branch of log Gamma, continuous off the negative real axis and
// conjugation-symmetric. Throws PoleAt within 1e-12 of a nonpositive integer.
cplx log_gamma(cplx z);
cplx gamma_fn(cplx z);

// Gamma_R(s) = pi^(-s/2) Gamma(s/2), Gamma_C(s) = 2 (2 pi)^(-s) Gamma(s)
cplx log_gamma_R(cplx s);
cplx log_gamma_C(cplx s);

// log cos(w) with Re w in (-pi/2, pi/2); stable for large |Im w|.
cplx log_cos(cplx w);

// (cos(pi u / 4B))^(-power*B); power is 12 for G1 and 24 for G2.
// Throws OutsideStrip unless |Re u| < 2B.
cplx log_mollifier(cplx u, int B, int power);
cplx mollifier(cplx u, int B, int power);

}  // namespace gl3m
