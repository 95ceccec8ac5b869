#pragma once

#include "homog3/linalg.hpp"

namespace homog3 {

// exp(z*A) for a real 2x2 matrix, evaluated in closed form.
//
// Split A = mu*I + B with mu = tr(A)/2 and B traceless, so B^2 = disc*I with
// disc = ((a-d)/2)^2 + b*c. The three discriminant regimes give
//   disc > 0:  exp(zB) = cosh(s)I + sinh(s)/s * zB,  s = z*sqrt(disc)
//   disc < 0:  exp(zB) = cos(s)I  + sin(s)/s  * zB,  s = z*sqrt(-disc)
//   disc = 0:  exp(zB) = I + zB
// Within |disc| <= 1e-8 of the boundary the closed forms lose digits, so a
// scaling-and-squaring Taylor evaluation takes over.
Mat2 mat_exp(const Mat2& A, double z);

// Scaling-and-squaring Taylor series; exposed for the fallback band.
Mat2 mat_exp_series(const Mat2& A, double z);

} // namespace homog3
