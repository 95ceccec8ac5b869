#pragma once

#include "homog3/geodesics.hpp"

namespace homog3 {

struct BallReport {
  double r{0.0};
  double area{0.0};
  double volume{0.0};
  double isoperimetric_ratio{0.0};  // area / (36 pi volume^2)^(1/3)
  int n_theta{0}, n_phi{0}, n_r{0};
};

// Geodesic sphere/ball about `center` by integrating the radial fan.
// Area: induced-metric quadrature on the (theta, phi) mesh at radius r.
// Volume: radial Simpson quadrature of the exponential-map Jacobian, with the
// angular tangents obtained by differencing neighboring geodesics.
// Requires n_theta even >= 8, n_phi a multiple of 4 >= 8, n_r even >= 8.
// Throws numerical_error if a half-resolution area estimate differs by more
// than 1%.
BallReport geodesic_ball(const SemidirectModel& m, const Point& center, double r,
                         int n_theta, int n_phi, int n_r);

// Isoperimetric quotient Area/Volume of the slab S^2(kappa) x [0, R]: the two
// sphere caps have total area 2*(4pi/kappa) against volume (4pi/kappa)*R.
double cylinder_ratio(const ProductS2R& m, double R);

} // namespace homog3
