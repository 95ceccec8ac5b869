#pragma once

#include <vector>

#include "homog3/models.hpp"

namespace homog3 {

// Coordinate Christoffel symbols of the semidirect metric. Only the blocks
// involving z are nonzero: with M(z) the horizontal metric and M' = dM/dz,
//   Gamma^z_{ab} = -M'_{ab}/2,   Gamma^a_{zb} = (M^{-1} M')^a_b / 2.
struct CoordinateChristoffels {
  Mat2 Mp;       // M'(z)
  Mat2 MinvMp;   // M(z)^{-1} M'(z)
};

CoordinateChristoffels coordinate_christoffels(const SemidirectModel& m, double z);

// Acceleration of the geodesic equation at (p, v), coordinate components.
Vec3 geodesic_accel(const SemidirectModel& m, double z, const Vec3& v);

struct GeodesicPath {
  std::vector<double> t;
  std::vector<Point> p;
  std::vector<Vec3> v;  // coordinate components
  double speed_drift{0.0};
};

// Fixed-step RK4. Throws numerical_error if the relative speed drift exceeds
// 1e-6 (step too large for the requested horizon).
GeodesicPath geodesic(const SemidirectModel& m, const Point& p0, const TangentVec& v0,
                      double T, double h);

} // namespace homog3
