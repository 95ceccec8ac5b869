#pragma once

#include <array>
#include <variant>

#include "homog3/linalg.hpp"
#include "homog3/matexp.hpp"

namespace homog3 {

struct Point {
  double x{0.0}, y{0.0}, z{0.0};
  Vec3 vec() const { return Vec3(x, y, z); }
};

enum class Basis { coordinate, frame };

struct TangentVec {
  Vec3 v{Vec3::Zero()};
  Basis basis{Basis::coordinate};
};

// R^2 x| R with group law (p1,z1)*(p2,z2) = (p1 + exp(z1*A)p2, z1+z2) and the
// left-invariant metric that is the identity on the coordinate frame at the
// origin.
struct SemidirectModel {
  Mat2 A{Mat2::Zero()};
};

// Universal cover of SL(2,R) carrying the left-invariant metric g(Ei,Ej) =
// diag(l1^2, l2^2, l3^2) on the standard frame with brackets
// [E1,E2] = -2E3, [E2,E3] = 2E1, [E3,E1] = 2E2.
struct Sl2FrameMetric {
  double lambda1{1.0}, lambda2{1.0}, lambda3{1.0};
};

// Round sphere of curvature kappa times the line.
struct ProductS2R {
  double kappa{1.0};
};

using MetricModel = std::variant<SemidirectModel, Sl2FrameMetric, ProductS2R>;

// Structure constants C[i][j][k] ([Ei,Ej] = sum_k C[i][j][k] Ek) together with
// the frame metric g(Ei,Ej).
struct FrameMetricData {
  std::array<std::array<std::array<double, 3>, 3>, 3> C{};
  Mat3 g{Mat3::Identity()};
};

Point group_mul(const SemidirectModel& m, const Point& p, const Point& q);
Point group_inv(const SemidirectModel& m, const Point& p);

// Left-invariant orthonormal frame at p, coordinate components. Columns of
// exp(z*A) give the horizontal pair; E3 = d/dz.
std::array<TangentVec, 3> frame_at(const SemidirectModel& m, const Point& p);

// Coordinate metric at p: horizontal block exp(-zA)^T exp(-zA), g33 = 1.
Mat3 metric_at(const SemidirectModel& m, const Point& p);

// Differential of left translation by p (constant in the target point).
Mat3 left_translation_differential(const SemidirectModel& m, const Point& p);

FrameMetricData frame_data(const SemidirectModel& m);
FrameMetricData frame_data(const Sl2FrameMetric& m);

// Right-invariant field generated by the algebra element (w, s): value at
// (x,y,z) is (w + s*A*(x,y), s) in coordinates.
TangentVec right_invariant_field(const SemidirectModel& m, const Vec2& w, double s,
                                 const Point& p);

// Basis conversions through frame_at.
TangentVec to_coordinate(const SemidirectModel& m, const Point& p, const TangentVec& v);
TangentVec to_frame(const SemidirectModel& m, const Point& p, const TangentVec& v);

} // namespace homog3
