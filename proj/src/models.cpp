#include "homog3/models.hpp"

namespace homog3 {

Point group_mul(const SemidirectModel& m, const Point& p, const Point& q) {
  const Mat2 E = mat_exp(m.A, p.z);
  const Vec2 h = Vec2(p.x, p.y) + E * Vec2(q.x, q.y);
  return Point{h.x(), h.y(), p.z + q.z};
}

Point group_inv(const SemidirectModel& m, const Point& p) {
  const Mat2 E = mat_exp(m.A, -p.z);
  const Vec2 h = -(E * Vec2(p.x, p.y));
  return Point{h.x(), h.y(), -p.z};
}

std::array<TangentVec, 3> frame_at(const SemidirectModel& m, const Point& p) {
  const Mat2 E = mat_exp(m.A, p.z);
  std::array<TangentVec, 3> f;
  f[0] = TangentVec{Vec3(E(0, 0), E(1, 0), 0.0), Basis::coordinate};
  f[1] = TangentVec{Vec3(E(0, 1), E(1, 1), 0.0), Basis::coordinate};
  f[2] = TangentVec{Vec3(0.0, 0.0, 1.0), Basis::coordinate};
  return f;
}

Mat3 metric_at(const SemidirectModel& m, const Point& p) {
  const Mat2 B = mat_exp(m.A, -p.z);
  const Mat2 G = B.transpose() * B;
  Mat3 g = Mat3::Identity();
  g.topLeftCorner<2, 2>() = G;
  return g;
}

Mat3 left_translation_differential(const SemidirectModel& m, const Point& p) {
  Mat3 D = Mat3::Identity();
  D.topLeftCorner<2, 2>() = mat_exp(m.A, p.z);
  return D;
}

FrameMetricData frame_data(const SemidirectModel& m) {
  FrameMetricData d;
  // [E1,E2] = 0, [E3,E1] = a E1 + c E2, [E3,E2] = b E1 + d E2.
  d.C[2][0][0] = m.A(0, 0);
  d.C[2][0][1] = m.A(1, 0);
  d.C[0][2][0] = -m.A(0, 0);
  d.C[0][2][1] = -m.A(1, 0);
  d.C[2][1][0] = m.A(0, 1);
  d.C[2][1][1] = m.A(1, 1);
  d.C[1][2][0] = -m.A(0, 1);
  d.C[1][2][1] = -m.A(1, 1);
  d.g = Mat3::Identity();
  return d;
}

FrameMetricData frame_data(const Sl2FrameMetric& m) {
  FrameMetricData d;
  // [E1,E2] = -2E3, [E2,E3] = 2E1, [E3,E1] = 2E2.
  d.C[0][1][2] = -2.0;
  d.C[1][0][2] = 2.0;
  d.C[1][2][0] = 2.0;
  d.C[2][1][0] = -2.0;
  d.C[2][0][1] = 2.0;
  d.C[0][2][1] = -2.0;
  d.g = Mat3::Zero();
  d.g(0, 0) = m.lambda1 * m.lambda1;
  d.g(1, 1) = m.lambda2 * m.lambda2;
  d.g(2, 2) = m.lambda3 * m.lambda3;
  return d;
}

TangentVec right_invariant_field(const SemidirectModel& m, const Vec2& w, double s,
                                 const Point& p) {
  const Vec2 h = w + s * (m.A * Vec2(p.x, p.y));
  return TangentVec{Vec3(h.x(), h.y(), s), Basis::coordinate};
}

TangentVec to_coordinate(const SemidirectModel& m, const Point& p, const TangentVec& v) {
  if (v.basis == Basis::coordinate) return v;
  const auto f = frame_at(m, p);
  Vec3 c = v.v.x() * f[0].v + v.v.y() * f[1].v + v.v.z() * f[2].v;
  return TangentVec{c, Basis::coordinate};
}

TangentVec to_frame(const SemidirectModel& m, const Point& p, const TangentVec& v) {
  if (v.basis == Basis::frame) return v;
  const auto f = frame_at(m, p);
  Mat3 F;
  F.col(0) = f[0].v;
  F.col(1) = f[1].v;
  F.col(2) = f[2].v;
  return TangentVec{F.partialPivLu().solve(v.v), Basis::frame};
}

} // namespace homog3
