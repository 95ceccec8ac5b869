#include "homog3/geodesics.hpp"

#include <cmath>

#include "homog3/errors.hpp"

namespace homog3 {

CoordinateChristoffels coordinate_christoffels(const SemidirectModel& m, double z) {
  const Mat2 B = mat_exp(m.A, -z);
  const Mat2 M = B.transpose() * B;
  const Mat2 Mp = -(B.transpose() * (m.A + m.A.transpose()) * B);
  return CoordinateChristoffels{Mp, M.inverse() * Mp};
}

Vec3 geodesic_accel(const SemidirectModel& m, double z, const Vec3& v) {
  const CoordinateChristoffels c = coordinate_christoffels(m, z);
  const Vec2 vh(v.x(), v.y());
  const Vec2 ah = -v.z() * (c.MinvMp * vh);
  const double az = 0.5 * vh.dot(c.Mp * vh);
  return Vec3(ah.x(), ah.y(), az);
}

GeodesicPath geodesic(const SemidirectModel& m, const Point& p0, const TangentVec& v0,
                      double T, double h) {
  if (!(T >= 0.0) || !(h > 0.0)) throw std::invalid_argument("geodesic needs T >= 0, h > 0");
  const Vec3 vc = to_coordinate(m, p0, v0).v;

  const int steps = std::max(1, static_cast<int>(std::llround(T / h)));
  const double dt = T > 0.0 ? T / steps : 0.0;

  auto speed = [&](const Vec3& x, const Vec3& v) {
    const Mat3 g = metric_at(m, Point{x.x(), x.y(), x.z()});
    return std::sqrt(v.dot(g * v));
  };

  GeodesicPath path;
  path.t.reserve(steps + 1);
  path.p.reserve(steps + 1);
  path.v.reserve(steps + 1);

  Vec3 x = p0.vec();
  Vec3 v = vc;
  const double s0 = speed(x, v);
  double drift = 0.0;

  auto push = [&](double t) {
    path.t.push_back(t);
    path.p.push_back(Point{x.x(), x.y(), x.z()});
    path.v.push_back(v);
  };
  push(0.0);

  for (int k = 0; k < steps && T > 0.0; ++k) {
    const Vec3 k1x = v;
    const Vec3 k1v = geodesic_accel(m, x.z(), v);
    const Vec3 k2x = v + 0.5 * dt * k1v;
    const Vec3 k2v = geodesic_accel(m, (x + 0.5 * dt * k1x).z(), v + 0.5 * dt * k1v);
    const Vec3 k3x = v + 0.5 * dt * k2v;
    const Vec3 k3v = geodesic_accel(m, (x + 0.5 * dt * k2x).z(), v + 0.5 * dt * k2v);
    const Vec3 k4x = v + dt * k3v;
    const Vec3 k4v = geodesic_accel(m, (x + dt * k3x).z(), v + dt * k3v);
    x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    push((k + 1) * dt);
    const double s = speed(x, v);
    if (!std::isfinite(s) || !x.allFinite() || !v.allFinite())
      throw numerical_error("geodesic state is not finite; reduce the step size");
    if (s0 > 0.0) drift = std::max(drift, std::abs(s - s0) / s0);
  }
  path.speed_drift = drift;
  if (drift > 1e-6)
    throw numerical_error("geodesic speed drift " + std::to_string(drift) +
                          " exceeds 1e-6; reduce the step size");
  return path;
}

} // namespace homog3
