#pragma once

#include <Eigen/Dense>

namespace homog3 {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

} // namespace homog3
