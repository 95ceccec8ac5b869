#pragma once

#include <array>

#include "homog3/models.hpp"

namespace homog3 {

// Connection coefficients on a left-invariant frame: nabla_{Ei} Ej =
// sum_k gamma(i,j,k) Ek.
struct ConnectionTable {
  std::array<std::array<std::array<double, 3>, 3>, 3> gamma{};
  double operator()(int i, int j, int k) const { return gamma[i][j][k]; }
  double& operator()(int i, int j, int k) { return gamma[i][j][k]; }
};

struct CurvatureReport {
  Mat3 ricci{Mat3::Zero()};        // frame components
  Vec3 eigenvalues{Vec3::Zero()};  // of the Ricci operator, ascending
  double scalar{0.0};
  // Sectional curvatures of the frame planes (E1,E2), (E1,E3), (E2,E3).
  std::array<double, 3> sectional{};
};

struct LeafShape {
  Mat2 sigma{Mat2::Zero()};  // second fundamental form on (E1,E2), normal E3
  double H{0.0};
  double sigma_norm_sq{0.0};
};

struct CheegerReport {
  double Ch{0.0};
  double Hcrit{0.0};
  bool unimodular{false};
};

// Koszul formula for left-invariant fields; requires positive definite frame
// metric. Compatible with any constant structure-constant table.
ConnectionTable koszul_connection(const FrameMetricData& data);

CurvatureReport curvature_report(const FrameMetricData& data);

// Horizontal leaves z = const of the semidirect model, with respect to the
// unit normal E3: sigma11 = a, sigma12 = (b+c)/2, sigma22 = d.
LeafShape leaf_shape(const SemidirectModel& m);

// Ch = trace(A) = 2*Hcrit; the sl2tilde case is served through its
// semidirect presentation and is pinned to lambda = (1,1,1).
CheegerReport cheeger_report(const MetricModel& model);

} // namespace homog3
