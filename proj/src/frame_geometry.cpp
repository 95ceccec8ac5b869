#include "homog3/frame_geometry.hpp"

#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace homog3 {

ConnectionTable koszul_connection(const FrameMetricData& data) {
  Eigen::LLT<Mat3> llt(data.g);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("frame metric must be positive definite");

  // <[Ei,Ej], Ek>
  auto bracket_dot = [&](int i, int j, int k) {
    double s = 0.0;
    for (int l = 0; l < 3; ++l) s += data.C[i][j][l] * data.g(l, k);
    return s;
  };

  ConnectionTable t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Vec3 lowered;
      for (int k = 0; k < 3; ++k)
        lowered(k) = 0.5 * (bracket_dot(i, j, k) - bracket_dot(j, k, i) + bracket_dot(k, i, j));
      const Vec3 raised = llt.solve(lowered);
      for (int k = 0; k < 3; ++k) t(i, j, k) = raised(k);
    }
  return t;
}

CurvatureReport curvature_report(const FrameMetricData& data) {
  const ConnectionTable t = koszul_connection(data);

  // R(Ei,Ej)Ek = sum_l R[i][j][k][l] El
  auto riem = [&](int i, int j, int k, int l) {
    double r = 0.0;
    for (int m = 0; m < 3; ++m) {
      r += t(j, k, m) * t(i, m, l) - t(i, k, m) * t(j, m, l) - data.C[i][j][m] * t(m, k, l);
    }
    return r;
  };

  CurvatureReport rep;
  Mat3 ric = Mat3::Zero();
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += riem(i, j, k, i);
      ric(j, k) = s;
    }
  rep.ricci = 0.5 * (ric + ric.transpose());

  Eigen::GeneralizedSelfAdjointEigenSolver<Mat3> es(rep.ricci, data.g);
  rep.eigenvalues = es.eigenvalues();
  rep.scalar = rep.eigenvalues.sum();

  auto sec = [&](int i, int j) {
    double num = 0.0;
    for (int l = 0; l < 3; ++l) num += riem(i, j, j, l) * data.g(l, i);
    const double den = data.g(i, i) * data.g(j, j) - data.g(i, j) * data.g(i, j);
    return num / den;
  };
  rep.sectional = {sec(0, 1), sec(0, 2), sec(1, 2)};
  return rep;
}

LeafShape leaf_shape(const SemidirectModel& m) {
  LeafShape s;
  const double a = m.A(0, 0), b = m.A(0, 1), c = m.A(1, 0), d = m.A(1, 1);
  s.sigma << a, 0.5 * (b + c), 0.5 * (b + c), d;
  s.H = 0.5 * (a + d);
  s.sigma_norm_sq = a * a + d * d + 0.5 * (b + c) * (b + c);
  return s;
}

CheegerReport cheeger_report(const MetricModel& model) {
  if (const auto* m = std::get_if<SemidirectModel>(&model)) {
    const double tr = m->A.trace();
    return CheegerReport{tr, 0.5 * tr, tr == 0.0};
  }
  if (const auto* s = std::get_if<Sl2FrameMetric>(&model)) {
    if (s->lambda1 != 1.0 || s->lambda2 != 1.0 || s->lambda3 != 1.0)
      throw std::invalid_argument(
          "cheeger_report supports sl2tilde only at lambda=(1,1,1); its semidirect "
          "presentation there has A=[[2,0],[2,0]]");
    return CheegerReport{2.0, 1.0, false};
  }
  throw std::invalid_argument(
      "cheeger_report does not apply to s2xr; use cylinder-ratio for its Cheeger witness");
}

} // namespace homog3
