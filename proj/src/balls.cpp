#include "homog3/balls.hpp"

#include <cmath>
#include <vector>

#include "homog3/errors.hpp"
#include "homog3/parallel.hpp"

namespace homog3 {

namespace {

struct Fan {
  int nt, np, nr;
  // stations[k] holds nt*np positions and velocities at radius k*dr
  std::vector<std::vector<Vec3>> pos, vel;
};

Fan integrate_fan(const SemidirectModel& m, const Point& center, double r, int nt, int np,
                  int nr) {
  Fan fan{nt, np, nr, {}, {}};
  fan.pos.assign(nr + 1, std::vector<Vec3>(nt * np));
  fan.vel.assign(nr + 1, std::vector<Vec3>(nt * np));

  const auto frame = frame_at(m, center);
  const double dr = r / nr;
  const int substeps = std::max(2, static_cast<int>(std::ceil(dr / 0.002)));
  const double h = dr / substeps;

  parallel_for(nt * np, [&](int idx) {
    const int i = idx / np, j = idx % np;
    const double theta = (i + 0.5) * M_PI / nt;
    const double phi = 2.0 * M_PI * j / np;
    const Vec3 dir = std::sin(theta) * std::cos(phi) * frame[0].v +
                     std::sin(theta) * std::sin(phi) * frame[1].v +
                     std::cos(theta) * frame[2].v;
    const GeodesicPath path =
        geodesic(m, center, TangentVec{dir, Basis::coordinate}, r, h);
    for (int k = 0; k <= nr; ++k) {
      const int at = std::min<int>(k * substeps, static_cast<int>(path.p.size()) - 1);
      fan.pos[k][idx] = path.p[at].vec();
      fan.vel[k][idx] = path.v[at];
    }
  });
  return fan;
}

// Index into the (theta, phi) grid with reflection across the poles.
int wrap_node(int i, int j, int nt, int np) {
  if (i < 0) {
    i = -1 - i;
    j += np / 2;
  } else if (i >= nt) {
    i = 2 * nt - 1 - i;
    j += np / 2;
  }
  j = ((j % np) + np) % np;
  return i * np + j;
}

// Fourth-order centered angular derivatives of the station positions.
void angular_tangents(const std::vector<Vec3>& P, int i, int j, int nt, int np, double dth,
                      double dph, Vec3& Xt, Vec3& Xp) {
  auto at = [&](int ii, int jj) -> const Vec3& { return P[wrap_node(ii, jj, nt, np)]; };
  Xt = (at(i - 2, j) - 8.0 * at(i - 1, j) + 8.0 * at(i + 1, j) - at(i + 2, j)) / (12.0 * dth);
  Xp = (at(i, j - 2) - 8.0 * at(i, j - 1) + 8.0 * at(i, j + 1) - at(i, j + 2)) / (12.0 * dph);
}

double sphere_area(const SemidirectModel& m, const std::vector<Vec3>& P, int nt, int np) {
  const double dth = M_PI / nt, dph = 2.0 * M_PI / np;
  std::vector<double> rows(nt, 0.0);
  parallel_for(nt, [&](int i) {
    double s = 0.0;
    for (int j = 0; j < np; ++j) {
      Vec3 Xt, Xp;
      angular_tangents(P, i, j, nt, np, dth, dph, Xt, Xp);
      const Vec3& x = P[i * np + j];
      const Mat3 g = metric_at(m, Point{x.x(), x.y(), x.z()});
      const double E = Xt.dot(g * Xt), F = Xt.dot(g * Xp), G = Xp.dot(g * Xp);
      const double det = E * G - F * F;
      s += det > 0.0 ? std::sqrt(det) : 0.0;
    }
    rows[i] = s;
  });
  double area = 0.0;
  for (double v : rows) area += v;
  return area * dth * dph;
}

double ball_volume(const SemidirectModel& m, const Fan& fan, double r) {
  const int nt = fan.nt, np = fan.np, nr = fan.nr;
  const double dth = M_PI / nt, dph = 2.0 * M_PI / np, dr = r / nr;
  std::vector<double> shell(nr + 1, 0.0);
  parallel_for(nr, [&](int k1) {
    const int k = k1 + 1;  // integrand vanishes at the center
    double s = 0.0;
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < np; ++j) {
        Vec3 Xt, Xp;
        angular_tangents(fan.pos[k], i, j, nt, np, dth, dph, Xt, Xp);
        Mat3 M;
        M.col(0) = fan.vel[k][i * np + j];
        M.col(1) = Xt;
        M.col(2) = Xp;
        const Vec3& x = fan.pos[k][i * np + j];
        const Mat3 g = metric_at(m, Point{x.x(), x.y(), x.z()});
        const double det = (M.transpose() * g * M).determinant();
        s += det > 0.0 ? std::sqrt(det) : 0.0;
      }
    shell[k] = s * dth * dph;
  });
  // Simpson in the radial index (nr even).
  double vol = 0.0;
  for (int k = 0; k <= nr; ++k) {
    const double w = (k == 0 || k == nr) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    vol += w * shell[k];
  }
  return vol * dr / 3.0;
}

BallReport ball_once(const SemidirectModel& m, const Point& center, double r, int nt, int np,
                     int nr) {
  const Fan fan = integrate_fan(m, center, r, nt, np, nr);
  BallReport rep;
  rep.r = r;
  rep.n_theta = nt;
  rep.n_phi = np;
  rep.n_r = nr;
  rep.area = sphere_area(m, fan.pos[nr], nt, np);
  rep.volume = ball_volume(m, fan, r);
  rep.isoperimetric_ratio = rep.area / std::cbrt(36.0 * M_PI * rep.volume * rep.volume);
  return rep;
}

} // namespace

BallReport geodesic_ball(const SemidirectModel& m, const Point& center, double r, int n_theta,
                         int n_phi, int n_r) {
  if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (n_theta < 8 || n_theta % 2 != 0 || n_phi < 8 || n_phi % 4 != 0 || n_r < 8 ||
      n_r % 2 != 0)
    throw std::invalid_argument(
        "ball mesh needs n_theta even >= 8, n_phi multiple of 4 >= 8, n_r even >= 8");

  const BallReport fine = ball_once(m, center, r, n_theta, n_phi, n_r);
  const BallReport coarse = ball_once(m, center, r, n_theta / 2, n_phi / 2, n_r);
  if (std::abs(fine.area - coarse.area) > 0.01 * std::abs(fine.area))
    throw numerical_error("ball mesh too coarse: area moved by more than 1% under refinement");
  return fine;
}

double cylinder_ratio(const ProductS2R& m, double R) {
  if (!(m.kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(R > 0.0)) throw std::invalid_argument("slab height R must be positive");
  return 2.0 / R;
}

} // namespace homog3
