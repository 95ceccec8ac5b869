#include "homog3/surfaces.hpp"

#include <cmath>

#include "homog3/errors.hpp"
#include "homog3/quadrature.hpp"

namespace homog3 {

namespace {

// Position lookup with wrap-and-offset across periodic seams.
Vec3 pos_at(const SurfaceSpec& s, int i, int j) {
  Vec3 shift = Vec3::Zero();
  if (s.periodic_u) {
    while (i < 0) {
      i += s.nu;
      shift -= s.offset_u;
    }
    while (i >= s.nu) {
      i -= s.nu;
      shift += s.offset_u;
    }
  }
  if (s.periodic_v) {
    while (j < 0) {
      j += s.nv;
      shift -= s.offset_v;
    }
    while (j >= s.nv) {
      j -= s.nv;
      shift += s.offset_v;
    }
  }
  return s.pos[i * s.nv + j].vec() + shift;
}

struct Stencil {
  int off[4];
  double w[4];
  int len;
};

// First and second derivative stencils at index i of n samples, spacing h.
Stencil d1_stencil(int i, int n, bool periodic, double h) {
  if (periodic || (i > 0 && i < n - 1))
    return Stencil{{-1, 1, 0, 0}, {-0.5 / h, 0.5 / h, 0, 0}, 2};
  if (i == 0) return Stencil{{0, 1, 2, 0}, {-1.5 / h, 2.0 / h, -0.5 / h, 0}, 3};
  return Stencil{{0, -1, -2, 0}, {1.5 / h, -2.0 / h, 0.5 / h, 0}, 3};
}

Stencil d2_stencil(int i, int n, bool periodic, double h) {
  const double h2 = h * h;
  if (periodic || (i > 0 && i < n - 1))
    return Stencil{{-1, 0, 1, 0}, {1.0 / h2, -2.0 / h2, 1.0 / h2, 0}, 3};
  if (i == 0) return Stencil{{0, 1, 2, 3}, {2.0 / h2, -5.0 / h2, 4.0 / h2, -1.0 / h2}, 4};
  return Stencil{{0, -1, -2, -3}, {2.0 / h2, -5.0 / h2, 4.0 / h2, -1.0 / h2}, 4};
}

// Christoffel contraction Gamma(u, w) of the semidirect coordinate metric.
Vec3 christoffel_apply(const CoordinateChristoffels& c, const Vec3& u, const Vec3& w) {
  const Vec2 uh(u.x(), u.y()), wh(w.x(), w.y());
  const Vec2 horiz = 0.5 * (c.MinvMp * (u.z() * wh + w.z() * uh));
  const double vert = -0.5 * uh.dot(c.Mp * wh);
  return Vec3(horiz.x(), horiz.y(), vert);
}

double log_volume_density(const SemidirectModel& m, double z) {
  const Mat2 B = mat_exp(m.A, -z);
  return 0.5 * std::log((B.transpose() * B).determinant());
}

} // namespace

SurfaceMesh surface_geometry(const SemidirectModel& m, const SurfaceSpec& spec) {
  if (spec.nu < 4 || spec.nv < 4) throw std::invalid_argument("surface grid must be >= 4x4");
  if (static_cast<int>(spec.pos.size()) != spec.nu * spec.nv)
    throw std::invalid_argument("surface grid size mismatch");

  SurfaceMesh mesh;
  mesh.spec = spec;
  const int nu = spec.nu, nv = spec.nv;
  const double hu = spec.periodic_u ? 1.0 / nu : 1.0 / (nu - 1);
  const double hv = spec.periodic_v ? 1.0 / nv : 1.0 / (nv - 1);
  const int n = nu * nv;
  mesh.first_ff.resize(n);
  mesh.second_ff.resize(n);
  mesh.normal.resize(n);
  mesh.H.resize(n);
  mesh.sigma_norm_sq.resize(n);
  mesh.area_weight.resize(n);

  double total_area = 0.0, h_sum = 0.0;
  for (int i = 0; i < nu; ++i) {
    const Stencil su1 = d1_stencil(i, nu, spec.periodic_u, hu);
    const Stencil su2 = d2_stencil(i, nu, spec.periodic_u, hu);
    for (int j = 0; j < nv; ++j) {
      const Stencil sv1 = d1_stencil(j, nv, spec.periodic_v, hv);
      const Stencil sv2 = d2_stencil(j, nv, spec.periodic_v, hv);

      Vec3 Xu = Vec3::Zero(), Xv = Vec3::Zero(), Xuu = Vec3::Zero(), Xvv = Vec3::Zero(),
           Xuv = Vec3::Zero();
      for (int a = 0; a < su1.len; ++a) Xu += su1.w[a] * pos_at(spec, i + su1.off[a], j);
      for (int a = 0; a < sv1.len; ++a) Xv += sv1.w[a] * pos_at(spec, i, j + sv1.off[a]);
      for (int a = 0; a < su2.len; ++a) Xuu += su2.w[a] * pos_at(spec, i + su2.off[a], j);
      for (int a = 0; a < sv2.len; ++a) Xvv += sv2.w[a] * pos_at(spec, i, j + sv2.off[a]);
      for (int a = 0; a < su1.len; ++a)
        for (int b = 0; b < sv1.len; ++b)
          Xuv += su1.w[a] * sv1.w[b] * pos_at(spec, i + su1.off[a], j + sv1.off[b]);

      const Vec3 p = pos_at(spec, i, j);
      const Point pt{p.x(), p.y(), p.z()};
      const Mat3 g = metric_at(m, pt);

      Mat2 I;
      I << Xu.dot(g * Xu), Xu.dot(g * Xv), Xu.dot(g * Xv), Xv.dot(g * Xv);
      const double tr = I.trace(), det = I.determinant();
      const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
      const double lmin = 0.5 * tr - disc, lmax = 0.5 * tr + disc;
      if (!(lmin > 0.0) || lmax / lmin > 1e8)
        throw numerical_error("degenerate induced metric on surface node");

      const Vec3 ncov = Xu.cross(Xv);
      Vec3 N = g.ldlt().solve(ncov);
      N /= std::sqrt(N.dot(g * N));

      const CoordinateChristoffels ch = coordinate_christoffels(m, p.z());
      const Vec3 Duu = Xuu + christoffel_apply(ch, Xu, Xu);
      const Vec3 Duv = Xuv + christoffel_apply(ch, Xu, Xv);
      const Vec3 Dvv = Xvv + christoffel_apply(ch, Xv, Xv);
      Mat2 II;
      II << Duu.dot(g * N), Duv.dot(g * N), Duv.dot(g * N), Dvv.dot(g * N);

      const Mat2 S = I.inverse() * II;
      const int idx = i * nv + j;
      mesh.first_ff[idx] = I;
      mesh.second_ff[idx] = II;
      mesh.normal[idx] = N;
      mesh.H[idx] = 0.5 * S.trace();
      mesh.sigma_norm_sq[idx] = (S * S).trace();

      double w = std::sqrt(det) * hu * hv;
      if (!spec.periodic_u && (i == 0 || i == nu - 1)) w *= 0.5;
      if (!spec.periodic_v && (j == 0 || j == nv - 1)) w *= 0.5;
      mesh.area_weight[idx] = w;
      total_area += w;
      h_sum += w * mesh.H[idx];
    }
  }
  mesh.area = total_area;
  mesh.H_mean = h_sum / total_area;
  return mesh;
}

SurfaceSpec leaf_immersion(const Mat2& lattice, double z0, int nu, int nv, double warp) {
  SurfaceSpec spec;
  spec.nu = nu;
  spec.nv = nv;
  spec.periodic_u = spec.periodic_v = true;
  spec.offset_u = Vec3(lattice(0, 0), lattice(1, 0), 0.0);
  spec.offset_v = Vec3(lattice(0, 1), lattice(1, 1), 0.0);
  spec.pos.resize(nu * nv);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const double u = static_cast<double>(i) / nu, v = static_cast<double>(j) / nv;
      const double uw = u + warp * std::sin(2.0 * M_PI * u) * std::sin(2.0 * M_PI * v) /
                                (2.0 * M_PI);
      const double vw = v + warp * std::sin(2.0 * M_PI * v) * std::cos(2.0 * M_PI * u) /
                                (2.0 * M_PI);
      const Vec2 xy = lattice * Vec2(uw, vw);
      spec.pos[i * nv + j] = Point{xy.x(), xy.y(), z0};
    }
  return spec;
}

double foliation_normal_divergence(const SemidirectModel& m, const Point& p) {
  const double h = 1e-3;
  return (log_volume_density(m, p.z + h) - log_volume_density(m, p.z - h)) / (2.0 * h);
}

VectorField foliation_normal_field() {
  return VectorField{[](const Point&) { return Vec3(0.0, 0.0, 1.0); }};
}

VectorField killing_field(const SemidirectModel& m, const Vec2& w, double s) {
  const Mat2 A = m.A;
  return VectorField{[A, w, s](const Point& p) {
    const Vec2 h = w + s * (A * Vec2(p.x, p.y));
    return Vec3(h.x(), h.y(), s);
  }};
}

double field_divergence(const SemidirectModel& m, const VectorField& field, const Point& p) {
  const double h = 1e-3;
  // Fourth-order central differences of the component functions.
  auto d4 = [&](int axis) {
    auto shift = [&](double step) {
      Point q = p;
      (axis == 0 ? q.x : axis == 1 ? q.y : q.z) += step;
      return field.eval(q)(axis);
    };
    return (shift(-2.0 * h) - 8.0 * shift(-h) + 8.0 * shift(h) - shift(2.0 * h)) / (12.0 * h);
  };
  const double dlogrho =
      (log_volume_density(m, p.z + h) - log_volume_density(m, p.z - h)) / (2.0 * h);
  return d4(0) + d4(1) + d4(2) + field.eval(p).z() * dlogrho;
}

namespace {

double volume_side(const SemidirectModel& m, const CuboidBox& box, const VectorField& field,
                   int q) {
  const QuadRule& rule = gauss_legendre(q);
  auto map = [&](int axis, int k) {
    const double mid = 0.5 * (box.lo(axis) + box.hi(axis));
    const double half = 0.5 * (box.hi(axis) - box.lo(axis));
    return std::pair<double, double>(mid + half * rule.nodes[k], half * rule.weights[k]);
  };
  double s = 0.0;
  for (int a = 0; a < q; ++a) {
    const auto [x, wx] = map(0, a);
    for (int b = 0; b < q; ++b) {
      const auto [y, wy] = map(1, b);
      for (int c = 0; c < q; ++c) {
        const auto [z, wz] = map(2, c);
        const Point p{x, y, z};
        const double rho = std::exp(log_volume_density(m, z));
        s += wx * wy * wz * rho * field_divergence(m, field, p);
      }
    }
  }
  return s;
}

// Flux through the pair of faces orthogonal to the given coordinate axis,
// plus their induced areas.
void face_flux(const SemidirectModel& m, const CuboidBox& box, const VectorField& field,
               int axis, int q, double& flux, double& area) {
  const int t1 = (axis + 1) % 3, t2 = (axis + 2) % 3;
  const QuadRule& rule = gauss_legendre(q);
  for (int side = 0; side < 2; ++side) {
    const double fixed = side == 0 ? box.lo(axis) : box.hi(axis);
    const double sign = side == 0 ? -1.0 : 1.0;
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        Vec3 x;
        x(axis) = fixed;
        x(t1) = 0.5 * (box.lo(t1) + box.hi(t1)) +
                0.5 * (box.hi(t1) - box.lo(t1)) * rule.nodes[a];
        x(t2) = 0.5 * (box.lo(t2) + box.hi(t2)) +
                0.5 * (box.hi(t2) - box.lo(t2)) * rule.nodes[b];
        const double w = 0.25 * (box.hi(t1) - box.lo(t1)) * (box.hi(t2) - box.lo(t2)) *
                         rule.weights[a] * rule.weights[b];
        const Point p{x.x(), x.y(), x.z()};
        const Mat3 g = metric_at(m, p);
        const Mat3 ginv = g.inverse();
        Mat2 induced;
        induced << g(t1, t1), g(t1, t2), g(t1, t2), g(t2, t2);
        const double dA = std::sqrt(induced.determinant());
        const double fn = field.eval(p)(axis) / std::sqrt(ginv(axis, axis));
        flux += sign * w * fn * dA;
        area += w * dA;
      }
  }
}

DivergenceBalance balance_once(const SemidirectModel& m, const CuboidBox& box,
                               const VectorField& field, int q) {
  DivergenceBalance out;
  out.order = q;
  out.volume_integral = volume_side(m, box, field, q);
  for (int axis = 0; axis < 3; ++axis)
    face_flux(m, box, field, axis, q, out.boundary_flux, out.boundary_area);
  out.discrepancy = std::abs(out.volume_integral - out.boundary_flux);
  return out;
}

} // namespace

DivergenceBalance divergence_balance(const SemidirectModel& m, const CuboidBox& box,
                                     const VectorField& field, int order) {
  if (order < 4) throw std::invalid_argument("quadrature order must be >= 4");
  for (int axis = 0; axis < 3; ++axis)
    if (!(box.hi(axis) > box.lo(axis)))
      throw std::invalid_argument("cuboid must have positive extent on every axis");

  const DivergenceBalance coarse = balance_once(m, box, field, order);
  const DivergenceBalance fine = balance_once(m, box, field, 2 * order);
  const double floor = 1e-12 * (std::abs(fine.volume_integral) + std::abs(fine.boundary_flux) +
                                fine.boundary_area);
  if (fine.discrepancy > std::max(coarse.discrepancy, floor))
    throw numerical_error("divergence balance did not improve under quadrature refinement");
  return fine;
}

} // namespace homog3
