#pragma once

#include <functional>
#include <vector>

#include "homog3/geodesics.hpp"

namespace homog3 {

// Immersed surface patch given by a parameter grid. Row-major storage,
// node (i,j) at index i*nv + j, i along u. Periodic directions wrap with a
// constant translation offset (the deck transformation across the seam).
struct SurfaceSpec {
  int nu{0}, nv{0};
  bool periodic_u{false}, periodic_v{false};
  Vec3 offset_u{Vec3::Zero()}, offset_v{Vec3::Zero()};
  std::vector<Point> pos;
};

struct SurfaceMesh {
  SurfaceSpec spec;
  std::vector<Mat2> first_ff;
  std::vector<Mat2> second_ff;
  std::vector<Vec3> normal;          // unit, oriented by the parameterization
  std::vector<double> H;             // mean curvature per node
  std::vector<double> sigma_norm_sq; // squared norm of the shape tensor
  std::vector<double> area_weight;
  double area{0.0};
  double H_mean{0.0};                // area-weighted
};

// Second-order stencils: centered in the interior and across periodic seams,
// one-sided on open edges. Throws numerical_error when the induced metric
// condition number exceeds 1e8.
SurfaceMesh surface_geometry(const SemidirectModel& m, const SurfaceSpec& spec);

// One lattice cell of the leaf z = z0, parameterized over [0,1]^2 with an
// optional smooth periodic warp of the parameterization (warp = 0 is affine
// and is reproduced exactly by the stencils).
SurfaceSpec leaf_immersion(const Mat2& lattice, double z0, int nu, int nv, double warp = 0.0);

// div(d/dz), computed from the z-derivative of the metric volume density.
double foliation_normal_divergence(const SemidirectModel& m, const Point& p);

struct CuboidBox {
  Vec3 lo{Vec3::Zero()}, hi{Vec3::Zero()};
};

struct VectorField {
  std::function<Vec3(const Point&)> eval;  // coordinate components
};

VectorField foliation_normal_field();
VectorField killing_field(const SemidirectModel& m, const Vec2& w, double s);

// Pointwise divergence of a smooth field via the weighted-density formula,
// derivatives by fourth-order central differences.
double field_divergence(const SemidirectModel& m, const VectorField& field, const Point& p);

struct DivergenceBalance {
  double volume_integral{0.0};
  double boundary_flux{0.0};
  double discrepancy{0.0};
  double boundary_area{0.0};
  int order{0};
};

// Both sides of the divergence theorem on a coordinate cuboid, by
// tensor-product Gauss-Legendre quadrature. The returned values are computed
// at 2*order; throws numerical_error if doubling the order fails to reduce
// the discrepancy to its rounding floor.
DivergenceBalance divergence_balance(const SemidirectModel& m, const CuboidBox& box,
                                     const VectorField& field, int order = 12);

} // namespace homog3
