#pragma once

#include <optional>
#include <vector>

#include "homog3/models.hpp"

namespace homog3 {

// F(n) x [0, t0]: n^2 lattice cells at height 0 swept up to height t0.
struct BoxDomain {
  Mat2 lattice{Mat2::Identity()};  // columns a1, a2
  int n{1};
  double t0{1.0};
};

struct BoxClosedForms {
  double bottom{0.0}, top{0.0}, sides{0.0}, volume{0.0};
};

struct BoxReport {
  BoxDomain domain;
  double bottom{0.0};
  double top{0.0};
  double sides{0.0};
  double volume{0.0};
  double ratio{0.0};  // (bottom + top + sides) / volume
  // Available when A is diagonal and the lattice is axis-aligned.
  std::optional<BoxClosedForms> closed;
};

BoxReport box_report(const SemidirectModel& m, const BoxDomain& domain);

struct BoxSweepEntry {
  int n;
  double t0;
  BoxReport report;
};

std::vector<BoxSweepEntry> box_ratio_sweep(const SemidirectModel& m, const Mat2& lattice,
                                           const std::vector<int>& ns,
                                           const std::vector<double>& t0s);

// Volume of the end {z >= T} of the lattice quotient and the area of its
// bounding torus; finite only when trace(A) > 0. Closed forms plus quadrature
// cross-checks.
struct QuotientEndReport {
  double T{0.0};
  double cell_area{0.0};
  double end_volume{0.0};
  double torus_area{0.0};
  double identity_residual{0.0};  // |trace(A) * end_volume - torus_area|
  double end_volume_quadrature{0.0};
  double torus_area_quadrature{0.0};
};

QuotientEndReport quotient_end_report(const SemidirectModel& m, const Mat2& lattice, double T);

} // namespace homog3
