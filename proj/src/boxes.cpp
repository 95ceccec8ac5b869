#include "homog3/boxes.hpp"

#include <algorithm>
#include <cmath>

#include "homog3/errors.hpp"
#include "homog3/parallel.hpp"
#include "homog3/quadrature.hpp"

namespace homog3 {

namespace {

double cell_area(const Mat2& lattice) { return std::abs(lattice.determinant()); }

// integral_0^t0 of e^{-alpha z}
double decay_integral(double alpha, double t0) {
  return alpha == 0.0 ? t0 : (1.0 - std::exp(-alpha * t0)) / alpha;
}

double segment_length(const SemidirectModel& m, const Vec2& a, double z) {
  const Mat2 B = mat_exp(m.A, -z);
  return (B * a).norm();
}

// |det exp(-zA)| evaluated through the semigroup property: splitting z into
// unit-scale steps keeps the matrix entries representable for stiff A (the
// direct determinant cancels catastrophically once the entries dwarf it),
// and the scalar determinants recombine in log space.
double exp_det(const Mat2& A, double z) {
  const int k = std::max(1, static_cast<int>(std::ceil(std::abs(z))));
  const double d = std::abs(mat_exp(A, -z / k).determinant());
  if (d <= 0.0) return 0.0;
  return std::exp(k * std::log(d));
}

} // namespace

BoxReport box_report(const SemidirectModel& m, const BoxDomain& domain) {
  if (domain.n < 1) throw std::invalid_argument("box needs n >= 1");
  if (!(domain.t0 > 0.0)) throw std::invalid_argument("box needs t0 > 0");
  const double cell = cell_area(domain.lattice);
  if (!(cell > 0.0)) throw std::invalid_argument("lattice vectors must be independent");

  const double tau = m.A.trace();
  const double n2cell = static_cast<double>(domain.n) * domain.n * cell;
  const Vec2 a1 = domain.lattice.col(0), a2 = domain.lattice.col(1);

  BoxReport rep;
  rep.domain = domain;
  rep.bottom = n2cell;
  rep.top = n2cell * std::exp(-tau * domain.t0);
  rep.volume = n2cell * decay_integral(tau, domain.t0);
  const double len1 = integrate_composite(
      [&](double z) { return segment_length(m, a1, z); }, 0.0, domain.t0, 16, 1.0);
  const double len2 = integrate_composite(
      [&](double z) { return segment_length(m, a2, z); }, 0.0, domain.t0, 16, 1.0);
  rep.sides = 2.0 * domain.n * (len1 + len2);
  rep.ratio = (rep.bottom + rep.top + rep.sides) / rep.volume;

  const bool diagonal = m.A(0, 1) == 0.0 && m.A(1, 0) == 0.0;
  const bool axis_aligned = a1.y() == 0.0 && a2.x() == 0.0;
  if (diagonal && axis_aligned) {
    BoxClosedForms cf;
    cf.bottom = n2cell;
    cf.top = n2cell * std::exp(-tau * domain.t0);
    cf.volume = n2cell * decay_integral(tau, domain.t0);
    cf.sides = 2.0 * domain.n *
               (std::abs(a1.x()) * decay_integral(m.A(0, 0), domain.t0) +
                std::abs(a2.y()) * decay_integral(m.A(1, 1), domain.t0));
    rep.closed = cf;
  }
  return rep;
}

std::vector<BoxSweepEntry> box_ratio_sweep(const SemidirectModel& m, const Mat2& lattice,
                                           const std::vector<int>& ns,
                                           const std::vector<double>& t0s) {
  if (ns.empty() || t0s.empty()) throw std::invalid_argument("sweep needs nonempty n and t0 lists");
  std::vector<BoxSweepEntry> entries(ns.size() * t0s.size());
  parallel_for(static_cast<int>(entries.size()), [&](int idx) {
    const int i = idx / static_cast<int>(t0s.size());
    const int j = idx % static_cast<int>(t0s.size());
    BoxDomain d{lattice, ns[i], t0s[j]};
    entries[idx] = BoxSweepEntry{ns[i], t0s[j], box_report(m, d)};
  });
  return entries;
}

QuotientEndReport quotient_end_report(const SemidirectModel& m, const Mat2& lattice, double T) {
  const double tau = m.A.trace();
  if (!(tau > 0.0))
    throw numerical_error("quotient end has infinite volume: trace(A) <= 0");
  const double cell = cell_area(lattice);
  if (!(cell > 0.0)) throw std::invalid_argument("lattice vectors must be independent");

  QuotientEndReport rep;
  rep.T = T;
  rep.cell_area = cell;
  rep.end_volume = cell * std::exp(-tau * T) / tau;
  rep.torus_area = cell * std::exp(-tau * T);
  rep.identity_residual = std::abs(tau * rep.end_volume - rep.torus_area);

  // Quadrature cross-checks: truncated volume integral (the tail beyond
  // 40/tau is below double precision) and the flat-torus area at height T.
  const double zmax = T + 40.0 / tau;
  rep.end_volume_quadrature = integrate_composite(
      [&](double z) { return cell * exp_det(m.A, z); }, T, zmax, 16, 2.0 / tau);
  rep.torus_area_quadrature = cell * exp_det(m.A, T);
  return rep;
}

} // namespace homog3
