#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "homog3/linalg.hpp"
#include "homog3/models.hpp"
#include "homog3/torus_jacobi.hpp"

namespace homog3 {

// Smooth function on the ambient space used as a conformal perturbation of the
// metric: g_eps = (1 + eps*p)^2 g.  Both the value and the coordinate gradient
// must be supplied so curvature evaluations stay quadrature-free.
struct Perturbation {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> grad;
};

// Lowest nonconstant lattice-periodic mode: p = (cos(k1.r) + cos(k2.r)) * exp(-z^2/2)
// with k1, k2 the dual basis of the lattice columns.
Perturbation cos_lattice_perturbation(const Mat2& lattice);

struct ContinuationState {
  double eps = 0.0;
  double t = 0.0;              // prescribed kernel component <u, phi>
  Eigen::VectorXd phi;         // reference kernel function of the unperturbed leaf
  Eigen::VectorXd u;           // graph heights over the grid nodes
  double c = 0.0;              // mean curvature of the continued surface
  double residual = 0.0;
  int newton_steps = 0;
  std::vector<double> residual_history;
  int near_kernel_count = 0;   // near-null modes of the symmetrized linearization
};

// Mean curvature of the graph z = z0 + u over the torus grid, measured in the
// conformally perturbed metric.  u holds one height per grid node; the returned
// vector holds H at the same nodes.
Eigen::VectorXd graph_mean_curvature(const SemidirectModel& m, const TorusGrid& grid,
                                     const Perturbation& pert, double eps,
                                     const Eigen::VectorXd& u);

// Sparse Jacobian dH/du of graph_mean_curvature, assembled by colored central
// differences over the 9-point stencil footprint.
Eigen::SparseMatrix<double> graph_curvature_jacobian(const SemidirectModel& m,
                                                     const TorusGrid& grid,
                                                     const Perturbation& pert, double eps,
                                                     const Eigen::VectorXd& u);

// Count eigenvalues of K within tol*scale of zero among the few nearest zero.
int near_kernel_count(const Eigen::SparseMatrix<double>& K, double scale, double tol = 1e-6);

// Solve H(u) = c subject to <u, phi> = t by a bordered Newton iteration, starting
// from the flat leaf.  phi is the kernel function of the unperturbed Jacobi
// operator.  Throws numerical_error if Newton stalls, the bordered Jacobian is
// singular, or the linearization at the solution has extra near-null modes.
ContinuationState cmc_continue(const SemidirectModel& m, const Mat2& lattice,
                               const Perturbation& pert, double eps, int nu, int nv,
                               double tol = 1e-10, double t = 0.0, int max_steps = 25);

}  // namespace homog3
