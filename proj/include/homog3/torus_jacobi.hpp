#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "homog3/models.hpp"

namespace homog3 {

// Uniform grid on the quotient torus of the leaf z = z0 by the given lattice;
// the induced metric is constant, so the torus is flat and every node carries
// the same area weight.
struct TorusGrid {
  int nu{0}, nv{0};
  Mat2 lattice{Mat2::Identity()};
  double z0{0.0};
  Mat2 induced{Mat2::Identity()};  // lattice^T G_h(z0) lattice
  double node_area{0.0};
  double total_area{0.0};
  int size() const { return nu * nv; }
  int index(int i, int j) const {
    i = ((i % nu) + nu) % nu;
    j = ((j % nv) + nv) % nv;
    return i * nv + j;
  }
};

TorusGrid make_torus_grid(const SemidirectModel& m, const Mat2& lattice, double z0, int nu,
                          int nv);

// Potential of the stability operator of a leaf: |sigma|^2 + Ric(E3, E3).
// Identically zero for every semidirect model.
double jacobi_potential(const SemidirectModel& m);

struct JacobiOperator {
  TorusGrid grid;
  double q{0.0};
  Eigen::SparseMatrix<double> K;  // node-value action of Delta + q
  double op_norm{0.0};            // Gershgorin bound
};

// Laplace-Beltrami stencil of the constant induced metric (centered second
// differences, cross term for non-rectangular lattices) plus q * identity.
JacobiOperator assemble_jacobi(const TorusGrid& grid, double q);

JacobiOperator build_jacobi_operator(const SemidirectModel& m, const Mat2& lattice, double z0,
                                     int nu, int nv);

// Ritz pairs of the symmetric sparse K nearest the shift, by block inverse
// iteration on (K - shift I). Deterministic start vectors; scale normalizes
// the residual acceptance.
struct RitzSet {
  std::vector<double> values;
  std::vector<Eigen::VectorXd> vectors;
};

RitzSet nearest_eigenpairs(const Eigen::SparseMatrix<double>& K, double shift, int count,
                           double scale);

struct KernelReport {
  std::vector<Eigen::VectorXd> functions;  // unit area-norm, mean sign fixed
  std::vector<double> eigenvalues;         // the Ritz values accepted as kernel
  double second_eigenvalue{0.0};           // smallest-|.| eigenvalue beyond the kernel
  bool multiplicity_warning{false};
};

// Near-kernel by block shift-invert subspace iteration: eigenvalues with
// |lambda| <= tol * op_norm count as kernel. Deterministic.
KernelReport kernel_basis(const JacobiOperator& L, double tol = 1e-6);

struct ProjectedSolve {
  double a{0.0};               // <w, phi>_A / <1*phi>_A ... mean level, see below
  Eigen::VectorXd v;           // solution of K v = a - w with <v, phi>_A = 0
  double residual{0.0};
};

// Solve L v = a - w where a = integral(w phi) / integral(phi) makes the right
// side area-orthogonal to the kernel function phi; v is pinned by
// <v, phi>_A = 0 through a bordered system.
ProjectedSolve solve_projected(const JacobiOperator& L, const Eigen::VectorXd& w,
                               const Eigen::VectorXd& phi);

} // namespace homog3
