#include "homog3/torus_jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "homog3/errors.hpp"
#include "homog3/frame_geometry.hpp"

namespace homog3 {

TorusGrid make_torus_grid(const SemidirectModel& m, const Mat2& lattice, double z0, int nu,
                          int nv) {
  if (nu < 4 || nv < 4) throw std::invalid_argument("torus grid must be >= 4x4");
  if (!(std::abs(lattice.determinant()) > 0.0))
    throw std::invalid_argument("lattice vectors must be independent");
  TorusGrid g;
  g.nu = nu;
  g.nv = nv;
  g.lattice = lattice;
  g.z0 = z0;
  const Mat2 B = mat_exp(m.A, -z0);
  g.induced = lattice.transpose() * (B.transpose() * B) * lattice;
  g.total_area = std::sqrt(g.induced.determinant());
  g.node_area = g.total_area / (nu * nv);
  return g;
}

double jacobi_potential(const SemidirectModel& m) {
  const LeafShape shape = leaf_shape(m);
  const CurvatureReport curv = curvature_report(frame_data(m));
  return shape.sigma_norm_sq + curv.ricci(2, 2);
}

JacobiOperator assemble_jacobi(const TorusGrid& grid, double q) {
  const Mat2 minv = grid.induced.inverse();
  const double cu = minv(0, 0) * grid.nu * grid.nu;
  const double cv = minv(1, 1) * grid.nv * grid.nv;
  const double cx = minv(0, 1) * grid.nu * grid.nv;  // coefficient of d2/dudv

  const int n = grid.size();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * 9);
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j) {
      const int row = grid.index(i, j);
      auto add = [&](int ii, int jj, double w) {
        if (w != 0.0) trips.emplace_back(row, grid.index(ii, jj), w);
      };
      add(i, j, -2.0 * cu - 2.0 * cv + q);
      add(i + 1, j, cu);
      add(i - 1, j, cu);
      add(i, j + 1, cv);
      add(i, j - 1, cv);
      // centered cross stencil for the mixed derivative
      add(i + 1, j + 1, 0.5 * cx);
      add(i - 1, j - 1, 0.5 * cx);
      add(i + 1, j - 1, -0.5 * cx);
      add(i - 1, j + 1, -0.5 * cx);
    }
  JacobiOperator L;
  L.grid = grid;
  L.q = q;
  L.K.resize(n, n);
  L.K.setFromTriplets(trips.begin(), trips.end());
  L.op_norm = 2.0 * cu + 2.0 * cv + 2.0 * std::abs(cx) + std::abs(q);
  return L;
}

JacobiOperator build_jacobi_operator(const SemidirectModel& m, const Mat2& lattice, double z0,
                                     int nu, int nv) {
  return assemble_jacobi(make_torus_grid(m, lattice, z0, nu, nv), jacobi_potential(m));
}

RitzSet nearest_eigenpairs(const Eigen::SparseMatrix<double>& K, double shift, int count,
                           double scale) {
  const int n = static_cast<int>(K.rows());
  const int block = std::min(n, count + 4);

  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();
  Eigen::SparseMatrix<double> shifted = K - shift * identity;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success)
    throw numerical_error("shift-invert factorization failed");

  std::mt19937 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd V(n, block);
  for (int c = 0; c < block; ++c)
    for (int r = 0; r < n; ++r) V(r, c) = gauss(rng);

  for (int iter = 0; iter < 500; ++iter) {
    Eigen::MatrixXd W(n, block);
    for (int c = 0; c < block; ++c) W.col(c) = lu.solve(V.col(c));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(W);
    V = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);

    const Eigen::MatrixXd KV = K * V;
    const Eigen::MatrixXd small = V.transpose() * KV;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (small + small.transpose()));
    // Reorder the basis by distance to the shift.
    std::vector<int> order(block);
    for (int c = 0; c < block; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(es.eigenvalues()(a) - shift) < std::abs(es.eigenvalues()(b) - shift);
    });
    Eigen::MatrixXd rotated(n, block);
    Eigen::VectorXd vals(block);
    for (int c = 0; c < block; ++c) {
      rotated.col(c) = V * es.eigenvectors().col(order[c]);
      vals(c) = es.eigenvalues()(order[c]);
    }
    V = rotated;

    double worst = 0.0;
    for (int c = 0; c < count; ++c)
      worst = std::max(worst, (K * V.col(c) - vals(c) * V.col(c)).norm());
    if (worst <= 1e-10 * scale) {
      RitzSet out;
      for (int c = 0; c < count; ++c) {
        out.values.push_back(vals(c));
        out.vectors.push_back(V.col(c));
      }
      return out;
    }
  }
  throw numerical_error("subspace iteration did not converge");
}

KernelReport kernel_basis(const JacobiOperator& L, double tol) {
  const double scale = std::max(L.op_norm, 1e-300);
  const double shift = 1e-3 * scale;
  const RitzSet ritz = nearest_eigenpairs(L.K, shift, 4, scale);

  KernelReport rep;
  const double cutoff = tol * scale;
  for (size_t k = 0; k < ritz.values.size(); ++k) {
    if (std::abs(ritz.values[k]) <= cutoff) {
      Eigen::VectorXd phi = ritz.vectors[k];
      // unit area norm, nonnegative mean
      phi /= std::sqrt(phi.squaredNorm() * L.grid.node_area);
      if (phi.sum() < 0.0) phi = -phi;
      rep.functions.push_back(phi);
      rep.eigenvalues.push_back(ritz.values[k]);
    } else if (rep.second_eigenvalue == 0.0) {
      rep.second_eigenvalue = ritz.values[k];
    }
  }
  rep.multiplicity_warning = rep.functions.size() >= 2;
  return rep;
}

ProjectedSolve solve_projected(const JacobiOperator& L, const Eigen::VectorXd& w,
                               const Eigen::VectorXd& phi) {
  const int n = L.grid.size();
  if (w.size() != n || phi.size() != n)
    throw std::invalid_argument("grid function size mismatch");
  const double phi_int = phi.sum() * L.grid.node_area;
  if (std::abs(phi_int) < 1e-12 * std::sqrt(phi.squaredNorm() * L.grid.node_area) *
                              std::sqrt(L.grid.total_area))
    throw numerical_error("kernel function has vanishing mean; projection undefined");

  ProjectedSolve out;
  out.a = w.dot(phi) * L.grid.node_area / phi_int;
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, out.a) - w;

  // Bordered system enforcing <v, phi>_A = 0.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(L.K.nonZeros() + 2 * n);
  for (int k = 0; k < L.K.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(L.K, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, n, phi(i));
    trips.emplace_back(n, i, phi(i) * L.grid.node_area);
  }
  Eigen::SparseMatrix<double> M(n + 1, n + 1);
  M.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw numerical_error("projected solve factorization failed");

  Eigen::VectorXd full(n + 1);
  full.head(n) = rhs;
  full(n) = 0.0;
  const Eigen::VectorXd sol = lu.solve(full);
  out.v = sol.head(n);
  out.residual = (L.K * out.v - rhs).norm() / std::max(1e-300, w.norm());
  if (out.residual > 1e-9)
    throw numerical_error("projected solve residual exceeds 1e-9 of |w|");
  return out;
}

} // namespace homog3
