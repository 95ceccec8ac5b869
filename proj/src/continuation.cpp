#include "homog3/continuation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "homog3/errors.hpp"
#include "homog3/geodesics.hpp"

namespace homog3 {

Perturbation cos_lattice_perturbation(const Mat2& lattice) {
  if (!lattice.allFinite() || std::abs(lattice.determinant()) < 1e-12)
    throw std::invalid_argument("perturbation lattice must be nondegenerate");
  const Mat2 dual = 2.0 * std::numbers::pi * lattice.inverse().transpose();
  const Vec2 k1 = dual.col(0);
  const Vec2 k2 = dual.col(1);
  Perturbation p;
  p.value = [k1, k2](const Vec3& r) {
    const Vec2 xy = r.head<2>();
    const double bump = std::exp(-0.5 * r(2) * r(2));
    return (std::cos(k1.dot(xy)) + std::cos(k2.dot(xy))) * bump;
  };
  p.grad = [k1, k2](const Vec3& r) {
    const Vec2 xy = r.head<2>();
    const double bump = std::exp(-0.5 * r(2) * r(2));
    const double both = std::cos(k1.dot(xy)) + std::cos(k2.dot(xy));
    Vec3 g;
    g.head<2>() = -(std::sin(k1.dot(xy)) * k1 + std::sin(k2.dot(xy)) * k2) * bump;
    g(2) = -r(2) * both * bump;
    return g;
  };
  return p;
}

namespace {

struct NodeJet {
  double us, ut, uss, ust, utt;  // derivatives in lattice coordinates
};

NodeJet node_jet(const TorusGrid& grid, const Eigen::VectorXd& u, int i, int j) {
  const double nu = grid.nu;
  const double nv = grid.nv;
  const auto at = [&](int a, int b) { return u(grid.index(a, b)); };
  const double mid = at(i, j);
  NodeJet jet;
  jet.us = 0.5 * nu * (at(i + 1, j) - at(i - 1, j));
  jet.ut = 0.5 * nv * (at(i, j + 1) - at(i, j - 1));
  jet.uss = nu * nu * (at(i + 1, j) - 2.0 * mid + at(i - 1, j));
  jet.utt = nv * nv * (at(i, j + 1) - 2.0 * mid + at(i, j - 1));
  jet.ust = 0.25 * nu * nv *
            (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1));
  return jet;
}

double node_mean_curvature(const SemidirectModel& m, const TorusGrid& grid,
                           const Perturbation& pert, double eps, const Eigen::VectorXd& u,
                           int i, int j) {
  const Mat2& L = grid.lattice;
  const NodeJet jet = node_jet(grid, u, i, j);
  const double z = grid.z0 + u(grid.index(i, j));
  const Vec2 xy = (static_cast<double>(i) / grid.nu) * L.col(0) +
                  (static_cast<double>(j) / grid.nv) * L.col(1);
  const Vec3 pos(xy(0), xy(1), z);

  const Mat3 G = metric_at(m, Point{xy(0), xy(1), z});
  const Mat2 Gh_inv = G.topLeftCorner<2, 2>().inverse();
  const CoordinateChristoffels ch = coordinate_christoffels(m, z);

  double w = 1.0;
  Vec3 sigma = Vec3::Zero();
  if (eps != 0.0) {
    const double p = pert.value(pos);
    w = 1.0 + eps * p;
    if (!(w > 0.0)) throw numerical_error("conformal factor is not positive");
    sigma = (eps / w) * pert.grad(pos);
  }
  Vec3 sigma_up;
  sigma_up.head<2>() = Gh_inv * sigma.head<2>();
  sigma_up(2) = sigma(2);

  Vec3 Xs, Xt;
  Xs << L(0, 0), L(1, 0), jet.us;
  Xt << L(0, 1), L(1, 1), jet.ut;
  const Vec3 tangents[2] = {Xs, Xt};
  const Vec3 second[3] = {Vec3(0, 0, jet.uss), Vec3(0, 0, jet.ust), Vec3(0, 0, jet.utt)};

  // Christoffel action of the perturbed metric on coordinate vectors: the
  // semidirect base contributes only through dG_h/dz, the conformal change
  // through sigma = d(log(1 + eps p)).
  const auto gamma = [&](const Vec3& V, const Vec3& W) {
    Vec3 out;
    out.head<2>() = 0.5 * (ch.MinvMp * (V(2) * W.head<2>() + W(2) * V.head<2>()));
    out(2) = -0.5 * V.head<2>().dot(ch.Mp * W.head<2>());
    if (eps != 0.0)
      out += sigma.dot(W) * V + sigma.dot(V) * W - V.dot(G * W) * sigma_up;
    return out;
  };

  // Upward covariant normal of the graph.
  const Vec2 uxy = L.transpose().inverse() * Vec2(jet.us, jet.ut);
  Vec3 n_cov(-uxy(0), -uxy(1), 1.0);
  Vec3 n_up;
  n_up.head<2>() = Gh_inv * n_cov.head<2>();
  n_up(2) = n_cov(2);
  const double n_norm = std::sqrt(n_cov.dot(n_up));

  Mat2 first, secondff;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      first(a, b) = w * w * tangents[a].dot(G * tangents[b]);
      const Vec3 T = second[a + b] + gamma(tangents[a], tangents[b]);
      secondff(a, b) = w * T.dot(n_cov) / n_norm;
    }
  return 0.5 * (first.inverse() * secondff).trace();
}

// Smallest divisor of n at least 3; falls back to n itself for primes.  Colors
// spaced by the stride isolate the 9-point stencil footprints.
int color_stride(int n) {
  for (int s = 3; s < n; ++s)
    if (n % s == 0) return s;
  return n;
}

}  // namespace

Eigen::VectorXd graph_mean_curvature(const SemidirectModel& m, const TorusGrid& grid,
                                     const Perturbation& pert, double eps,
                                     const Eigen::VectorXd& u) {
  if (u.size() != grid.size()) throw std::invalid_argument("height vector size mismatch");
  Eigen::VectorXd H(grid.size());
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j)
      H(grid.index(i, j)) = node_mean_curvature(m, grid, pert, eps, u, i, j);
  return H;
}

Eigen::SparseMatrix<double> graph_curvature_jacobian(const SemidirectModel& m,
                                                     const TorusGrid& grid,
                                                     const Perturbation& pert, double eps,
                                                     const Eigen::VectorXd& u) {
  const int n = grid.size();
  const int su = color_stride(grid.nu);
  const int sv = color_stride(grid.nv);
  const double h = 1e-6 * std::max(1.0, u.lpNorm<Eigen::Infinity>());

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * static_cast<std::size_t>(n));
  Eigen::VectorXd up = u;
  Eigen::VectorXd um = u;
  for (int a = 0; a < su; ++a)
    for (int b = 0; b < sv; ++b) {
      for (int i = a; i < grid.nu; i += su)
        for (int j = b; j < grid.nv; j += sv) {
          up(grid.index(i, j)) += h;
          um(grid.index(i, j)) -= h;
        }
      const Eigen::VectorXd Hp = graph_mean_curvature(m, grid, pert, eps, up);
      const Eigen::VectorXd Hm = graph_mean_curvature(m, grid, pert, eps, um);
      for (int i = 0; i < grid.nu; ++i) {
        int ip = -1;
        for (int di = -1; di <= 1; ++di) {
          const int cand = ((i + di) % grid.nu + grid.nu) % grid.nu;
          if (cand % su == a) ip = cand;
        }
        if (ip < 0) continue;
        for (int j = 0; j < grid.nv; ++j) {
          int jp = -1;
          for (int dj = -1; dj <= 1; ++dj) {
            const int cand = ((j + dj) % grid.nv + grid.nv) % grid.nv;
            if (cand % sv == b) jp = cand;
          }
          if (jp < 0) continue;
          const int row = grid.index(i, j);
          trips.emplace_back(row, grid.index(ip, jp), (Hp(row) - Hm(row)) / (2.0 * h));
        }
      }
      for (int i = a; i < grid.nu; i += su)
        for (int j = b; j < grid.nv; j += sv) {
          up(grid.index(i, j)) = u(grid.index(i, j));
          um(grid.index(i, j)) = u(grid.index(i, j));
        }
    }

  Eigen::SparseMatrix<double> J(n, n);
  J.setFromTriplets(trips.begin(), trips.end());
  return J;
}

int near_kernel_count(const Eigen::SparseMatrix<double>& K, double scale, double tol) {
  const double safe = std::max(scale, 1e-300);
  const RitzSet ritz = nearest_eigenpairs(K, 1e-3 * safe, 4, safe);
  int count = 0;
  for (double v : ritz.values)
    if (std::abs(v) <= tol * safe) ++count;
  return count;
}

ContinuationState cmc_continue(const SemidirectModel& m, const Mat2& lattice,
                               const Perturbation& pert, double eps, int nu, int nv,
                               double tol, double t, int max_steps) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_steps < 0) throw std::invalid_argument("max_steps must be nonnegative");
  const JacobiOperator L0 = build_jacobi_operator(m, lattice, 0.0, nu, nv);
  const TorusGrid& grid = L0.grid;
  const KernelReport kr = kernel_basis(L0);
  if (kr.functions.size() != 1)
    throw numerical_error("flat leaf kernel is not one dimensional");
  const Eigen::VectorXd phi = kr.functions.front();
  const int n = grid.size();

  ContinuationState st;
  st.eps = eps;
  st.t = t;
  st.phi = phi;
  st.u = t * phi;  // phi has unit area norm, so <u, phi>_A = t exactly

  const auto inner = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return x.dot(y) * grid.node_area;
  };

  Eigen::VectorXd H = graph_mean_curvature(m, grid, pert, eps, st.u);
  st.c = H.mean();  // node areas are uniform
  const auto residual_of = [&](const Eigen::VectorXd& Hval) {
    const double flat = (Hval.array() - st.c).abs().maxCoeff();
    const double pin = std::abs(inner(st.u, phi) - t);
    const double r = std::max(flat, pin);
    if (!std::isfinite(r)) throw numerical_error("continuation residual is not finite");
    return r;
  };
  st.residual = residual_of(H);
  st.residual_history.push_back(st.residual);

  while (st.residual > tol) {
    if (st.newton_steps >= max_steps)
      throw numerical_error("continuation Newton iteration did not converge");
    const Eigen::SparseMatrix<double> JH = graph_curvature_jacobian(m, grid, pert, eps, st.u);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(JH.nonZeros()) + 2 * n);
    for (int k = 0; k < JH.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(JH, k); it; ++it)
        trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int r = 0; r < n; ++r) {
      trips.emplace_back(r, n, -1.0);                       // d/dc of H - c
      trips.emplace_back(n, r, phi(r) * grid.node_area);    // d/du of the pin
    }
    Eigen::SparseMatrix<double> bordered(n + 1, n + 1);
    bordered.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(bordered);
    if (lu.info() != Eigen::Success)
      throw numerical_error("bordered continuation Jacobian is singular");
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = -(H.array() - st.c).matrix();
    rhs(n) = t - inner(st.u, phi);
    const Eigen::VectorXd step = lu.solve(rhs);
    st.u += step.head(n);
    st.c += step(n);
    ++st.newton_steps;
    H = graph_mean_curvature(m, grid, pert, eps, st.u);
    st.residual = residual_of(H);
    st.residual_history.push_back(st.residual);
  }

  // The bordered iteration handles the one continued kernel direction; any
  // further near-null mode of the linearization means the family degenerated.
  const Eigen::SparseMatrix<double> JH = graph_curvature_jacobian(m, grid, pert, eps, st.u);
  const Eigen::SparseMatrix<double> JHt = JH.transpose();
  const Eigen::SparseMatrix<double> sym = 0.5 * (JH + JHt);
  Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < sym.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sym, k); it; ++it)
      rowsum(it.row()) += std::abs(it.value());
  st.near_kernel_count = near_kernel_count(sym, rowsum.maxCoeff());
  if (st.near_kernel_count > 1)
    throw numerical_error("linearization developed extra near-null modes");
  return st;
}

}  // namespace homog3
