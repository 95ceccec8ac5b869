#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "homog3/errors.hpp"
#include "homog3/torus_jacobi.hpp"
#include "oracles.hpp"

using namespace homog3;

namespace {

Mat2 random_mat2(std::mt19937& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat2 A;
  A << u(rng), u(rng), u(rng), u(rng);
  return A;
}

}  // namespace

TEST_CASE("the stability potential vanishes identically") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const SemidirectModel m{random_mat2(rng)};
    CHECK(std::abs(jacobi_potential(m)) <= 1e-12);
  }
}

TEST_CASE("grid geometry") {
  const SemidirectModel m{Mat2::Identity()};
  Mat2 lattice;
  lattice << 2, 0, 0, 3;
  const TorusGrid g = make_torus_grid(m, lattice, 0.5, 8, 12);
  // induced = L^T e^{-2 z0} L for A = I
  CHECK(g.induced(0, 0) == doctest::Approx(4.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(g.induced(1, 1) == doctest::Approx(9.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(std::abs(g.induced(0, 1)) <= 1e-14);
  CHECK(g.total_area == doctest::Approx(6.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(g.node_area == doctest::Approx(g.total_area / 96.0).epsilon(1e-14));
  CHECK(g.index(8, 12) == g.index(0, 0));
  CHECK(g.index(-1, -1) == g.index(7, 11));
  CHECK_THROWS_AS(make_torus_grid(m, lattice, 0.0, 3, 8), std::invalid_argument);
  Mat2 singular;
  singular << 1, 2, 2, 4;
  CHECK_THROWS_AS(make_torus_grid(m, singular, 0.0, 8, 8), std::invalid_argument);
}

TEST_CASE("fourier modes diagonalize the stencil") {
  const SemidirectModel m{(Mat2() << 1.0, 0.0, 0.0, 0.5).finished()};
  Mat2 lattice;
  lattice << 1.0, 0.4, 0.0, 1.0;  // sheared cell so the cross term is active
  const TorusGrid g = make_torus_grid(m, lattice, 0.3, 16, 12);
  const double q = 0.7;
  const JacobiOperator L = assemble_jacobi(g, q);
  REQUIRE(std::abs(g.induced.inverse()(0, 1)) > 1e-6);
  for (auto [k1, k2] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 3}, {5, 4}}) {
    const Eigen::VectorXd v = oracles::fourier_mode(g, k1, k2);
    const double lam = oracles::stencil_symbol(g, q, k1, k2);
    const double resid = (L.K * v - lam * v).norm();
    CHECK(resid <= 1e-10 * L.op_norm * v.norm());
  }
}

TEST_CASE("operator is symmetric") {
  std::mt19937 rng(103);
  const SemidirectModel m{random_mat2(rng)};
  Mat2 lattice;
  lattice << 1.2, -0.3, 0.1, 0.9;
  const JacobiOperator L = build_jacobi_operator(m, lattice, 0.2, 12, 16);
  const Eigen::SparseMatrix<double> D = L.K - Eigen::SparseMatrix<double>(L.K.transpose());
  CHECK(D.norm() <= 1e-12 * L.op_norm);
}

TEST_CASE("kernel of the leaf operator is the constants") {
  std::mt19937 rng(107);
  for (int nu : {16, 32}) {
    const SemidirectModel m{random_mat2(rng)};
    const JacobiOperator L = build_jacobi_operator(m, Mat2::Identity(), 0.0, nu, nu);
    const KernelReport rep = kernel_basis(L);
    REQUIRE(rep.functions.size() == 1);
    CHECK_FALSE(rep.multiplicity_warning);
    const Eigen::VectorXd& phi = rep.functions.front();
    // unit area norm and fixed sign
    CHECK(phi.squaredNorm() * L.grid.node_area == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(phi.sum() > 0.0);
    // the eigenfunction is constant: phi = 1/sqrt(total area)
    const double want = 1.0 / std::sqrt(L.grid.total_area);
    for (int i = 0; i < phi.size(); ++i) CHECK(std::abs(phi(i) - want) <= 1e-8 * want);
    CHECK(std::abs(rep.eigenvalues.front()) <= 1e-8);
    CHECK(rep.second_eigenvalue < 0.0);
  }
}

TEST_CASE("second eigenvalue matches the lowest nonzero symbol") {
  const SemidirectModel m{Mat2::Identity()};
  const JacobiOperator L = build_jacobi_operator(m, Mat2::Identity(), 0.0, 16, 16);
  const KernelReport rep = kernel_basis(L);
  const double want = -4.0 * 256.0 * std::pow(std::sin(M_PI / 16.0), 2);
  CHECK(rep.second_eigenvalue == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("positive potential empties the kernel") {
  const TorusGrid g = make_torus_grid(SemidirectModel{Mat2::Identity()}, Mat2::Identity(), 0.0,
                                      16, 16);
  const JacobiOperator L = assemble_jacobi(g, 1.0);
  const KernelReport rep = kernel_basis(L);
  CHECK(rep.functions.empty());
  CHECK_FALSE(rep.multiplicity_warning);
  CHECK(rep.second_eigenvalue == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("tuned potential exposes degenerate kernels") {
  const TorusGrid g = make_torus_grid(SemidirectModel{Mat2::Identity()}, Mat2::Identity(), 0.0,
                                      16, 16);
  // Shift the first nonconstant shell onto zero: four modes land in the kernel.
  const double q = -oracles::stencil_symbol(g, 0.0, 1, 0);
  REQUIRE(q > 0.0);
  const JacobiOperator L = assemble_jacobi(g, q);
  const KernelReport rep = kernel_basis(L);
  CHECK(rep.functions.size() >= 2);
  CHECK(rep.multiplicity_warning);
}

TEST_CASE("projected solves satisfy the constraint and the equation") {
  std::mt19937 rng(109);
  const SemidirectModel m{random_mat2(rng)};
  const JacobiOperator L = build_jacobi_operator(m, Mat2::Identity(), 0.0, 16, 16);
  const KernelReport rep = kernel_basis(L);
  REQUIRE(rep.functions.size() == 1);
  const Eigen::VectorXd& phi = rep.functions.front();

  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd w(L.grid.size());
  for (int i = 0; i < w.size(); ++i) w(i) = gauss(rng);

  const ProjectedSolve sol = solve_projected(L, w, phi);
  CHECK(sol.residual <= 1e-9);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(w.size(), sol.a) - w;
  CHECK((L.K * sol.v - rhs).norm() <= 1e-9 * w.norm());
  CHECK(std::abs(sol.v.dot(phi) * L.grid.node_area) <= 1e-9 * sol.v.norm());
  // with a constant kernel function the compatibility constant is the mean
  CHECK(sol.a == doctest::Approx(w.mean()).epsilon(1e-8));
}

TEST_CASE("projection needs a kernel function with mass") {
  const SemidirectModel m{Mat2::Identity()};
  const JacobiOperator L = build_jacobi_operator(m, Mat2::Identity(), 0.0, 16, 16);
  const Eigen::VectorXd sine = [&] {
    Eigen::VectorXd v(L.grid.size());
    for (int i = 0; i < L.grid.nu; ++i)
      for (int j = 0; j < L.grid.nv; ++j)
        v(L.grid.index(i, j)) = std::sin(2.0 * M_PI * i / L.grid.nu);
    return v;
  }();
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(L.grid.size());
  CHECK_THROWS_AS(solve_projected(L, w, sine), numerical_error);
  const Eigen::VectorXd short_w = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS(solve_projected(L, short_w, sine), std::invalid_argument);
}

TEST_CASE("eigenpair extraction is deterministic") {
  const SemidirectModel m{Mat2::Identity()};
  const JacobiOperator L = build_jacobi_operator(m, Mat2::Identity(), 0.0, 16, 16);
  const double scale = L.op_norm;
  const RitzSet a = nearest_eigenpairs(L.K, 1e-3 * scale, 3, scale);
  const RitzSet b = nearest_eigenpairs(L.K, 1e-3 * scale, 3, scale);
  REQUIRE(a.values.size() == 3);
  REQUIRE(b.values.size() == 3);
  for (size_t k = 0; k < 3; ++k) {
    CHECK(a.values[k] == b.values[k]);
    CHECK((a.vectors[k] - b.vectors[k]).norm() == 0.0);
  }
}
