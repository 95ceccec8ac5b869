#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "homog3/boxes.hpp"
#include "homog3/errors.hpp"

using namespace homog3;

namespace {

Mat2 random_lattice(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (;;) {
    Mat2 L;
    L << u(rng), u(rng), u(rng), u(rng);
    if (std::abs(L.determinant()) > 0.2) return L;
  }
}

}  // namespace

TEST_CASE("unit-trace box matches its closed forms") {
  const SemidirectModel m{Mat2::Identity()};
  const BoxDomain d{Mat2::Identity(), 4, 1.0};
  const BoxReport rep = box_report(m, d);
  CHECK(rep.bottom == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(rep.top == doctest::Approx(16.0 * std::exp(-2.0)).epsilon(1e-12));
  CHECK(rep.sides == doctest::Approx(16.0 * (1.0 - std::exp(-1.0))).epsilon(1e-10));
  CHECK(rep.volume == doctest::Approx(8.0 * (1.0 - std::exp(-2.0))).epsilon(1e-12));
  CHECK(rep.ratio ==
        doctest::Approx((rep.bottom + rep.top + rep.sides) / rep.volume).epsilon(1e-14));
  REQUIRE(rep.closed.has_value());
  CHECK(rep.sides == doctest::Approx(rep.closed->sides).epsilon(1e-10));
}

TEST_CASE("quadrature sides agree with closed forms for diagonal generators") {
  std::mt19937 rng(83);
  std::uniform_real_distribution<double> diag(-1.5, 2.5);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Mat2 A = Mat2::Zero();
    A(0, 0) = diag(rng);
    A(1, 1) = diag(rng);
    const SemidirectModel m{A};
    Mat2 lattice = Mat2::Zero();
    lattice(0, 0) = scale(rng);
    lattice(1, 1) = scale(rng);
    const BoxDomain d{lattice, 2, 0.5 + scale(rng)};
    const BoxReport rep = box_report(m, d);
    REQUIRE(rep.closed.has_value());
    CHECK(rep.bottom == doctest::Approx(rep.closed->bottom).epsilon(1e-12));
    CHECK(rep.top == doctest::Approx(rep.closed->top).epsilon(1e-12));
    CHECK(rep.volume == doctest::Approx(rep.closed->volume).epsilon(1e-12));
    CHECK(rep.sides == doctest::Approx(rep.closed->sides).epsilon(1e-8));
  }
}

TEST_CASE("closed forms are only claimed when they exist") {
  Mat2 A;
  A << 2, 0, 2, 0;
  const BoxDomain d{Mat2::Identity(), 2, 1.0};
  CHECK_FALSE(box_report(SemidirectModel{A}, d).closed.has_value());
  Mat2 sheared;
  sheared << 1, 0.5, 0, 1;
  const BoxDomain ds{sheared, 2, 1.0};
  CHECK_FALSE(box_report(SemidirectModel{Mat2::Identity()}, ds).closed.has_value());
}

TEST_CASE("box ratios stay above the trace") {
  std::mt19937 rng(89);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Mat2> gens;
  gens.push_back(Mat2::Identity());
  Mat2 B;
  B << 2, 0, 2, 0;
  gens.push_back(B);
  Mat2 C = Mat2::Zero();
  C(0, 0) = 2;
  C(1, 1) = 1;
  gens.push_back(C);
  for (const Mat2& A : gens) {
    const SemidirectModel m{A};
    for (int n : {2, 8, 32}) {
      for (double t0 : {0.5, 2.0, 8.0}) {
        const BoxReport rep = box_report(m, BoxDomain{Mat2::Identity(), n, t0});
        CHECK(rep.ratio > A.trace());
      }
    }
  }
}

TEST_CASE("large-n limit of the unit-trace ratio decreases toward the trace") {
  // With the sides suppressed by 1/n, the limiting ratio over t0 is
  // (1 + e^{-2 t0}) / integral which decreases toward trace = 2.
  const SemidirectModel m{Mat2::Identity()};
  double prev = 1e300;
  for (double t0 : {1.0, 2.0, 4.0, 8.0}) {
    const BoxReport rep = box_report(m, BoxDomain{Mat2::Identity(), 4096, t0});
    const double limit = (rep.bottom + rep.top) / rep.volume;
    CHECK(limit < prev);
    CHECK(limit > 2.0);
    prev = limit;
  }
  CHECK(prev - 2.0 < 1e-6);
}

TEST_CASE("sweep enumerates the grid in row-major order") {
  const SemidirectModel m{Mat2::Identity()};
  const std::vector<int> ns{2, 4};
  const std::vector<double> t0s{1.0, 3.0, 5.0};
  const auto entries = box_ratio_sweep(m, Mat2::Identity(), ns, t0s);
  REQUIRE(entries.size() == 6);
  for (size_t i = 0; i < ns.size(); ++i) {
    for (size_t j = 0; j < t0s.size(); ++j) {
      const BoxSweepEntry& e = entries[i * t0s.size() + j];
      CHECK(e.n == ns[i]);
      CHECK(e.t0 == t0s[j]);
      const BoxReport direct = box_report(m, BoxDomain{Mat2::Identity(), ns[i], t0s[j]});
      CHECK(e.report.ratio == doctest::Approx(direct.ratio).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(box_ratio_sweep(m, Mat2::Identity(), {}, t0s), std::invalid_argument);
}

TEST_CASE("box domain validation") {
  const SemidirectModel m{Mat2::Identity()};
  CHECK_THROWS_AS(box_report(m, BoxDomain{Mat2::Identity(), 0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(box_report(m, BoxDomain{Mat2::Identity(), 2, 0.0}), std::invalid_argument);
  Mat2 singular;
  singular << 1, 2, 2, 4;
  CHECK_THROWS_AS(box_report(m, BoxDomain{singular, 2, 1.0}), std::invalid_argument);
}

TEST_CASE("quotient end identities") {
  std::mt19937 rng(97);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> tr(0.2, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    Mat2 A;
    A << entry(rng), entry(rng), entry(rng), entry(rng);
    A(1, 1) = tr(rng) - A(0, 0);
    const SemidirectModel m{A};
    const Mat2 lattice = random_lattice(rng);
    for (double T : {0.0, 1.0, 5.0}) {
      const QuotientEndReport rep = quotient_end_report(m, lattice, T);
      const double tau = A.trace();
      CHECK(std::abs(tau * rep.end_volume - rep.torus_area) <=
            1e-12 * std::max(1.0, rep.torus_area));
      CHECK(rep.end_volume_quadrature ==
            doctest::Approx(rep.end_volume).epsilon(1e-8));
      CHECK(rep.torus_area_quadrature ==
            doctest::Approx(rep.torus_area).epsilon(1e-8));
      // Pushing the cut one unit deeper scales both area and volume by e^{-tau}.
      const QuotientEndReport deeper = quotient_end_report(m, lattice, T + 1.0);
      CHECK(deeper.torus_area / rep.torus_area ==
            doctest::Approx(std::exp(-tau)).epsilon(1e-10));
      CHECK(deeper.end_volume / rep.end_volume ==
            doctest::Approx(std::exp(-tau)).epsilon(1e-10));
    }
  }
}

TEST_CASE("quotient end requires finite volume") {
  Mat2 traceless;
  traceless << 1, 0, 0, -1;
  CHECK_THROWS_AS(quotient_end_report(SemidirectModel{traceless}, Mat2::Identity(), 0.0),
                  numerical_error);
  Mat2 singular;
  singular << 1, 1, 1, 1;
  CHECK_THROWS_AS(quotient_end_report(SemidirectModel{Mat2::Identity()}, singular, 0.0),
                  std::invalid_argument);
}
