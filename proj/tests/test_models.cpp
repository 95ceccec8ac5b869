#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "homog3/errors.hpp"
#include "homog3/matexp.hpp"
#include "homog3/metric_json.hpp"
#include "homog3/models.hpp"
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

TEST_CASE("matrix exponential closed form for a rank-one generator") {
  Mat2 A;
  A << 2, 0, 2, 0;
  for (double z : {-1.5, -0.3, 0.0, 0.7, 2.0}) {
    const Mat2 E = mat_exp(A, z);
    const double e2z = std::exp(2.0 * z);
    CHECK(std::abs(E(0, 0) - e2z) <= 1e-13 * e2z);
    CHECK(std::abs(E(0, 1)) <= 1e-14);
    CHECK(std::abs(E(1, 0) - (e2z - 1.0)) <= 1e-12 * std::max(1.0, e2z));
    CHECK(std::abs(E(1, 1) - 1.0) <= 1e-14);
  }
}

TEST_CASE("matrix exponential agrees with the Pade oracle") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uz(-2.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Mat2 A = random_mat2(rng);
    const double z = uz(rng);
    const Mat2 got = mat_exp(A, z);
    const Mat2 want = oracles::mat_exp_pade(A, z);
    const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    const Mat2 series = mat_exp_series(A, z);
    CHECK((series - want).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("matrix exponential across the splitting discriminant") {
  // Traceless parts with disc near zero exercise the series fallback band.
  for (double d : {0.0, 1e-12, -1e-12, 1e-9, -1e-9, 1e-7, -1e-7, 1e-4, -1e-4}) {
    Mat2 A;
    if (d >= 0.0)
      A << 1.0 + std::sqrt(d), 1.0, 0.0, 1.0 - std::sqrt(d);
    else
      A << 1.0, 1.0, d, 1.0;
    for (double z : {-1.0, 0.5, 1.3}) {
      const Mat2 want = oracles::mat_exp_pade(A, z);
      const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
      CHECK((mat_exp(A, z) - want).cwiseAbs().maxCoeff() <= 1e-11 * scale);
    }
  }
}

TEST_CASE("exponential semigroup property") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uz(-1.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat2 A = random_mat2(rng);
    const double z1 = uz(rng), z2 = uz(rng);
    const Mat2 lhs = mat_exp(A, z1 + z2);
    const Mat2 rhs = mat_exp(A, z1) * mat_exp(A, z2);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, lhs.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("group law: identity, inverse, associativity") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto rand_point = [&] { return Point{u(rng), u(rng), u(rng)}; };
  for (int trial = 0; trial < 50; ++trial) {
    const SemidirectModel m{random_mat2(rng, 1.5)};
    const Point p = rand_point(), q = rand_point(), r = rand_point();
    const Point e = group_mul(m, p, group_inv(m, p));
    CHECK(e.vec().norm() <= 1e-12);
    const Point ab_c = group_mul(m, group_mul(m, p, q), r);
    const Point a_bc = group_mul(m, p, group_mul(m, q, r));
    CHECK((ab_c.vec() - a_bc.vec()).norm() <= 1e-11 * std::max(1.0, a_bc.vec().norm()));
  }
}

TEST_CASE("coordinate metric closed form for a rank-one generator") {
  Mat2 A;
  A << 2, 0, 2, 0;
  const SemidirectModel m{A};
  for (double z : {-0.8, 0.0, 0.4, 1.2}) {
    const Mat3 G = metric_at(m, Point{0.3, -0.5, z});
    const double e2 = std::exp(-2.0 * z);
    CHECK(G(0, 0) == doctest::Approx(e2 * e2 + (e2 - 1.0) * (e2 - 1.0)).epsilon(1e-12));
    CHECK(G(0, 1) == doctest::Approx(e2 - 1.0).epsilon(1e-12));
    CHECK(G(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(G(2, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(G(0, 2)) + std::abs(G(1, 2)) <= 1e-14);
  }
}

TEST_CASE("frame is orthonormal for the coordinate metric") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const SemidirectModel m{random_mat2(rng)};
    const Point p{u(rng), u(rng), u(rng)};
    const Mat3 G = metric_at(m, p);
    const auto frame = frame_at(m, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double want = i == j ? 1.0 : 0.0;
        CHECK(std::abs(frame[i].v.dot(G * frame[j].v) - want) <= 1e-11);
      }
  }
}

TEST_CASE("left translations are isometries") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const SemidirectModel m{random_mat2(rng, 1.2)};
    const Point g0{u(rng), u(rng), u(rng)};
    const Point p{u(rng), u(rng), u(rng)};
    const Vec3 v(u(rng), u(rng), u(rng));
    const Vec3 w(u(rng), u(rng), u(rng));
    const Mat3 D = left_translation_differential(m, g0);
    const double before = v.dot(metric_at(m, p) * w);
    const double after = (D * v).dot(metric_at(m, group_mul(m, g0, p)) * (D * w));
    CHECK(std::abs(after - before) <= 1e-10 * std::max(1.0, std::abs(before)));
  }
}

TEST_CASE("basis conversions round-trip") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const SemidirectModel m{random_mat2(rng)};
    const Point p{u(rng), u(rng), u(rng)};
    const TangentVec v{Vec3(u(rng), u(rng), u(rng)), Basis::coordinate};
    const TangentVec back = to_coordinate(m, p, to_frame(m, p, v));
    CHECK((back.v - v.v).norm() <= 1e-11 * std::max(1.0, v.v.norm()));
    CHECK(back.basis == Basis::coordinate);
    // Frame components of a frame vector are the metric pairings.
    const TangentVec f = to_frame(m, p, v);
    const Mat3 G = metric_at(m, p);
    const auto frame = frame_at(m, p);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(f.v(i) - v.v.dot(G * frame[i].v)) <= 1e-10);
  }
}

TEST_CASE("right-invariant fields generate right translations") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const SemidirectModel m{random_mat2(rng)};
    const Point p{u(rng), u(rng), u(rng)};
    const Vec2 w(u(rng), u(rng));
    const double s = u(rng);
    const TangentVec F = right_invariant_field(m, w, s, p);
    CHECK(F.basis == Basis::coordinate);
    const double t = 1e-6;
    const Point curve{t * w(0), t * w(1), t * s};
    const Vec3 fd = (group_mul(m, curve, p).vec() - p.vec()) / t;
    CHECK((F.v - fd).norm() <= 1e-5 * std::max(1.0, F.v.norm()));
  }
}

TEST_CASE("vertical right-invariant field stays unit along the axis") {
  Mat2 A;
  A << 2, 0, 2, 0;
  const SemidirectModel m{A};
  for (double z : {-2.0, 0.0, 1.0, 3.0}) {
    const Point p{0.0, 0.0, z};
    const TangentVec F = right_invariant_field(m, Vec2::Zero(), 1.0, p);
    CHECK(std::abs(F.v.dot(metric_at(m, p) * F.v) - 1.0) <= 1e-12);
  }
}

TEST_CASE("metric JSON round-trips") {
  Mat2 A;
  A << 1.5, -0.25, 0.0, 2.0;
  const MetricModel models[] = {SemidirectModel{A}, Sl2FrameMetric{1.0, 2.0, 0.5},
                                ProductS2R{3.0}};
  for (const auto& model : models) {
    const MetricModel back = parse_metric(metric_to_json(model));
    CHECK(back.index() == model.index());
  }
  const auto sd = std::get<SemidirectModel>(
      parse_metric_string(R"({"type":"semidirect","A":[[1.5,-0.25],[0.0,2.0]]})"));
  CHECK((sd.A - A).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("metric JSON rejects malformed specs") {
  const char* bad[] = {
      R"({"A":[[1,0],[0,1]]})",                                // missing type
      R"({"type":"semidirect"})",                              // missing A
      R"({"type":"semidirect","A":[[1,0],[0]]})",              // ragged
      R"({"type":"semidirect","A":[[1,0],[0,1]],"extra":1})",  // unknown field
      R"({"type":"sl2tilde","lambda":[1,1]})",                 // wrong count
      R"({"type":"sl2tilde","lambda":[1,1,-1]})",              // nonpositive
      R"({"type":"sl2tilde","lambda":[1,1,0]})",
      R"({"type":"s2xr","kappa":0})",
      R"({"type":"s2xr","kappa":-2})",
      R"({"type":"nil"})",                                     // unknown type
      R"([1,2,3])",                                            // not an object
      R"({"type":"semidirect","A":[[1,0],[0,null]]})",
  };
  for (const char* text : bad) CHECK_THROWS_AS(parse_metric_string(text), std::invalid_argument);
  CHECK_THROWS(parse_metric_string("not json"));
}

TEST_CASE("metric JSON rejects non-finite entries") {
  nlohmann::json j;
  j["type"] = "semidirect";
  j["A"] = {{1.0, 0.0}, {0.0, std::numeric_limits<double>::infinity()}};
  CHECK_THROWS_AS(parse_metric(j), std::invalid_argument);
  j["A"] = {{std::nan(""), 0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(parse_metric(j), std::invalid_argument);
}
