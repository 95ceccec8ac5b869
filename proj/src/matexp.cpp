#include "homog3/matexp.hpp"

#include <cmath>

namespace homog3 {

namespace {

constexpr double kDiscBand = 1e-8;

double sinch(double s) { return std::abs(s) < 1e-6 ? 1.0 + s * s / 6.0 : std::sinh(s) / s; }
double sinc(double s) { return std::abs(s) < 1e-6 ? 1.0 - s * s / 6.0 : std::sin(s) / s; }

} // namespace

Mat2 mat_exp_series(const Mat2& A, double z) {
  Mat2 T = z * A;
  const double nrm = T.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (nrm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    T /= std::pow(2.0, squarings);
  }
  Mat2 result = Mat2::Identity();
  Mat2 term = Mat2::Identity();
  for (int k = 1; k <= 18; ++k) {
    term = (term * T) / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Mat2 mat_exp(const Mat2& A, double z) {
  const double mu = 0.5 * (A(0, 0) + A(1, 1));
  const Mat2 B = A - mu * Mat2::Identity();
  const double disc = 0.25 * (A(0, 0) - A(1, 1)) * (A(0, 0) - A(1, 1)) + A(0, 1) * A(1, 0);

  if (std::abs(disc) <= kDiscBand) return mat_exp_series(A, z);

  const double scale = std::exp(mu * z);
  if (disc > 0.0) {
    const double s = z * std::sqrt(disc);
    return scale * (std::cosh(s) * Mat2::Identity() + (z * sinch(s)) * B);
  }
  const double s = z * std::sqrt(-disc);
  return scale * (std::cos(s) * Mat2::Identity() + (z * sinc(s)) * B);
}

} // namespace homog3
