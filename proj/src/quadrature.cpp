#include "homog3/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace homog3 {

namespace {

QuadRule build_rule(int n) {
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

} // namespace

const QuadRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
  static std::map<int, QuadRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n) {
  const QuadRule& r = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
  return s * half;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b, int n,
                           double max_panel) {
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
  double s = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double pa = a + (b - a) * k / panels;
    const double pb = a + (b - a) * (k + 1) / panels;
    s += integrate(f, pa, pb, n);
  }
  return s;
}

} // namespace homog3
