#pragma once

#include <functional>
#include <vector>

namespace homog3 {

struct QuadRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule with n points, n >= 1. Nodes via Newton on P_n with
// Chebyshev initial guesses; deterministic.
const QuadRule& gauss_legendre(int n);

double integrate(const std::function<double(double)>& f, double a, double b, int n);

// Composite rule with panels no longer than max_panel.
double integrate_composite(const std::function<double(double)>& f, double a, double b, int n,
                           double max_panel);

} // namespace homog3
