#pragma once

#include <functional>
#include <vector>

namespace fracweyl {

// Gauss-Legendre rule on [-1, 1].  Nodes ascending, weights summing to 2.
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};

// Computes the n-point rule by Newton iteration on the Legendre polynomial.
// Results are cached per order; accurate to machine precision for n <= 64.
const GaussRule& gauss_legendre(int n);

// Composite n-point Gauss-Legendre over [a, b] split into `panels` equal
// panels.
double integrate_gauss(const std::function<double(double)>& f, double a, double b,
                       int panels, int points_per_panel = 8);

}  // namespace fracweyl
