#include "fracweyl/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fracweyl {

namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  const double tol = 1e-15;
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess for the i-th root of P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Recurrence for P_n(x) and its derivative.
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < tol) break;
    }
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 128) throw std::invalid_argument("gauss_legendre: order out of range");
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

double integrate_gauss(const std::function<double(double)>& f, double a, double b,
                       int panels, int points_per_panel) {
  if (panels < 1) throw std::invalid_argument("integrate_gauss: panels < 1");
  const GaussRule& rule = gauss_legendre(points_per_panel);
  const double hp = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * hp;
    const double mid = lo + 0.5 * hp;
    double local = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q)
      local += rule.weights[q] * f(mid + 0.5 * hp * rule.points[q]);
    sum += 0.5 * hp * local;
  }
  return sum;
}

}  // namespace fracweyl
