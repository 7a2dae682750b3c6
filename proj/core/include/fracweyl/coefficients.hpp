#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracweyl/symbol.hpp"

namespace fracweyl {

// Named builtin coefficient families used by configuration records:
//   constant:c            phi = c
//   affine:c0,c1[,c2]     phi = c0 + c1 x1 [+ c2 x2]
//   poly2:c0,c1,c2        phi = c0 + c1 x1 + c2 x1^2
//   sinmod:c0,amp,freq[,axis]   phi = c0 + amp sin(freq x_axis)
//   kink:c0,amp,x0[,axis]       phi = c0 + amp |x_axis - x0|
struct CoefficientSpec {
  std::string family;
  std::vector<double> params;
};

inline ScalarField make_coefficient(const CoefficientSpec& spec, int dimension) {
  const auto& p = spec.params;
  auto need = [&](size_t lo, size_t hi) {
    if (p.size() < lo || p.size() > hi)
      throw std::invalid_argument("coefficient family '" + spec.family +
                                  "': wrong parameter count");
  };
  auto axis_of = [&](size_t pos, size_t min_count) -> int {
    int axis = p.size() > min_count ? static_cast<int>(p[pos]) : 0;
    if (axis < 0 || axis >= dimension)
      throw std::invalid_argument("coefficient family '" + spec.family +
                                  "': axis out of range");
    return axis;
  };
  if (spec.family == "constant") {
    need(1, 1);
    const double c = p[0];
    return [c](const Eigen::VectorXd&) { return c; };
  }
  if (spec.family == "affine") {
    need(2, static_cast<size_t>(dimension) + 1);
    std::vector<double> coef(p.begin(), p.end());
    return [coef](const Eigen::VectorXd& x) {
      double s = coef[0];
      for (size_t d = 1; d < coef.size(); ++d) s += coef[d] * x(d - 1);
      return s;
    };
  }
  if (spec.family == "poly2") {
    need(3, 3);
    const double c0 = p[0], c1 = p[1], c2 = p[2];
    return [c0, c1, c2](const Eigen::VectorXd& x) {
      return c0 + c1 * x(0) + c2 * x(0) * x(0);
    };
  }
  if (spec.family == "sinmod") {
    need(3, 4);
    const double c0 = p[0], amp = p[1], freq = p[2];
    const int axis = axis_of(3, 3);
    return [c0, amp, freq, axis](const Eigen::VectorXd& x) {
      return c0 + amp * std::sin(freq * x(axis));
    };
  }
  if (spec.family == "kink") {
    need(3, 4);
    const double c0 = p[0], amp = p[1], x0 = p[2];
    const int axis = axis_of(3, 3);
    return [c0, amp, x0, axis](const Eigen::VectorXd& x) {
      return c0 + amp * std::abs(x(axis) - x0);
    };
  }
  throw std::invalid_argument("unknown coefficient family '" + spec.family + "'");
}

// Matrix families for anisotropic symbols:
//   diag:d1,d2            A = diag(d1, d2)
//   matrix:a11,a12,a22    constant symmetric 2x2
inline MatrixField make_matrix_coefficient(const CoefficientSpec& spec, int dimension) {
  if (dimension != 2)
    throw std::invalid_argument("matrix coefficient families require dimension 2");
  const auto& p = spec.params;
  if (spec.family == "diag") {
    if (p.size() != 2)
      throw std::invalid_argument("coefficient family 'diag': wrong parameter count");
    Eigen::Matrix2d A;
    A << p[0], 0.0, 0.0, p[1];
    return [A](const Eigen::VectorXd&) -> Eigen::MatrixXd { return A; };
  }
  if (spec.family == "matrix") {
    if (p.size() != 3)
      throw std::invalid_argument("coefficient family 'matrix': wrong parameter count");
    Eigen::Matrix2d A;
    A << p[0], p[1], p[1], p[2];
    return [A](const Eigen::VectorXd&) -> Eigen::MatrixXd { return A; };
  }
  throw std::invalid_argument("unknown matrix coefficient family '" + spec.family + "'");
}

}  // namespace fracweyl
