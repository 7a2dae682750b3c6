#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fracweyl {

struct BoundingBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

struct IntegralResult;

// Bounded open subset of R^n, n in {1, 2}.  Closed-form shapes (interval,
// axis-aligned rectangle, disk, simple polygon) carry exact volume and exact
// signed distance.  Offset domains (erosion / dilation of a base shape) are
// predicate-based; their distance function is derived from the base signed
// distance and may underestimate the true boundary distance near reentrant
// corners, which is acceptable for the approximation studies they serve.
class Domain {
 public:
  static Domain interval(double x0, double x1);
  static Domain rectangle(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi);
  static Domain disk(const Eigen::Vector2d& center, double radius);
  // Simple polygon; vertices in either orientation, normalized to CCW.
  // Throws std::invalid_argument on self-intersection or fewer than 3
  // vertices.
  static Domain polygon(std::vector<Eigen::Vector2d> vertices);

  int dimension() const { return dim_; }

  // Strict interior membership (domains are open).
  bool contains(const Eigen::VectorXd& x) const;

  // Distance to the topological boundary; zero on the boundary itself.
  double boundary_distance(const Eigen::VectorXd& x) const;

  // Positive inside, negative outside, zero on the boundary.  1-Lipschitz.
  double signed_distance(const Eigen::VectorXd& x) const;

  BoundingBox bounding_box() const;
  double diameter() const;

  // Exact volume for closed-form shapes; nullopt for predicate offsets.
  std::optional<double> exact_volume() const;

  // Inner approximant: points at distance > 1/j from the boundary.
  // Closed-form shapes erode to closed-form shapes where possible.  Throws
  // numeric_error if the erosion is empty.
  Domain inner_approx(int j) const;
  // Outer approximant: points within distance 1/k of the closure.
  Domain outer_approx(int k) const;

  // General offsets used by the approximation studies; r > 0.
  Domain eroded(double r) const;
  Domain dilated(double r) const;

  // Compact description, e.g. "interval(0,3.14159)"; used in run manifests.
  std::string describe() const;

  friend IntegralResult integrate(const Domain&,
                                  const std::function<double(const Eigen::VectorXd&)>&,
                                  int);

 private:
  struct IntervalShape {
    double x0, x1;
  };
  struct RectShape {
    Eigen::Vector2d lo, hi;
  };
  struct DiskShape {
    Eigen::Vector2d c;
    double r;
  };
  struct PolyShape {
    std::vector<Eigen::Vector2d> v;  // CCW
  };
  struct OffsetShape {
    std::shared_ptr<const Domain> base;
    double delta;  // contains(x) iff base signed distance > delta
  };
  using Shape = std::variant<IntervalShape, RectShape, DiskShape, PolyShape, OffsetShape>;

  Domain(int dim, Shape shape) : dim_(dim), shape_(std::move(shape)) {}

  int dim_;
  Shape shape_;
};

struct VolumeResult {
  double value;
  double error_estimate;
};

// Volume of the domain.  Closed-form shapes return the exact value; predicate
// offsets fall back to cell counting over the bounding box at the given
// resolution (cells per axis) with subdivision of boundary cells.
VolumeResult volume(const Domain& domain, int resolution = 256);

struct IntegralResult {
  double value;
  double error_estimate;
};

// Integral of f over the domain.  Closed-form shapes use composed
// Gauss-Legendre rules adapted to the shape (polar coordinates for disks,
// vertical strip decomposition for polygons); predicate offsets use midpoint
// cell quadrature with boundary-cell subdivision.  `resolution` scales the
// panel counts.
IntegralResult integrate(const Domain& domain,
                         const std::function<double(const Eigen::VectorXd&)>& f,
                         int resolution = 256);

}  // namespace fracweyl
