#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <unordered_map>

#include "fracweyl/domain.hpp"

namespace fracweyl {

// Lattice points of (h Z)^n that lie strictly inside a domain, ordered
// lexicographically by integer coordinate.  All grids with the same spacing
// share one global lattice, so grids of nested domains are automatically
// nested node sets.
class Grid {
 public:
  Grid(int dimension, double h, Eigen::MatrixXi lattice);

  int dimension() const { return dim_; }
  double spacing() const { return h_; }
  int size() const { return static_cast<int>(lattice_.rows()); }

  // Physical coordinates of node i.
  Eigen::VectorXd node(int i) const;
  // Integer lattice coordinates of node i.
  Eigen::VectorXi lattice_coords(int i) const;
  const Eigen::MatrixXi& lattice() const { return lattice_; }

  // Index of the node with the given lattice coordinates, if present.
  std::optional<int> find(const Eigen::VectorXi& coords) const;

  // Max Chebyshev distance between any two nodes, in lattice units; the
  // minimum admissible kernel cutoff for assembling on this grid.
  int lattice_diameter() const;

  Eigen::VectorXi lattice_min() const { return lat_lo_; }
  Eigen::VectorXi lattice_max() const { return lat_hi_; }

  // Indices into `super` for every node of this grid; throws
  // std::invalid_argument if this grid is not a subset of `super` or the
  // spacings differ.
  std::vector<int> subset_indices(const Grid& super) const;

 private:
  static std::int64_t key(const Eigen::VectorXi& c, int dim);

  int dim_;
  double h_;
  Eigen::MatrixXi lattice_;
  Eigen::VectorXi lat_lo_, lat_hi_;
  std::unordered_map<std::int64_t, int> index_;
};

// Enumerates the lattice points strictly inside the domain.  Throws
// numeric_error if no lattice point falls inside.
Grid grid_points(const Domain& domain, double h);

}  // namespace fracweyl
