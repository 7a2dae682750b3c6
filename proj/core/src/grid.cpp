#include "fracweyl/grid.hpp"

#include <algorithm>
#include <cmath>

#include "fracweyl/errors.hpp"

namespace fracweyl {

std::int64_t Grid::key(const Eigen::VectorXi& c, int dim) {
  // Pack up to two 21-bit signed coordinates.
  const std::int64_t base = 1 << 20;
  std::int64_t k = c(0) + base;
  if (dim == 2) k = k * (2 * base) + (c(1) + base);
  return k;
}

Grid::Grid(int dimension, double h, Eigen::MatrixXi lattice)
    : dim_(dimension), h_(h), lattice_(std::move(lattice)) {
  if (dim_ < 1 || dim_ > 2) throw std::invalid_argument("Grid: dimension must be 1 or 2");
  if (!(h_ > 0.0)) throw std::invalid_argument("Grid: spacing must be positive");
  if (lattice_.rows() == 0) throw std::invalid_argument("Grid: no nodes");
  if (lattice_.cols() != dim_) throw std::invalid_argument("Grid: lattice column mismatch");
  lat_lo_ = lattice_.colwise().minCoeff();
  lat_hi_ = lattice_.colwise().maxCoeff();
  index_.reserve(lattice_.rows());
  for (int i = 0; i < lattice_.rows(); ++i) {
    Eigen::VectorXi c = lattice_.row(i);
    if (!index_.emplace(key(c, dim_), i).second)
      throw std::invalid_argument("Grid: duplicate lattice node");
  }
}

Eigen::VectorXd Grid::node(int i) const {
  return lattice_.row(i).cast<double>().transpose() * h_;
}

Eigen::VectorXi Grid::lattice_coords(int i) const { return lattice_.row(i); }

std::optional<int> Grid::find(const Eigen::VectorXi& coords) const {
  auto it = index_.find(key(coords, dim_));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Grid::lattice_diameter() const {
  int d = 0;
  for (int k = 0; k < dim_; ++k) d = std::max(d, lat_hi_(k) - lat_lo_(k));
  return d;
}

std::vector<int> Grid::subset_indices(const Grid& super) const {
  if (super.dimension() != dim_ || super.spacing() != h_)
    throw std::invalid_argument("subset_indices: incompatible grids");
  std::vector<int> out(size());
  for (int i = 0; i < size(); ++i) {
    auto idx = super.find(lattice_.row(i));
    if (!idx) throw std::invalid_argument("subset_indices: node missing from supergrid");
    out[i] = *idx;
  }
  return out;
}

Grid grid_points(const Domain& domain, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grid_points: spacing must be positive");
  const int n = domain.dimension();
  const BoundingBox bb = domain.bounding_box();
  std::vector<Eigen::VectorXi> nodes;
  // Scan the lattice range covering the bounding box with one cell margin.
  Eigen::VectorXi ilo(n), ihi(n);
  for (int d = 0; d < n; ++d) {
    ilo(d) = static_cast<int>(std::floor(bb.lo(d) / h)) - 1;
    ihi(d) = static_cast<int>(std::ceil(bb.hi(d) / h)) + 1;
    if (ihi(d) - ilo(d) > (1 << 20))
      throw std::invalid_argument("grid_points: spacing too small for bounding box");
  }
  Eigen::VectorXd x(n);
  Eigen::VectorXi c(n);
  if (n == 1) {
    for (int i = ilo(0); i <= ihi(0); ++i) {
      x(0) = i * h;
      if (domain.contains(x)) {
        c(0) = i;
        nodes.push_back(c);
      }
    }
  } else {
    for (int i = ilo(0); i <= ihi(0); ++i)
      for (int j = ilo(1); j <= ihi(1); ++j) {
        x(0) = i * h;
        x(1) = j * h;
        if (domain.contains(x)) {
          c(0) = i;
          c(1) = j;
          nodes.push_back(c);
        }
      }
  }
  if (nodes.empty())
    throw numeric_error("grid_points: no lattice point inside the domain at this spacing");
  // The scan order is already lexicographic.
  Eigen::MatrixXi lattice(nodes.size(), n);
  for (size_t i = 0; i < nodes.size(); ++i) lattice.row(i) = nodes[i].transpose();
  return Grid(n, h, std::move(lattice));
}

}  // namespace fracweyl
