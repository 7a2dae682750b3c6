#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <string>

#include "fracweyl/grid.hpp"
#include "fracweyl/lattice_kernel.hpp"
#include "fracweyl/symbol.hpp"

namespace fracweyl {

// Dirichlet realization of a (possibly perturbed) fractional lattice operator
// on a grid: the full-lattice operator restricted to interior nodes, which
// encodes the exterior-zero condition.  The matrix is symmetric by
// construction.
class DirichletOperator {
 public:
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  int size() const { return static_cast<int>(matrix_.rows()); }
  std::shared_ptr<const Grid> grid() const { return grid_; }
  double a() const { return a_; }
  double spacing() const { return h_; }
  int kernel_cutoff() const { return cutoff_; }
  int transform_size() const { return transform_; }
  bool has_coefficient() const { return static_cast<bool>(coefficient_); }
  const ScalarField& coefficient() const { return coefficient_; }
  const std::string& description() const { return description_; }

  // Wraps an arbitrary symmetric matrix so matrix-level studies can run on
  // synthetic inputs.
  static DirichletOperator wrap(Eigen::MatrixXd m, std::string description = "wrapped");

 private:
  friend DirichletOperator assemble_dirichlet(const LatticeKernel&,
                                              std::shared_ptr<const Grid>,
                                              const ScalarField&);
  friend DirichletOperator assemble_perturbed(const DirichletOperator&, double, double,
                                              const ScalarField&);

  Eigen::MatrixXd matrix_;
  std::shared_ptr<const Grid> grid_;
  double a_ = 0.0;
  double h_ = 0.0;
  int cutoff_ = 0;
  int transform_ = 0;
  ScalarField coefficient_;
  std::string description_;
};

// Assembles the Dirichlet matrix A_ij = c_{m_i - m_j}; with a positive
// coefficient phi the symmetrized form (1/2)(Phi A + A Phi), i.e.
// A_ij = (1/2)(phi_i + phi_j) c_{m_i - m_j}.  Preconditions: the kernel and
// grid share dimension and spacing, and the kernel cutoff covers the grid's
// lattice diameter.
DirichletOperator assemble_dirichlet(const LatticeKernel& kernel,
                                     std::shared_ptr<const Grid> grid,
                                     const ScalarField& coefficient = nullptr);

// Perturbed operator: base + kappa * (kernel with exponent a_prime on the
// same grid) + diag(V at the nodes).  Enforces the admissible order window
// 0 < 2 a' < min{2a, a + 1/2}; rejects otherwise with a constraint_error.
DirichletOperator assemble_perturbed(const DirichletOperator& base, double a_prime,
                                     double kappa, const ScalarField& potential = nullptr);

// Mollified coefficient phi_k = phi * rho_{1/k}: convolution with a Gaussian
// of width 1/k, truncated at six standard deviations and renormalized so
// constants are preserved exactly.
ScalarField mollify_coefficient(const ScalarField& phi, int k, int dimension);

// Smallest convenient Garding-type shift: b = max(0, -lambda_min) + 1, so
// that matrix + b I has all eigenvalues >= 1.
double shift_for_positivity(const DirichletOperator& op);
double shift_for_positivity(const Eigen::MatrixXd& matrix);

}  // namespace fracweyl
