#include "fracweyl/operators.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "fracweyl/eigensolve.hpp"
#include "fracweyl/errors.hpp"
#include "fracweyl/quadrature.hpp"

namespace fracweyl {

DirichletOperator DirichletOperator::wrap(Eigen::MatrixXd m, std::string description) {
  if (m.rows() != m.cols()) throw std::invalid_argument("wrap: matrix must be square");
  DirichletOperator op;
  op.matrix_ = std::move(m);
  op.description_ = std::move(description);
  return op;
}

namespace {

Eigen::VectorXd sample_coefficient(const ScalarField& phi, const Grid& grid,
                                   const char* what) {
  Eigen::VectorXd v(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    v(i) = phi(grid.node(i));
    if (!std::isfinite(v(i)))
      throw numeric_error(std::string(what) + ": non-finite value at a grid node");
  }
  return v;
}

}  // namespace

DirichletOperator assemble_dirichlet(const LatticeKernel& kernel,
                                     std::shared_ptr<const Grid> grid,
                                     const ScalarField& coefficient) {
  if (!grid) throw std::invalid_argument("assemble_dirichlet: null grid");
  if (kernel.dimension() != grid->dimension())
    throw std::invalid_argument("assemble_dirichlet: kernel/grid dimension mismatch");
  if (kernel.spacing() != grid->spacing())
    throw std::invalid_argument("assemble_dirichlet: kernel/grid spacing mismatch");
  if (kernel.cutoff() < grid->lattice_diameter())
    throw std::invalid_argument(
        "assemble_dirichlet: kernel cutoff smaller than the grid's lattice diameter");

  const int N = grid->size();
  const int n = grid->dimension();
  Eigen::VectorXd phi;
  if (coefficient) {
    phi = sample_coefficient(coefficient, *grid, "assemble_dirichlet coefficient");
    if ((phi.array() <= 0.0).any())
      throw constraint_error("assemble_dirichlet: coefficient must be positive on the grid");
  }

  Eigen::MatrixXd A(N, N);
  const Eigen::MatrixXi& lat = grid->lattice();
  if (n == 1) {
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        double w = kernel.weight_abs(std::abs(lat(i, 0) - lat(j, 0)));
        if (coefficient) w *= 0.5 * (phi(i) + phi(j));
        A(i, j) = w;
        A(j, i) = w;
      }
  } else {
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        double w = kernel.weight_abs(std::abs(lat(i, 0) - lat(j, 0)),
                                     std::abs(lat(i, 1) - lat(j, 1)));
        if (coefficient) w *= 0.5 * (phi(i) + phi(j));
        A(i, j) = w;
        A(j, i) = w;
      }
  }

  DirichletOperator op;
  op.matrix_ = std::move(A);
  op.grid_ = std::move(grid);
  op.a_ = kernel.a();
  op.h_ = kernel.spacing();
  op.cutoff_ = kernel.cutoff();
  op.transform_ = kernel.transform_size();
  op.coefficient_ = coefficient;
  op.description_ = "dirichlet(a=" + std::to_string(kernel.a()) + ")";
  return op;
}

DirichletOperator assemble_perturbed(const DirichletOperator& base, double a_prime,
                                     double kappa, const ScalarField& potential) {
  if (!base.grid())
    throw std::invalid_argument("assemble_perturbed: base operator carries no grid");
  const double a = base.a();
  const double bound = std::min(2.0 * a, a + 0.5);
  if (!(a_prime > 0.0) || !(2.0 * a_prime < bound))
    throw constraint_error(
        "assemble_perturbed: perturbation order must satisfy 0 < 2a' < min{2a, a + 1/2}");

  DirichletOperator op;
  op.matrix_ = base.matrix();
  op.grid_ = base.grid();
  op.a_ = a;
  op.h_ = base.spacing();
  op.cutoff_ = base.kernel_cutoff();
  op.transform_ = base.transform_size();
  op.coefficient_ = base.coefficient();

  if (kappa != 0.0) {
    LatticeKernel pk = kernel_weights(base.grid()->dimension(), a_prime, base.spacing(),
                                      base.kernel_cutoff(), base.transform_size());
    DirichletOperator part = assemble_dirichlet(pk, base.grid());
    op.matrix_ += kappa * part.matrix();
  }
  if (potential) {
    Eigen::VectorXd V =
        sample_coefficient(potential, *base.grid(), "assemble_perturbed potential");
    op.matrix_ += V.asDiagonal();
  }
  op.description_ = base.description() + "+perturbation(a'=" + std::to_string(a_prime) +
                    ",kappa=" + std::to_string(kappa) + (potential ? ",V" : "") + ")";
  return op;
}

ScalarField mollify_coefficient(const ScalarField& phi, int k, int dimension) {
  if (!phi) throw std::invalid_argument("mollify_coefficient: null coefficient");
  if (k < 1) throw std::invalid_argument("mollify_coefficient: k must be >= 1");
  if (dimension < 1 || dimension > 2)
    throw std::invalid_argument("mollify_coefficient: dimension must be 1 or 2");

  const double sigma = 1.0 / k;
  // Composite Gauss nodes over [-6 sigma, 6 sigma]; an even panel count keeps
  // the node set symmetric, so affine coefficients are reproduced exactly.
  const int panels = 12, pts = 8;
  const GaussRule& rule = gauss_legendre(pts);
  std::vector<double> y, w;
  const double width = 12.0 * sigma / panels;
  for (int p = 0; p < panels; ++p)
    for (int q = 0; q < pts; ++q) {
      const double t = -6.0 * sigma + (p + 0.5 + 0.5 * rule.points[q]) * width;
      y.push_back(t);
      w.push_back(0.5 * width * rule.weights[q] *
                  std::exp(-0.5 * t * t / (sigma * sigma)));
    }
  double mass = 0.0;
  if (dimension == 1) {
    for (double wi : w) mass += wi;
    return [phi, y, w, mass](const Eigen::VectorXd& x) {
      double s = 0.0;
      Eigen::VectorXd z(1);
      for (size_t q = 0; q < y.size(); ++q) {
        z(0) = x(0) - y[q];
        s += w[q] * phi(z);
      }
      return s / mass;
    };
  }
  for (double wa : w)
    for (double wb : w) mass += wa * wb;
  return [phi, y, w, mass](const Eigen::VectorXd& x) {
    double s = 0.0;
    Eigen::VectorXd z(2);
    for (size_t qa = 0; qa < y.size(); ++qa)
      for (size_t qb = 0; qb < y.size(); ++qb) {
        z(0) = x(0) - y[qa];
        z(1) = x(1) - y[qb];
        s += w[qa] * w[qb] * phi(z);
      }
    return s / mass;
  };
}

double shift_for_positivity(const Eigen::MatrixXd& matrix) {
  const Spectrum sp = eigenvalues_symmetric(matrix);
  const double lmin = sp.values(0);
  return std::max(0.0, -lmin) + 1.0;
}

double shift_for_positivity(const DirichletOperator& op) {
  return shift_for_positivity(op.matrix());
}

}  // namespace fracweyl
