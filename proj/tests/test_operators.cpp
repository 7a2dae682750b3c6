#include <doctest.h>

#include <stdexcept>

#include <Eigen/Core>
#include <cmath>
#include <memory>
#include <thread>

#include "fracweyl/coefficients.hpp"
#include "fracweyl/errors.hpp"
#include "fracweyl/grid.hpp"
#include "fracweyl/lattice_kernel.hpp"
#include "fracweyl/operators.hpp"

using namespace fracweyl;

namespace {

std::shared_ptr<const Grid> interval_grid(double length, double h) {
  return std::make_shared<Grid>(grid_points(Domain::interval(0.0, length), h));
}

}  // namespace

TEST_CASE("unscaled assembly is the Toeplitz restriction of the kernel") {
  const double h = 0.1;
  auto grid = interval_grid(1.0, h);
  const LatticeKernel kernel = kernel_weights(1, 0.5, h, grid->lattice_diameter());
  const DirichletOperator op = assemble_dirichlet(kernel, grid);
  REQUIRE(op.size() == 9);
  const Eigen::MatrixXd& A = op.matrix();
  CHECK(A.isApprox(A.transpose(), 1e-15));
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j)
      CHECK(A(i, j) == kernel.weight_abs(std::abs(i - j)));
}

TEST_CASE("a positive coefficient enters through the symmetrized average") {
  const double h = 0.125;
  auto grid = interval_grid(1.0, h);
  const LatticeKernel kernel = kernel_weights(1, 0.5, h, grid->lattice_diameter());
  const ScalarField phi = make_coefficient({"affine", {1.0, 1.0}}, 1);
  const DirichletOperator op = assemble_dirichlet(kernel, grid, phi);
  const Eigen::MatrixXd& A = op.matrix();
  for (int i = 0; i < op.size(); ++i) {
    const double pi_ = phi(grid->node(i));
    CHECK(A(i, i) == doctest::Approx(pi_ * kernel.center()).epsilon(1e-14));
    for (int j = 0; j < op.size(); ++j) {
      const double pj = phi(grid->node(j));
      CHECK(A(i, j) == doctest::Approx(0.5 * (pi_ + pj) *
                                       kernel.weight_abs(std::abs(i - j)))
                           .epsilon(1e-14));
    }
  }
  CHECK(op.has_coefficient());
  CHECK_FALSE(assemble_dirichlet(kernel, grid).has_coefficient());
}

TEST_CASE("assembly preconditions") {
  auto grid = interval_grid(1.0, 0.1);
  const LatticeKernel short_kernel = kernel_weights(1, 0.5, 0.1, 2);
  CHECK_THROWS_AS(assemble_dirichlet(short_kernel, grid), std::invalid_argument);
  const LatticeKernel wrong_h = kernel_weights(1, 0.5, 0.2, 16);
  CHECK_THROWS_AS(assemble_dirichlet(wrong_h, grid), std::invalid_argument);
  const LatticeKernel wrong_dim = kernel_weights(2, 0.5, 0.1, 16);
  CHECK_THROWS_AS(assemble_dirichlet(wrong_dim, grid), std::invalid_argument);
}

TEST_CASE("perturbation order window") {
  auto grid = interval_grid(1.0, 0.125);
  const LatticeKernel kernel = kernel_weights(1, 0.5, 0.125, grid->lattice_diameter());
  const DirichletOperator base = assemble_dirichlet(kernel, grid);
  // 0 < 2a' < min{2a, a + 1/2} = 1 here.
  CHECK_NOTHROW(assemble_perturbed(base, 0.3, 1.0));
  CHECK_NOTHROW(assemble_perturbed(base, 0.49, 1.0));
  CHECK_THROWS_AS(assemble_perturbed(base, 0.5, 1.0), constraint_error);
  CHECK_THROWS_AS(assemble_perturbed(base, 0.6, 1.0), constraint_error);
  CHECK_THROWS_AS(assemble_perturbed(base, 0.0, 1.0), constraint_error);
  CHECK_THROWS_AS(assemble_perturbed(base, -0.2, 1.0), constraint_error);
}

TEST_CASE("perturbation pieces act as kernel plus diagonal") {
  const double h = 0.125;
  auto grid = interval_grid(1.0, h);
  const LatticeKernel kernel = kernel_weights(1, 0.5, h, grid->lattice_diameter());
  const DirichletOperator base = assemble_dirichlet(kernel, grid);

  // kappa = 0 with a potential leaves exactly base + diag(V).
  const ScalarField V = make_coefficient({"sinmod", {0.0, 1.0, 3.0}}, 1);
  const DirichletOperator with_v = assemble_perturbed(base, 0.3, 0.0, V);
  Eigen::MatrixXd diff = with_v.matrix() - base.matrix();
  for (int i = 0; i < base.size(); ++i) {
    CHECK(diff(i, i) == doctest::Approx(V(grid->node(i))).epsilon(1e-13));
    diff(i, i) = 0.0;
  }
  CHECK(diff.cwiseAbs().maxCoeff() == 0.0);

  // No potential: the difference is the lower-order kernel, scaled by kappa.
  const LatticeKernel pk = kernel_weights(1, 0.3, h, grid->lattice_diameter());
  const DirichletOperator with_k = assemble_perturbed(base, 0.3, 2.0);
  const Eigen::MatrixXd kd = with_k.matrix() - base.matrix();
  for (int i = 0; i < base.size(); ++i)
    for (int j = 0; j < base.size(); ++j)
      CHECK(kd(i, j) == doctest::Approx(2.0 * pk.weight_abs(std::abs(i - j)))
                            .epsilon(1e-12));
}

TEST_CASE("mollification preserves constants exactly and affine maps away from the cut") {
  const ScalarField c = make_coefficient({"constant", {3.5}}, 1);
  const ScalarField cm = mollify_coefficient(c, 4, 1);
  Eigen::VectorXd x(1);
  for (double xv : {-1.0, 0.0, 0.3, 2.0}) {
    x << xv;
    CHECK(cm(x) == doctest::Approx(3.5).epsilon(1e-14));
  }

  const ScalarField aff = make_coefficient({"affine", {2.0, 3.0}}, 1);
  const ScalarField am = mollify_coefficient(aff, 8, 1);
  x << 0.5;
  CHECK(am(x) == doctest::Approx(3.5).epsilon(1e-12));

  // The kink fills in at the scale of the mollifier width.
  const ScalarField kink = make_coefficient({"kink", {0.0, 1.0, 0.5}}, 1);
  const double at_kink_2 = mollify_coefficient(kink, 2, 1)(Eigen::VectorXd::Constant(1, 0.5));
  const double at_kink_8 = mollify_coefficient(kink, 8, 1)(Eigen::VectorXd::Constant(1, 0.5));
  CHECK(at_kink_2 > 0.0);
  CHECK(at_kink_8 > 0.0);
  CHECK(at_kink_8 < at_kink_2);
  // Gaussian first absolute moment: E|Z| sigma = sqrt(2/pi) / k.
  CHECK(at_kink_8 ==
        doctest::Approx(std::sqrt(2.0 / 3.141592653589793) / 8.0).epsilon(1e-3));
  CHECK_THROWS_AS(mollify_coefficient(kink, 0, 1), std::invalid_argument);
}

TEST_CASE("positivity shift") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = -2.0;
  m(1, 1) = 5.0;
  CHECK(shift_for_positivity(m) == doctest::Approx(3.0).epsilon(1e-12));
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(3, 3) * 4.0;
  CHECK(shift_for_positivity(p) == doctest::Approx(1.0).epsilon(1e-12));
  const DirichletOperator wrapped = DirichletOperator::wrap(m, "diag test");
  CHECK(shift_for_positivity(wrapped) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(wrapped.description() == "diag test");
}

TEST_CASE("concurrent assembly from two threads agrees with serial") {
  const double h = 1.0 / 48.0;
  auto grid = interval_grid(1.0, h);
  const DirichletOperator serial = [&] {
    const LatticeKernel k = kernel_weights(1, 0.5, h, grid->lattice_diameter());
    return assemble_dirichlet(k, grid);
  }();
  Eigen::MatrixXd out1, out2;
  auto work = [&](Eigen::MatrixXd* dst) {
    const LatticeKernel k = kernel_weights(1, 0.5, h, grid->lattice_diameter());
    *dst = assemble_dirichlet(k, grid).matrix();
  };
  std::thread t1(work, &out1);
  std::thread t2(work, &out2);
  t1.join();
  t2.join();
  CHECK(out1 == serial.matrix());
  CHECK(out2 == serial.matrix());
}
