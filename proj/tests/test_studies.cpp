#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <memory>
#include <vector>

#include "fracweyl/coefficients.hpp"
#include "fracweyl/errors.hpp"
#include "fracweyl/studies.hpp"

using namespace fracweyl;

namespace {

constexpr double kPi = 3.14159265358979323846;

Domain lshape() {
  return Domain::polygon({Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0),
                          Eigen::Vector2d(2, 1), Eigen::Vector2d(1, 1),
                          Eigen::Vector2d(1, 2), Eigen::Vector2d(0, 2)});
}

}  // namespace

TEST_CASE("run_spectrum produces a complete positive spectrum") {
  const Domain dom = Domain::interval(0.0, kPi);
  const SpectrumRun run = run_spectrum(dom, 0.5, kPi / 128.0);
  CHECK(run.spectrum.values.size() == 127);
  CHECK(run.grid->size() == 127);
  CHECK(run.spectrum.values(0) > 0.0);
  CHECK(run.a == 0.5);
  CHECK(run.spectrum.meta.a == 0.5);
  CHECK(run.spectrum.meta.dimension == 1);
  CHECK(run.spectrum.meta.size == 127);
  CHECK_FALSE(run.spectrum.vectors.has_value());
  for (int j = 1; j < 127; ++j)
    CHECK(run.spectrum.values(j) >= run.spectrum.values(j - 1));

  const SpectrumRun withv = run_spectrum(dom, 0.5, kPi / 32.0, nullptr, true);
  REQUIRE(withv.spectrum.vectors.has_value());
  CHECK(withv.spectrum.vectors->cols() == withv.spectrum.values.size());
}

TEST_CASE("convergence rows approach the reference constant") {
  const Domain dom = Domain::interval(0.0, kPi);
  const ConvergenceReport rep =
      convergence_study(dom, {0.5}, {kPi / 512.0, kPi / 2048.0});
  REQUIRE(rep.rows.size() == 2);
  REQUIRE(rep.spectra.size() == 2);
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].c_reference == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.rows[i].abs_error ==
          doctest::Approx(std::abs(rep.rows[i].c_hat - 1.0)).epsilon(1e-12));
    CHECK(rep.spectra[i].values.size() == rep.rows[i].n_interior);
    CHECK_FALSE(rep.spectra[i].vectors.has_value());
  }
  CHECK(rep.rows[1].abs_error < rep.rows[0].abs_error);
  CHECK(rep.rows[1].abs_error < 0.02);

  CHECK_THROWS_AS(convergence_study(dom, {}, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_study(dom, {0.5}, {}), std::invalid_argument);
}

TEST_CASE("sandwich levels are ordered and interlaced") {
  Domain dom = lshape();
  const SandwichReport rep = sandwich_study(dom, 0.5, 1.0 / 8.0, 2, 0.25);
  REQUIRE(rep.levels.size() == 5);
  CHECK(rep.levels[0].kind == "inner");
  CHECK(rep.levels[0].level == 1);
  CHECK(rep.levels[1].kind == "inner");
  CHECK(rep.levels[1].level == 2);
  CHECK(rep.levels[2].kind == "base");
  CHECK(rep.levels[2].level == 0);
  CHECK(rep.levels[3].kind == "outer");
  CHECK(rep.levels[3].level == 2);
  CHECK(rep.levels[4].kind == "outer");
  CHECK(rep.levels[4].level == 1);
  CHECK(rep.spectra.size() == 5);

  // Inclusion gives more interior nodes as the domain grows.
  for (size_t i = 1; i < rep.levels.size(); ++i)
    CHECK(rep.levels[i].n_interior >= rep.levels[i - 1].n_interior);
  CHECK(rep.eigen_ok);
  CHECK(rep.max_eigen_violation <= 1e-10);
  CHECK(rep.radius_base == 0.25);

  CHECK_THROWS_AS(sandwich_study(dom, 0.5, 1.0 / 8.0, 0, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(sandwich_study(dom, 0.5, 1.0 / 8.0, 2, -0.1), std::invalid_argument);
}

TEST_CASE("perturbation study carries the control shift exactly") {
  const Domain dom = Domain::interval(0.0, kPi);
  const ScalarField potential = make_coefficient({"sinmod", {0.0, 0.3, 3.0}}, 1);
  const PerturbationReport rep =
      perturbation_study(dom, 0.5, kPi / 128.0, 0.3, 1.0, potential, nullptr, 0.7);
  CHECK(rep.n_interior == 127);
  CHECK(rep.a_prime == 0.3);
  CHECK(rep.kappa == 1.0);
  CHECK(rep.base_values.size() == 127);
  CHECK(rep.perturbed_values.size() == 127);
  CHECK(rep.delta == doctest::Approx(std::abs(rep.base_fit.C_hat -
                                              rep.perturbed_fit.C_hat))
                         .epsilon(1e-12));
  CHECK(rep.threshold ==
        doctest::Approx(2.0 * (rep.base_fit.dispersion + rep.perturbed_fit.dispersion))
            .epsilon(1e-12));
  CHECK(rep.control_shift == 0.7);
  CHECK(rep.control_shift_error <= 1e-10);

  CHECK_THROWS_AS(
      perturbation_study(dom, 0.5, kPi / 128.0, 0.6, 1.0, potential),
      constraint_error);
}

TEST_CASE("constant potential shifts the spectrum rigidly") {
  const Domain dom = Domain::interval(0.0, 1.0);
  const double h = 1.0 / 64.0;
  auto grid = std::make_shared<Grid>(grid_points(dom, h));
  const LatticeKernel kernel = kernel_weights(1, 0.5, h, grid->lattice_diameter());
  const DirichletOperator op = assemble_dirichlet(kernel, grid);
  CHECK(constant_shift_error(op, 2.5) <= 1e-10);
  CHECK(constant_shift_error(op, -1.0) <= 1e-10);
}

TEST_CASE("mollification rows shrink along the index ladder") {
  const Domain dom = Domain::interval(0.0, 1.0);
  const ScalarField phi = make_coefficient({"kink", {1.0, 1.0, 0.5}}, 1);
  const MollifyReport rep =
      mollification_study(dom, 0.5, 1.0 / 128.0, phi, {2, 4, 8});
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].k == 2);
  CHECK(rep.rows[2].k == 8);
  CHECK(rep.p == 1.0);
  CHECK(rep.b > 0.0);
  CHECK(rep.opnorm_nonincreasing);
  CHECK(rep.schatten_nonincreasing);
  CHECK(rep.opnorm_final_over_first < 1.0);
  for (const auto& row : rep.rows) {
    CHECK(row.sup_coefficient_diff > 0.0);
    CHECK(row.opnorm_resolvent_diff > 0.0);
    CHECK(row.schatten_sup >= row.opnorm_resolvent_diff);
  }

  CHECK_THROWS_AS(mollification_study(dom, 0.5, 1.0 / 128.0, phi, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(mollification_study(dom, 0.5, 1.0 / 128.0, nullptr, {2, 4}),
                  std::invalid_argument);
}

TEST_CASE("boundary study agrees between dense and Krylov paths") {
  const Domain dom = Domain::interval(0.0, 1.0);
  const double h = 1.0 / 256.0;
  const BoundaryStudyResult dense = boundary_exponent_study(dom, 0.5, h, 1, 1024);
  CHECK_FALSE(dense.used_krylov);
  const BoundaryStudyResult krylov = boundary_exponent_study(dom, 0.5, h, 1, 16);
  CHECK(krylov.used_krylov);
  CHECK(dense.fit.exponent ==
        doctest::Approx(krylov.fit.exponent).epsilon(1e-6));
  CHECK(dense.n_interior == 255);
  CHECK(dense.eigenfunction == 1);
}

TEST_CASE("randomized s-number suite passes clean") {
  const SnumberSuiteReport rep = snumber_suite(50, 5, 20, 20240817ULL);
  CHECK(rep.all_ok);
  CHECK(rep.seeds == 50);
  REQUIRE(!rep.rows.empty());
  for (const auto& row : rep.rows) {
    CHECK(row.violations == 0);
    CHECK(row.trials >= 50);
  }

  const SnumberSuiteReport again = snumber_suite(50, 5, 20, 20240817ULL);
  REQUIRE(again.rows.size() == rep.rows.size());
  for (size_t i = 0; i < rep.rows.size(); ++i)
    CHECK(again.rows[i].max_violation == rep.rows[i].max_violation);

  CHECK_THROWS_AS(snumber_suite(0, 5, 20), std::invalid_argument);
  CHECK_THROWS_AS(snumber_suite(10, 20, 5), std::invalid_argument);
}

TEST_CASE("randomized interlacing suite passes clean") {
  const InterlacingSuiteReport rep = interlacing_suite(50, 5, 20, 20240817ULL);
  CHECK(rep.all_ok);
  CHECK(rep.trials == 50);
  CHECK(rep.violations == 0);
  CHECK_THROWS_AS(interlacing_suite(-1, 5, 20), std::invalid_argument);
}
