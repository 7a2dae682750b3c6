#include <doctest.h>

#include <stdexcept>

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "fracweyl/domain.hpp"
#include "fracweyl/grid.hpp"
#include "fracweyl/weylfit.hpp"

using namespace fracweyl;

namespace {

Spectrum power_law(int n, double C, double exponent) {
  Spectrum s;
  s.values.resize(n);
  for (int j = 1; j <= n; ++j) s.values(j - 1) = C * std::pow(j, exponent);
  return s;
}

}  // namespace

TEST_CASE("exact power law is fitted with zero dispersion") {
  const Spectrum s = power_law(400, 2.5, 1.0);
  const WeylEstimate fit = weyl_fit(s, 0.5, 1);
  CHECK(fit.C_hat == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(fit.dispersion < 1e-12);
  CHECK(fit.j_min == 20);
  CHECK(fit.j_max == 100);
  CHECK(fit.a == 0.5);
  CHECK(fit.dimension == 1);

  const Spectrum s2 = power_law(400, 0.75, 0.5);
  const WeylEstimate fit2 = weyl_fit(s2, 0.5, 2);
  CHECK(fit2.C_hat == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("fit is equivariant under scaling") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.9, 1.1);
  Spectrum s = power_law(300, 1.0, 1.0);
  for (int j = 0; j < 300; ++j) s.values(j) *= u(rng);
  std::sort(s.values.data(), s.values.data() + s.values.size());

  const WeylEstimate base = weyl_fit(s, 0.5, 1);
  Spectrum scaled = s;
  scaled.values *= 7.0;
  const WeylEstimate mult = weyl_fit(scaled, 0.5, 1);
  CHECK(mult.C_hat == doctest::Approx(7.0 * base.C_hat).epsilon(1e-13));
  CHECK(mult.dispersion == doctest::Approx(7.0 * base.dispersion).epsilon(1e-12));
}

TEST_CASE("window fit ignores eigenvalues appended above the window") {
  const Spectrum s = power_law(200, 1.3, 1.0);
  const WeylEstimate fit = weyl_fit_window(s, 0.5, 1, 10, 50);

  Spectrum longer = s;
  longer.values.conservativeResize(260);
  for (int j = 201; j <= 260; ++j) longer.values(j - 1) = 1.3 * j + 100.0;
  const WeylEstimate fit2 = weyl_fit_window(longer, 0.5, 1, 10, 50);
  CHECK(fit.C_hat == fit2.C_hat);
  CHECK(fit.dispersion == fit2.dispersion);
  CHECK(fit.j_min == 10);
  CHECK(fit.j_max == 50);
}

TEST_CASE("counting-function route inverts the lambda fit") {
  const Spectrum s = power_law(500, 2.0, 1.0);
  // lambda_j = 2 j means N(t) = floor(t/2), so C0 = 1/2 up to floor effects.
  const double C0 = weyl_from_counting(s, 0.5, 1);
  CHECK(C0 == doctest::Approx(0.5).epsilon(0.02));
  const WeylEstimate fit = weyl_fit(s, 0.5, 1);
  CHECK(std::pow(C0, -1.0) == doctest::Approx(fit.C_hat).epsilon(0.02));
}

TEST_CASE("fit guards") {
  Spectrum tiny = power_law(10, 1.0, 1.0);
  CHECK_THROWS_AS(weyl_fit(tiny, 0.5, 1), std::invalid_argument);

  Spectrum negative = power_law(100, 1.0, 1.0);
  negative.values(0) = -1.0;
  CHECK_THROWS_AS(weyl_fit(negative, 0.5, 1), std::invalid_argument);

  const Spectrum ok = power_law(100, 1.0, 1.0);
  CHECK_THROWS_AS(weyl_fit(ok, 0.5, 1, {0.25, 0.05}), std::invalid_argument);
  CHECK_THROWS_AS(weyl_fit_window(ok, 0.5, 1, 40, 45), std::invalid_argument);
  CHECK_THROWS_AS(weyl_fit_window(ok, 0.5, 1, 90, 120), std::invalid_argument);
  CHECK_THROWS_AS(weyl_fit(ok, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(weyl_fit(ok, 0.5, 0), std::invalid_argument);
}

TEST_CASE("three readings of an exact power law agree to machine precision") {
  // With 400 eigenvalues the fitting window has odd length, so the medians
  // land on exact sequence elements and the mismatch vanishes identically.
  {
    const Spectrum s = power_law(400, 1.0, 1.0);
    const LemmaA1Report rep = lemmaA1_crosscheck(s, 0.0, 1.0);
    CHECK(rep.mu_monotone);
    CHECK(rep.counting_duality);
    CHECK(rep.mu_constant == 1.0);
    CHECK(rep.lambda_constant == 1.0);
    CHECK(rep.counting_constant == 1.0);
    CHECK(rep.max_inconsistency == 0.0);
    CHECK(rep.consistent);
  }
  {
    const Spectrum s = power_law(400, 2.0, 1.0);
    const LemmaA1Report rep = lemmaA1_crosscheck(s, 0.0, 1.0);
    CHECK(rep.mu_constant == 0.5);
    CHECK(rep.lambda_constant == 2.0);
    CHECK(rep.counting_constant == 0.5);
    CHECK(rep.max_inconsistency == 0.0);
    CHECK(rep.consistent);
  }
  {
    const Spectrum s = power_law(400, 3.0, 0.5);
    const LemmaA1Report rep = lemmaA1_crosscheck(s, 0.0, 2.0);
    CHECK(rep.lambda_constant == 3.0);
    CHECK(rep.counting_constant == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(rep.max_inconsistency == 0.0);
    CHECK(rep.consistent);
  }
}

TEST_CASE("crosscheck respects the shift and rejects bad input") {
  const Spectrum s = power_law(400, 1.0, 1.0);
  const LemmaA1Report shifted = lemmaA1_crosscheck(s, 5.0, 1.0);
  CHECK(shifted.mu_monotone);
  CHECK(shifted.counting_duality);

  CHECK_THROWS_AS(lemmaA1_crosscheck(s, 0.0, 0.0), std::invalid_argument);
  Spectrum bad = s;
  bad.values(0) = -10.0;
  CHECK_THROWS_AS(lemmaA1_crosscheck(bad, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("domain monotonicity of principal submatrices") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd B(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) B(i, j) = u(rng);
  const Eigen::MatrixXd A = 0.5 * (B + B.transpose());

  const MonotonicityReport rep = domain_monotonicity_check(A, {0, 2, 3, 7, 8, 11});
  CHECK(rep.ok);
  CHECK(rep.compared == 6);
  CHECK(rep.max_violation <= 1e-10 * A.cwiseAbs().maxCoeff());

  const MonotonicityReport all = domain_monotonicity_check(A, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
  CHECK(all.ok);
  CHECK(all.compared == 12);

  CHECK_THROWS_AS(domain_monotonicity_check(A, {}), std::invalid_argument);
  CHECK_THROWS_AS(domain_monotonicity_check(A, {0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(domain_monotonicity_check(A, {0, 12}), std::invalid_argument);
}

TEST_CASE("rayleigh quotient") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
  A.diagonal() << 1.0, 2.0, 3.0;
  Eigen::VectorXd v(3);
  v << 1.0, 1.0, 0.0;
  CHECK(rayleigh_quotient(A, v) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(rayleigh_quotient(A, Eigen::VectorXd::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(rayleigh_quotient(A, Eigen::VectorXd::Ones(4)), std::invalid_argument);
}

TEST_CASE("boundary exponent recovers a planted power of the distance") {
  const Domain dom = Domain::interval(0.0, 1.0);
  const double h = 1.0 / 256.0;
  const Grid grid = grid_points(dom, h);

  Spectrum s;
  s.values = Eigen::VectorXd::Ones(grid.size());
  Eigen::MatrixXd vecs = Eigen::MatrixXd::Zero(grid.size(), grid.size());
  const double planted = 0.7;
  for (int i = 0; i < grid.size(); ++i) {
    const double d = dom.boundary_distance(grid.node(i));
    vecs(i, 0) = std::pow(d, planted);
  }
  s.vectors = vecs;

  const BoundaryExponentFit fit = boundary_exponent(s, grid, dom, 1);
  CHECK(fit.exponent == doctest::Approx(planted).epsilon(0.02));
  CHECK(fit.nodes_used > 10);
  CHECK(fit.d_min >= 2.0 * h - 1e-15);
  CHECK(fit.d_max <= 0.1 * dom.diameter() + 1e-15);

  Spectrum no_vectors;
  no_vectors.values = s.values;
  CHECK_THROWS_AS(boundary_exponent(no_vectors, grid, dom, 1), std::invalid_argument);
  CHECK_THROWS_AS(boundary_exponent(s, grid, dom, 0), std::invalid_argument);
  CHECK_THROWS_AS(boundary_exponent(s, grid, dom, grid.size() + 1), std::invalid_argument);
}

TEST_CASE("equal-volume domains share the asymptotic constant") {
  // A thin rectangle and the unit square have the same volume, so the fitted
  // constants agree within the combined sampling dispersions.
  const double h = 1.0 / 16.0;
  const Domain square = Domain::rectangle(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
  const Domain thin = Domain::rectangle(Eigen::Vector2d(0, 0), Eigen::Vector2d(0.5, 2));

  auto fit_for = [h](const Domain& dom) {
    auto grid = std::make_shared<Grid>(grid_points(dom, h));
    const LatticeKernel kernel = kernel_weights(2, 0.5, h, grid->lattice_diameter());
    const DirichletOperator op = assemble_dirichlet(kernel, grid);
    const Spectrum s = eigenvalues_symmetric(op.matrix());
    return weyl_fit(s, 0.5, 2);
  };
  const WeylEstimate f1 = fit_for(square);
  const WeylEstimate f2 = fit_for(thin);
  CHECK(std::abs(f1.C_hat - f2.C_hat) <= f1.dispersion + f2.dispersion);
}
