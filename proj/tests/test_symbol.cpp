#include <doctest.h>

#include <stdexcept>

#include <Eigen/Core>
#include <cmath>

#include "fracweyl/coefficients.hpp"
#include "fracweyl/domain.hpp"
#include "fracweyl/symbol.hpp"

using namespace fracweyl;

namespace {

const double pi = 3.141592653589793;

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

Domain lshape3() {
  return Domain::polygon({Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0),
                          Eigen::Vector2d(2, 1), Eigen::Vector2d(1, 1),
                          Eigen::Vector2d(1, 2), Eigen::Vector2d(0, 2)});
}

}  // namespace

TEST_CASE("symbol evaluation") {
  const PrincipalSymbol iso = PrincipalSymbol::isotropic(0.5);
  CHECK(iso.order() == doctest::Approx(1.0));
  CHECK(iso.evaluate(vec1(0.3), vec1(2.0)) == doctest::Approx(2.0));
  CHECK(iso.evaluate(vec1(0.3), vec1(-2.0)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(iso.evaluate(vec1(0.0), vec1(0.0)), std::domain_error);

  const PrincipalSymbol scaled =
      PrincipalSymbol::scaled(0.5, [](const Eigen::VectorXd& x) { return 1.0 + x(0); });
  CHECK(scaled.evaluate(vec1(1.0), vec1(3.0)) == doctest::Approx(6.0));

  Eigen::Matrix2d A;
  A << 4.0, 0.0, 0.0, 1.0;
  const PrincipalSymbol aniso = PrincipalSymbol::anisotropic(
      0.5, [A](const Eigen::VectorXd&) -> Eigen::MatrixXd { return A; });
  CHECK(aniso.evaluate(vec2(0, 0), vec2(1.0, 0.0)) == doctest::Approx(2.0));
  CHECK(aniso.evaluate(vec2(0, 0), vec2(0.0, 1.0)) == doctest::Approx(1.0));
}

TEST_CASE("hypothesis checks flag the expected properties") {
  const Domain d = Domain::interval(0.0, 1.0);
  const HypothesisReport ok = check_hypotheses(PrincipalSymbol::isotropic(0.5), d);
  CHECK(ok.even_ok);
  CHECK(ok.homogeneous_ok);
  CHECK(ok.ellipticity_constant == doctest::Approx(1.0).epsilon(1e-12));

  // A coefficient that changes sign breaks strong ellipticity.
  const PrincipalSymbol bad = PrincipalSymbol::scaled(
      0.5, [](const Eigen::VectorXd& x) { return x(0) - 0.5; });
  CHECK(check_hypotheses(bad, d).ellipticity_constant < 0.0);

  const Domain sq = Domain::rectangle(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
  Eigen::Matrix2d A;
  A << 4.0, 0.0, 0.0, 1.0;
  const HypothesisReport an = check_hypotheses(
      PrincipalSymbol::anisotropic(
          0.5, [A](const Eigen::VectorXd&) -> Eigen::MatrixXd { return A; }),
      sq);
  CHECK(an.even_ok);
  CHECK(an.homogeneous_ok);
  // Sampled minimum of (xi^T A xi)^a approaches the smallest eigenvalue^a
  // from above.
  CHECK(an.ellipticity_constant >= 1.0 - 1e-12);
  CHECK(an.ellipticity_constant == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("sphere quadrature measures") {
  double s1 = 0.0;
  for (double w : sphere_quadrature(1, 8).weights) s1 += w;
  CHECK(s1 == doctest::Approx(2.0));
  double s2 = 0.0;
  for (double w : sphere_quadrature(2, 64).weights) s2 += w;
  CHECK(s2 == doctest::Approx(2.0 * pi).epsilon(1e-12));
  double s3 = 0.0;
  for (double w : sphere_quadrature(3, 16).weights) s3 += w;
  CHECK(s3 == doctest::Approx(4.0 * pi).epsilon(1e-10));
}

// The reference constants below are frozen values of
//   C' = (1/(n (2 pi)^n)) Int_Omega Int_{|xi|=1} p0(x, xi)^{-n/2a} dw dx,
//   C  = C'^{-2a/n},
// evaluated in closed form for each configuration.

TEST_CASE("unit-rate interval: C' = C = 1") {
  const Domain d = Domain::interval(0.0, pi);
  for (double a : {0.25, 0.5, 0.75, 1.0}) {
    const WeylConstantResult r = weyl_constant(PrincipalSymbol::isotropic(a), d);
    CHECK(r.converged);
    CHECK(r.C_prime == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.C == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("unit interval: C = pi^{2a}") {
  const Domain d = Domain::interval(0.0, 1.0);
  const WeylConstantResult r = weyl_constant(PrincipalSymbol::isotropic(0.5), d);
  CHECK(r.C_prime == doctest::Approx(1.0 / pi).epsilon(1e-10));
  CHECK(r.C == doctest::Approx(pi).epsilon(1e-10));
}

TEST_CASE("scaled coefficient 1+x on (0,1), a = 1/2: C = pi/log 2") {
  const Domain d = Domain::interval(0.0, 1.0);
  const ScalarField phi = make_coefficient({"affine", {1.0, 1.0}}, 1);
  const WeylConstantResult r = weyl_constant(PrincipalSymbol::scaled(0.5, phi), d);
  CHECK(r.C_prime == doctest::Approx(0.2206356001526598).epsilon(1e-9));
  CHECK(r.C == doctest::Approx(4.532360141827194).epsilon(1e-9));
}

TEST_CASE("unit disk, a = 1/2: C' = 1/4, C = 2") {
  const Domain d = Domain::disk(Eigen::Vector2d(0, 0), 1.0);
  const WeylConstantResult r = weyl_constant(PrincipalSymbol::isotropic(0.5), d);
  CHECK(r.converged);
  CHECK(r.C_prime == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(r.C == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("volume-3 L-shape, a = 1/2: C = sqrt(4 pi / 3)") {
  const WeylConstantResult r =
      weyl_constant(PrincipalSymbol::isotropic(0.5), lshape3());
  CHECK(r.C_prime == doctest::Approx(3.0 / (4.0 * pi)).epsilon(1e-9));
  CHECK(r.C == doctest::Approx(2.046653415892977).epsilon(1e-9));
  CHECK(r.volume_used == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("anisotropic diag(4,1) on the unit square, a = 1/2: C = sqrt(8 pi)") {
  // Int_{S^1} (xi^T A xi)^{-1} dw = 2 pi / sqrt(det A) makes
  // C' = pi |Omega| / (2 (2 pi)^2 sqrt(det A)) = 1 / (8 pi).
  const Domain sq = Domain::rectangle(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
  const MatrixField A = make_matrix_coefficient({"diag", {4.0, 1.0}}, 2);
  const WeylConstantResult r =
      weyl_constant(PrincipalSymbol::anisotropic(0.5, A), sq);
  CHECK(r.C_prime == doctest::Approx(0.039788735772973836).epsilon(1e-9));
  CHECK(r.C == doctest::Approx(5.013256549262001).epsilon(1e-9));
}

TEST_CASE("coefficient family validation") {
  CHECK_THROWS_AS(make_coefficient({"nope", {1.0}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_coefficient({"constant", {}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_coefficient({"sinmod", {1.0, 0.5, 3.0, 1.0}}, 1),
                  std::invalid_argument);  // axis 1 needs dimension 2
  CHECK_THROWS_AS(make_matrix_coefficient({"diag", {4.0, 1.0}}, 1),
                  std::invalid_argument);
  const ScalarField kink = make_coefficient({"kink", {1.0, 1.0, 0.5}}, 1);
  CHECK(kink(vec1(0.5)) == doctest::Approx(1.0));
  CHECK(kink(vec1(0.0)) == doctest::Approx(1.5));
}
