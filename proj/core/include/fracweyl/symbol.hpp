#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>

#include "fracweyl/domain.hpp"

namespace fracweyl {

using ScalarField = std::function<double(const Eigen::VectorXd&)>;
using MatrixField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

enum class SymbolKind { Isotropic, Scaled, Anisotropic };

struct HypothesisReport;

// Principal symbol of a symmetric elliptic operator of order 2a, 0 < a <= 1:
//   isotropic    p0(x,xi) = |xi|^2a
//   scaled       p0(x,xi) = phi(x) |xi|^2a,      phi > 0
//   anisotropic  p0(x,xi) = (xi^T A(x) xi)^a,    A(x) symmetric positive definite
// Even and positively homogeneous of degree 2a in xi by construction.  The
// coefficient's continuity class is carried as metadata only.
class PrincipalSymbol {
 public:
  static PrincipalSymbol isotropic(double a);
  static PrincipalSymbol scaled(double a, ScalarField phi, std::string continuity = "");
  static PrincipalSymbol anisotropic(double a, MatrixField A, std::string continuity = "");

  double a() const { return a_; }
  double order() const { return 2.0 * a_; }
  SymbolKind kind() const { return kind_; }
  const std::string& continuity() const { return continuity_; }

  // Throws std::domain_error for xi = 0 (the symbol is homogeneous and is
  // never evaluated at the origin).
  double evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& xi) const;

 private:
  PrincipalSymbol(double a, SymbolKind kind) : a_(a), kind_(kind) {}

  // Signed variant without the positivity guards, so the hypothesis checker
  // can report a violation instead of aborting on it.
  double evaluate_raw(const Eigen::VectorXd& x, const Eigen::VectorXd& xi) const;

  friend HypothesisReport check_hypotheses(const PrincipalSymbol&, const Domain&, int,
                                           std::uint64_t);

  double a_;
  SymbolKind kind_;
  ScalarField phi_;
  MatrixField A_;
  std::string continuity_;
};

struct HypothesisReport {
  // min over samples of p0(x, xi) on |xi| = 1; must be positive for strong
  // ellipticity.
  double ellipticity_constant = 0.0;
  bool even_ok = false;
  bool homogeneous_ok = false;
  double max_even_violation = 0.0;
  double max_homogeneity_violation = 0.0;
  int samples = 0;
};

// Samples x in the domain and xi on the unit sphere to check evenness,
// homogeneity of degree 2a, and strong ellipticity.  Deterministic for a
// fixed seed.  Flags are set when the respective max relative violation is
// below 1e-10.  Report-only: a nonpositive coefficient sample surfaces as a
// nonpositive ellipticity_constant, not as an exception.
HypothesisReport check_hypotheses(const PrincipalSymbol& symbol, const Domain& domain,
                                  int samples = 10000, std::uint64_t seed = 20240817);

// Quadrature nodes and weights on the unit sphere S^{n-1}:
//   n = 1: the two points {-1, +1}, weight 1 each;
//   n = 2: `resolution` equispaced angles, weight 2*pi/resolution;
//   n = 3: Gauss-Legendre in the polar cosine (resolution points) times
//          2*resolution equispaced azimuths.
struct SphereQuadrature {
  int dimension = 0;
  std::vector<Eigen::VectorXd> nodes;
  std::vector<double> weights;
};

SphereQuadrature sphere_quadrature(int n, int resolution);

struct WeylConstantResult {
  double C_prime = 0.0;   // (1/(n (2 pi)^n)) Int_Omega Int_{|xi|=1} p0^{-n/2a}
  double C = 0.0;         // C_prime^{-2a/n}
  double volume_used = 0.0;
  bool converged = true;  // false if refinement changed C_prime by > 1e-6 rel
};

// Composed sphere x domain quadrature of the spectral constant.  Compares
// against a coarser resolution pair and flags non-convergence.
WeylConstantResult weyl_constant(const PrincipalSymbol& symbol, const Domain& domain,
                                 int sphere_resolution = 64, int domain_resolution = 256);

}  // namespace fracweyl
