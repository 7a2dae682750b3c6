#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>

#include "fracweyl/domain.hpp"
#include "fracweyl/eigensolve.hpp"
#include "fracweyl/grid.hpp"
#include "fracweyl/operators.hpp"

namespace fracweyl {

struct WeylEstimate {
  double C_hat = 0.0;      // median of g_j = lambda_j j^{-2a/n} over the window
  double dispersion = 0.0; // interquartile range of g_j over the window
  int j_min = 0;           // window bounds, 1-based inclusive
  int j_max = 0;
  double a = 0.0;
  int dimension = 0;
};

// Median-based fit of the asymptotic constant over a relative index window
// (default: from 5% to 25% of the spectrum).  Requires a positive spectrum
// and a window of at least 8 indices.
WeylEstimate weyl_fit(const Spectrum& spectrum, double a, int dimension,
                      std::pair<double, double> window = {0.05, 0.25});

// Same fit over an explicit 1-based index window [j_min, j_max]; invariant
// under appending eigenvalues above the window.
WeylEstimate weyl_fit_window(const Spectrum& spectrum, double a, int dimension,
                             int j_min, int j_max);

// Dual route through the counting function: fits C0 as the median of
// N(t) t^{-p}, p = n/2a, over geometrically spaced t inside the default
// window's eigenvalue range.  The Weyl constant of the lambda scaling is
// C0^{-1/p}.
double weyl_from_counting(const Spectrum& spectrum, double a, int dimension,
                          int t_samples = 64);

struct LemmaA1Report {
  bool mu_monotone = false;       // mu_j nonincreasing iff lambda_j nondecreasing
  bool counting_duality = false;  // N(lambda_j) >= j for every j
  double mu_constant = 0.0;       // fitted C0^{1/p} from mu_j j^{1/p}
  double lambda_constant = 0.0;   // fitted C0^{-1/p} from lambda_j j^{-1/p}
  double counting_constant = 0.0; // fitted C0 from N(lambda_j) lambda_j^{-p}
  double max_inconsistency = 0.0; // worst algebraic mismatch between the three
  double dispersion = 0.0;        // IQR of the mu-scaled sequence
  bool consistent = false;
};

// Cross-checks the three equivalent power-law readings of a spectrum:
// mu_j = 1/(lambda_j + b) against lambda_j and against the counting function.
// p > 0; requires lambda_j + b > 0.
LemmaA1Report lemmaA1_crosscheck(const Spectrum& spectrum, double b, double p);

struct MonotonicityReport {
  bool ok = false;
  double max_violation = 0.0;  // max over j of lambda_j(full) - lambda_j(sub)
  int compared = 0;
};

// Restricting to fewer nodes cannot lower eigenvalues: checks
// lambda_j(submatrix) >= lambda_j(full) for the principal submatrix on
// `kept` (0-based row/column indices).  Tolerance 1e-10 relative to the
// matrix scale.
MonotonicityReport domain_monotonicity_check(const Eigen::MatrixXd& matrix,
                                             const std::vector<int>& kept);

// <A v, v> / <v, v>; rejects v = 0.
double rayleigh_quotient(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& v);
double rayleigh_quotient(const DirichletOperator& op, const Eigen::VectorXd& v);

struct BoundaryExponentFit {
  double exponent = 0.0;
  double d_min = 0.0;
  double d_max = 0.0;
  int nodes_used = 0;
};

// Least-squares slope of log |u| against log dist(x, boundary) over grid
// nodes in a boundary strip with d in [2h, 0.1 diam], for the eigenvector at
// 1-based index `which` of a spectrum computed with vectors.
BoundaryExponentFit boundary_exponent(const Spectrum& spectrum, const Grid& grid,
                                      const Domain& domain, int which = 1);

}  // namespace fracweyl
