#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fracweyl/domain.hpp"
#include "fracweyl/eigensolve.hpp"
#include "fracweyl/operators.hpp"
#include "fracweyl/snumbers.hpp"
#include "fracweyl/symbol.hpp"
#include "fracweyl/weylfit.hpp"

namespace fracweyl {

// One assembled-and-solved Dirichlet realization.  The spectrum is raw
// (unshifted); shift_applied records the Garding shift that was added before
// any positivity-sensitive postprocessing and already subtracted back out.
struct SpectrumRun {
  std::shared_ptr<const Grid> grid;
  Spectrum spectrum;
  double a = 0.0;
  double h = 0.0;
  int kernel_cutoff = 0;
  int transform_size = 0;
};

SpectrumRun run_spectrum(const Domain& domain, double a, double h,
                         const ScalarField& coefficient = nullptr,
                         bool want_vectors = false, int transform_size = 0);

struct ConvergenceRow {
  double a = 0.0;
  double h = 0.0;
  int n_interior = 0;
  double c_hat = 0.0;
  double dispersion = 0.0;
  double c_reference = 0.0;
  double abs_error = 0.0;
  double shift = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<Spectrum> spectra;  // parallel to rows, values only
  std::array<double, 2> window{0.05, 0.25};
};

// Weyl-constant recovery across a grid refinement ladder, one row per (a, h).
ConvergenceReport convergence_study(const Domain& domain,
                                    const std::vector<double>& a_values,
                                    const std::vector<double>& h_values,
                                    const ScalarField& coefficient = nullptr,
                                    std::array<double, 2> window = {0.05, 0.25});

struct SandwichLevel {
  std::string kind;  // "inner", "base", "outer"
  int level = 0;     // 0 for the base domain
  double radius = 0.0;
  int n_interior = 0;
  double c_hat = 0.0;
  double dispersion = 0.0;
  double c_quadrature = 0.0;
  double lambda_min = 0.0;
};

struct SandwichReport {
  // Ordered by domain inclusion, smallest first:
  // inner level 1, ..., inner level L, base, outer level L, ..., outer level 1.
  std::vector<SandwichLevel> levels;
  std::vector<Spectrum> spectra;  // parallel to levels, values only
  double max_eigen_violation = 0.0;  // over adjacent pairs: lambda_j(larger) - lambda_j(smaller)
  bool eigen_ok = false;
  bool fits_ordered = false;      // c_hat nonincreasing along inclusion, within dispersions
  bool quadrature_monotone = false;
  double shift = 0.0;
  double radius_base = 0.0;
};

// Eigenvalue/constant sandwich between eroded and dilated approximations of a
// domain, all sharing one lattice and one kernel so the discrete inclusions
// are exact principal-submatrix relations.
SandwichReport sandwich_study(const Domain& domain, double a, double h,
                              int levels, double radius_base,
                              const ScalarField& coefficient = nullptr);

struct PerturbationReport {
  WeylEstimate base_fit;
  WeylEstimate perturbed_fit;
  double delta = 0.0;      // |c_hat difference|
  double threshold = 0.0;  // 2 * (sum of dispersions)
  bool invariance_ok = false;
  double shift = 0.0;
  double a_prime = 0.0;
  double kappa = 0.0;
  int n_interior = 0;
  double control_shift = 0.0;        // requested constant-potential control
  double control_shift_error = 0.0;  // max_j |lambda_j(A+cI) - (lambda_j+c)|
  std::vector<double> base_values;
  std::vector<double> perturbed_values;
};

// The fitted Weyl constant must not move (beyond fit noise) under a
// lower-order perturbation kappa * kernel(a') + V.  A nonzero control_shift c
// additionally verifies that a constant potential translates the whole
// spectrum by exactly c.
PerturbationReport perturbation_study(const Domain& domain, double a, double h,
                                      double a_prime, double kappa,
                                      const ScalarField& potential,
                                      const ScalarField& coefficient = nullptr,
                                      double control_shift = 0.0);

// max_j |lambda_j(A + c I) - (lambda_j(A) + c)| for a constant potential c.
double constant_shift_error(const DirichletOperator& base, double c);

struct MollifyRow {
  int k = 0;
  double sup_coefficient_diff = 0.0;
  double opnorm_resolvent_diff = 0.0;
  double schatten_sup = 0.0;
};

struct MollifyReport {
  std::vector<MollifyRow> rows;
  bool opnorm_nonincreasing = false;
  bool schatten_nonincreasing = false;
  double opnorm_final_over_first = 0.0;
  double schatten_final_over_first = 0.0;
  double b = 0.0;  // resolvent shift, max(0, -lambda_min) + 1 over the family
  double p = 0.0;
};

// Resolvent distance between the rough-coefficient operator and its mollified
// approximations, k running over mollification indices.
MollifyReport mollification_study(const Domain& domain, double a, double h,
                                  const ScalarField& phi,
                                  const std::vector<int>& k_values,
                                  double p = 0.0);

struct BoundaryStudyResult {
  BoundaryExponentFit fit;
  double a = 0.0;
  double h = 0.0;
  int n_interior = 0;
  int eigenfunction = 1;
  bool used_krylov = false;
};

// Decay exponent of an eigenfunction near the boundary, |u| ~ dist^s.  The
// seed feeds the Krylov starting vector on large grids.
BoundaryStudyResult boundary_exponent_study(const Domain& domain, double a,
                                            double h, int which = 1,
                                            int krylov_threshold = 1024,
                                            unsigned long long seed = 20240817ULL);

struct SuiteCheckRow {
  std::string name;
  long trials = 0;
  long violations = 0;
  double max_violation = 0.0;
};

struct SnumberSuiteReport {
  std::vector<SuiteCheckRow> rows;
  bool all_ok = false;
  int seeds = 0;
  unsigned long long seed0 = 0;
};

// Randomized property suite for the s-number toolbox: composition bounds,
// Ky Fan inequalities, SVD versus symmetric-eigenvalue agreement.
SnumberSuiteReport snumber_suite(int seeds, int size_min, int size_max,
                                 unsigned long long seed0 = 20240817ULL);

struct InterlacingSuiteReport {
  long trials = 0;
  long violations = 0;
  double max_violation = 0.0;
  bool all_ok = false;
};

// Randomized Cauchy interlacing checks on principal submatrices.
InterlacingSuiteReport interlacing_suite(int seeds, int size_min, int size_max,
                                         unsigned long long seed0 = 20240817ULL);

}  // namespace fracweyl
