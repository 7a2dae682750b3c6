#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

namespace fracweyl {

// Singular values in nonincreasing order; s_j(B) = mu_j(B*B)^(1/2).
struct SValues {
  Eigen::VectorXd values;
  int rows = 0;
  int cols = 0;
};

// SVD of an arbitrary real matrix.  For square symmetric input the result is
// verified internally against the sorted absolute eigenvalues.
SValues singular_values(const Eigen::MatrixXd& B);

// Weak Schatten quasi-norm sup_j j^{1/p} s_j (1-based j).
double weak_schatten_quasinorm(const SValues& s, double p);

struct CompositionReport {
  double max_ratio = 0.0;  // max_j s_j(EBF) / (|E| s_j(B) |F|)
  bool ok = false;         // max_ratio <= 1 + 1e-10
};

// Checks s_j(E B F) <= |E| s_j(B) |F| for all j.
CompositionReport check_composition_bound(const Eigen::MatrixXd& E,
                                          const Eigen::MatrixXd& B,
                                          const Eigen::MatrixXd& F);

struct KyFanReport {
  bool additive_ok = false;
  bool multiplicative_ok = false;
  double max_additive_violation = 0.0;
  double max_multiplicative_violation = 0.0;
  std::optional<std::pair<int, int>> additive_witness;        // (j, k), 1-based
  std::optional<std::pair<int, int>> multiplicative_witness;
};

// Ky Fan inequalities over all index pairs:
//   s_{j+k-1}(B + B') <= s_j(B) + s_k(B')
//   s_{j+k-1}(B B')   <= s_j(B) s_k(B')
// Violations are relative to the right-hand side; tolerance 1e-10.
KyFanReport kyfan_additive_check(const Eigen::MatrixXd& B, const Eigen::MatrixXd& Bp);

struct KyFanAsymptoticRow {
  int index = 0;       // position in the family
  double C_M = 0.0;    // fitted limit of j^{1/p} s_j(B_M)
  double c_M = 0.0;    // sup_j j^{1/p} s_j(B'_M)
};

struct KyFanAsymptoticReport {
  std::vector<KyFanAsymptoticRow> rows;
  double C_full = 0.0;  // fitted limit for B = B_M + B'_M
  bool splits_ok = false;       // every B_M + B'_M reproduces the same B
  bool trend_consistent = false;  // |C_M - C_full| <= c_M + fit dispersion
};

// Demonstrates the perturbation-stability argument behind the asymptotic
// constant: if the tails c_M vanish, the heads' constants C_M converge to the
// constant of B.  All splittings must sum to the same matrix.
KyFanAsymptoticReport kyfan_asymptotic_demo(const std::vector<Eigen::MatrixXd>& heads,
                                            const std::vector<Eigen::MatrixXd>& tails,
                                            double p);

struct ResolventDiffRow {
  int index = 0;          // position in the mollified family
  double opnorm_diff = 0.0;   // s_1 of the resolvent difference
  double schatten_sup = 0.0;  // sup_j j^{1/p} s_j of the difference
};

// For each approximant A_k, forms the resolvent difference through the
// factored identity
//   (A + b)^{-1} - (A_k + b)^{-1} = (A_k + b)^{-1} (A_k - A) (A + b)^{-1},
// never by naive subtraction, and tabulates operator norm and weak Schatten
// statistics.  Requires A + bI and every A_k + bI positive definite.
std::vector<ResolventDiffRow> resolvent_difference_study(
    const Eigen::MatrixXd& A, const std::vector<Eigen::MatrixXd>& approximants,
    double b, double p);

}  // namespace fracweyl
