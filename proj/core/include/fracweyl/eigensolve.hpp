#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "fracweyl/grid.hpp"
#include "fracweyl/lattice_kernel.hpp"

namespace fracweyl {

struct SpectrumMeta {
  int size = 0;
  int dimension = 0;
  double a = 0.0;
  double h = 0.0;
  double shift = 0.0;
  std::string domain;
};

// Eigenvalues in nondecreasing order; eigenvectors (as columns, matching
// order) only when requested.
struct Spectrum {
  Eigen::VectorXd values;
  std::optional<Eigen::MatrixXd> vectors;
  SpectrumMeta meta;
};

// Dense symmetric eigensolve (divide-and-conquer).  The input must be
// symmetric to a relative 1e-12; deterministic.
Spectrum eigenvalues_symmetric(const Eigen::MatrixXd& matrix, bool want_vectors = false);

using Matvec = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Lanczos with full reorthogonalization for the lowest `count` eigenvalues of
// a symmetric operator given only through its matvec.  Verifies symmetry on
// random probe vectors (relative 1e-8) and is deterministic for a fixed seed.
Spectrum partial_eigenvalues(const Matvec& apply, int n, int count, std::uint64_t seed,
                             bool want_vectors = false);

// FFT-based application of a translation-invariant kernel restricted to the
// grid: embed into the bounding lattice box with exterior zeros, convolve,
// restrict.  Matches the assembled dense matrix product to relative 1e-12.
class FastConvolver {
 public:
  FastConvolver(const LatticeKernel& kernel, const Grid& grid);
  ~FastConvolver();
  FastConvolver(const FastConvolver&) = delete;
  FastConvolver& operator=(const FastConvolver&) = delete;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  int size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Eigen::VectorXd fast_matvec(const LatticeKernel& kernel, const Grid& grid,
                            const Eigen::VectorXd& v);

// Counting function N(t) = #{j : lambda_j <= t} for a nonnegative spectrum.
int counting_function(const Spectrum& spectrum, double t);

}  // namespace fracweyl
