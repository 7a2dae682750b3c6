#pragma once

#include <Eigen/Core>
#include <vector>

namespace fracweyl {

// Translation-invariant kernel of the fractional lattice Laplacian
// (-Delta_h)^a on (h Z)^n: the Fourier coefficients
//   c_m = h^{-2a} (2 pi)^{-n} Int_{[-pi,pi]^n} (sum_i 4 sin^2(theta_i/2))^a
//         e^{-i m.theta} d theta,
// computed by a DFT of the sampled multiplier.  For a = 1 the kernel
// degenerates to the classical second-difference stencil.  For 0 < a < 1 the
// weights satisfy c_0 > 0 and c_m < 0 for every m != 0.
class LatticeKernel {
 public:
  int dimension() const { return dim_; }
  double a() const { return a_; }
  double spacing() const { return h_; }
  int cutoff() const { return cutoff_; }
  int transform_size() const { return transform_; }

  // Weight for an arbitrary offset; zero beyond the cutoff (truncation).
  double weight(const Eigen::VectorXi& offset) const;
  // 1D accessor, |m| <= cutoff.
  double weight_abs(int m) const { return scale_ * base_[m]; }
  // 2D accessor, 0 <= m1, m2 <= cutoff.
  double weight_abs(int m1, int m2) const {
    return scale_ * base_[static_cast<size_t>(m1) * (cutoff_ + 1) + m2];
  }
  double center() const { return weight_abs(0); }

  // Sum of all stored weights, sum_{|m|_inf <= cutoff} c_m.  The full-lattice
  // sum is exactly zero (the multiplier vanishes at theta = 0), so this
  // measures the truncated tail.
  double total_mass() const;

 private:
  friend LatticeKernel kernel_weights(int, double, double, int, int);

  int dim_ = 0;
  double a_ = 0.0;
  double h_ = 0.0;
  int cutoff_ = 0;
  int transform_ = 0;
  double scale_ = 1.0;               // h^{-2a}
  std::vector<double> base_;         // unit-spacing weights, nonnegative octant
};

// Computes the kernel up to Chebyshev radius `cutoff`.  `transform_size` is
// the DFT length per axis (defaults: 2^16 in 1D, 2^10 in 2D) and must be a
// power of two with transform_size >= 8 * cutoff to keep aliasing below the
// coefficient tail.
LatticeKernel kernel_weights(int n, double a, double h, int cutoff,
                             int transform_size = 0);

}  // namespace fracweyl
