#include "fracweyl/lattice_kernel.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "fracweyl/errors.hpp"

namespace fracweyl {

namespace {

std::mutex fftw_mutex;

struct FftwBuffer {
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;
  ~FftwBuffer() {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    if (plan) fftw_destroy_plan(plan);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

double multiplier_1d(double theta) { return 4.0 * std::pow(std::sin(0.5 * theta), 2); }

}  // namespace

double LatticeKernel::weight(const Eigen::VectorXi& offset) const {
  if (offset.size() != dim_)
    throw std::invalid_argument("LatticeKernel::weight: offset dimension mismatch");
  if (dim_ == 1) {
    const int m = std::abs(offset(0));
    return m <= cutoff_ ? weight_abs(m) : 0.0;
  }
  const int m1 = std::abs(offset(0));
  const int m2 = std::abs(offset(1));
  return (m1 <= cutoff_ && m2 <= cutoff_) ? weight_abs(m1, m2) : 0.0;
}

double LatticeKernel::total_mass() const {
  double s = 0.0;
  if (dim_ == 1) {
    s = base_[0];
    for (int m = 1; m <= cutoff_; ++m) s += 2.0 * base_[m];
  } else {
    for (int m1 = 0; m1 <= cutoff_; ++m1)
      for (int m2 = 0; m2 <= cutoff_; ++m2)
        s += (m1 ? 2.0 : 1.0) * (m2 ? 2.0 : 1.0) *
             base_[static_cast<size_t>(m1) * (cutoff_ + 1) + m2];
  }
  return scale_ * s;
}

LatticeKernel kernel_weights(int n, double a, double h, int cutoff, int transform_size) {
  if (n < 1 || n > 2) throw std::invalid_argument("kernel_weights: dimension must be 1 or 2");
  if (!(a > 0.0 && a <= 1.0))
    throw constraint_error("kernel_weights: order parameter a must lie in (0, 1]");
  if (!(h > 0.0)) throw std::invalid_argument("kernel_weights: spacing must be positive");
  if (cutoff < 1) throw std::invalid_argument("kernel_weights: cutoff must be >= 1");

  int L = transform_size > 0 ? transform_size : (n == 1 ? 1 << 16 : 1 << 10);
  if ((L & (L - 1)) != 0)
    throw std::invalid_argument("kernel_weights: transform size must be a power of two");
  if (L < 8 * cutoff)
    throw std::invalid_argument(
        "kernel_weights: transform size must be at least 8x the cutoff to control aliasing");

  LatticeKernel k;
  k.dim_ = n;
  k.a_ = a;
  k.h_ = h;
  k.cutoff_ = cutoff;
  k.transform_ = L;
  k.scale_ = std::pow(h, -2.0 * a);

  if (a == 1.0) {
    // Degenerate classical case: the multiplier is the exact symbol of the
    // second-difference stencil, so bypass the DFT and write it down.
    if (n == 1) {
      k.base_.assign(static_cast<size_t>(cutoff) + 1, 0.0);
      k.base_[0] = 2.0;
      k.base_[1] = -1.0;
    } else {
      k.base_.assign(static_cast<size_t>(cutoff + 1) * (cutoff + 1), 0.0);
      k.base_[0] = 4.0;
      k.base_[1] = -1.0;
      k.base_[static_cast<size_t>(cutoff) + 1] = -1.0;
    }
    return k;
  }

  const double two_pi = 2.0 * std::numbers::pi;
  if (n == 1) {
    FftwBuffer buf;
    {
      std::lock_guard<std::mutex> lock(fftw_mutex);
      buf.in = fftw_alloc_real(L);
      buf.out = fftw_alloc_complex(L / 2 + 1);
      buf.plan = fftw_plan_dft_r2c_1d(L, buf.in, buf.out, FFTW_ESTIMATE);
    }
    for (int i = 0; i < L; ++i) buf.in[i] = std::pow(multiplier_1d(two_pi * i / L), a);
    fftw_execute(buf.plan);
    k.base_.resize(cutoff + 1);
    double max_re = 0.0, max_im = 0.0;
    for (int m = 0; m <= cutoff; ++m) {
      k.base_[m] = buf.out[m][0] / L;
      max_re = std::max(max_re, std::abs(buf.out[m][0]));
      max_im = std::max(max_im, std::abs(buf.out[m][1]));
    }
    if (max_im > 1e-12 * max_re)
      throw numeric_error("kernel_weights: DFT produced a non-real coefficient");
  } else {
    FftwBuffer buf;
    const int Lc = L / 2 + 1;
    {
      std::lock_guard<std::mutex> lock(fftw_mutex);
      buf.in = fftw_alloc_real(static_cast<size_t>(L) * L);
      buf.out = fftw_alloc_complex(static_cast<size_t>(L) * Lc);
      buf.plan = fftw_plan_dft_r2c_2d(L, L, buf.in, buf.out, FFTW_ESTIMATE);
    }
    for (int i = 0; i < L; ++i) {
      const double s1 = multiplier_1d(two_pi * i / L);
      for (int j = 0; j < L; ++j)
        buf.in[static_cast<size_t>(i) * L + j] =
            std::pow(s1 + multiplier_1d(two_pi * j / L), a);
    }
    fftw_execute(buf.plan);
    k.base_.resize(static_cast<size_t>(cutoff + 1) * (cutoff + 1));
    double max_re = 0.0, max_im = 0.0;
    const double norm = static_cast<double>(L) * L;
    for (int m1 = 0; m1 <= cutoff; ++m1)
      for (int m2 = 0; m2 <= cutoff; ++m2) {
        const fftw_complex& c = buf.out[static_cast<size_t>(m1) * Lc + m2];
        k.base_[static_cast<size_t>(m1) * (cutoff + 1) + m2] = c[0] / norm;
        max_re = std::max(max_re, std::abs(c[0]));
        max_im = std::max(max_im, std::abs(c[1]));
      }
    if (max_im > 1e-12 * max_re)
      throw numeric_error("kernel_weights: DFT produced a non-real coefficient");
    // The multiplier is swap-symmetric; averaging removes the low-bit
    // asymmetry of the planned transform so the invariant holds exactly.
    for (int m1 = 0; m1 <= cutoff; ++m1)
      for (int m2 = m1 + 1; m2 <= cutoff; ++m2) {
        const size_t ij = static_cast<size_t>(m1) * (cutoff + 1) + m2;
        const size_t ji = static_cast<size_t>(m2) * (cutoff + 1) + m1;
        const double avg = 0.5 * (k.base_[ij] + k.base_[ji]);
        k.base_[ij] = avg;
        k.base_[ji] = avg;
      }
  }
  if (!(k.base_[0] > 0.0))
    throw numeric_error("kernel_weights: center weight is not positive");
  return k;
}

}  // namespace fracweyl
