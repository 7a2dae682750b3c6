#include "fracweyl/eigensolve.hpp"

#include <fftw3.h>
#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <vector>

#include "fracweyl/errors.hpp"

namespace fracweyl {

namespace {

std::mutex fftw_mutex;

void require_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("eigenvalues_symmetric: matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw std::invalid_argument("eigenvalues_symmetric: matrix is not symmetric");
}

}  // namespace

Spectrum eigenvalues_symmetric(const Eigen::MatrixXd& matrix, bool want_vectors) {
  require_symmetric(matrix);
  const int n = static_cast<int>(matrix.rows());
  Eigen::MatrixXd work = matrix;
  Eigen::VectorXd w(n);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n,
                                  work.data(), n, w.data());
  if (info != 0)
    throw numeric_error("eigenvalues_symmetric: dsyevd failed with info=" +
                        std::to_string(info));
  Spectrum sp;
  sp.values = std::move(w);
  if (want_vectors) sp.vectors = std::move(work);
  sp.meta.size = n;
  return sp;
}

Spectrum partial_eigenvalues(const Matvec& apply, int n, int count, std::uint64_t seed,
                             bool want_vectors) {
  if (!apply) throw std::invalid_argument("partial_eigenvalues: null matvec");
  if (n < 1 || count < 1 || count > n)
    throw std::invalid_argument("partial_eigenvalues: need 1 <= count <= n");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vec = [&]() {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    return v;
  };

  // Probe symmetry: <Au, w> must equal <u, Aw>.
  {
    const Eigen::VectorXd u = random_vec(), w = random_vec();
    const Eigen::VectorXd Au = apply(u), Aw = apply(w);
    const double lhs = Au.dot(w), rhs = u.dot(Aw);
    const double scale = std::max({1.0, Au.norm() * w.norm(), u.norm() * Aw.norm()});
    if (std::abs(lhs - rhs) > 1e-8 * scale)
      throw std::invalid_argument("partial_eigenvalues: operator is not symmetric");
  }

  const int mmax = std::min(n, std::max(4 * count + 40, 300));
  Eigen::MatrixXd V(n, mmax);
  std::vector<double> alpha, beta;  // beta[j] couples v_j and v_{j+1}
  Eigen::VectorXd v = random_vec();
  v.normalize();
  V.col(0) = v;

  double norm_estimate = 1.0;
  Eigen::VectorXd ritz_prev;
  int m = 0;
  Eigen::MatrixXd small_vecs;
  Eigen::VectorXd small_vals;

  auto tridiag_eigs = [&](int k, bool vectors) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < k) {
        T(i, i + 1) = beta[i];
        T(i + 1, i) = beta[i];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        T, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    small_vals = es.eigenvalues();
    if (vectors) small_vecs = es.eigenvectors();
  };

  while (m < mmax) {
    Eigen::VectorXd w = apply(V.col(m));
    if (m > 0) w -= beta[m - 1] * V.col(m - 1);
    const double a = w.dot(V.col(m));
    alpha.push_back(a);
    w -= a * V.col(m);
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass)
      w -= V.leftCols(m + 1) * (V.leftCols(m + 1).transpose() * w);
    double b = w.norm();
    ++m;
    if (m == mmax) break;
    if (b < 1e-13 * norm_estimate) {
      // Invariant subspace found; continue in a fresh random direction.
      Eigen::VectorXd r = random_vec();
      for (int pass = 0; pass < 2; ++pass)
        r -= V.leftCols(m) * (V.leftCols(m).transpose() * r);
      const double rn = r.norm();
      if (rn < 1e-12) break;
      w = r / rn;
      b = 0.0;
    } else {
      w /= b;
    }
    beta.push_back(b);
    V.col(m) = w;

    // Convergence test on the lowest `count` Ritz values.
    if (m >= count && (m % 10 == 0 || m == mmax - 1)) {
      tridiag_eigs(m, true);
      norm_estimate = std::max(std::abs(small_vals(0)), std::abs(small_vals(m - 1)));
      bool converged = true;
      for (int i = 0; i < count; ++i) {
        const double resid = std::abs(beta[m - 1] * small_vecs(m - 1, i));
        if (resid > 1e-10 * std::max(norm_estimate, 1.0)) {
          converged = false;
          break;
        }
      }
      if (converged && ritz_prev.size() >= count) {
        double drift = 0.0;
        for (int i = 0; i < count; ++i)
          drift = std::max(drift, std::abs(small_vals(i) - ritz_prev(i)));
        if (drift <= 1e-12 * std::max(norm_estimate, 1.0)) break;
      }
      ritz_prev = small_vals.head(std::min(m, count));
    }
  }

  tridiag_eigs(m, true);
  if (m < count)
    throw numeric_error("partial_eigenvalues: Krylov space exhausted before convergence");

  Spectrum sp;
  sp.values = small_vals.head(count);
  if (want_vectors) {
    Eigen::MatrixXd X = V.leftCols(m) * small_vecs.leftCols(count);
    for (int i = 0; i < count; ++i) X.col(i).normalize();
    sp.vectors = std::move(X);
  }
  sp.meta.size = n;
  return sp;
}

struct FastConvolver::Impl {
  int dim = 0;
  int n_nodes = 0;
  std::vector<int> node_pos;  // node index -> padded box offset
  int P1 = 0, P2 = 0;         // padded sizes (P2 unused in 1D)
  size_t real_size = 0, cplx_size = 0;
  double* in = nullptr;
  fftw_complex* freq = nullptr;
  std::vector<double> kernel_freq;  // real spectrum of the symmetric kernel
  fftw_plan fwd = nullptr, bwd = nullptr;
  mutable std::mutex mtx;

  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (in) fftw_free(in);
    if (freq) fftw_free(freq);
  }
};

namespace {

int next_pow2(int v) {
  int p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace

FastConvolver::FastConvolver(const LatticeKernel& kernel, const Grid& grid)
    : impl_(std::make_unique<Impl>()) {
  if (kernel.dimension() != grid.dimension())
    throw std::invalid_argument("FastConvolver: kernel/grid dimension mismatch");
  if (kernel.spacing() != grid.spacing())
    throw std::invalid_argument("FastConvolver: kernel/grid spacing mismatch");
  Impl& im = *impl_;
  im.dim = grid.dimension();
  im.n_nodes = grid.size();

  const Eigen::VectorXi lo = grid.lattice_min(), hi = grid.lattice_max();
  if (im.dim == 1) {
    const int B = hi(0) - lo(0) + 1;
    const int M = std::min(kernel.cutoff(), B - 1);
    im.P1 = next_pow2(B + 2 * M);
    im.real_size = im.P1;
    im.cplx_size = im.P1 / 2 + 1;
    im.node_pos.resize(im.n_nodes);
    for (int i = 0; i < im.n_nodes; ++i)
      im.node_pos[i] = grid.lattice_coords(i)(0) - lo(0);
    {
      std::lock_guard<std::mutex> lock(fftw_mutex);
      im.in = fftw_alloc_real(im.real_size);
      im.freq = fftw_alloc_complex(im.cplx_size);
      im.fwd = fftw_plan_dft_r2c_1d(im.P1, im.in, im.freq, FFTW_ESTIMATE);
      im.bwd = fftw_plan_dft_c2r_1d(im.P1, im.freq, im.in, FFTW_ESTIMATE);
    }
    std::fill(im.in, im.in + im.real_size, 0.0);
    for (int m = -M; m <= M; ++m)
      im.in[(m + im.P1) % im.P1] = kernel.weight_abs(std::abs(m));
    fftw_execute(im.fwd);
    im.kernel_freq.resize(im.cplx_size);
    // The kernel is even, so its spectrum is real.
    for (size_t k = 0; k < im.cplx_size; ++k) im.kernel_freq[k] = im.freq[k][0];
  } else {
    const int B1 = hi(0) - lo(0) + 1, B2 = hi(1) - lo(1) + 1;
    const int M1 = std::min(kernel.cutoff(), B1 - 1);
    const int M2 = std::min(kernel.cutoff(), B2 - 1);
    im.P1 = next_pow2(B1 + 2 * M1);
    im.P2 = next_pow2(B2 + 2 * M2);
    const int C2 = im.P2 / 2 + 1;
    im.real_size = static_cast<size_t>(im.P1) * im.P2;
    im.cplx_size = static_cast<size_t>(im.P1) * C2;
    im.node_pos.resize(im.n_nodes);
    for (int i = 0; i < im.n_nodes; ++i) {
      const Eigen::VectorXi c = grid.lattice_coords(i);
      im.node_pos[i] = (c(0) - lo(0)) * im.P2 + (c(1) - lo(1));
    }
    {
      std::lock_guard<std::mutex> lock(fftw_mutex);
      im.in = fftw_alloc_real(im.real_size);
      im.freq = fftw_alloc_complex(im.cplx_size);
      im.fwd = fftw_plan_dft_r2c_2d(im.P1, im.P2, im.in, im.freq, FFTW_ESTIMATE);
      im.bwd = fftw_plan_dft_c2r_2d(im.P1, im.P2, im.freq, im.in, FFTW_ESTIMATE);
    }
    std::fill(im.in, im.in + im.real_size, 0.0);
    for (int m1 = -M1; m1 <= M1; ++m1)
      for (int m2 = -M2; m2 <= M2; ++m2)
        im.in[static_cast<size_t>((m1 + im.P1) % im.P1) * im.P2 + (m2 + im.P2) % im.P2] =
            kernel.weight_abs(std::abs(m1), std::abs(m2));
    fftw_execute(im.fwd);
    im.kernel_freq.resize(im.cplx_size);
    for (size_t k = 0; k < im.cplx_size; ++k) im.kernel_freq[k] = im.freq[k][0];
  }
}

FastConvolver::~FastConvolver() = default;

int FastConvolver::size() const { return impl_->n_nodes; }

Eigen::VectorXd FastConvolver::apply(const Eigen::VectorXd& v) const {
  Impl& im = *impl_;
  if (v.size() != im.n_nodes)
    throw std::invalid_argument("FastConvolver::apply: vector size mismatch");
  std::lock_guard<std::mutex> lock(im.mtx);
  std::fill(im.in, im.in + im.real_size, 0.0);
  for (int i = 0; i < im.n_nodes; ++i) im.in[im.node_pos[i]] = v(i);
  fftw_execute(im.fwd);
  const double norm = 1.0 / static_cast<double>(im.real_size);
  for (size_t k = 0; k < im.cplx_size; ++k) {
    im.freq[k][0] *= im.kernel_freq[k] * norm;
    im.freq[k][1] *= im.kernel_freq[k] * norm;
  }
  fftw_execute(im.bwd);
  Eigen::VectorXd out(im.n_nodes);
  for (int i = 0; i < im.n_nodes; ++i) out(i) = im.in[im.node_pos[i]];
  return out;
}

Eigen::VectorXd fast_matvec(const LatticeKernel& kernel, const Grid& grid,
                            const Eigen::VectorXd& v) {
  return FastConvolver(kernel, grid).apply(v);
}

int counting_function(const Spectrum& spectrum, double t) {
  if (spectrum.values.size() == 0)
    throw std::invalid_argument("counting_function: empty spectrum");
  if (spectrum.values(0) < 0.0)
    throw std::invalid_argument("counting_function: spectrum must be nonnegative (shift first)");
  const double* begin = spectrum.values.data();
  const double* end = begin + spectrum.values.size();
  return static_cast<int>(std::upper_bound(begin, end, t) - begin);
}

}  // namespace fracweyl
