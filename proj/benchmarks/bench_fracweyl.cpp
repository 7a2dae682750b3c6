#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <memory>
#include <random>

#include "fracweyl/domain.hpp"
#include "fracweyl/eigensolve.hpp"
#include "fracweyl/grid.hpp"
#include "fracweyl/lattice_kernel.hpp"
#include "fracweyl/operators.hpp"
#include "fracweyl/snumbers.hpp"
#include "fracweyl/weylfit.hpp"

namespace {

using namespace fracweyl;

void bm_kernel_weights_1d(benchmark::State& state) {
  for (auto _ : state) {
    const LatticeKernel k = kernel_weights(1, 0.5, 1.0 / 1024.0, 1024);
    benchmark::DoNotOptimize(k.center());
  }
}
BENCHMARK(bm_kernel_weights_1d);

void bm_kernel_weights_2d(benchmark::State& state) {
  for (auto _ : state) {
    const LatticeKernel k = kernel_weights(2, 0.5, 1.0 / 32.0, 64);
    benchmark::DoNotOptimize(k.center());
  }
}
BENCHMARK(bm_kernel_weights_2d);

void bm_assemble_interval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double h = 1.0 / (n + 1);
  const Domain d = Domain::interval(0.0, 1.0);
  const Grid g = grid_points(d, h);
  const LatticeKernel k = kernel_weights(1, 0.5, h, g.lattice_diameter());
  for (auto _ : state) {
    const DirichletOperator op = assemble_dirichlet(k, std::make_shared<Grid>(g));
    benchmark::DoNotOptimize(op.matrix().data());
  }
}
BENCHMARK(bm_assemble_interval)->Arg(511)->Arg(2047);

void bm_assemble_disk(benchmark::State& state) {
  const double h = 1.0 / 16.0;
  const Domain d = Domain::disk(Eigen::Vector2d(0, 0), 1.0);
  const Grid g = grid_points(d, h);
  const LatticeKernel k = kernel_weights(2, 0.5, h, g.lattice_diameter());
  for (auto _ : state) {
    const DirichletOperator op = assemble_dirichlet(k, std::make_shared<Grid>(g));
    benchmark::DoNotOptimize(op.matrix().data());
  }
}
BENCHMARK(bm_assemble_disk);

void bm_dense_matvec(benchmark::State& state) {
  const int n = 2047;
  const double h = 1.0 / (n + 1);
  const Domain d = Domain::interval(0.0, 1.0);
  auto g = std::make_shared<Grid>(grid_points(d, h));
  const LatticeKernel k = kernel_weights(1, 0.5, h, g->lattice_diameter());
  const Eigen::MatrixXd A = assemble_dirichlet(k, g).matrix();
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
  for (auto _ : state) {
    Eigen::VectorXd w = A * v;
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(bm_dense_matvec);

void bm_fft_matvec(benchmark::State& state) {
  const int n = 2047;
  const double h = 1.0 / (n + 1);
  const Domain d = Domain::interval(0.0, 1.0);
  const Grid g = grid_points(d, h);
  const LatticeKernel k = kernel_weights(1, 0.5, h, g.lattice_diameter());
  FastConvolver conv(k, g);
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
  for (auto _ : state) {
    Eigen::VectorXd w = conv.apply(v);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(bm_fft_matvec);

void bm_eigenvalues_symmetric(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = gauss(rng);
  const Eigen::MatrixXd A = 0.5 * (B + B.transpose());
  for (auto _ : state) {
    const Spectrum s = eigenvalues_symmetric(A);
    benchmark::DoNotOptimize(s.values.data());
  }
}
BENCHMARK(bm_eigenvalues_symmetric)->Arg(256)->Arg(512);

void bm_partial_eigenvalues(benchmark::State& state) {
  const int n = 2047;
  const double h = 1.0 / (n + 1);
  const Domain d = Domain::interval(0.0, 1.0);
  const Grid g = grid_points(d, h);
  const LatticeKernel k = kernel_weights(1, 0.5, h, g.lattice_diameter());
  FastConvolver conv(k, g);
  const Matvec apply = [&conv](const Eigen::VectorXd& v) { return conv.apply(v); };
  for (auto _ : state) {
    const Spectrum s = partial_eigenvalues(apply, n, 10, 20240817);
    benchmark::DoNotOptimize(s.values.data());
  }
}
BENCHMARK(bm_partial_eigenvalues);

void bm_singular_values(benchmark::State& state) {
  const int n = 256;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = gauss(rng);
  for (auto _ : state) {
    const SValues s = singular_values(B);
    benchmark::DoNotOptimize(s.values.data());
  }
}
BENCHMARK(bm_singular_values);

void bm_weyl_fit(benchmark::State& state) {
  const int n = 4096;
  Spectrum s;
  s.values.resize(n);
  for (int j = 0; j < n; ++j) s.values(j) = 2.0 * (j + 1);
  s.meta.size = n;
  for (auto _ : state) {
    const WeylEstimate est = weyl_fit(s, 0.5, 1);
    benchmark::DoNotOptimize(est.C_hat);
  }
}
BENCHMARK(bm_weyl_fit);

}  // namespace

BENCHMARK_MAIN();
