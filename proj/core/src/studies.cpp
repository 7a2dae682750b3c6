#include "fracweyl/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fracweyl/errors.hpp"
#include "fracweyl/grid.hpp"
#include "fracweyl/lattice_kernel.hpp"

namespace fracweyl {

namespace {

int next_pow2_at_least(int v) {
  int p = 1;
  while (p < v) p *= 2;
  return p;
}

int pick_transform(int dim, int cutoff, int requested) {
  if (requested > 0) return requested;
  const int dflt = dim == 1 ? (1 << 16) : (1 << 10);
  return std::max(dflt, next_pow2_at_least(8 * cutoff));
}

PrincipalSymbol reference_symbol(double a, const ScalarField& coefficient) {
  return coefficient ? PrincipalSymbol::scaled(a, coefficient)
                     : PrincipalSymbol::isotropic(a);
}

void fill_meta(Spectrum& s, const Domain& domain, double a, double h) {
  s.meta.size = static_cast<int>(s.values.size());
  s.meta.dimension = domain.dimension();
  s.meta.a = a;
  s.meta.h = h;
  s.meta.domain = domain.describe();
}

// Shifts a copy of the spectrum into (0, inf) when needed; the fit itself is
// shift-sensitive only through the o(1) tail, and the shift used is reported.
Spectrum shifted_copy(const Spectrum& s, double shift) {
  Spectrum out;
  out.values = s.values.array() + shift;
  out.meta = s.meta;
  out.meta.shift = shift;
  return out;
}

double common_shift(double lambda_min) {
  return lambda_min <= 0.0 ? 1.0 - lambda_min : 0.0;
}

}  // namespace

SpectrumRun run_spectrum(const Domain& domain, double a, double h,
                         const ScalarField& coefficient, bool want_vectors,
                         int transform_size) {
  auto grid = std::make_shared<Grid>(grid_points(domain, h));
  const int cutoff = std::max(1, grid->lattice_diameter());
  const int L = pick_transform(domain.dimension(), cutoff, transform_size);
  const LatticeKernel kernel = kernel_weights(domain.dimension(), a, h, cutoff, L);
  const DirichletOperator op = assemble_dirichlet(kernel, grid, coefficient);
  Spectrum s = eigenvalues_symmetric(op.matrix(), want_vectors);
  fill_meta(s, domain, a, h);
  SpectrumRun run;
  run.grid = grid;
  run.spectrum = std::move(s);
  run.a = a;
  run.h = h;
  run.kernel_cutoff = cutoff;
  run.transform_size = L;
  return run;
}

ConvergenceReport convergence_study(const Domain& domain,
                                    const std::vector<double>& a_values,
                                    const std::vector<double>& h_values,
                                    const ScalarField& coefficient,
                                    std::array<double, 2> window) {
  if (a_values.empty() || h_values.empty())
    throw std::invalid_argument("convergence study needs at least one a and one h");
  ConvergenceReport report;
  report.window = window;
  for (double a : a_values) {
    const WeylConstantResult ref = weyl_constant(reference_symbol(a, coefficient), domain);
    for (double h : h_values) {
      SpectrumRun run = run_spectrum(domain, a, h, coefficient);
      const double shift = common_shift(run.spectrum.values(0));
      const Spectrum fitted = shifted_copy(run.spectrum, shift);
      const WeylEstimate fit =
          weyl_fit(fitted, a, domain.dimension(), {window[0], window[1]});
      ConvergenceRow row;
      row.a = a;
      row.h = h;
      row.n_interior = static_cast<int>(run.spectrum.values.size());
      row.c_hat = fit.C_hat;
      row.dispersion = fit.dispersion;
      row.c_reference = ref.C;
      row.abs_error = std::abs(fit.C_hat - ref.C);
      row.shift = shift;
      report.rows.push_back(row);
      run.spectrum.vectors.reset();
      report.spectra.push_back(std::move(run.spectrum));
    }
  }
  return report;
}

SandwichReport sandwich_study(const Domain& domain, double a, double h, int levels,
                              double radius_base, const ScalarField& coefficient) {
  if (levels < 1) throw std::invalid_argument("sandwich study needs levels >= 1");
  if (!(radius_base > 0.0))
    throw std::invalid_argument("sandwich study needs a positive radius base");

  struct Entry {
    std::string kind;
    int level;
    double radius;
    Domain dom;
  };
  // Ordered by inclusion, smallest domain first.
  std::vector<Entry> chain;
  for (int l = 1; l <= levels; ++l) {
    const double r = radius_base / l;
    chain.push_back({"inner", l, r, domain.eroded(r)});
  }
  chain.push_back({"base", 0, 0.0, domain});
  for (int l = levels; l >= 1; --l) {
    const double r = radius_base / l;
    chain.push_back({"outer", l, r, domain.dilated(r)});
  }

  const int dim = domain.dimension();
  std::vector<std::shared_ptr<Grid>> grids;
  grids.reserve(chain.size());
  for (const Entry& e : chain)
    grids.push_back(std::make_shared<Grid>(grid_points(e.dom, h)));
  // The shared lattice makes nested domains produce nested node sets; verify.
  for (size_t i = 0; i + 1 < grids.size(); ++i)
    grids[i]->subset_indices(*grids[i + 1]);

  int cutoff = 1;
  for (const auto& g : grids) cutoff = std::max(cutoff, g->lattice_diameter());
  const int L = pick_transform(dim, cutoff, 0);
  const LatticeKernel kernel = kernel_weights(dim, a, h, cutoff, L);

  SandwichReport report;
  report.radius_base = radius_base;
  double lambda_min_all = std::numeric_limits<double>::infinity();
  double lambda_abs_max = 1.0;
  for (size_t i = 0; i < chain.size(); ++i) {
    const DirichletOperator op = assemble_dirichlet(kernel, grids[i], coefficient);
    Spectrum s = eigenvalues_symmetric(op.matrix());
    fill_meta(s, chain[i].dom, a, h);
    lambda_min_all = std::min(lambda_min_all, s.values(0));
    lambda_abs_max =
        std::max({lambda_abs_max, std::abs(s.values(0)),
                  std::abs(s.values(s.values.size() - 1))});
    report.spectra.push_back(std::move(s));
  }

  // Adjacent domains differ by a principal-submatrix restriction, so the
  // larger domain's j-th eigenvalue can never exceed the smaller's.
  double max_violation = 0.0;
  for (size_t i = 0; i + 1 < report.spectra.size(); ++i) {
    const Eigen::VectorXd& small = report.spectra[i].values;
    const Eigen::VectorXd& big = report.spectra[i + 1].values;
    for (Eigen::Index j = 0; j < small.size(); ++j)
      max_violation = std::max(max_violation, big(j) - small(j));
  }
  report.max_eigen_violation = max_violation;
  report.eigen_ok = max_violation <= 1e-10 * lambda_abs_max;

  report.shift = common_shift(lambda_min_all);
  for (size_t i = 0; i < chain.size(); ++i) {
    const Spectrum fitted = shifted_copy(report.spectra[i], report.shift);
    const WeylEstimate fit = weyl_fit(fitted, a, dim);
    const WeylConstantResult quad =
        weyl_constant(reference_symbol(a, coefficient), chain[i].dom);
    SandwichLevel row;
    row.kind = chain[i].kind;
    row.level = chain[i].level;
    row.radius = chain[i].radius;
    row.n_interior = static_cast<int>(report.spectra[i].values.size());
    row.c_hat = fit.C_hat;
    row.dispersion = fit.dispersion;
    row.c_quadrature = quad.C;
    row.lambda_min = report.spectra[i].values(0);
    report.levels.push_back(row);
  }

  report.fits_ordered = true;
  report.quadrature_monotone = true;
  for (size_t i = 0; i + 1 < report.levels.size(); ++i) {
    const SandwichLevel& s = report.levels[i];
    const SandwichLevel& l = report.levels[i + 1];
    if (l.c_hat > s.c_hat + s.dispersion + l.dispersion + 1e-12)
      report.fits_ordered = false;
    if (l.c_quadrature > s.c_quadrature + 1e-12) report.quadrature_monotone = false;
  }
  return report;
}

PerturbationReport perturbation_study(const Domain& domain, double a, double h,
                                      double a_prime, double kappa,
                                      const ScalarField& potential,
                                      const ScalarField& coefficient,
                                      double control_shift) {
  auto grid = std::make_shared<Grid>(grid_points(domain, h));
  const int dim = domain.dimension();
  const int cutoff = std::max(1, grid->lattice_diameter());
  const int L = pick_transform(dim, cutoff, 0);
  const LatticeKernel kernel = kernel_weights(dim, a, h, cutoff, L);
  const DirichletOperator base = assemble_dirichlet(kernel, grid, coefficient);
  const DirichletOperator pert = assemble_perturbed(base, a_prime, kappa, potential);

  Spectrum sb = eigenvalues_symmetric(base.matrix());
  Spectrum sp = eigenvalues_symmetric(pert.matrix());
  fill_meta(sb, domain, a, h);
  fill_meta(sp, domain, a, h);

  PerturbationReport report;
  report.a_prime = a_prime;
  report.kappa = kappa;
  report.n_interior = static_cast<int>(sb.values.size());
  report.shift = common_shift(std::min(sb.values(0), sp.values(0)));
  report.base_fit = weyl_fit(shifted_copy(sb, report.shift), a, dim);
  report.perturbed_fit = weyl_fit(shifted_copy(sp, report.shift), a, dim);
  report.delta = std::abs(report.base_fit.C_hat - report.perturbed_fit.C_hat);
  report.threshold = 2.0 * (report.base_fit.dispersion + report.perturbed_fit.dispersion);
  report.invariance_ok = report.delta <= report.threshold;
  report.base_values.assign(sb.values.data(), sb.values.data() + sb.values.size());
  report.perturbed_values.assign(sp.values.data(), sp.values.data() + sp.values.size());
  report.control_shift = control_shift;
  if (control_shift != 0.0)
    report.control_shift_error = constant_shift_error(base, control_shift);
  return report;
}

double constant_shift_error(const DirichletOperator& base, double c) {
  const Spectrum s0 = eigenvalues_symmetric(base.matrix());
  // Any admissible lower order works; kappa = 0 leaves only the potential.
  const double a_prime = 0.25 * std::min(2.0 * base.a(), base.a() + 0.5);
  const auto constant = [c](const Eigen::VectorXd&) { return c; };
  const DirichletOperator shifted = assemble_perturbed(base, a_prime, 0.0, constant);
  const Spectrum s1 = eigenvalues_symmetric(shifted.matrix());
  double err = 0.0;
  for (Eigen::Index j = 0; j < s0.values.size(); ++j)
    err = std::max(err, std::abs(s1.values(j) - (s0.values(j) + c)));
  return err;
}

MollifyReport mollification_study(const Domain& domain, double a, double h,
                                  const ScalarField& phi,
                                  const std::vector<int>& k_values, double p) {
  if (!phi) throw std::invalid_argument("mollification study needs a coefficient");
  if (k_values.empty())
    throw std::invalid_argument("mollification study needs at least one k");
  const int dim = domain.dimension();
  if (p <= 0.0) p = dim / (2.0 * a);

  auto grid = std::make_shared<Grid>(grid_points(domain, h));
  const int cutoff = std::max(1, grid->lattice_diameter());
  const int L = pick_transform(dim, cutoff, 0);
  const LatticeKernel kernel = kernel_weights(dim, a, h, cutoff, L);
  const DirichletOperator base = assemble_dirichlet(kernel, grid, phi);

  std::vector<Eigen::MatrixXd> approx;
  std::vector<double> sup_diffs;
  double lambda_min = eigenvalues_symmetric(base.matrix()).values(0);
  for (int k : k_values) {
    const ScalarField phik = mollify_coefficient(phi, k, dim);
    const DirichletOperator opk = assemble_dirichlet(kernel, grid, phik);
    double sup = 0.0;
    for (int i = 0; i < grid->size(); ++i) {
      const Eigen::VectorXd x = grid->node(i);
      sup = std::max(sup, std::abs(phi(x) - phik(x)));
    }
    sup_diffs.push_back(sup);
    lambda_min = std::min(lambda_min, eigenvalues_symmetric(opk.matrix()).values(0));
    approx.push_back(opk.matrix());
  }

  MollifyReport report;
  report.p = p;
  // Same convention as shift_for_positivity: resolvents are compared at a
  // shift keeping every matrix bounded below by 1.
  report.b = std::max(0.0, -lambda_min) + 1.0;
  const auto diff_rows = resolvent_difference_study(base.matrix(), approx, report.b, p);
  for (size_t i = 0; i < k_values.size(); ++i) {
    MollifyRow row;
    row.k = k_values[i];
    row.sup_coefficient_diff = sup_diffs[i];
    row.opnorm_resolvent_diff = diff_rows[i].opnorm_diff;
    row.schatten_sup = diff_rows[i].schatten_sup;
    report.rows.push_back(row);
  }
  const auto trend = [&report](auto field, bool& flag, double& ratio) {
    flag = true;
    const double slack = 1e-12 * std::max(1.0, report.rows.front().*field);
    for (size_t i = 0; i + 1 < report.rows.size(); ++i)
      if (report.rows[i + 1].*field > report.rows[i].*field + slack) flag = false;
    const double first = report.rows.front().*field;
    ratio = first > 0.0 ? report.rows.back().*field / first : 0.0;
  };
  trend(&MollifyRow::opnorm_resolvent_diff, report.opnorm_nonincreasing,
        report.opnorm_final_over_first);
  trend(&MollifyRow::schatten_sup, report.schatten_nonincreasing,
        report.schatten_final_over_first);
  return report;
}

BoundaryStudyResult boundary_exponent_study(const Domain& domain, double a, double h,
                                            int which, int krylov_threshold,
                                            unsigned long long seed) {
  if (which < 1) throw std::invalid_argument("eigenfunction index must be >= 1");
  auto grid = std::make_shared<Grid>(grid_points(domain, h));
  const int dim = domain.dimension();
  const int n = grid->size();
  const int cutoff = std::max(1, grid->lattice_diameter());
  const int L = pick_transform(dim, cutoff, 0);
  const LatticeKernel kernel = kernel_weights(dim, a, h, cutoff, L);

  Spectrum s;
  const bool krylov = n > krylov_threshold;
  if (krylov) {
    const FastConvolver conv(kernel, *grid);
    const auto apply = [&conv](const Eigen::VectorXd& v) { return conv.apply(v); };
    const int count = std::min(n, std::max(which, 6));
    s = partial_eigenvalues(apply, n, count, seed, true);
  } else {
    const DirichletOperator op = assemble_dirichlet(kernel, grid);
    s = eigenvalues_symmetric(op.matrix(), true);
  }
  fill_meta(s, domain, a, h);

  BoundaryStudyResult result;
  result.fit = boundary_exponent(s, *grid, domain, which);
  result.a = a;
  result.h = h;
  result.n_interior = n;
  result.eigenfunction = which;
  result.used_krylov = krylov;
  return result;
}

SnumberSuiteReport snumber_suite(int seeds, int size_min, int size_max,
                                 unsigned long long seed0) {
  if (seeds < 1) throw std::invalid_argument("need at least one seed");
  if (size_min < 2 || size_max < size_min)
    throw std::invalid_argument("sizes must satisfy 2 <= size_min <= size_max");

  SuiteCheckRow composition{"composition", 0, 0, 0.0};
  SuiteCheckRow adjoint{"adjoint_equality", 0, 0, 0.0};
  SuiteCheckRow additive{"kyfan_additive", 0, 0, 0.0};
  SuiteCheckRow multiplicative{"kyfan_multiplicative", 0, 0, 0.0};
  SuiteCheckRow svd_eig{"svd_eig_agreement", 0, 0, 0.0};

  for (int t = 0; t < seeds; ++t) {
    std::mt19937_64 rng(seed0 + static_cast<unsigned long long>(t));
    std::uniform_int_distribution<int> size_dist(size_min, size_max);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    const auto rand_matrix = [&](int r, int c) {
      Eigen::MatrixXd M(r, c);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) M(i, j) = entry(rng);
      return M;
    };

    {
      const int q = size_dist(rng), r = size_dist(rng), c = size_dist(rng),
                w = size_dist(rng);
      const Eigen::MatrixXd E = rand_matrix(q, r);
      const Eigen::MatrixXd B = rand_matrix(r, c);
      const Eigen::MatrixXd F = rand_matrix(c, w);
      const CompositionReport rep = check_composition_bound(E, B, F);
      ++composition.trials;
      if (!rep.ok) ++composition.violations;
      composition.max_violation =
          std::max(composition.max_violation, std::max(0.0, rep.max_ratio - 1.0));
    }
    {
      const int r = size_dist(rng), c = size_dist(rng);
      const Eigen::MatrixXd B = rand_matrix(r, c);
      // s_j(B^T) = s_j(B): the nonzero singular values of a matrix and its
      // adjoint coincide.
      const SValues sB = singular_values(B);
      const SValues sBt = singular_values(B.transpose());
      const Eigen::Index common = std::min(sB.values.size(), sBt.values.size());
      double adj_diff = 0.0;
      for (Eigen::Index j = 0; j < common; ++j)
        adj_diff = std::max(adj_diff, std::abs(sB.values(j) - sBt.values(j)));
      const double adj_rel = adj_diff / std::max(1.0, sB.values(0));
      ++adjoint.trials;
      if (adj_rel > 1e-10) ++adjoint.violations;
      adjoint.max_violation = std::max(adjoint.max_violation, adj_rel);

      const Eigen::MatrixXd Bp = rand_matrix(r, c);
      const KyFanReport rep = kyfan_additive_check(B, Bp);
      ++additive.trials;
      if (!rep.additive_ok) ++additive.violations;
      additive.max_violation =
          std::max(additive.max_violation, rep.max_additive_violation);
      // A square pair is composable, so it exercises the product inequality.
      const int n = size_dist(rng);
      const KyFanReport mrep = kyfan_additive_check(rand_matrix(n, n), rand_matrix(n, n));
      ++multiplicative.trials;
      if (!mrep.multiplicative_ok) ++multiplicative.violations;
      multiplicative.max_violation =
          std::max(multiplicative.max_violation, mrep.max_multiplicative_violation);
    }
    {
      const int n = size_dist(rng);
      Eigen::MatrixXd M = rand_matrix(n, n);
      const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
      const SValues sv = singular_values(S);
      Eigen::VectorXd ev = eigenvalues_symmetric(S).values.cwiseAbs();
      std::sort(ev.data(), ev.data() + ev.size(), std::greater<double>());
      const double scale = std::max(1.0, sv.values(0));
      double diff = 0.0;
      for (Eigen::Index j = 0; j < ev.size(); ++j)
        diff = std::max(diff, std::abs(sv.values(j) - ev(j)));
      ++svd_eig.trials;
      if (diff > 1e-10 * scale) ++svd_eig.violations;
      svd_eig.max_violation = std::max(svd_eig.max_violation, diff / scale);
    }
  }

  SnumberSuiteReport report;
  report.rows = {composition, adjoint, additive, multiplicative, svd_eig};
  report.seeds = seeds;
  report.seed0 = seed0;
  report.all_ok = true;
  for (const SuiteCheckRow& row : report.rows)
    if (row.violations > 0) report.all_ok = false;
  return report;
}

InterlacingSuiteReport interlacing_suite(int seeds, int size_min, int size_max,
                                         unsigned long long seed0) {
  if (seeds < 1) throw std::invalid_argument("need at least one seed");
  if (size_min < 2 || size_max < size_min)
    throw std::invalid_argument("sizes must satisfy 2 <= size_min <= size_max");

  InterlacingSuiteReport report;
  for (int t = 0; t < seeds; ++t) {
    std::mt19937_64 rng(seed0 + static_cast<unsigned long long>(t));
    std::uniform_int_distribution<int> size_dist(size_min, size_max);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    const int n = size_dist(rng);
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = entry(rng);
    const Eigen::MatrixXd S = 0.5 * (M + M.transpose());

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_int_distribution<int> keep_dist(1, n - 1);
    std::vector<int> kept(order.begin(), order.begin() + keep_dist(rng));
    std::sort(kept.begin(), kept.end());

    const MonotonicityReport rep = domain_monotonicity_check(S, kept);
    ++report.trials;
    if (!rep.ok) ++report.violations;
    report.max_violation = std::max(report.max_violation, rep.max_violation);
  }
  report.all_ok = report.violations == 0;
  return report;
}

}  // namespace fracweyl
