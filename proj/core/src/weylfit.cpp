#include "fracweyl/weylfit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracweyl/errors.hpp"

namespace fracweyl {

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * (v.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.5);
}

}  // namespace

WeylEstimate weyl_fit_window(const Spectrum& spectrum, double a, int dimension,
                             int j_min, int j_max) {
  const int N = static_cast<int>(spectrum.values.size());
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("weyl_fit: a out of range");
  if (dimension < 1 || dimension > 2)
    throw std::invalid_argument("weyl_fit: dimension must be 1 or 2");
  if (j_min < 1 || j_max > N || j_max - j_min + 1 < 8)
    throw std::invalid_argument("weyl_fit: window must contain at least 8 indices");
  if (spectrum.values(0) <= 0.0)
    throw std::invalid_argument("weyl_fit: spectrum must be positive (shift first)");

  const double q = -2.0 * a / dimension;
  std::vector<double> g;
  g.reserve(j_max - j_min + 1);
  for (int j = j_min; j <= j_max; ++j)
    g.push_back(spectrum.values(j - 1) * std::pow(static_cast<double>(j), q));
  std::sort(g.begin(), g.end());

  WeylEstimate est;
  est.C_hat = quantile_sorted(g, 0.5);
  est.dispersion = quantile_sorted(g, 0.75) - quantile_sorted(g, 0.25);
  est.j_min = j_min;
  est.j_max = j_max;
  est.a = a;
  est.dimension = dimension;
  return est;
}

WeylEstimate weyl_fit(const Spectrum& spectrum, double a, int dimension,
                      std::pair<double, double> window) {
  const int N = static_cast<int>(spectrum.values.size());
  const auto [lo, hi] = window;
  if (!(0.0 <= lo && lo < hi && hi <= 1.0))
    throw std::invalid_argument("weyl_fit: window fractions must satisfy 0 <= lo < hi <= 1");
  const int j_min = std::max(1, static_cast<int>(std::floor(lo * N)));
  const int j_max = std::max(j_min, static_cast<int>(std::floor(hi * N)));
  return weyl_fit_window(spectrum, a, dimension, j_min, j_max);
}

double weyl_from_counting(const Spectrum& spectrum, double a, int dimension,
                          int t_samples) {
  const int N = static_cast<int>(spectrum.values.size());
  if (t_samples < 2) throw std::invalid_argument("weyl_from_counting: t_samples < 2");
  if (spectrum.values(0) <= 0.0)
    throw std::invalid_argument("weyl_from_counting: spectrum must be positive");
  const int j_min = std::max(1, static_cast<int>(std::floor(0.05 * N)));
  const int j_max = std::max(j_min + 1, static_cast<int>(std::floor(0.25 * N)));
  if (j_max > N) throw std::invalid_argument("weyl_from_counting: spectrum too short");
  const double t_lo = spectrum.values(j_min - 1);
  const double t_hi = spectrum.values(j_max - 1);
  if (!(t_lo > 0.0 && t_hi > t_lo))
    throw numeric_error("weyl_from_counting: degenerate eigenvalue window");
  const double p = dimension / (2.0 * a);
  std::vector<double> vals;
  for (int i = 0; i < t_samples; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (t_samples - 1));
    vals.push_back(counting_function(spectrum, t) * std::pow(t, -p));
  }
  return median_of(std::move(vals));
}

LemmaA1Report lemmaA1_crosscheck(const Spectrum& spectrum, double b, double p) {
  const int N = static_cast<int>(spectrum.values.size());
  if (!(p > 0.0)) throw std::invalid_argument("lemmaA1_crosscheck: p must be positive");
  if (N < 8) throw std::invalid_argument("lemmaA1_crosscheck: need at least 8 eigenvalues");

  Spectrum shifted;
  shifted.values = spectrum.values.array() + b;
  if (shifted.values(0) <= 0.0)
    throw std::invalid_argument("lemmaA1_crosscheck: shifted spectrum must be positive");

  LemmaA1Report rep;
  rep.mu_monotone = true;
  rep.counting_duality = true;
  Eigen::VectorXd mu(N);
  for (int j = 0; j < N; ++j) mu(j) = 1.0 / shifted.values(j);
  for (int j = 1; j < N; ++j) {
    // mu nonincreasing must mirror lambda nondecreasing exactly.
    if ((mu(j) > mu(j - 1)) != (shifted.values(j) < shifted.values(j - 1)))
      rep.mu_monotone = false;
  }
  for (int j = 1; j <= N; ++j)
    if (counting_function(shifted, shifted.values(j - 1)) < j) rep.counting_duality = false;

  const int j_min = std::max(1, static_cast<int>(std::floor(0.05 * N)));
  const int j_max = std::max(j_min + 7, static_cast<int>(std::floor(0.25 * N)));
  if (j_max > N) throw std::invalid_argument("lemmaA1_crosscheck: spectrum too short");

  std::vector<double> mu_seq, lam_seq, count_seq;
  for (int j = j_min; j <= j_max; ++j) {
    mu_seq.push_back(mu(j - 1) * std::pow(static_cast<double>(j), 1.0 / p));
    lam_seq.push_back(shifted.values(j - 1) * std::pow(static_cast<double>(j), -1.0 / p));
    count_seq.push_back(counting_function(shifted, shifted.values(j - 1)) *
                        std::pow(shifted.values(j - 1), -p));
  }
  {
    std::vector<double> s = mu_seq;
    std::sort(s.begin(), s.end());
    rep.mu_constant = quantile_sorted(s, 0.5);
    rep.dispersion = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  }
  rep.lambda_constant = median_of(lam_seq);
  rep.counting_constant = median_of(count_seq);

  // (A.1) algebra: mu-constant = C0^{1/p}, lambda-constant = C0^{-1/p},
  // counting-constant = C0.
  const double c0_from_mu = std::pow(rep.mu_constant, p);
  const double c0_from_lambda = std::pow(rep.lambda_constant, -p);
  const double scale = std::max({std::abs(rep.counting_constant), std::abs(c0_from_mu),
                                 std::abs(c0_from_lambda), 1e-300});
  rep.max_inconsistency =
      std::max(std::abs(c0_from_mu - rep.counting_constant),
               std::abs(c0_from_lambda - rep.counting_constant)) /
      scale;
  const double disp_c0 = rep.dispersion > 0.0
                             ? std::abs(std::pow(std::max(rep.mu_constant - rep.dispersion, 1e-300), p) -
                                        std::pow(rep.mu_constant + rep.dispersion, p))
                             : 0.0;
  rep.consistent = rep.mu_monotone && rep.counting_duality &&
                   rep.max_inconsistency * scale <= disp_c0 + 64 * 1e-16 * scale;
  return rep;
}

MonotonicityReport domain_monotonicity_check(const Eigen::MatrixXd& matrix,
                                             const std::vector<int>& kept) {
  const int N = static_cast<int>(matrix.rows());
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("domain_monotonicity_check: matrix must be square");
  if (kept.empty() || kept.size() > static_cast<size_t>(N))
    throw std::invalid_argument("domain_monotonicity_check: invalid node subset");
  for (int idx : kept)
    if (idx < 0 || idx >= N)
      throw std::invalid_argument("domain_monotonicity_check: index out of range");
  std::vector<int> sorted(kept);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("domain_monotonicity_check: duplicate index");

  const int M = static_cast<int>(kept.size());
  Eigen::MatrixXd sub(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) sub(i, j) = matrix(kept[i], kept[j]);

  const Spectrum full = eigenvalues_symmetric(matrix);
  const Spectrum restricted = eigenvalues_symmetric(sub);
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());

  MonotonicityReport rep;
  rep.compared = M;
  for (int j = 0; j < M; ++j)
    rep.max_violation =
        std::max(rep.max_violation, full.values(j) - restricted.values(j));
  rep.ok = rep.max_violation <= 1e-10 * scale;
  return rep;
}

double rayleigh_quotient(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& v) {
  if (v.size() != matrix.rows())
    throw std::invalid_argument("rayleigh_quotient: dimension mismatch");
  const double nrm2 = v.squaredNorm();
  if (nrm2 == 0.0) throw std::invalid_argument("rayleigh_quotient: zero vector");
  return v.dot(matrix.selfadjointView<Eigen::Lower>() * v) / nrm2;
}

double rayleigh_quotient(const DirichletOperator& op, const Eigen::VectorXd& v) {
  return rayleigh_quotient(op.matrix(), v);
}

BoundaryExponentFit boundary_exponent(const Spectrum& spectrum, const Grid& grid,
                                      const Domain& domain, int which) {
  if (!spectrum.vectors)
    throw std::invalid_argument("boundary_exponent: spectrum carries no eigenvectors");
  if (which < 1 || which > spectrum.vectors->cols())
    throw std::invalid_argument("boundary_exponent: eigenvector index out of range");
  if (spectrum.vectors->rows() != grid.size())
    throw std::invalid_argument("boundary_exponent: eigenvector/grid size mismatch");

  const Eigen::VectorXd u = spectrum.vectors->col(which - 1);
  const double h = grid.spacing();
  const double diam = domain.diameter();
  const double d_lo = 2.0 * h;
  const double d_hi = 0.1 * diam;
  if (!(d_lo < d_hi))
    throw std::invalid_argument("boundary_exponent: grid too coarse for the fit range");

  // Anchor the strip at the first node in lattice order (a node adjacent to
  // the lower-left boundary) so that only one boundary piece contributes.
  const Eigen::VectorXd anchor = grid.node(0);
  const double strip_radius = 0.25 * diam;

  std::vector<double> logs_d, logs_u;
  BoundaryExponentFit fit;
  fit.d_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd x = grid.node(i);
    const double d = domain.boundary_distance(x);
    if (d < d_lo || d > d_hi) continue;
    if ((x - anchor).norm() > strip_radius) continue;
    const double au = std::abs(u(i));
    if (au < 1e-300) continue;
    logs_d.push_back(std::log(d));
    logs_u.push_back(std::log(au));
    fit.d_min = std::min(fit.d_min, d);
    fit.d_max = std::max(fit.d_max, d);
  }
  fit.nodes_used = static_cast<int>(logs_d.size());
  if (fit.nodes_used < 8)
    throw numeric_error("boundary_exponent: fewer than 8 nodes in the fit range");

  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < logs_d.size(); ++i) {
    mx += logs_d[i];
    my += logs_u[i];
  }
  mx /= logs_d.size();
  my /= logs_d.size();
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < logs_d.size(); ++i) {
    sxx += (logs_d[i] - mx) * (logs_d[i] - mx);
    sxy += (logs_d[i] - mx) * (logs_u[i] - my);
  }
  if (sxx == 0.0) throw numeric_error("boundary_exponent: degenerate abscissa spread");
  fit.exponent = sxy / sxx;
  return fit;
}

}  // namespace fracweyl
