#include "fracweyl/symbol.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fracweyl/errors.hpp"
#include "fracweyl/quadrature.hpp"

namespace fracweyl {

PrincipalSymbol PrincipalSymbol::isotropic(double a) {
  if (!(a > 0.0 && a <= 1.0))
    throw constraint_error("PrincipalSymbol: order parameter a must lie in (0, 1]");
  return PrincipalSymbol(a, SymbolKind::Isotropic);
}

PrincipalSymbol PrincipalSymbol::scaled(double a, ScalarField phi, std::string continuity) {
  if (!(a > 0.0 && a <= 1.0))
    throw constraint_error("PrincipalSymbol: order parameter a must lie in (0, 1]");
  if (!phi) throw std::invalid_argument("PrincipalSymbol::scaled: null coefficient");
  PrincipalSymbol s(a, SymbolKind::Scaled);
  s.phi_ = std::move(phi);
  s.continuity_ = std::move(continuity);
  return s;
}

PrincipalSymbol PrincipalSymbol::anisotropic(double a, MatrixField A, std::string continuity) {
  if (!(a > 0.0 && a <= 1.0))
    throw constraint_error("PrincipalSymbol: order parameter a must lie in (0, 1]");
  if (!A) throw std::invalid_argument("PrincipalSymbol::anisotropic: null coefficient");
  PrincipalSymbol s(a, SymbolKind::Anisotropic);
  s.A_ = std::move(A);
  s.continuity_ = std::move(continuity);
  return s;
}

double PrincipalSymbol::evaluate(const Eigen::VectorXd& x, const Eigen::VectorXd& xi) const {
  if (xi.norm() == 0.0)
    throw std::domain_error("PrincipalSymbol::evaluate: xi = 0 is outside the symbol domain");
  switch (kind_) {
    case SymbolKind::Isotropic:
      return std::pow(xi.squaredNorm(), a_);
    case SymbolKind::Scaled: {
      const double c = phi_(x);
      if (!(c > 0.0))
        throw constraint_error("PrincipalSymbol: scaled coefficient must be positive");
      return c * std::pow(xi.squaredNorm(), a_);
    }
    case SymbolKind::Anisotropic: {
      Eigen::MatrixXd A = A_(x);
      if (A.rows() != xi.size() || A.cols() != xi.size())
        throw std::invalid_argument("PrincipalSymbol: coefficient matrix dimension mismatch");
      const double q = xi.dot(A.selfadjointView<Eigen::Lower>() * xi);
      if (!(q > 0.0))
        throw constraint_error("PrincipalSymbol: anisotropic form not positive definite");
      return std::pow(q, a_);
    }
  }
  throw std::logic_error("PrincipalSymbol::evaluate: unreachable");
}

double PrincipalSymbol::evaluate_raw(const Eigen::VectorXd& x, const Eigen::VectorXd& xi) const {
  switch (kind_) {
    case SymbolKind::Isotropic:
      return std::pow(xi.squaredNorm(), a_);
    case SymbolKind::Scaled:
      return phi_(x) * std::pow(xi.squaredNorm(), a_);
    case SymbolKind::Anisotropic: {
      Eigen::MatrixXd A = A_(x);
      if (A.rows() != xi.size() || A.cols() != xi.size())
        throw std::invalid_argument("PrincipalSymbol: coefficient matrix dimension mismatch");
      const double q = xi.dot(A.selfadjointView<Eigen::Lower>() * xi);
      return (q < 0.0 ? -1.0 : 1.0) * std::pow(std::abs(q), a_);
    }
  }
  throw std::logic_error("PrincipalSymbol::evaluate_raw: unreachable");
}

HypothesisReport check_hypotheses(const PrincipalSymbol& symbol, const Domain& domain,
                                  int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("check_hypotheses: samples < 1");
  const int n = domain.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const BoundingBox bb = domain.bounding_box();

  HypothesisReport rep;
  rep.ellipticity_constant = std::numeric_limits<double>::infinity();
  rep.samples = samples;
  const double scales[] = {0.25, 0.5, 2.0, 3.7};

  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(n);
    for (int attempt = 0;; ++attempt) {
      for (int d = 0; d < n; ++d) x(d) = bb.lo(d) + (bb.hi(d) - bb.lo(d)) * unif(rng);
      if (domain.contains(x)) break;
      if (attempt > 10000)
        throw numeric_error("check_hypotheses: rejection sampling failed to hit the domain");
    }
    Eigen::VectorXd xi(n);
    do {
      for (int d = 0; d < n; ++d) xi(d) = gauss(rng);
    } while (xi.norm() == 0.0);
    xi.normalize();

    const double p = symbol.evaluate_raw(x, xi);
    rep.ellipticity_constant = std::min(rep.ellipticity_constant, p);

    const double pneg = symbol.evaluate_raw(x, -xi);
    rep.max_even_violation =
        std::max(rep.max_even_violation, std::abs(p - pneg) / std::max(1.0, std::abs(p)));

    for (double t : scales) {
      const double pt = symbol.evaluate_raw(x, (t * xi).eval());
      const double expected = std::pow(t, symbol.order()) * p;
      rep.max_homogeneity_violation =
          std::max(rep.max_homogeneity_violation,
                   std::abs(pt - expected) / std::max(1.0, std::abs(expected)));
    }
  }
  rep.even_ok = rep.max_even_violation < 1e-10;
  rep.homogeneous_ok = rep.max_homogeneity_violation < 1e-10;
  return rep;
}

SphereQuadrature sphere_quadrature(int n, int resolution) {
  if (resolution < 1) throw std::invalid_argument("sphere_quadrature: resolution < 1");
  SphereQuadrature q;
  q.dimension = n;
  if (n == 1) {
    Eigen::VectorXd m(1), p(1);
    m(0) = -1.0;
    p(0) = 1.0;
    q.nodes = {m, p};
    q.weights = {1.0, 1.0};
    return q;
  }
  if (n == 2) {
    const double w = 2.0 * std::numbers::pi / resolution;
    for (int k = 0; k < resolution; ++k) {
      const double th = 2.0 * std::numbers::pi * k / resolution;
      Eigen::VectorXd node(2);
      node << std::cos(th), std::sin(th);
      q.nodes.push_back(node);
      q.weights.push_back(w);
    }
    return q;
  }
  if (n == 3) {
    const GaussRule& rule = gauss_legendre(resolution);
    const int naz = 2 * resolution;
    const double waz = 2.0 * std::numbers::pi / naz;
    for (int i = 0; i < resolution; ++i) {
      const double u = rule.points[i];  // cos(theta)
      const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (int k = 0; k < naz; ++k) {
        const double ph = 2.0 * std::numbers::pi * k / naz;
        Eigen::VectorXd node(3);
        node << s * std::cos(ph), s * std::sin(ph), u;
        q.nodes.push_back(node);
        q.weights.push_back(rule.weights[i] * waz);
      }
    }
    return q;
  }
  throw std::invalid_argument("sphere_quadrature: dimension must be 1, 2 or 3");
}

namespace {

double c_prime_at(const PrincipalSymbol& symbol, const Domain& domain, int sphere_res,
                  int domain_res) {
  const int n = domain.dimension();
  const double expo = -n / (2.0 * symbol.a());
  const SphereQuadrature sq = sphere_quadrature(n, sphere_res);
  auto sphere_integral = [&](const Eigen::VectorXd& x) {
    double s = 0.0;
    for (size_t k = 0; k < sq.nodes.size(); ++k)
      s += sq.weights[k] * std::pow(std::abs(symbol.evaluate(x, sq.nodes[k])), expo);
    return s;
  };
  const IntegralResult ir = integrate(domain, sphere_integral, domain_res);
  return ir.value / (n * std::pow(2.0 * std::numbers::pi, n));
}

}  // namespace

WeylConstantResult weyl_constant(const PrincipalSymbol& symbol, const Domain& domain,
                                 int sphere_resolution, int domain_resolution) {
  if (sphere_resolution < 1 || domain_resolution < 1)
    throw std::invalid_argument("weyl_constant: resolutions must be positive");
  WeylConstantResult out;
  out.C_prime = c_prime_at(symbol, domain, sphere_resolution, domain_resolution);
  if (!(out.C_prime > 0.0) || !std::isfinite(out.C_prime))
    throw numeric_error("weyl_constant: quadrature produced a non-positive constant");
  const double coarse = c_prime_at(symbol, domain, std::max(4, sphere_resolution / 2),
                                   std::max(2, domain_resolution / 2));
  out.converged = std::abs(out.C_prime - coarse) <= 1e-6 * std::abs(out.C_prime);
  const int n = domain.dimension();
  out.C = std::pow(out.C_prime, -2.0 * symbol.a() / n);
  out.volume_used = volume(domain, domain_resolution).value;
  return out;
}

}  // namespace fracweyl
