#include "fracweyl/snumbers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "fracweyl/errors.hpp"

namespace fracweyl {

SValues singular_values(const Eigen::MatrixXd& B) {
  SValues out;
  out.rows = static_cast<int>(B.rows());
  out.cols = static_cast<int>(B.cols());
  if (B.size() == 0) throw std::invalid_argument("singular_values: empty matrix");
  if (std::min(B.rows(), B.cols()) <= 64) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    out.values = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(B);
    out.values = svd.singularValues();
  }
  if (B.rows() == B.cols()) {
    const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
    if ((B - B.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
      // Internal cross-check: for symmetric B the singular values are the
      // absolute eigenvalues.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
      Eigen::VectorXd abs_eigs = es.eigenvalues().cwiseAbs();
      std::sort(abs_eigs.data(), abs_eigs.data() + abs_eigs.size(),
                std::greater<double>());
      const double tol = 1e-8 * std::max(1.0, out.values(0));
      if ((abs_eigs - out.values).cwiseAbs().maxCoeff() > tol)
        throw numeric_error(
            "singular_values: symmetric cross-check against |eigenvalues| failed");
    }
  }
  return out;
}

double weak_schatten_quasinorm(const SValues& s, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("weak_schatten_quasinorm: p must be positive");
  double best = 0.0;
  for (int j = 0; j < s.values.size(); ++j)
    best = std::max(best, std::pow(j + 1.0, 1.0 / p) * s.values(j));
  return best;
}

CompositionReport check_composition_bound(const Eigen::MatrixXd& E,
                                          const Eigen::MatrixXd& B,
                                          const Eigen::MatrixXd& F) {
  if (E.cols() != B.rows() || B.cols() != F.rows())
    throw std::invalid_argument("check_composition_bound: dimension mismatch");
  const SValues sE = singular_values(E);
  const SValues sB = singular_values(B);
  const SValues sF = singular_values(F);
  const SValues sEBF = singular_values(E * B * F);
  const double opE = sE.values(0), opF = sF.values(0);
  const double scale = opE * sB.values(0) * opF;
  CompositionReport rep;
  for (int j = 0; j < sEBF.values.size(); ++j) {
    const double bound = j < sB.values.size() ? opE * sB.values(j) * opF : 0.0;
    double ratio;
    if (bound > 1e-14 * scale)
      ratio = sEBF.values(j) / bound;
    else
      // Zero bound forces a zero singular value; accept roundoff-level noise.
      ratio = sEBF.values(j) <= 1e-12 * std::max(scale, 1.0) ? 0.0
                                                             : std::numeric_limits<double>::infinity();
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  rep.ok = rep.max_ratio <= 1.0 + 1e-10;
  return rep;
}

KyFanReport kyfan_additive_check(const Eigen::MatrixXd& B, const Eigen::MatrixXd& Bp) {
  if (B.rows() != Bp.rows() || B.cols() != Bp.cols())
    throw std::invalid_argument("kyfan_additive_check: shape mismatch");
  const SValues sB = singular_values(B);
  const SValues sBp = singular_values(Bp);
  const SValues sSum = singular_values(B + Bp);
  KyFanReport rep;
  const int nB = static_cast<int>(sB.values.size());
  const int nBp = static_cast<int>(sBp.values.size());
  const int nSum = static_cast<int>(sSum.values.size());
  for (int j = 1; j <= nB; ++j)
    for (int k = 1; k <= nBp; ++k) {
      if (j + k - 1 > nSum) continue;
      const double lhs = sSum.values(j + k - 2);
      const double rhs = sB.values(j - 1) + sBp.values(k - 1);
      const double viol = (lhs - rhs) / std::max(rhs, 1e-300);
      if (viol > rep.max_additive_violation) {
        rep.max_additive_violation = viol;
        rep.additive_witness = {j, k};
      }
    }
  const bool square_product = B.cols() == Bp.rows();
  if (square_product) {
    const SValues sProd = singular_values(B * Bp);
    const int nProd = static_cast<int>(sProd.values.size());
    for (int j = 1; j <= nB; ++j)
      for (int k = 1; k <= nBp; ++k) {
        if (j + k - 1 > nProd) continue;
        const double lhs = sProd.values(j + k - 2);
        const double rhs = sB.values(j - 1) * sBp.values(k - 1);
        const double scale = std::max(rhs, 1e-12 * sB.values(0) * sBp.values(0));
        const double viol = (lhs - rhs) / std::max(scale, 1e-300);
        if (viol > rep.max_multiplicative_violation) {
          rep.max_multiplicative_violation = viol;
          rep.multiplicative_witness = {j, k};
        }
      }
  }
  rep.additive_ok = rep.max_additive_violation <= 1e-10;
  rep.multiplicative_ok = rep.max_multiplicative_violation <= 1e-10;
  return rep;
}

namespace {

// Fitted limit of j^{1/p} s_j over the tail half of the sequence, with the
// interquartile spread as a dispersion estimate.
std::pair<double, double> fitted_limit(const SValues& s, double p) {
  const int n = static_cast<int>(s.values.size());
  std::vector<double> g;
  for (int j = n / 2; j < n; ++j) g.push_back(std::pow(j + 1.0, 1.0 / p) * s.values(j));
  if (g.empty()) g.push_back(0.0);
  std::sort(g.begin(), g.end());
  auto quantile = [&](double q) {
    const double pos = q * (g.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, g.size() - 1);
    return g[lo] + (pos - lo) * (g[hi] - g[lo]);
  };
  return {quantile(0.5), quantile(0.75) - quantile(0.25)};
}

}  // namespace

KyFanAsymptoticReport kyfan_asymptotic_demo(const std::vector<Eigen::MatrixXd>& heads,
                                            const std::vector<Eigen::MatrixXd>& tails,
                                            double p) {
  if (heads.empty() || heads.size() != tails.size())
    throw std::invalid_argument("kyfan_asymptotic_demo: need matching nonempty families");
  const Eigen::MatrixXd B = heads[0] + tails[0];
  KyFanAsymptoticReport rep;
  rep.splits_ok = true;
  for (size_t i = 0; i < heads.size(); ++i) {
    const double mismatch = (heads[i] + tails[i] - B).cwiseAbs().maxCoeff();
    if (mismatch > 1e-12 * std::max(1.0, B.cwiseAbs().maxCoeff())) rep.splits_ok = false;
  }
  const auto [C_full, disp] = fitted_limit(singular_values(B), p);
  rep.C_full = C_full;
  rep.trend_consistent = rep.splits_ok;
  for (size_t i = 0; i < heads.size(); ++i) {
    KyFanAsymptoticRow row;
    row.index = static_cast<int>(i);
    row.C_M = fitted_limit(singular_values(heads[i]), p).first;
    row.c_M = weak_schatten_quasinorm(singular_values(tails[i]), p);
    if (std::abs(row.C_M - rep.C_full) > row.c_M + disp + 1e-12)
      rep.trend_consistent = false;
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<ResolventDiffRow> resolvent_difference_study(
    const Eigen::MatrixXd& A, const std::vector<Eigen::MatrixXd>& approximants,
    double b, double p) {
  const int n = static_cast<int>(A.rows());
  if (A.rows() != A.cols())
    throw std::invalid_argument("resolvent_difference_study: A must be square");
  const Eigen::MatrixXd shifted = A + b * Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> lltA(shifted);
  if (lltA.info() != Eigen::Success)
    throw numeric_error("resolvent_difference_study: A + bI is not positive definite");
  const Eigen::MatrixXd invA = lltA.solve(Eigen::MatrixXd::Identity(n, n));

  std::vector<ResolventDiffRow> rows;
  int idx = 0;
  for (const Eigen::MatrixXd& Ak : approximants) {
    if (Ak.rows() != n || Ak.cols() != n)
      throw std::invalid_argument("resolvent_difference_study: size mismatch in family");
    Eigen::LLT<Eigen::MatrixXd> lltK(Ak + b * Eigen::MatrixXd::Identity(n, n));
    if (lltK.info() != Eigen::Success)
      throw numeric_error(
          "resolvent_difference_study: an approximant + bI is not positive definite");
    const Eigen::MatrixXd D = lltK.solve((Ak - A) * invA);
    const SValues s = singular_values(D);
    ResolventDiffRow row;
    row.index = idx++;
    row.opnorm_diff = s.values.size() ? s.values(0) : 0.0;
    row.schatten_sup = weak_schatten_quasinorm(s, p);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fracweyl
