#include <doctest.h>

#include <stdexcept>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "fracweyl/errors.hpp"
#include "fracweyl/snumbers.hpp"

using namespace fracweyl;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd B(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) B(i, j) = u(rng);
  return B;
}

// Reference route: s_j(B) as the square roots of the eigenvalues of B^T B.
Eigen::VectorXd svd_via_gram(const Eigen::MatrixXd& B) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B.transpose() * B);
  Eigen::VectorXd ev = es.eigenvalues();
  Eigen::VectorXd s(ev.size());
  for (int i = 0; i < ev.size(); ++i)
    s(i) = std::sqrt(std::max(0.0, ev(ev.size() - 1 - i)));
  return s;
}

}  // namespace

TEST_CASE("singular values match the Gram-matrix route") {
  const Eigen::MatrixXd B = random_matrix(7, 4, 17);
  const SValues s = singular_values(B);
  REQUIRE(s.values.size() == 4);
  CHECK(s.rows == 7);
  CHECK(s.cols == 4);
  const Eigen::VectorXd ref = svd_via_gram(B);
  for (int i = 0; i < 4; ++i) {
    CHECK(s.values(i) == doctest::Approx(ref(i)).epsilon(1e-10));
    if (i > 0) CHECK(s.values(i) <= s.values(i - 1));
  }
}

TEST_CASE("singular values of a sign-indefinite diagonal") {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 3.0;
  D(1, 1) = -5.0;
  const SValues s = singular_values(D);
  CHECK(s.values(0) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(s.values(1) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("adjoint invariance") {
  const Eigen::MatrixXd B = random_matrix(5, 3, 23);
  const SValues s = singular_values(B);
  const SValues st = singular_values(B.transpose());
  REQUIRE(s.values.size() == st.values.size());
  for (int i = 0; i < s.values.size(); ++i)
    CHECK(s.values(i) == doctest::Approx(st.values(i)).epsilon(1e-12));
}

TEST_CASE("weak Schatten quasi-norm by hand") {
  SValues s;
  s.values.resize(3);
  s.values << 4.0, 3.0, 0.5;
  s.rows = s.cols = 3;
  // j^{1/1} s_j = 4, 6, 1.5; the supremum is attained at j = 2.
  CHECK(weak_schatten_quasinorm(s, 1.0) == 6.0);
  CHECK(weak_schatten_quasinorm(s, 2.0) ==
        doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(weak_schatten_quasinorm(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(weak_schatten_quasinorm(s, -1.0), std::invalid_argument);
}

TEST_CASE("composition bound holds for random factors") {
  const Eigen::MatrixXd E = random_matrix(6, 6, 31);
  const Eigen::MatrixXd B = random_matrix(6, 6, 37);
  const Eigen::MatrixXd F = random_matrix(6, 6, 41);
  const CompositionReport rep = check_composition_bound(E, B, F);
  CHECK(rep.ok);
  CHECK(rep.max_ratio <= 1.0 + 1e-10);

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(6, 6);
  const CompositionReport tight = check_composition_bound(I, B, I);
  CHECK(tight.ok);
  CHECK(tight.max_ratio == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Ky Fan inequalities on a hand-checkable pair") {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd Bp = Eigen::MatrixXd::Zero(2, 2);
  B(0, 0) = 1.0;
  Bp(1, 1) = 1.0;
  // s(B) = s(B') = (1, 0); s(B + B') = (1, 1); s(B B') = (0, 0).
  // j = k = 1 gives s_1(B+B') = 1 <= 2; j = 1, k = 2 gives s_2(B+B') = 1 <= 1.
  const KyFanReport rep = kyfan_additive_check(B, Bp);
  CHECK(rep.additive_ok);
  CHECK(rep.multiplicative_ok);
  CHECK(rep.max_additive_violation <= 1e-10);

  const Eigen::MatrixXd R1 = random_matrix(8, 8, 51);
  const Eigen::MatrixXd R2 = random_matrix(8, 8, 53);
  const KyFanReport rnd = kyfan_additive_check(R1, R2);
  CHECK(rnd.additive_ok);
  CHECK(rnd.multiplicative_ok);

  CHECK_THROWS_AS(kyfan_additive_check(random_matrix(3, 4, 1), random_matrix(2, 4, 2)),
                  std::invalid_argument);
}

TEST_CASE("asymptotic splitting demo on an explicit weak-l^p family") {
  // B = diag(1/j) has j^{1} s_j identically 1.  Splitting off a shrinking
  // proportional tail keeps the head in the same weak class: the head constant
  // is 1 - delta and the tail quasi-norm is exactly delta.
  const int n = 40;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) B(j, j) = 1.0 / (j + 1.0);

  const std::vector<double> deltas = {0.5, 0.25, 0.125};
  std::vector<Eigen::MatrixXd> heads, tails;
  for (double delta : deltas) {
    Eigen::MatrixXd tail = delta * B;
    heads.push_back(B - tail);
    tails.push_back(std::move(tail));
  }

  const KyFanAsymptoticReport rep = kyfan_asymptotic_demo(heads, tails, 1.0);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.splits_ok);
  CHECK(rep.trend_consistent);
  CHECK(rep.C_full == doctest::Approx(1.0).epsilon(1e-12));
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].index == static_cast<int>(i));
    CHECK(rep.rows[i].C_M == doctest::Approx(1.0 - deltas[i]).epsilon(1e-12));
    CHECK(rep.rows[i].c_M == doctest::Approx(deltas[i]).epsilon(1e-12));
  }

  std::vector<Eigen::MatrixXd> bad_tails = tails;
  bad_tails[1](0, 0) += 0.5;
  const KyFanAsymptoticReport bad = kyfan_asymptotic_demo(heads, bad_tails, 1.0);
  CHECK_FALSE(bad.splits_ok);
}

TEST_CASE("resolvent differences through the factored identity") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
  A.diagonal() << 1.0, 2.0, 3.0;
  std::vector<Eigen::MatrixXd> approx;
  approx.push_back(A);
  Eigen::MatrixXd Ak = A;
  Ak.diagonal().array() += 0.1;
  approx.push_back(Ak);

  const double b = 1.0;
  const auto rows = resolvent_difference_study(A, approx, b, 1.0);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].index == 0);
  CHECK(rows[0].opnorm_diff < 1e-14);
  CHECK(rows[0].schatten_sup < 1e-14);

  // Closed form for the diagonal perturbation: the difference is diagonal with
  // entries 1/(d+1) - 1/(d+1.1), largest at d = 1.
  const double expect = 1.0 / 2.0 - 1.0 / 2.1;
  CHECK(rows[1].opnorm_diff == doctest::Approx(expect).epsilon(1e-12));

  // Cross-check against naive subtraction, which is fine at this scale.
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd naive =
      (A + b * I).inverse() - (Ak + b * I).inverse();
  const SValues ns = singular_values(naive);
  CHECK(rows[1].opnorm_diff == doctest::Approx(ns.values(0)).epsilon(1e-12));
  double sup = 0.0;
  for (int j = 0; j < ns.values.size(); ++j)
    sup = std::max(sup, (j + 1.0) * ns.values(j));
  CHECK(rows[1].schatten_sup == doctest::Approx(sup).epsilon(1e-12));

  Eigen::MatrixXd indefinite = A;
  indefinite(0, 0) = -5.0;
  CHECK_THROWS_AS(resolvent_difference_study(indefinite, approx, b, 1.0),
                  numeric_error);
}
