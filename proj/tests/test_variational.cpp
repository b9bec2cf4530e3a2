#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "jaynes/variational.hpp"

using namespace jaynes;
using namespace jaynes::variational;

namespace {

Vector random_symmetric(std::size_t n, Rng& rng) {
  Vector a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a[i * n + j] = a[j * n + i] = rng.normal();
  return a;
}

double eigen_lowest(std::size_t n, const Vector& a) {
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a[i * n + j];
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()[0];
}

// Operator exposing only a matrix-vector product, forcing the CG path.
SymmetricOperator matvec_only(std::size_t n, Vector a) {
  SymmetricOperator op = SymmetricOperator::from_dense(n, std::move(a));
  op.band.reset();
  op.lower_bound.reset();
  op.dense.reset();
  return op;
}

}  // namespace

TEST(Variational, DenseMatchesEigen) {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + rng.index(30);
    const Vector a = random_symmetric(n, rng);
    const auto r = minimize_quadratic_form(SymmetricOperator::from_dense(n, a), {});
    EXPECT_NEAR(r.value, eigen_lowest(n, a), 1e-8 * std::max(1.0, std::abs(r.value)));
    EXPECT_NEAR(norm2(r.minimizer), 1.0, 1e-12);
    EXPECT_LE(stationarity_residual(SymmetricOperator::from_dense(n, a), r.minimizer), 1e-9 * std::max(1.0, std::abs(r.value)));
    EXPECT_EQ(r.multipliers.second, r.value);
  }
}

TEST(Variational, MatrixFreePathMatchesEigen) {
  Rng rng(22);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 3 + rng.index(20);
    const Vector a = random_symmetric(n, rng);
    const auto r = minimize_quadratic_form(matvec_only(n, a), {});
    EXPECT_NEAR(r.value, eigen_lowest(n, a), 1e-8 * std::max(1.0, std::abs(r.value)));
  }
}

TEST(Variational, BandPathMatchesClosedForm) {
  const std::size_t n = 200;
  const double h = 1.0 / (n + 1);
  Band b{Vector(n, 2.0 / (h * h)), Vector(n - 1, -1.0 / (h * h))};
  const auto r = minimize_quadratic_form(SymmetricOperator::from_band(b), {});
  const double exact = 4.0 / (h * h) * std::pow(std::sin(pi * h / 2.0), 2);
  EXPECT_NEAR(r.value, exact, 1e-8 * exact);
  EXPECT_LE(detail::sturm_count(b, r.value * (1 + 1e-9)), 1u);
}

TEST(Variational, RayleighHistoryIsNonIncreasing) {
  Rng rng(23);
  const std::size_t n = 25;
  const Vector a = random_symmetric(n, rng);
  const auto r = minimize_quadratic_form(SymmetricOperator::from_dense(n, a), {});
  for (std::size_t i = 1; i < r.rayleigh_history.size(); ++i)
    EXPECT_LE(r.rayleigh_history[i], r.rayleigh_history[i - 1] + 1e-12 * std::max(1.0, std::abs(r.rayleigh_history[i])));
}

TEST(Variational, RejectsNonSymmetricOperator) {
  EXPECT_THROW(minimize_quadratic_form(SymmetricOperator::from_dense(2, {1.0, 2.0, 0.0, 1.0}), {}), ValidationError);
}

TEST(Variational, RejectsBadConfig) {
  const auto op = SymmetricOperator::from_dense(2, {1.0, 0.0, 0.0, 2.0});
  SolverConfig c;
  c.tolerance = 0.0;
  EXPECT_THROW(minimize_quadratic_form(op, c), ValidationError);
  c = {};
  c.max_iterations = 0;
  EXPECT_THROW(minimize_quadratic_form(op, c), ValidationError);
  EXPECT_THROW(minimize_quadratic_form(SymmetricOperator::from_dense(1, {1.0}), {}), ValidationError);
}

TEST(Variational, IterationCapThrowsWithBestIterate) {
  Rng rng(24);
  const std::size_t n = 40;
  const Vector a = random_symmetric(n, rng);
  SolverConfig c;
  c.max_iterations = 1;
  c.tolerance = 1e-15;
  c.shift = -100.0;  // far from the spectrum: slow contraction
  try {
    minimize_quadratic_form(SymmetricOperator::from_dense(n, a), c);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.best_iterate().size(), n);
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Variational, DeterministicForFixedSeed) {
  Rng rng(25);
  const std::size_t n = 12;
  const Vector a = random_symmetric(n, rng);
  const auto r1 = minimize_quadratic_form(SymmetricOperator::from_dense(n, a), {});
  const auto r2 = minimize_quadratic_form(SymmetricOperator::from_dense(n, a), {});
  EXPECT_EQ(r1.minimizer, r2.minimizer);
  EXPECT_EQ(r1.value, r2.value);
}

TEST(Variational, HouseholderReductionPreservesSpectrum) {
  Rng rng(26);
  const std::size_t n = 17;
  const Vector a = random_symmetric(n, rng);
  const Band b = detail::householder_tridiagonal(n, a);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = b.diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) t(i, i + 1) = t(i + 1, i) = b.off[i];
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a[i * n + j];
  const Eigen::VectorXd et = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(t, Eigen::EigenvaluesOnly).eigenvalues();
  const Eigen::VectorXd em = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(et[i], em[i], 1e-12);
  EXPECT_LE(detail::lowest_eigenvalue_lower_bound(b), em[0] + 1e-12);
  EXPECT_NEAR(detail::lowest_eigenvalue_lower_bound(b), em[0], 1e-12);
}
