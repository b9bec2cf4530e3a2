#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "jaynes/dec.hpp"

using namespace jaynes;
using namespace jaynes::dec;

namespace {

Cochain random_cochain(const MeshPtr& m, std::size_t k, Rng& rng) {
  Cochain c = Cochain::zero(m, k);
  for (double& x : c.coefficients()) x = rng.normal();
  return c;
}

// Dense matrix of the deRham Laplacian on k-cochains, built column by column.
Eigen::MatrixXd dense_laplacian(const MeshPtr& m, std::size_t k) {
  const std::size_t n = m->count(k);
  Eigen::MatrixXd a(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Cochain e = Cochain::zero(m, k);
    e.coefficients()[j] = 1.0;
    const Cochain col = derham_laplacian(e);
    for (std::size_t i = 0; i < n; ++i) a(i, j) = col[i];
  }
  return a;
}

// Kernel dimension of a matrix self-adjoint in the weighted inner product
// W: symmetrize with W^{1/2}.
std::size_t kernel_dimension(const MeshPtr& m, std::size_t k) {
  const Eigen::MatrixXd a = dense_laplacian(m, k);
  Eigen::VectorXd w(a.rows());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = std::sqrt(m->star_weight(k, static_cast<std::size_t>(i)));
  const Eigen::MatrixXd s = w.asDiagonal() * a * w.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  std::size_t zeros = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i]) < 1e-8) ++zeros;
  return zeros;
}

}  // namespace

TEST(Mesh, Validation) {
  EXPECT_THROW(make_mesh({2}, {1.0}), ValidationError);
  EXPECT_THROW(make_mesh({4, 4}, {1.0}), ValidationError);
  EXPECT_THROW(make_mesh({4, 4, 4}, {1.0, 1.0, 1.0}), ValidationError);
  EXPECT_THROW(make_mesh({4}, {0.0}), ValidationError);
  const auto m = make_mesh({4, 5}, {1.0, 2.0});
  EXPECT_EQ(m->count(0), 20u);
  EXPECT_EQ(m->count(1), 40u);
  EXPECT_EQ(m->count(2), 20u);
  EXPECT_THROW(Cochain(m, 1, Vector(3, 0.0)), ValidationError);
}

TEST(Dec, BoundaryOfBoundaryIsZero) {
  Rng rng(5);
  for (const auto& m : {make_mesh({7}, {1.0}), make_mesh({5, 6}, {1.0, 1.5})}) {
    for (std::size_t k = 0; k + 2 <= m->dimension(); ++k) {
      const auto dd = exterior_derivative(exterior_derivative(random_cochain(m, k, rng)));
      for (double v : dd.coefficients()) EXPECT_NEAR(v, 0.0, 1e-12);
    }
  }
}

TEST(Dec, StarSquaredSign) {
  Rng rng(6);
  const auto m = make_mesh({5, 4}, {1.3, 0.7});
  for (std::size_t k = 0; k <= 2; ++k) {
    const auto c = random_cochain(m, k, rng);
    const auto ss = hodge_star(hodge_star(c));
    const double sign = (k * (2 - k)) % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(ss[i], sign * c[i], 1e-12);
  }
}

TEST(Dec, CodifferentialIsAdjointOfD) {
  Rng rng(7);
  for (const auto& m : {make_mesh({9}, {2.0}), make_mesh({6, 5}, {1.0, 0.8})}) {
    for (std::size_t k = 0; k < m->dimension(); ++k) {
      const auto a = random_cochain(m, k, rng);
      const auto b = random_cochain(m, k + 1, rng);
      const double lhs = cochain_inner_product(exterior_derivative(a), b);
      const double rhs = cochain_inner_product(a, codifferential(b));
      EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST(Dec, ZeroFormLaplacianMatchesFiniteDifferenceSymbol) {
  const std::size_t nx = 8, ny = 6;
  const double lx = 1.0, ly = 2.0;
  const auto m = make_mesh({nx, ny}, {lx, ly});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_laplacian(m, 0));
  std::vector<double> expect;
  const double hx = lx / nx, hy = ly / ny;
  for (std::size_t p = 0; p < nx; ++p)
    for (std::size_t q = 0; q < ny; ++q)
      expect.push_back(4.0 / (hx * hx) * std::pow(std::sin(pi * p / nx), 2) +
                       4.0 / (hy * hy) * std::pow(std::sin(pi * q / ny), 2));
  std::sort(expect.begin(), expect.end());
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(es.eigenvalues()[static_cast<Eigen::Index>(i)], expect[i], 1e-9);
}

TEST(Dec, HarmonicFormsCountTorusTopology) {
  const auto ring = make_mesh({8}, {1.0});
  EXPECT_EQ(kernel_dimension(ring, 0), 1u);
  EXPECT_EQ(kernel_dimension(ring, 1), 1u);
  const auto torus = make_mesh({5, 4}, {1.0, 1.7});
  EXPECT_EQ(kernel_dimension(torus, 0), 1u);
  EXPECT_EQ(kernel_dimension(torus, 1), 2u);
  EXPECT_EQ(kernel_dimension(torus, 2), 1u);
}

TEST(Dec, LaplacianIsPositiveSemidefinite) {
  Rng rng(8);
  const auto m = make_mesh({6, 7}, {1.0, 1.0});
  for (std::size_t k = 0; k <= 2; ++k)
    for (int t = 0; t < 10; ++t) {
      const auto c = random_cochain(m, k, rng);
      EXPECT_GE(cochain_inner_product(c, derham_laplacian(c)), -1e-10);
    }
}

TEST(Dec, RejectsMisuse) {
  const auto m = make_mesh({4, 4}, {1.0, 1.0});
  EXPECT_THROW(exterior_derivative(Cochain::zero(m, 2)), ValidationError);
  EXPECT_THROW(codifferential(Cochain::zero(m, 0)), ValidationError);
  const auto other = make_mesh({4, 4}, {1.0, 1.0});
  EXPECT_THROW(cochain_inner_product(Cochain::zero(m, 1), Cochain::zero(other, 1)), ValidationError);
}

TEST(Dec, ZeroFormLaplacianIsAdditiveOnProductMesh) {
  Rng rng(9);
  const std::size_t nx = 7, ny = 5;
  const auto rx = make_mesh({nx}, {1.3}), ry = make_mesh({ny}, {0.6});
  const auto torus = make_mesh({nx, ny}, {1.3, 0.6});
  const auto f = random_cochain(rx, 0, rng), g = random_cochain(ry, 0, rng);
  Cochain fg = Cochain::zero(torus, 0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) fg.coefficients()[torus->vertex_index(i, j)] = f[i] * g[j];
  const auto lfg = derham_laplacian(fg);
  const auto lf = derham_laplacian(f), lg = derham_laplacian(g);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      EXPECT_NEAR(lfg[torus->vertex_index(i, j)], lf[i] * g[j] + f[i] * lg[j], 1e-11);
}
