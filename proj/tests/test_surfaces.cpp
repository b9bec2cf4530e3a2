#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "jaynes/surfaces.hpp"

using namespace jaynes;
using namespace jaynes::surfaces;
using grids::Axis;

namespace {

UniformGrid square(std::size_t n, double lo = 0.0, double hi = 1.0) {
  return UniformGrid({Axis::closed_interval(lo, hi, n), Axis::closed_interval(lo, hi, n)});
}

// Direct dense solve of the interior 5-point system.
Vector dense_film(const WireFrame& frame) {
  const UniformGrid& g = frame.grid;
  const std::size_t n = g.size(), ny = g.axis(1).points;
  Vector full(n, 0.0);
  const auto ring = boundary_nodes(g);
  for (std::size_t k = 0; k < ring.size(); ++k) full[ring[k]] = frame.boundary_values[k];
  std::vector<long> id(n, -1);
  long m = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_boundary_node(g, i)) id[i] = m++;
  const double wx = 1.0 / std::pow(g.axis(0).spacing, 2), wy = 1.0 / std::pow(g.axis(1).spacing, 2);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (std::size_t i = 0; i < n; ++i) {
    if (id[i] < 0) continue;
    a(id[i], id[i]) = 2.0 * (wx + wy);
    for (auto [j, w] : {std::pair{i - ny, wx}, {i + ny, wx}, {i - 1, wy}, {i + 1, wy}}) {
      if (id[j] >= 0)
        a(id[i], id[j]) -= w;
      else
        b[id[i]] += w * full[j];
    }
  }
  const Eigen::VectorXd x = a.ldlt().solve(b);
  for (std::size_t i = 0; i < n; ++i)
    if (id[i] >= 0) full[i] = x[id[i]];
  return full;
}

}  // namespace

TEST(Film, QuadraticHarmonicFramesAreReproducedExactly) {
  const auto g = square(41, -1.0, 1.0);
  for (auto f : {std::function<double(double, double)>([](double x, double y) { return x * x - y * y; }),
                 std::function<double(double, double)>([](double x, double y) { return 3.0 * x * y + x - 2.0 * y + 0.5; })}) {
    const auto sol = solve_film(WireFrame::from_function(g, f), {});
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto x = g.coordinates(i);
      EXPECT_NEAR(sol.height[i], f(x[0], x[1]), 1e-9);
    }
    EXPECT_EQ(sol.boundary_residual, 0.0);
    EXPECT_LE(sol.interior_laplacian_norm, 1e-10);
  }
}

TEST(Film, MatchesDenseSolve) {
  Rng rng(41);
  const UniformGrid g({Axis::closed_interval(0.0, 1.0, 13), Axis::closed_interval(0.0, 2.0, 17)});
  Vector v(boundary_nodes(g).size());
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  const WireFrame frame(g, v);
  const auto sol = solve_film(frame, {});
  const Vector ref = dense_film(frame);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(sol.height[i], ref[i], 1e-10);
}

TEST(Film, MaximumPrincipleAndEnergyMinimality) {
  Rng rng(42);
  const auto g = square(21);
  Vector v(boundary_nodes(g).size());
  for (double& x : v) x = rng.uniform(-2.0, 3.0);
  const auto sol = solve_film(WireFrame(g, v), {});
  const double lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
  for (double h : sol.height.values()) {
    EXPECT_GE(h, lo - 1e-12);
    EXPECT_LE(h, hi + 1e-12);
  }
  const double e0 = dirichlet_energy(sol.height);
  for (int t = 0; t < 20; ++t) {
    auto p = sol.height;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!is_boundary_node(g, i)) p[i] += 1e-3 * rng.normal();
    EXPECT_GT(dirichlet_energy(p), e0);
  }
}

TEST(Film, Validation) {
  const auto g = square(5);
  EXPECT_THROW(WireFrame(g, Vector(3, 0.0)), ValidationError);
  EXPECT_THROW(WireFrame(UniformGrid({Axis::closed_interval(0.0, 1.0, 5)}), Vector(2, 0.0)), ValidationError);
  Vector v(boundary_nodes(g).size(), 0.0);
  v[0] = NAN;
  EXPECT_THROW(WireFrame(g, v), ValidationError);
  variational::SolverConfig c;
  c.tolerance = 0.0;
  EXPECT_THROW(solve_film(WireFrame(g, Vector(16, 0.0)), c), ValidationError);
}

TEST(Film, UnreachableToleranceThrowsConvergenceError) {
  const auto g = square(33);
  variational::SolverConfig c;
  c.tolerance = 1e-16;
  const auto frame = WireFrame::from_function(g, [](double x, double y) { return std::sin(pi * x) * std::sinh(pi * y); });
  EXPECT_THROW(solve_film(frame, c), ConvergenceError);
}

TEST(MeanValue, HarmonicHasZeroDefectAndQuadraticMatchesPrediction) {
  const auto g = square(101, -1.0, 1.0);
  const double h = g.axis(0).spacing;
  const auto harmonic = grids::ScalarFieldOnGrid::sample(g, [](const auto& x) { return x[0] * x[0] - x[1] * x[1]; });
  const auto a = mean_value_residual(harmonic, {50, 50}, 20 * h);
  EXPECT_NEAR(a.ball_average_minus_center, 0.0, 1e-12);
  EXPECT_NEAR(a.laplacian_prediction, 0.0, 1e-9);

  const auto bowl = grids::ScalarFieldOnGrid::sample(g, [](const auto& x) { return x[0] * x[0] + x[1] * x[1]; });
  const auto b = mean_value_residual(bowl, {50, 50}, 20 * h);
  EXPECT_NEAR(b.laplacian_prediction, (20 * h) * (20 * h) / 2.0, 1e-9);
  EXPECT_LT(std::abs(b.ball_average_minus_center / b.laplacian_prediction - 1.0), 0.05);
  EXPECT_THROW(mean_value_residual(bowl, {2, 50}, 20 * h), ValidationError);
}
