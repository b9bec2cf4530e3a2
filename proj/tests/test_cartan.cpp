#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "jaynes/cartan.hpp"
#include "jaynes/metrics.hpp"

using namespace jaynes;
using namespace jaynes::cartan;

namespace {

Perturbation rotation(double amplitude, std::array<int, 2> mode = {1, 0}) {
  Perturbation p;
  p.kind = PerturbationKind::Rotation;
  p.amplitude = amplitude;
  p.mode = mode;
  return p;
}

Mat2 rot(double t) { return {{{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}}}; }

}  // namespace

TEST(Cartan, CartesianFrameIsFlatAndTorsionFree) {
  const auto cfg = cartesian_frame(2.0);
  for (const Point& x : {Point{0.0, 0.0, 0}, Point{1.3, 1.9, 0}}) {
    const auto r = structure_report(cfg, x);
    EXPECT_EQ(r.torsion_norm, 0.0);
    EXPECT_EQ(r.curvature_norm, 0.0);
  }
}

TEST(Cartan, PolarFrame) {
  const auto lc = polar_frame(true);
  const auto bare = polar_frame(false);
  for (double r : {0.4, 1.0, 1.7}) {
    const Point x{r, 0.8, 0.0};
    const auto a = structure_report(lc, x);
    EXPECT_LT(a.torsion_norm, 1e-9);
    EXPECT_LT(a.curvature_norm, 1e-6);
    // omega^1_2 = -dphi
    EXPECT_NEAR(lc.connection(x)[0][1][1], -1.0, 1e-9);
    // Without a connection the torsion is d(r dphi) = dr ^ dphi.
    const auto t = structure_torsion(bare, x);
    EXPECT_NEAR(t[0], 0.0, 1e-12);
    EXPECT_NEAR(t[1], 1.0, 1e-9);
  }
}

TEST(Cartan, SphereCurvatureForm) {
  for (double radius : {1.0, 2.0}) {
    const auto cfg = sphere_frame(radius);
    const auto metric = geometry::sphere_metric(radius);
    for (double th : {0.5, 1.2, 2.6}) {
      const Point x{th, 3.0, 0.0};
      EXPECT_NEAR(cfg.connection(x)[0][1][1], -std::cos(th), 1e-9);
      const auto rep = structure_report(cfg, x);
      EXPECT_LT(rep.torsion_norm, 1e-9);
      // Omega^1_2 = K e^1 ^ e^2 = sin(theta) dtheta ^ dphi for every radius.
      EXPECT_NEAR(rep.curvature[0][1], std::sin(th), 1e-7);
      EXPECT_NEAR(rep.curvature[1][0], -std::sin(th), 1e-7);
      EXPECT_NEAR(rep.curvature[0][0], 0.0, 1e-12);
      const auto oc = frame_curvature_from_riemann(geometry::curvature(metric, x), cfg.coframe(x));
      for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) EXPECT_NEAR(rep.curvature[m][n], oc[m][n], 1e-7);
    }
  }
}

TEST(Cartan, Validation) {
  EXPECT_THROW(cartesian_frame(0.0), ValidationError);
  Perturbation bad;
  bad.frame_index = 2;
  EXPECT_THROW(cartesian_frame(1.0, {bad}), ValidationError);
  // Stencil at the pole leaves the chart.
  EXPECT_THROW(structure_torsion(sphere_frame(), {0.0, 1.0, 0.0}), ValidationError);
  // A coframe that is not orthonormal for the metric is rejected.
  const auto conn = levi_civita_connection(geometry::sphere_metric(1.0), [](const Point&) { return Mat2{{{1.0, 0.0}, {0.0, 1.0}}}; });
  EXPECT_THROW(conn({1.0, 1.0, 0.0}), ValidationError);
  EXPECT_THROW(levi_civita_connection(geometry::three_sphere_metric(), {}), ValidationError);
  const auto grid = chart_grid(cartesian_frame().chart, 4, 4);
  EXPECT_THROW(FrameField(grid, std::vector<Mat2>(3)), ValidationError);
}

TEST(Cartan, ProjectionRestoresOrthonormality) {
  Rng rng(51);
  for (int t = 0; t < 50; ++t) {
    Mat2 a{{{rng.normal(), rng.normal()}, {rng.normal(), rng.normal()}}};
    const Mat2 g = detail::mul(detail::transpose(a), a);
    if (det2(g) < 1e-3) continue;
    Mat2 e{{{rng.normal(), rng.normal()}, {rng.normal(), rng.normal()}}};
    const Mat2 p = detail::project_orthonormal(e, g);
    const geometry::Mat g3{{{g[0][0], g[0][1], 0}, {g[1][0], g[1][1], 0}, {0, 0, 0}}};
    EXPECT_LT(orthonormality_defect(p, g3), 1e-10 * std::max(1.0, g[0][0] + g[1][1]));
    // Already-admissible frames are fixed points.
    const Mat2 q = detail::project_orthonormal(p, g);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(q[i][j], p[i][j], 1e-10 * std::max(1.0, std::abs(p[i][j])));
  }
}

TEST(Cartan, FunctionalMatchesContinuumForRotatedFrame) {
  // E = R(s) with s = A sin(2 pi x): sum of squared gradients is 2 |grad s|^2,
  // integrating to 4 pi^2 A^2 on the unit torus.
  const double a = 0.3;
  const auto cfg = cartesian_frame(1.0, {rotation(a)});
  const auto grid = chart_grid(cfg.chart, 128, 8);
  const double f = torsion_functional(cfg, grid);
  EXPECT_NEAR(f / (4.0 * pi * pi * a * a), 1.0, 1e-3);
  EXPECT_EQ(torsion_functional(cartesian_frame(), grid), 0.0);
}

TEST(Cartan, GradientMatchesDirectionalDerivative) {
  Rng rng(52);
  const auto grid = chart_grid(cartesian_frame().chart, 12, 10);
  const auto field = sample(cartesian_frame(1.0, {rotation(0.4, {1, 1}), rotation(0.2, {0, 2})}), grid);
  Vector phi(grid.size());
  for (double& v : phi) v = rng.normal();
  auto at = [&](double t) {
    FrameField f = field;
    for (std::size_t p = 0; p < f.coframe.size(); ++p) f.coframe[p] = detail::mul(rot(t * phi[p]), field.coframe[p]);
    return torsion_functional(f);
  };
  const double h = 1e-5;
  const double fd = (at(h) - at(-h)) / (2.0 * h);
  double gn = 0.0;
  const auto g = detail::projected_gradient(field, gn);
  double pred = 0.0;
  const Mat2 j{{{0.0, -1.0}, {1.0, 0.0}}};
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Mat2 v = detail::mul(j, field.coframe[p]);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) pred += g[p][a][b] * phi[p] * v[a][b];
  }
  pred *= grid.cell_volume();
  EXPECT_NEAR(fd, pred, 1e-6 * std::max(1.0, std::abs(pred)));
}

TEST(Cartan, DescentReachesFlatFrameMonotonically) {
  const auto grid = chart_grid(cartesian_frame().chart, 16, 16);
  variational::SolverConfig cfg;
  cfg.tolerance = 1e-8;
  cfg.max_iterations = 5000;
  const auto r = minimize_torsion_functional(sample(cartesian_frame(1.0, {rotation(0.5, {1, 1})}), grid), cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.value, 1e-12);
  EXPECT_LT(r.gradient_norm, 1e-8);
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) EXPECT_LE(r.trajectory[i].value, r.trajectory[i - 1].value);
  // The minimizer is a constant rotation: every node carries the same frame.
  for (const Mat2& e : r.configuration.coframe)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) EXPECT_NEAR(e[a][b], r.configuration.coframe[0][a][b], 1e-6);
  ASSERT_TRUE(r.configuration.connection.has_value());
  for (const auto& w : *r.configuration.connection) EXPECT_LT(std::abs(w[0][1][0]) + std::abs(w[0][1][1]), 1e-5);
}

TEST(Cartan, FlatStartIsStationaryAndFrozenModeKeepsConnection) {
  const auto grid = chart_grid(cartesian_frame().chart, 8, 8);
  const auto flat = minimize_torsion_functional(sample(cartesian_frame(), grid), {});
  EXPECT_EQ(flat.iterations, 0);
  EXPECT_TRUE(flat.converged);
  EXPECT_EQ(flat.value, 0.0);

  variational::SolverConfig short_run;
  short_run.max_iterations = 3;
  const auto init = sample(cartesian_frame(1.0, {rotation(0.3)}), grid);
  const auto r = minimize_torsion_functional(init, short_run, ConnectionMode::Frozen);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_FALSE(r.converged);
  ASSERT_TRUE(r.configuration.connection.has_value());
  EXPECT_EQ(r.configuration.connection->size(), init.connection->size());
  EXPECT_LT(r.value, r.trajectory.front().value);
}

TEST(Cartan, DescentHonoursNonIdentityTargetMetric) {
  const auto grid = chart_grid(geometry::sphere_metric(1.0).chart(), 12, 12);
  const auto metric = geometry::sphere_metric(1.0);
  const auto init = sample(sphere_frame(1.0), grid, [&](const Point& x) { return metric.components(x); });
  variational::SolverConfig cfg;
  cfg.max_iterations = 50;
  cfg.tolerance = 1e-12;
  const auto r = minimize_torsion_functional(init, cfg);
  EXPECT_LE(r.value, r.trajectory.front().value);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto x = grid.coordinates(p);
    EXPECT_LT(orthonormality_defect(r.configuration.coframe[p], metric.components({x[0], x[1], 0.0})), 1e-10);
  }
}

TEST(Cartan, TrajectoryCsv) {
  std::ostringstream os;
  write_trajectory_csv(os, {{0, 1.5, 2.0}, {1, 0.5, 0.25}});
  EXPECT_EQ(os.str(), "iteration,value,gradient_norm\n0,1.5,2\n1,0.5,0.25\n");
}
