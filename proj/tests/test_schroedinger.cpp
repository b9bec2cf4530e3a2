#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "jaynes/schroedinger.hpp"

using namespace jaynes;
using namespace jaynes::schroedinger;
using grids::Axis;

namespace {

// Dense Hamiltonian assembled from the stencil definition, diagonalized by Eigen.
double eigen_ground(const UniformGrid& g, const Vector& v) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto m = g.multi_index(i);
    h(i, i) += v[i];
    for (std::size_t k = 0; k < g.dimension(); ++k) {
      const Axis& a = g.axis(k);
      const double w = 1.0 / (a.spacing * a.spacing);
      h(i, i) += 2.0 * w;
      for (int s : {-1, 1}) {
        auto nb = m;
        const long j = static_cast<long>(m[k]) + s;
        if (j < 0 || j >= static_cast<long>(a.points)) {
          if (a.boundary == grids::Boundary::Dirichlet) continue;
          nb[k] = static_cast<std::size_t>((j + static_cast<long>(a.points)) % static_cast<long>(a.points));
        } else {
          nb[k] = static_cast<std::size_t>(j);
        }
        h(i, g.flat_index(nb)) -= w;
      }
    }
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h, Eigen::EigenvaluesOnly).eigenvalues()[0];
}

double gaussian_energy_closed_form(double s) { return 1.5 / (s * s) - 4.0 / (std::sqrt(pi) * s); }

}  // namespace

TEST(Schroedinger, BoxMatchesDiscreteAndContinuum) {
  const std::size_t n = 500;
  const UniformGrid g({Axis::dirichlet_interval(0.0, 1.0, n)});
  const auto r = ground_state(g, Potential::zero(), {});
  const double h = 1.0 / (n + 1);
  EXPECT_NEAR(r.total_energy, 4.0 / (h * h) * std::pow(std::sin(pi * h / 2), 2), 1e-8);
  EXPECT_NEAR(r.total_energy / (pi * pi), 1.0, 1e-5);
  EXPECT_NEAR(r.state.norm(), 1.0, 1e-12);
  EXPECT_NEAR(r.kinetic + r.potential, r.total_energy, 1e-9);
  EXPECT_EQ(r.coupling, 1.0);
  // Nodeless, sign fixed positive.
  for (double x : r.state.field().values()) EXPECT_GT(x, 0.0);
}

TEST(Schroedinger, HarmonicOneAndTwoDimensions) {
  const UniformGrid g1({Axis::dirichlet_interval(-8.0, 8.0, 1600)});
  EXPECT_NEAR(ground_state(g1, Potential::harmonic(), {}).total_energy, 1.0, 1e-4);

  const UniformGrid g2({Axis::dirichlet_interval(-6.0, 6.0, 23), Axis::dirichlet_interval(-6.0, 6.0, 21)});
  const auto r = ground_state(g2, Potential::harmonic(), {});
  EXPECT_NEAR(r.total_energy, eigen_ground(g2, Potential::harmonic().evaluate(g2)), 1e-8);
}

TEST(Schroedinger, RadialHydrogen) {
  const UniformGrid g({Axis::dirichlet_interval(0.0, 40.0, 4000)});
  EXPECT_NEAR(ground_state(g, Potential::coulomb_radial(), {}).total_energy, -1.0, 2e-3);
  const UniformGrid coarse({Axis::dirichlet_interval(0.0, 30.0, 150)});
  EXPECT_NEAR(ground_state(coarse, Potential::coulomb_radial(), {}).total_energy,
              eigen_ground(coarse, Potential::coulomb_radial().evaluate(coarse)), 1e-8);
}

TEST(Schroedinger, PeriodicAndTabulatedPotential) {
  const UniformGrid g({Axis::periodic_interval(0.0, 1.0, 30), Axis::dirichlet_interval(0.0, 1.0, 17)});
  Rng rng(31);
  Vector v(g.size());
  for (double& x : v) x = rng.uniform(-5.0, 5.0);
  const auto r = ground_state(g, Potential::tabulated(grids::ScalarFieldOnGrid(g, v)), {});
  EXPECT_NEAR(r.total_energy, eigen_ground(g, v), 1e-8 * std::max(1.0, std::abs(r.total_energy)));
  // Variational bound: any trial is at least the ground energy.
  for (int t = 0; t < 10; ++t) {
    Vector w(g.size());
    for (double& x : w) x = rng.normal();
    EXPECT_GE(rayleigh_energy(grids::ScalarFieldOnGrid(g, w), Potential::tabulated(grids::ScalarFieldOnGrid(g, v))),
              r.total_energy - 1e-9);
  }
}

TEST(Schroedinger, PotentialValidation) {
  const UniformGrid g2({Axis::dirichlet_interval(0.0, 1.0, 5), Axis::dirichlet_interval(0.0, 1.0, 5)});
  EXPECT_THROW(Potential::coulomb_radial().evaluate(g2), ValidationError);
  const UniformGrid closed({Axis::closed_interval(0.0, 1.0, 5)});
  EXPECT_THROW(Potential::coulomb_radial().evaluate(closed), ValidationError);
  const UniformGrid other({Axis::dirichlet_interval(0.0, 2.0, 5)});
  const auto tab = Potential::tabulated(grids::ScalarFieldOnGrid(other));
  EXPECT_THROW(tab.evaluate(UniformGrid({Axis::dirichlet_interval(0.0, 1.0, 5)})), ValidationError);
  EXPECT_THROW(QuantumState(grids::ScalarFieldOnGrid(other, Vector(5, 1.0))), ValidationError);
  EXPECT_THROW(QuantumState::normalized(grids::ScalarFieldOnGrid(other)), ValidationError);
}

TEST(Schroedinger, KineticAdditivity) {
  Rng rng(32);
  const UniformGrid a({Axis::dirichlet_interval(0.0, 1.0, 31)});
  const UniformGrid b({Axis::periodic_interval(0.0, 2.0, 12), Axis::dirichlet_interval(0.0, 1.0, 9)});
  for (int t = 0; t < 10; ++t) {
    Vector fa(a.size()), fb(b.size());
    for (double& x : fa) x = rng.normal();
    for (double& x : fb) x = rng.normal();
    const auto r = kinetic_additivity_check(QuantumState::normalized(grids::ScalarFieldOnGrid(a, fa)),
                                            QuantumState::normalized(grids::ScalarFieldOnGrid(b, fb)));
    EXPECT_LT(r.residual, 1e-10 * std::max(1.0, r.rhs));
  }
  const auto q = QuantumState::normalized(grids::ScalarFieldOnGrid(b, Vector(b.size(), 1.0)));
  EXPECT_THROW(kinetic_additivity_check(q, q), ValidationError);
}

TEST(Collapse, GaussianTrialMatchesClosedForm) {
  for (double s : {0.1, 0.5, 1.0, 1.3, 4.0}) {
    const auto row = collapse_scan({s})[0];
    EXPECT_NEAR(row.kinetic, 1.5 / (s * s), 1e-9 / (s * s));
    EXPECT_NEAR(row.total, gaussian_energy_closed_form(s), 1e-9 * std::max(1.0, 1.0 / (s * s)));
  }
  EXPECT_THROW(collapse_scan({0.0}), ValidationError);
}

TEST(Collapse, InteriorMinimumAtClosedFormWidth) {
  const auto m = collapse_minimum();
  EXPECT_NEAR(m.sigma, 3.0 * std::sqrt(pi) / 4.0, 1e-5);
  EXPECT_NEAR(m.total, -8.0 / (3.0 * pi), 1e-9);
  EXPECT_GT(m.total, -1.0);  // above the exact ground energy
}

TEST(Collapse, ReversedStencilSignHasNoFloor) {
  // With the kinetic sign flipped, refining the grid drives the energy down
  // without bound.
  double prev = 0.0;
  for (std::size_t n : {50u, 100u, 200u}) {
    const UniformGrid g({Axis::dirichlet_interval(0.0, 1.0, n)});
    const double e = ground_state(g, Potential::zero(), {}, -1.0).total_energy;
    EXPECT_LT(e, prev);
    prev = e;
  }
  EXPECT_LT(prev, -1e4);
}
