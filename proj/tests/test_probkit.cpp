#include <gtest/gtest.h>

#include <cmath>

#include "jaynes/probkit.hpp"

using namespace jaynes;
using namespace jaynes::probkit;

namespace {

// Independent entropy: plain summation over positive weights.
double entropy_oracle(const Vector& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

DiscreteDistribution random_dist(Rng& rng, std::size_t n) {
  Vector w(n);
  for (double& x : w) x = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
  w[rng.index(n)] += 0.1;
  return DiscreteDistribution::normalized(w);
}

}  // namespace

TEST(Distribution, RejectsInvalidWeights) {
  EXPECT_THROW(DiscreteDistribution(Vector{}), ValidationError);
  EXPECT_THROW(DiscreteDistribution({0.5, 0.6}), ValidationError);
  EXPECT_THROW(DiscreteDistribution({1.5, -0.5}), ValidationError);
  EXPECT_THROW(DiscreteDistribution({NAN, 1.0}), ValidationError);
  EXPECT_THROW(DiscreteDistribution::normalized({0.0, 0.0}), ValidationError);
  EXPECT_NO_THROW(DiscreteDistribution({0.25, 0.75}));
}

TEST(Entropy, ClosedFormExamples) {
  EXPECT_NEAR(entropy(DiscreteDistribution({0.5, 0.5})), std::log(2.0), 1e-15);
  EXPECT_EQ(entropy(DiscreteDistribution({1.0, 0.0})), 0.0);
  EXPECT_NEAR(entropy(DiscreteDistribution({1.0 / 3.0, 2.0 / 3.0})), std::log(3.0) - 2.0 / 3.0 * std::log(2.0), 1e-15);
  EXPECT_NEAR(entropy(DiscreteDistribution::uniform(7)), std::log(7.0), 1e-14);
}

TEST(Entropy, MatchesDirectSummation) {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_dist(rng, 1 + rng.index(16));
    EXPECT_NEAR(entropy(p), entropy_oracle(p.weights()), 1e-14);
  }
}

TEST(Product, Examples) {
  const auto a = product_distribution(DiscreteDistribution({1.0}), DiscreteDistribution({0.3, 0.7}));
  EXPECT_EQ(a.weights(), (Vector{0.3, 0.7}));
  const auto b = product_distribution(DiscreteDistribution({0.5, 0.5}), DiscreteDistribution({1.0 / 3.0, 2.0 / 3.0}));
  const Vector expect{1.0 / 6.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(b[i], expect[i], 1e-16);
}

TEST(Product, EntropyIsAdditive) {
  Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    const auto p = random_dist(rng, 1 + rng.index(16));
    const auto q = random_dist(rng, 1 + rng.index(16));
    EXPECT_LT(std::abs(entropy(product_distribution(p, q)) - entropy(p) - entropy(q)), 1e-12);
  }
}

TEST(Mixing, IdentityAndAveraging) {
  const DiscreteDistribution p({0.9, 0.05, 0.05});
  EXPECT_EQ(apply_mixing(p, MixingMap::identity(3)).weights(), p.weights());
  const auto u = apply_mixing(p, MixingMap::complete_averaging(3));
  EXPECT_NEAR(entropy(u), std::log(3.0), 1e-14);
}

TEST(Mixing, RejectsNonDoublyStochastic) {
  EXPECT_THROW(MixingMap(2, {1.0, 0.0, 1.0, 0.0}), ValidationError);
  EXPECT_THROW(MixingMap(2, {0.5, 0.5, 0.5}), ValidationError);
  EXPECT_THROW(apply_mixing(DiscreteDistribution({0.5, 0.5}), MixingMap::identity(3)), ValidationError);
}

TEST(Mixing, EntropyNeverDecreases) {
  Rng rng(13);
  const DiscreteDistribution fixed({0.9, 0.1});
  const auto m = random_doubly_stochastic(2, rng);
  EXPECT_GE(entropy(apply_mixing(fixed, m)), entropy(fixed) - 1e-12);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng.index(14);
    const auto p = random_dist(rng, n);
    const auto t_map = random_doubly_stochastic(n, rng);
    EXPECT_GE(entropy(apply_mixing(p, t_map)), entropy(p) - 1e-12);
  }
}

TEST(Maxwell, PeakFactorizationAndMoment) {
  const auto one = MaxwellParameters::make(1.0);
  EXPECT_NEAR(maxwell_density(one, {0.0, 0.0, 0.0}), std::pow(1.0 / pi, 1.5), 1e-15);
  const std::array<double, 3> v{0.3, -1.2, 0.7};
  const double ratio =
      maxwell_density(one, v) / (maxwell_component(one, v[0]) * maxwell_component(one, v[1]) * maxwell_component(one, v[2]));
  EXPECT_NEAR(ratio, 1.0, 1e-14);
  EXPECT_NEAR(maxwell_second_moment(MaxwellParameters::make(2.0)), 0.75, 1e-10);
  EXPECT_THROW(MaxwellParameters::make(0.0), ValidationError);
  EXPECT_THROW(MaxwellParameters::make(-1.0), ValidationError);
}

TEST(MaxEnt, SymmetricTargetsGiveUniform) {
  const auto a = solve_maxent(EnergyLevels({0.0, 1.0}), 0.5);
  EXPECT_NEAR(a.beta, 0.0, 1e-12);
  EXPECT_NEAR(a.distribution[0], 0.5, 1e-12);
  const auto b = solve_maxent(EnergyLevels({0.0, 1.0, 2.0}), 1.0);
  EXPECT_NEAR(b.beta, 0.0, 1e-12);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(b.distribution[k], 1.0 / 3.0, 1e-12);
}

TEST(MaxEnt, TwoLevelQuarter) {
  const auto s = solve_maxent(EnergyLevels({0.0, 1.0}), 0.25);
  EXPECT_NEAR(s.beta, std::log(3.0), 1e-9);
  EXPECT_NEAR(s.distribution[0], 0.75, 1e-10);
  EXPECT_NEAR(s.distribution[1], 0.25, 1e-10);
  EXPECT_EQ(s.multipliers.first, s.beta);
  EXPECT_NEAR(s.multipliers.second, s.log_normalizer - 1.0, 0.0);
  // p_k = exp(-beta E_k - ln Z)
  EXPECT_NEAR(std::exp(-s.log_normalizer), s.distribution[0], 1e-12);
}

TEST(MaxEnt, InfeasibleTargets) {
  const EnergyLevels e({0.0, 1.0, 3.0});
  EXPECT_THROW(solve_maxent(e, 0.0), InfeasibleConstraintError);
  EXPECT_THROW(solve_maxent(e, 3.0), InfeasibleConstraintError);
  EXPECT_THROW(solve_maxent(e, -1.0), InfeasibleConstraintError);
  EXPECT_THROW(EnergyLevels({1.0, 1.0}), ValidationError);
  EXPECT_THROW(EnergyLevels({1.0}), ValidationError);
}

TEST(MaxEnt, BoltzmannFormAndOptimality) {
  Rng rng(14);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.index(11);
    Vector e(n);
    for (double& x : e) x = rng.uniform(-3.0, 3.0);
    const EnergyLevels levels(e);
    const double target = levels.min() + (0.1 + 0.8 * rng.uniform()) * (levels.max() - levels.min());
    const auto s = solve_maxent(levels, target);
    double z = 0.0, mean = 0.0;
    for (double x : e) z += std::exp(-s.beta * x);
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_NEAR(s.distribution[k], std::exp(-s.beta * e[k]) / z, 1e-10);
      mean += s.distribution[k] * e[k];
    }
    EXPECT_NEAR(mean, target, 1e-10);

    // Feasible perturbations: directions orthogonal to 1 and E keep both
    // constraints; entropy can only drop.
    if (n >= 3) {
      for (int trial = 0; trial < 20; ++trial) {
        Vector d(n);
        for (double& x : d) x = rng.normal();
        // Project out span{1, E} by Gram-Schmidt.
        Vector one(n, 1.0), ee = e;
        auto proj = [&](Vector& v, const Vector& u) {
          const double c = dot(v, u) / dot(u, u);
          axpy(-c, u, v);
        };
        proj(ee, one);
        proj(d, one);
        proj(d, ee);
        double step = 1e-2;
        for (std::size_t k = 0; k < n; ++k)
          if (d[k] < 0.0) step = std::min(step, 0.5 * s.distribution[k] / -d[k]);
        Vector q = s.distribution.weights();
        axpy(step, d, q);
        for (double& x : q) x = std::max(x, 0.0);
        EXPECT_LE(entropy(DiscreteDistribution::normalized(q)), entropy(s.distribution) + 1e-9);
      }
    }
  }
}
