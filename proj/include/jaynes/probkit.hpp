#pragma once

// Discrete probability: Shannon entropy, product distributions, doubly
// stochastic mixing, the Maxwell velocity density, and the maximum-entropy
// (Boltzmann) solver for a mean-energy constraint.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jaynes/core.hpp"

namespace jaynes::probkit {

inline constexpr double kSumTolerance = 1e-12;

/// Nonnegative weights summing to one.
class DiscreteDistribution {
public:
  explicit DiscreteDistribution(Vector weights) : weights_(std::move(weights)) {
    require(!weights_.empty(), "distribution must have at least one weight");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const double w = weights_[i];
      require(std::isfinite(w), "weight " + std::to_string(i) + " is not finite");
      require(w >= 0.0, "weight " + std::to_string(i) + " is negative");
      sum += w;
    }
    require(std::abs(sum - 1.0) <= kSumTolerance,
            "weights sum to " + std::to_string(sum) + ", expected 1");
  }

  /// Normalizes nonnegative weights; the only place rescaling happens.
  static DiscreteDistribution normalized(Vector weights) {
    double sum = 0.0;
    for (double w : weights) {
      require(w >= 0.0 && std::isfinite(w), "weights must be finite and nonnegative");
      sum += w;
    }
    require(sum > 0.0, "weights sum to zero");
    for (double& w : weights) w /= sum;
    return DiscreteDistribution(std::move(weights));
  }

  static DiscreteDistribution uniform(std::size_t n) { return DiscreteDistribution(Vector(n, 1.0 / static_cast<double>(n))); }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const Vector& weights() const noexcept { return weights_; }

private:
  Vector weights_;
};

/// Shannon entropy in nats, with 0 ln 0 = 0.
inline double entropy(const DiscreteDistribution& p) {
  double s = 0.0;
  for (double w : p.weights())
    if (w > 0.0) s -= w * std::log(w);
  return s;
}

/// {p_i q_j}, i outer and j inner.
inline DiscreteDistribution product_distribution(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  Vector out;
  out.reserve(p.size() * q.size());
  for (double pi_ : p.weights())
    for (double qj : q.weights()) out.push_back(pi_ * qj);
  // Rounding can leave the sum a few ulps from one; renormalizing keeps the
  // invariant without moving any weight by more than that.
  return DiscreteDistribution::normalized(std::move(out));
}

// ---------------------------------------------------------------------------
// Mixing

/// Doubly stochastic square matrix, row-major.
class MixingMap {
public:
  MixingMap(std::size_t n, Vector entries) : n_(n), a_(std::move(entries)) {
    require(n_ >= 1, "mixing map must be at least 1x1");
    require(a_.size() == n_ * n_, "mixing map entry count does not match n*n");
    for (double v : a_) require(v >= 0.0 && std::isfinite(v), "mixing map entries must be nonnegative");
    for (std::size_t i = 0; i < n_; ++i) {
      double row = 0.0, col = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        row += a_[i * n_ + j];
        col += a_[j * n_ + i];
      }
      require(std::abs(row - 1.0) <= kSumTolerance, "row " + std::to_string(i) + " does not sum to 1");
      require(std::abs(col - 1.0) <= kSumTolerance, "column " + std::to_string(i) + " does not sum to 1");
    }
  }

  static MixingMap identity(std::size_t n) {
    Vector a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 1.0;
    return MixingMap(n, std::move(a));
  }

  static MixingMap complete_averaging(std::size_t n) { return MixingMap(n, Vector(n * n, 1.0 / static_cast<double>(n))); }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

private:
  std::size_t n_;
  Vector a_;
};

/// Convex combination of `terms` random permutation matrices (Birkhoff).
inline MixingMap random_doubly_stochastic(std::size_t n, Rng& rng, std::size_t terms = 4) {
  Vector weights(terms);
  double total = 0.0;
  for (double& w : weights) {
    w = rng.uniform() + 1e-3;
    total += w;
  }
  Vector a(n * n, 0.0);
  std::vector<std::size_t> perm(n);
  for (std::size_t t = 0; t < terms; ++t) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
    for (std::size_t i = 0; i < n; ++i) a[i * n + perm[i]] += weights[t] / total;
  }
  // Sums are 1 up to rounding; a few Sinkhorn sweeps pin them to ~1 ulp.
  for (std::size_t sweep = 0; sweep < 4; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += a[i * n + j];
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] /= row;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < n; ++i) col += a[i * n + j];
      for (std::size_t i = 0; i < n; ++i) a[i * n + j] /= col;
    }
  }
  return MixingMap(n, std::move(a));
}

/// T * P.  Entropy never decreases under a doubly stochastic map.
inline DiscreteDistribution apply_mixing(const DiscreteDistribution& p, const MixingMap& t) {
  require(t.size() == p.size(), "mixing map dimension " + std::to_string(t.size()) +
                                    " does not match distribution size " + std::to_string(p.size()));
  Vector out(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) out[i] += t(i, j) * p[j];
  return DiscreteDistribution::normalized(std::move(out));
}

// ---------------------------------------------------------------------------
// Maxwell velocity distribution

struct MaxwellParameters {
  double alpha = 1.0;          ///< inverse velocity squared
  double normalization = 0.0;  ///< (alpha/pi)^{3/2}; filled by make()

  static MaxwellParameters make(double alpha) {
    require(alpha > 0.0 && std::isfinite(alpha), "Maxwell alpha must be positive");
    return {alpha, std::pow(alpha / pi, 1.5)};
  }
};

/// One Cartesian factor phi(v) = sqrt(alpha/pi) exp(-alpha v^2).
inline double maxwell_component(const MaxwellParameters& params, double v) {
  require(params.alpha > 0.0, "Maxwell alpha must be positive");
  return std::sqrt(params.alpha / pi) * std::exp(-params.alpha * v * v);
}

inline double maxwell_density(const MaxwellParameters& params, const std::array<double, 3>& v) {
  require(params.alpha > 0.0, "Maxwell alpha must be positive");
  const double v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  return params.normalization * std::exp(-params.alpha * v2);
}

/// <|v|^2> by tensor-product trapezoid quadrature of the density on a cube of
/// half-width 10/sqrt(alpha).  The trapezoid rule is spectrally accurate here.
inline double maxwell_second_moment(const MaxwellParameters& params, std::size_t nodes_per_axis = 121) {
  require(nodes_per_axis >= 3, "need at least 3 quadrature nodes per axis");
  const double half = 10.0 / std::sqrt(params.alpha);
  const double h = 2.0 * half / static_cast<double>(nodes_per_axis - 1);
  double mass = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < nodes_per_axis; ++i)
    for (std::size_t j = 0; j < nodes_per_axis; ++j)
      for (std::size_t k = 0; k < nodes_per_axis; ++k) {
        const std::array<double, 3> v{-half + h * static_cast<double>(i), -half + h * static_cast<double>(j),
                                      -half + h * static_cast<double>(k)};
        const double rho = maxwell_density(params, v);
        mass += rho;
        moment += rho * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      }
  return moment / mass;
}

// ---------------------------------------------------------------------------
// Maximum entropy under a mean-energy constraint

class EnergyLevels {
public:
  explicit EnergyLevels(Vector levels) : levels_(std::move(levels)) {
    require(levels_.size() >= 2, "need at least 2 energy levels");
    for (double e : levels_) require(std::isfinite(e), "energy levels must be finite");
    const auto [lo, hi] = std::minmax_element(levels_.begin(), levels_.end());
    require(*lo < *hi, "energy levels must not all be equal");
  }

  const Vector& values() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  double min() const { return *std::min_element(levels_.begin(), levels_.end()); }
  double max() const { return *std::max_element(levels_.begin(), levels_.end()); }

private:
  Vector levels_;
};

struct MaxEntSolution {
  DiscreteDistribution distribution;
  double beta = 0.0;
  double log_normalizer = 0.0;  ///< ln Z, so p_k = exp(-beta E_k - ln Z)
  /// Lagrange multipliers of the mean-energy and normalization constraints:
  /// lambda1 = beta, lambda2 = ln Z - 1.
  std::pair<double, double> multipliers{0.0, 0.0};
  double mean_residual = 0.0;
  int iterations = 0;
};

namespace detail {

struct Gibbs {
  Vector p;
  double log_z = 0.0;
  double mean = 0.0;
};

// Shifts the exponent by the level that dominates for the sign of beta so
// exp() never overflows.
inline Gibbs gibbs(const Vector& e, double beta) {
  const double ref = beta >= 0.0 ? *std::min_element(e.begin(), e.end()) : *std::max_element(e.begin(), e.end());
  Gibbs g;
  g.p.resize(e.size());
  double z = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    g.p[k] = std::exp(-beta * (e[k] - ref));
    z += g.p[k];
  }
  double mean = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    g.p[k] /= z;
    mean += g.p[k] * e[k];
  }
  g.log_z = std::log(z) - beta * ref;
  g.mean = mean;
  return g;
}

}  // namespace detail

/// Maximizes entropy subject to sum p = 1 and sum p E = target_mean.
/// The mean is strictly decreasing in beta, so beta is found by bisection on
/// a bracket grown geometrically until it straddles the target.
inline MaxEntSolution solve_maxent(const EnergyLevels& levels, double target_mean, int max_iterations = 200) {
  const Vector& e = levels.values();
  const double lo_e = levels.min(), hi_e = levels.max();
  if (!(target_mean > lo_e && target_mean < hi_e))
    throw InfeasibleConstraintError("target mean " + std::to_string(target_mean) + " outside open interval (" +
                                    std::to_string(lo_e) + ", " + std::to_string(hi_e) + ")");

  const double spread = hi_e - lo_e;
  const double tol = 1e-10 * std::max(1.0, std::max(std::abs(lo_e), std::abs(hi_e)));

  // mean(beta_lo) > target > mean(beta_hi)
  double beta_lo = -1.0 / spread, beta_hi = 1.0 / spread;
  int iterations = 0;
  while (detail::gibbs(e, beta_lo).mean <= target_mean) {
    beta_lo *= 2.0;
    if (++iterations > max_iterations) throw ConvergenceError("maxent bracket expansion failed", std::abs(beta_lo));
  }
  while (detail::gibbs(e, beta_hi).mean >= target_mean) {
    beta_hi *= 2.0;
    if (++iterations > max_iterations) throw ConvergenceError("maxent bracket expansion failed", std::abs(beta_hi));
  }

  double beta = 0.5 * (beta_lo + beta_hi);
  detail::Gibbs g = detail::gibbs(e, beta);
  while (iterations < max_iterations) {
    ++iterations;
    const double mid = 0.5 * (beta_lo + beta_hi);
    if (mid <= beta_lo || mid >= beta_hi) break;  // bracket at ulp resolution
    beta = mid;
    g = detail::gibbs(e, beta);
    if (g.mean == target_mean) break;
    if (g.mean > target_mean)
      beta_lo = beta;
    else
      beta_hi = beta;
  }

  const double residual = std::abs(g.mean - target_mean);
  if (residual > tol) throw ConvergenceError("maxent bisection did not reach the mean-energy tolerance", residual, g.p);

  MaxEntSolution sol{DiscreteDistribution::normalized(g.p), beta, g.log_z, {beta, g.log_z - 1.0}, residual, iterations};
  return sol;
}

}  // namespace jaynes::probkit
