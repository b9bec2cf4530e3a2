#pragma once

// Shared plumbing for the jaynes toolkit: error types, a portable seeded
// random source, and the handful of vector reductions every module uses.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jaynes {

using Vector = std::vector<double>;

/// Input violates a documented precondition or invariant.  Maps to CLI exit 2.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Constraint set is empty (e.g. a target mean outside the level range).
class InfeasibleConstraintError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

/// An iterative method gave up.  Carries the best iterate seen so callers can
/// inspect how close it got.  Maps to CLI exit 3.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double residual, Vector best = {})
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual), best_(std::move(best)) {}

  double residual() const noexcept { return residual_; }
  const Vector& best_iterate() const noexcept { return best_; }

private:
  double residual_;
  Vector best_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

/// Deterministic random source.  mt19937_64 is specified bit-for-bit by the
/// standard; the distributions are not, so the mappings are done here.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; deterministic given the seed.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Reductions run in index order so results never depend on the caller.

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

/// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(std::span<double> x, double alpha) {
  for (double& v : x) v *= alpha;
}

inline constexpr double pi = 3.141592653589793238462643383279502884;

}  // namespace jaynes
