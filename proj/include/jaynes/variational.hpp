#pragma once

// Lowest eigenpair of a symmetric operator, i.e. the minimizer of <v, A v>
// over unit vectors.  Shifted inverse iteration with the shift held strictly
// below the lowest eigenvalue, so every inner system is positive definite and
// the Rayleigh quotient of the iterates never increases.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jaynes/core.hpp"

namespace jaynes::variational {

using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Tridiagonal band of a symmetric matrix: diag[0..n), off[0..n-1).
struct Band {
  Vector diag;
  Vector off;
};

struct SymmetricOperator {
  std::size_t dimension = 0;
  ApplyFn apply;
  /// Set when the operator is tridiagonal; enables direct solves and an exact
  /// Sturm-count bracket of the lowest eigenvalue.
  std::optional<Band> band;
  /// Any certified lower bound on the spectrum (e.g. Gershgorin).
  std::optional<double> lower_bound;
  /// Row-major entries when the operator is an explicit dense matrix; enables
  /// an exact eigenvalue bracket and direct shifted solves.
  std::optional<Vector> dense;
  /// lambda1 when the caller built A = Delta + lambda1 * V; reported back.
  double potential_coupling = 0.0;

  Vector operator()(std::span<const double> v) const {
    Vector out(dimension);
    apply(v, out);
    return out;
  }

  /// Dense row-major n x n matrix.  Detects tridiagonal structure and computes
  /// the Gershgorin lower bound.
  static SymmetricOperator from_dense(std::size_t n, Vector a) {
    require(a.size() == n * n, "dense operator needs n*n entries");
    SymmetricOperator op;
    op.dimension = n;
    bool tridiagonal = true;
    double gersh = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double radius = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        radius += std::abs(a[i * n + j]);
        if ((j > i + 1 || i > j + 1) && a[i * n + j] != 0.0) tridiagonal = false;
      }
      gersh = std::min(gersh, a[i * n + i] - radius);
    }
    op.lower_bound = gersh;
    if (tridiagonal) {
      Band b{Vector(n), Vector(n > 0 ? n - 1 : 0)};
      for (std::size_t i = 0; i < n; ++i) b.diag[i] = a[i * n + i];
      for (std::size_t i = 0; i + 1 < n; ++i) b.off[i] = a[i * n + i + 1];
      op.band = std::move(b);
    }
    op.dense = a;
    op.apply = [n, a = std::move(a)](std::span<const double> x, std::span<double> y) {
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
        y[i] = s;
      }
    };
    return op;
  }

  static SymmetricOperator from_band(Band band) {
    const std::size_t n = band.diag.size();
    require(n >= 1 && band.off.size() + 1 == n, "band needs n diagonal and n-1 off-diagonal entries");
    SymmetricOperator op;
    op.dimension = n;
    double gersh = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double r = (i > 0 ? std::abs(band.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(band.off[i]) : 0.0);
      gersh = std::min(gersh, band.diag[i] - r);
    }
    op.lower_bound = gersh;
    op.apply = [b = band](std::span<const double> x, std::span<double> y) {
      const std::size_t m = b.diag.size();
      for (std::size_t i = 0; i < m; ++i) {
        double s = b.diag[i] * x[i];
        if (i > 0) s += b.off[i - 1] * x[i - 1];
        if (i + 1 < m) s += b.off[i] * x[i + 1];
        y[i] = s;
      }
    };
    op.band = std::move(band);
    return op;
  }
};

struct SolverConfig {
  double tolerance = 1e-10;
  int max_iterations = 500;
  /// Explicit spectral shift; must lie below the lowest eigenvalue.  Chosen
  /// automatically when unset.
  std::optional<double> shift;
  std::uint64_t seed = 1;
};

struct SolverResult {
  Vector minimizer;
  double value = 0.0;
  /// (lambda1, lambda2): potential coupling and normalization multiplier.
  std::pair<double, double> multipliers{0.0, 0.0};
  double residual = 0.0;
  int iterations = 0;
  double shift = 0.0;
  /// Rayleigh quotient after each iteration.
  Vector rayleigh_history;
};

namespace detail {

inline void check_symmetry(const SymmetricOperator& a, std::uint64_t seed) {
  Rng rng(seed ^ 0x5bd1e995u);
  const std::size_t n = a.dimension;
  Vector v(n), w(n), av(n), aw(n);
  for (int probe = 0; probe < 3; ++probe) {
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = rng.normal();
      w[i] = rng.normal();
    }
    a.apply(v, av);
    a.apply(w, aw);
    const double lhs = dot(av, w), rhs = dot(v, aw);
    const double scale = std::max(1.0, std::max(norm2(av) * norm2(w), norm2(v) * norm2(aw)));
    if (std::abs(lhs - rhs) > 1e-10 * scale)
      throw ValidationError("operator is not symmetric: <Av,w> - <v,Aw> = " + std::to_string(lhs - rhs));
  }
}

/// Number of eigenvalues of the tridiagonal band strictly below x.
inline std::size_t sturm_count(const Band& b, double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < b.diag.size(); ++i) {
    const double e2 = i > 0 ? b.off[i - 1] * b.off[i - 1] : 0.0;
    q = b.diag[i] - x - (i > 0 ? e2 / q : 0.0);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

/// Largest x (to bisection resolution) with no eigenvalue below it.
inline double lowest_eigenvalue_lower_bound(const Band& b) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < b.diag.size(); ++i) {
    const double r = (i > 0 ? std::abs(b.off[i - 1]) : 0.0) + (i + 1 < b.diag.size() ? std::abs(b.off[i]) : 0.0);
    lo = std::min(lo, b.diag[i] - r);
    hi = std::max(hi, b.diag[i] + r);
  }
  lo -= 1e-12 * std::max(1.0, std::abs(lo));
  hi += 1e-12 * std::max(1.0, std::abs(hi));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(b, mid) == 0)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

/// Solves (band - shift) x = rhs by LDL^T; the shifted band must be SPD.
inline void solve_shifted_band(const Band& b, double shift, std::span<const double> rhs, std::span<double> x) {
  const std::size_t n = b.diag.size();
  Vector d(n), l(n > 0 ? n - 1 : 0), z(n);
  d[0] = b.diag[0] - shift;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(d[i - 1] > 0.0)) throw ValidationError("shift is not below the lowest eigenvalue (nonpositive pivot)");
    l[i - 1] = b.off[i - 1] / d[i - 1];
    d[i] = b.diag[i] - shift - l[i - 1] * b.off[i - 1];
  }
  if (!(d[n - 1] > 0.0)) throw ValidationError("shift is not below the lowest eigenvalue (nonpositive pivot)");
  z[0] = rhs[0];
  for (std::size_t i = 1; i < n; ++i) z[i] = rhs[i] - l[i - 1] * z[i - 1];
  for (std::size_t i = 0; i < n; ++i) z[i] /= d[i];
  x[n - 1] = z[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = z[i] - l[i] * x[i + 1];
}

/// Householder reduction of a dense symmetric matrix to an orthogonally
/// similar tridiagonal band (same spectrum).
inline Band householder_tridiagonal(std::size_t n, Vector a) {
  Vector v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += a[i * n + k] * a[i * n + k];
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const double alpha = a[(k + 1) * n + k] > 0.0 ? -xnorm : xnorm;
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a[i * n + k];
    v[k + 1] -= alpha;
    double vn = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vn += v[i] * v[i];
    vn = std::sqrt(vn);
    if (vn == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vn;
    // A22 <- H A22 H with H = I - 2 v v^T, as A22 - 2 (v q^T + q v^T).
    double kv = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a[i * n + j] * v[j];
      p[i] = s;
      kv += v[i] * s;
    }
    for (std::size_t i = k + 1; i < n; ++i) p[i] -= kv * v[i];
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= 2.0 * (v[i] * p[j] + p[i] * v[j]);
    for (std::size_t i = k + 2; i < n; ++i) a[i * n + k] = a[k * n + i] = 0.0;
    a[(k + 1) * n + k] = a[k * n + k + 1] = alpha;
  }
  Band b{Vector(n), Vector(n > 0 ? n - 1 : 0)};
  for (std::size_t i = 0; i < n; ++i) b.diag[i] = a[i * n + i];
  for (std::size_t i = 0; i + 1 < n; ++i) b.off[i] = a[(i + 1) * n + i];
  return b;
}

/// Cholesky factor (lower, row-major) of the dense matrix minus shift.
inline Vector shifted_cholesky(std::size_t n, const Vector& a, double shift) {
  Vector l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j] - shift;
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > 0.0)) throw ValidationError("shift is not below the lowest eigenvalue (nonpositive pivot)");
    const double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / ljj;
    }
  }
  return l;
}

inline void solve_cholesky(std::size_t n, const Vector& l, std::span<const double> rhs, std::span<double> x) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * x[k];
    x[i] = s / l[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l[k * n + i] * x[k];
    x[i] = s / l[i * n + i];
  }
}

/// Conjugate gradients on (A - shift) x = rhs from x = 0.
inline void solve_shifted_cg(const SymmetricOperator& a, double shift, std::span<const double> rhs, std::span<double> x,
                             double rel_tol) {
  const std::size_t n = a.dimension;
  Vector r(rhs.begin(), rhs.end()), p = r, ap(n);
  std::fill(x.begin(), x.end(), 0.0);
  double rr = dot(r, r);
  const double stop = rel_tol * rel_tol * rr;
  const std::size_t cap = 20 * n + 100;
  for (std::size_t it = 0; it < cap && rr > stop; ++it) {
    a.apply(p, ap);
    axpy(-shift, p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw ValidationError("shift is not below the lowest eigenvalue (indefinite inner system)");
    const double alpha = rr / pap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
}

inline double spectral_radius_estimate(const SymmetricOperator& a, std::uint64_t seed) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  Vector v(a.dimension), w(a.dimension);
  for (double& x : v) x = rng.normal();
  scale(v, 1.0 / norm2(v));
  double est = 0.0;
  for (int it = 0; it < 50; ++it) {
    a.apply(v, w);
    est = norm2(w);
    if (est == 0.0) return 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / est;
  }
  return est;
}

inline double automatic_shift(const SymmetricOperator& a, std::uint64_t seed) {
  if (a.band) {
    const double lb = lowest_eigenvalue_lower_bound(*a.band);
    return lb - 1e-8 * std::max(1.0, std::abs(lb));
  }
  if (a.dense) {
    const std::size_t n = a.dimension;
    double frob = 0.0;
    for (double v : *a.dense) frob += v * v;
    const double lb = lowest_eigenvalue_lower_bound(householder_tridiagonal(n, *a.dense));
    // The reduction is exact up to rounding of order n eps ||A||.
    return lb - 1e-8 * std::max(1.0, std::abs(lb)) - 1e-12 * static_cast<double>(n) * std::sqrt(frob);
  }
  if (a.lower_bound) {
    const double lb = *a.lower_bound;
    return lb - 1e-2 * std::max(1.0, std::abs(lb));
  }
  // Power iteration underestimates the spectral radius; the margin covers it.
  return -1.5 * spectral_radius_estimate(a, seed) - 1.0;
}

}  // namespace detail

/// ||A v - <v, A v> v||, the projected Euler-Lagrange gradient at a unit v.
inline double stationarity_residual(const SymmetricOperator& a, std::span<const double> v) {
  require(v.size() == a.dimension, "vector dimension does not match the operator");
  require(std::abs(norm2(v) - 1.0) <= 1e-10, "stationarity residual needs a unit vector");
  Vector av(a.dimension);
  a.apply(v, av);
  const double rq = dot(v, av);
  axpy(-rq, v, av);
  return norm2(av);
}

/// Minimizes <v, A v> subject to <v, v> = 1.
inline SolverResult minimize_quadratic_form(const SymmetricOperator& a, const SolverConfig& config) {
  require(a.dimension >= 2, "operator dimension must be at least 2");
  require(static_cast<bool>(a.apply), "operator has no apply function");
  require(config.tolerance > 0.0, "solver tolerance must be positive");
  require(config.max_iterations >= 1, "max_iterations must be at least 1");
  detail::check_symmetry(a, config.seed);

  const std::size_t n = a.dimension;
  const double shift = config.shift ? *config.shift : detail::automatic_shift(a, config.seed);

  Rng rng(config.seed);
  Vector x(n), y(n), ax(n);
  for (double& v : x) v = rng.normal();
  scale(x, 1.0 / norm2(x));

  SolverResult result;
  result.shift = shift;
  result.multipliers.first = a.potential_coupling;

  Vector best = x;
  double best_residual = std::numeric_limits<double>::infinity();

  Vector chol;
  if (!a.band && a.dense) {
    require(a.dense->size() == n * n, "dense operator needs n*n entries");
    chol = detail::shifted_cholesky(n, *a.dense, shift);
  }

  for (int it = 1; it <= config.max_iterations; ++it) {
    if (a.band)
      detail::solve_shifted_band(*a.band, shift, x, y);
    else if (!chol.empty())
      detail::solve_cholesky(n, chol, x, y);
    else
      detail::solve_shifted_cg(a, shift, x, y, 1e-14);
    const double ny = norm2(y);
    if (!(ny > 0.0) || !std::isfinite(ny)) throw ConvergenceError("inverse iteration produced a degenerate iterate", best_residual, best);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    scale(x, 1.0 / norm2(x));

    a.apply(x, ax);
    const double rq = dot(x, ax);
    axpy(-rq, x, ax);
    const double res = norm2(ax);
    result.rayleigh_history.push_back(rq);
    if (res < best_residual) {
      best_residual = res;
      best = x;
    }
    if (res <= config.tolerance * std::max(1.0, std::abs(rq))) {
      result.minimizer = std::move(x);
      result.value = rq;
      result.multipliers.second = rq;
      result.residual = res;
      result.iterations = it;
      return result;
    }
  }
  throw ConvergenceError("inverse iteration did not converge in " + std::to_string(config.max_iterations) + " iterations",
                         best_residual, best);
}

}  // namespace jaynes::variational
