#pragma once

// Least-bias continuous states.  The ground state minimizes
//   <g, Delta g> + integral V (g, g)   subject to <g, g> = 1
// on a uniform grid, with the potential coupling fixed to one and units in
// which hbar^2 / 2m = 1 (hydrogen in Rydberg units via the radial equation).

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "jaynes/core.hpp"
#include "jaynes/grids.hpp"
#include "jaynes/variational.hpp"

namespace jaynes::schroedinger {

using grids::ScalarFieldOnGrid;
using grids::UniformGrid;

enum class PotentialKind { Zero, Harmonic, CoulombRadial, Tabulated };

inline const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::Zero: return "zero";
    case PotentialKind::Harmonic: return "harmonic";
    case PotentialKind::CoulombRadial: return "coulomb_radial";
    case PotentialKind::Tabulated: return "tabulated";
  }
  return "?";
}

struct Potential {
  PotentialKind kind = PotentialKind::Zero;
  /// Harmonic: {c} for V = c |x|^2.  CoulombRadial: {Z} for V = -2 Z / r,
  /// r the first coordinate.
  Vector parameters;
  std::optional<ScalarFieldOnGrid> samples;

  static Potential zero() { return {}; }
  static Potential harmonic(double c = 1.0) { return {PotentialKind::Harmonic, {c}, std::nullopt}; }
  static Potential coulomb_radial(double z = 1.0) { return {PotentialKind::CoulombRadial, {z}, std::nullopt}; }
  static Potential tabulated(ScalarFieldOnGrid s) { return {PotentialKind::Tabulated, {}, std::move(s)}; }

  /// Values at every grid point.  Rejects potentials that are not finite
  /// (hence unbounded below) on the grid.
  Vector evaluate(const UniformGrid& grid) const {
    Vector v(grid.size(), 0.0);
    switch (kind) {
      case PotentialKind::Zero: break;
      case PotentialKind::Harmonic: {
        const double c = parameters.empty() ? 1.0 : parameters[0];
        for (std::size_t i = 0; i < v.size(); ++i) {
          const auto x = grid.coordinates(i);
          v[i] = c * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        }
        break;
      }
      case PotentialKind::CoulombRadial: {
        require(grid.dimension() == 1, "radial Coulomb potential needs a 1-D grid");
        const double z = parameters.empty() ? 1.0 : parameters[0];
        for (std::size_t i = 0; i < v.size(); ++i) {
          const double r = grid.coordinates(i)[0];
          require(r > 0.0, "radial Coulomb potential is unbounded below at r = " + std::to_string(r));
          v[i] = -2.0 * z / r;
        }
        break;
      }
      case PotentialKind::Tabulated:
        require(samples.has_value(), "tabulated potential has no samples");
        require(samples->grid() == grid, "tabulated potential samples do not match the solver grid");
        v = samples->values();
        break;
    }
    for (std::size_t i = 0; i < v.size(); ++i)
      require(std::isfinite(v[i]), "potential is not finite (unbounded below) at grid point " + std::to_string(i));
    return v;
  }
};

/// Unit-norm field in the grid inner product.
class QuantumState {
public:
  explicit QuantumState(ScalarFieldOnGrid field) : field_(std::move(field)) {
    norm_ = std::sqrt(grids::inner_product(field_, field_));
    require(std::abs(norm_ - 1.0) <= 1e-10, "state is not normalized (norm " + std::to_string(norm_) + ")");
  }

  static QuantumState normalized(ScalarFieldOnGrid field) {
    const double n = std::sqrt(grids::inner_product(field, field));
    require(n > 0.0, "cannot normalize the zero field");
    scale(field.values(), 1.0 / n);
    return QuantumState(std::move(field));
  }

  const ScalarFieldOnGrid& field() const noexcept { return field_; }
  double norm() const noexcept { return norm_; }

private:
  ScalarFieldOnGrid field_;
  double norm_ = 1.0;
};

struct GroundStateResult {
  QuantumState state;
  double total_energy = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double coupling = 1.0;
};

namespace detail {

/// Delta + V as a symmetric operator.  kinetic_sign exists only so the
/// acceptance battery can inject a wrong-sign stencil as a negative control.
inline variational::SymmetricOperator hamiltonian(const UniformGrid& grid, const Vector& v, double kinetic_sign = 1.0) {
  variational::SymmetricOperator op;
  op.dimension = grid.size();
  op.potential_coupling = 1.0;
  op.apply = [grid, v, kinetic_sign](std::span<const double> x, std::span<double> y) {
    grids::apply_fd_laplacian(grid, x, y);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = kinetic_sign * y[i] + v[i] * x[i];
  };
  Vector diag, off;
  if (grids::tridiagonal_laplacian(grid, diag, off)) {
    for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = kinetic_sign * diag[i] + v[i];
    for (double& o : off) o *= kinetic_sign;
    op.band = variational::Band{std::move(diag), std::move(off)};
  }
  if (kinetic_sign > 0.0) {
    // Gershgorin: every Laplacian row has radius at most its diagonal.
    double vmin = std::numeric_limits<double>::infinity();
    for (double x : v) vmin = std::min(vmin, x);
    op.lower_bound = vmin;
  }
  return op;
}

inline double kinetic_of(const ScalarFieldOnGrid& f) { return grids::inner_product(f, grids::fd_laplacian(f)); }

}  // namespace detail

inline GroundStateResult ground_state(const UniformGrid& grid, const Potential& potential,
                                      const variational::SolverConfig& config, double kinetic_sign = 1.0) {
  const Vector v = potential.evaluate(grid);
  const auto op = detail::hamiltonian(grid, v, kinetic_sign);
  const auto sol = variational::minimize_quadratic_form(op, config);

  Vector g = sol.minimizer;
  double sum = 0.0;
  for (double x : g) sum += x;
  const double s = (sum < 0.0 ? -1.0 : 1.0) / std::sqrt(grid.cell_volume());
  for (double& x : g) x *= s;
  QuantumState state = QuantumState::normalized(ScalarFieldOnGrid(grid, std::move(g)));

  const ScalarFieldOnGrid& f = state.field();
  const double kinetic = kinetic_sign * detail::kinetic_of(f);
  double pot = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) pot += v[i] * f[i] * f[i];
  pot *= grid.cell_volume();

  return {std::move(state), kinetic + pot, kinetic, pot, sol.residual, sol.iterations, sol.multipliers.first};
}

/// Rayleigh energy of an arbitrary (not necessarily normalized) trial field.
inline double rayleigh_energy(const ScalarFieldOnGrid& trial, const Potential& potential) {
  const Vector v = potential.evaluate(trial.grid());
  double pot = 0.0;
  for (std::size_t i = 0; i < trial.size(); ++i) pot += v[i] * trial[i] * trial[i];
  pot *= trial.grid().cell_volume();
  return (detail::kinetic_of(trial) + pot) / grids::inner_product(trial, trial);
}

/// <g, Delta g>; nonnegative because Delta is positive semidefinite.
inline double kinetic_energy(const QuantumState& state) { return detail::kinetic_of(state.field()); }

struct AdditivityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// <f x g, Delta (f x g)> against <f, Delta f> + <g, Delta g>.
inline AdditivityReport kinetic_additivity_check(const QuantumState& f, const QuantumState& g) {
  const std::size_t dim = f.field().grid().dimension() + g.field().grid().dimension();
  require(dim <= 3, "product dimension " + std::to_string(dim) + " exceeds 3");
  const auto product = grids::tensor_product_field(f.field(), g.field());
  AdditivityReport r;
  r.lhs = detail::kinetic_of(product);
  r.rhs = kinetic_energy(f) + kinetic_energy(g);
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

// ---------------------------------------------------------------------------
// Gaussian trial states in the Coulomb potential -2/r (3-D, Rydberg units)

struct CollapseRow {
  double sigma = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
};

namespace detail {

/// Composite Simpson on [0, 12 sigma] of the radial integrals for the trial
/// g(r) = exp(-r^2 / (2 sigma^2)), normalized by the computed norm.
inline CollapseRow gaussian_trial_energy(double sigma, std::size_t intervals = 4000) {
  const double r_max = 12.0 * sigma;
  const double h = r_max / static_cast<double>(intervals);
  double norm = 0.0, kin = 0.0, pot = 0.0;
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double r = h * static_cast<double>(i);
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double g = std::exp(-r * r / (2.0 * sigma * sigma));
    const double dg = -r / (sigma * sigma) * g;
    const double shell = 4.0 * pi * r * r;
    norm += w * g * g * shell;
    kin += w * dg * dg * shell;
    // -2/r * g^2 * 4 pi r^2 = -8 pi r g^2, finite at r = 0.
    pot += w * (-8.0 * pi * r * g * g);
  }
  return {sigma, kin / norm, pot / norm, (kin + pot) / norm};
}

}  // namespace detail

/// Energy decomposition of normalized 3-D Gaussian trials of each width.
inline std::vector<CollapseRow> collapse_scan(const Vector& sigmas) {
  std::vector<CollapseRow> rows;
  rows.reserve(sigmas.size());
  for (double s : sigmas) {
    require(s > 0.0 && std::isfinite(s), "Gaussian width must be positive");
    rows.push_back(detail::gaussian_trial_energy(s));
  }
  return rows;
}

/// Width minimizing the trial energy, by golden-section search on [lo, hi].
inline CollapseRow collapse_minimum(double lo = 0.05, double hi = 20.0, double tol = 1e-10) {
  require(lo > 0.0 && hi > lo, "golden-section bracket must satisfy 0 < lo < hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = detail::gaussian_trial_energy(c).total, fd = detail::gaussian_trial_energy(d).total;
  while (b - a > tol * std::max(1.0, std::abs(a))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = detail::gaussian_trial_energy(c).total;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = detail::gaussian_trial_energy(d).total;
    }
  }
  return detail::gaussian_trial_energy(0.5 * (a + b));
}

}  // namespace jaynes::schroedinger
