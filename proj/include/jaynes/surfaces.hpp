#pragma once

// Soap films in the height-function (Monge gauge) reading: interior heights
// minimize the discrete Dirichlet energy <h, Delta h> with the wire frame
// fixed, i.e. solve the 5-point Laplace equation.  Also Maxwell's mean-value
// observation: ball average minus center value ~ -(r^2 / 8) Delta f in 2-D.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "jaynes/core.hpp"
#include "jaynes/grids.hpp"
#include "jaynes/variational.hpp"

namespace jaynes::surfaces {

using grids::ScalarFieldOnGrid;
using grids::UniformGrid;

inline bool is_boundary_node(const UniformGrid& grid, std::size_t flat) {
  const auto idx = grid.multi_index(flat);
  for (std::size_t k = 0; k < 2; ++k)
    if (idx[k] == 0 || idx[k] + 1 == grid.axis(k).points) return true;
  return false;
}

/// Flat indices of the outer ring, in row-major order.
inline std::vector<std::size_t> boundary_nodes(const UniformGrid& grid) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (is_boundary_node(grid, i)) out.push_back(i);
  return out;
}

struct WireFrame {
  UniformGrid grid;
  /// One value per boundary node, ordered as boundary_nodes(grid).
  Vector boundary_values;

  WireFrame(UniformGrid g, Vector values) : grid(std::move(g)), boundary_values(std::move(values)) {
    require(grid.dimension() == 2, "wire frame needs a 2-D grid");
    const std::size_t expected = boundary_nodes(grid).size();
    require(boundary_values.size() == expected, "wire frame has " + std::to_string(boundary_values.size()) +
                                                    " values for " + std::to_string(expected) + " boundary points");
    for (double v : boundary_values) require(std::isfinite(v), "wire frame values must be finite");
  }

  static WireFrame from_function(const UniformGrid& grid, const std::function<double(double, double)>& f) {
    Vector values;
    for (std::size_t i : boundary_nodes(grid)) {
      const auto x = grid.coordinates(i);
      values.push_back(f(x[0], x[1]));
    }
    return {grid, std::move(values)};
  }
};

struct FilmSolution {
  ScalarFieldOnGrid height;
  double boundary_residual = 0.0;
  double interior_laplacian_norm = 0.0;
  int iterations = 0;
};

/// Max-norm of the 5-point Laplacian over interior nodes.
inline double interior_laplacian_norm(const ScalarFieldOnGrid& h) {
  const UniformGrid& g = h.grid();
  const std::size_t ny = g.axis(1).points;
  const double wx = 1.0 / (g.axis(0).spacing * g.axis(0).spacing);
  const double wy = 1.0 / (g.axis(1).spacing * g.axis(1).spacing);
  double m = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (is_boundary_node(g, i)) continue;
    const double lap = wx * (2.0 * h[i] - h[i - ny] - h[i + ny]) + wy * (2.0 * h[i] - h[i - 1] - h[i + 1]);
    m = std::max(m, std::abs(lap));
  }
  return m;
}

/// Discrete Dirichlet energy: sum over grid edges of (difference / spacing)^2
/// times the cell area.
inline double dirichlet_energy(const ScalarFieldOnGrid& h) {
  const UniformGrid& g = h.grid();
  const std::size_t nx = g.axis(0).points, ny = g.axis(1).points;
  const double hx = g.axis(0).spacing, hy = g.axis(1).spacing;
  double e = 0.0;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t p = i * ny + j;
      if (i + 1 < nx) e += std::pow((h[p + ny] - h[p]) / hx, 2);
      if (j + 1 < ny) e += std::pow((h[p + 1] - h[p]) / hy, 2);
    }
  return e * hx * hy;
}

/// Conjugate gradients on the interior 5-point system, frame values fixed.
/// Stops when the interior Laplacian max-norm is at most config.tolerance.
inline FilmSolution solve_film(const WireFrame& frame, const variational::SolverConfig& config) {
  require(config.tolerance > 0.0, "film tolerance must be positive");
  const UniformGrid& g = frame.grid;
  const std::size_t n = g.size(), ny = g.axis(1).points;
  const double wx = 1.0 / (g.axis(0).spacing * g.axis(0).spacing);
  const double wy = 1.0 / (g.axis(1).spacing * g.axis(1).spacing);
  const double diag = 2.0 * (wx + wy);

  std::vector<char> fixed(n, 0);
  const auto ring = boundary_nodes(g);
  for (std::size_t i : ring) fixed[i] = 1;

  Vector u(n, 0.0);
  double mean = 0.0;
  for (std::size_t k = 0; k < ring.size(); ++k) {
    u[ring[k]] = frame.boundary_values[k];
    mean += frame.boundary_values[k];
  }
  mean /= static_cast<double>(ring.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!fixed[i]) u[i] = mean;

  // Interior operator with frame values frozen, Jacobi-scaled to unit diagonal.
  auto apply = [&](const Vector& x, Vector& y) {
    for (std::size_t i = 0; i < n; ++i) {
      if (fixed[i]) {
        y[i] = 0.0;
        continue;
      }
      auto nb = [&](std::size_t j) { return fixed[j] ? 0.0 : x[j]; };
      y[i] = (diag * x[i] - wx * (nb(i - ny) + nb(i + ny)) - wy * (nb(i - 1) + nb(i + 1))) / diag;
    }
  };
  auto residual = [&](const Vector& x, Vector& r) {
    for (std::size_t i = 0; i < n; ++i) {
      if (fixed[i]) {
        r[i] = 0.0;
        continue;
      }
      r[i] = -(diag * x[i] - wx * (x[i - ny] + x[i + ny]) - wy * (x[i - 1] + x[i + 1])) / diag;
    }
  };

  Vector r(n), p(n), ap(n), correction(n, 0.0);
  residual(u, r);
  p = r;
  double rr = dot(r, r);
  const int cap = std::max(config.max_iterations, static_cast<int>(10 * n));
  int it = 0;
  for (; it < cap; ++it) {
    if (max_abs(r) * diag <= config.tolerance) break;
    apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    axpy(alpha, p, u);
    // Recompute the true residual periodically so rounding cannot drift.
    if ((it + 1) % 50 == 0) {
      residual(u, r);
    } else {
      axpy(-alpha, ap, r);
    }
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }

  ScalarFieldOnGrid height(g, std::move(u));
  FilmSolution sol{height, 0.0, interior_laplacian_norm(height), it};
  for (std::size_t k = 0; k < ring.size(); ++k)
    sol.boundary_residual = std::max(sol.boundary_residual, std::abs(height[ring[k]] - frame.boundary_values[k]));
  if (sol.interior_laplacian_norm > config.tolerance)
    throw ConvergenceError("film solve did not reach the interior Laplacian tolerance", sol.interior_laplacian_norm,
                           height.values());
  return sol;
}

struct MeanValueReport {
  double ball_average_minus_center = 0.0;
  double laplacian_prediction = 0.0;
  std::size_t ball_points = 0;
};

/// Unweighted average of f over lattice points within `radius` of the center
/// node, minus f(center), next to -(radius^2 / 8) (Delta f)(center).
inline MeanValueReport mean_value_residual(const ScalarFieldOnGrid& f, std::array<std::size_t, 2> center, double radius) {
  const UniformGrid& g = f.grid();
  require(g.dimension() == 2, "mean-value check is implemented for 2-D grids");
  require(radius > 0.0, "ball radius must be positive");
  const double hx = g.axis(0).spacing, hy = g.axis(1).spacing;
  const auto reach_x = static_cast<std::size_t>(std::floor(radius / hx + 1e-12));
  const auto reach_y = static_cast<std::size_t>(std::floor(radius / hy + 1e-12));
  const std::size_t reach_min_x = std::max<std::size_t>(reach_x, 1), reach_min_y = std::max<std::size_t>(reach_y, 1);
  require(center[0] >= reach_min_x && center[0] + reach_min_x < g.axis(0).points && center[1] >= reach_min_y &&
              center[1] + reach_min_y < g.axis(1).points,
          "ball of radius " + std::to_string(radius) + " exits the grid");

  const std::size_t ny = g.axis(1).points;
  const std::size_t c = center[0] * ny + center[1];
  const double r2 = radius * radius * (1.0 + 1e-12);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = center[0] - reach_x; i <= center[0] + reach_x; ++i)
    for (std::size_t j = center[1] - reach_y; j <= center[1] + reach_y; ++j) {
      const double dx = (static_cast<double>(i) - static_cast<double>(center[0])) * hx;
      const double dy = (static_cast<double>(j) - static_cast<double>(center[1])) * hy;
      if (dx * dx + dy * dy <= r2) {
        sum += f[i * ny + j];
        ++count;
      }
    }
  const double lap = (2.0 * f[c] - f[c - ny] - f[c + ny]) / (hx * hx) + (2.0 * f[c] - f[c - 1] - f[c + 1]) / (hy * hy);
  return {sum / static_cast<double>(count) - f[c], -(radius * radius / 8.0) * lap, count};
}

}  // namespace jaynes::surfaces
