#pragma once

// Uniform tensor-product grids, sampled scalar fields, and the second-order
// finite-difference Laplacian.
//
// Sign convention used throughout the toolkit: the Laplacian is the positive
// semidefinite operator  Delta = -sum_k d^2/dx_k^2.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "jaynes/core.hpp"

namespace jaynes::grids {

enum class Boundary { Dirichlet, Periodic };

inline const char* to_string(Boundary b) { return b == Boundary::Dirichlet ? "dirichlet" : "periodic"; }

struct Axis {
  std::size_t points = 3;
  double spacing = 1.0;
  double origin = 0.0;
  Boundary boundary = Boundary::Dirichlet;

  double coordinate(std::size_t i) const { return origin + spacing * static_cast<double>(i); }

  /// n interior nodes of (a, b); the walls at a and b are the zero-extension
  /// points one spacing outside the grid.
  static Axis dirichlet_interval(double a, double b, std::size_t n) {
    const double h = (b - a) / static_cast<double>(n + 1);
    return {n, h, a + h, Boundary::Dirichlet};
  }

  /// n nodes of the periodic interval [a, b), node 0 at a.
  static Axis periodic_interval(double a, double b, std::size_t n) {
    return {n, (b - a) / static_cast<double>(n), a, Boundary::Periodic};
  }

  /// n nodes of the closed interval [a, b], endpoints included.
  static Axis closed_interval(double a, double b, std::size_t n) {
    return {n, (b - a) / static_cast<double>(n - 1), a, Boundary::Dirichlet};
  }

  bool operator==(const Axis&) const = default;
};

class UniformGrid {
public:
  explicit UniformGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    require(!axes_.empty() && axes_.size() <= 3, "grid dimension must be 1, 2 or 3");
    for (const Axis& a : axes_) {
      require(a.points >= 3, "each axis needs at least 3 points");
      require(a.spacing > 0.0 && std::isfinite(a.spacing), "axis spacing must be positive");
      require(std::isfinite(a.origin), "axis origin must be finite");
    }
  }

  std::size_t dimension() const noexcept { return axes_.size(); }
  const Axis& axis(std::size_t k) const { return axes_[k]; }
  const std::vector<Axis>& axes() const noexcept { return axes_; }

  std::size_t size() const {
    std::size_t n = 1;
    for (const Axis& a : axes_) n *= a.points;
    return n;
  }

  double cell_volume() const {
    double v = 1.0;
    for (const Axis& a : axes_) v *= a.spacing;
    return v;
  }

  /// Row-major stride of axis k (last axis fastest).
  std::size_t stride(std::size_t k) const {
    std::size_t s = 1;
    for (std::size_t j = k + 1; j < axes_.size(); ++j) s *= axes_[j].points;
    return s;
  }

  std::array<std::size_t, 3> multi_index(std::size_t flat) const {
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (std::size_t k = axes_.size(); k-- > 0;) {
      idx[k] = flat % axes_[k].points;
      flat /= axes_[k].points;
    }
    return idx;
  }

  std::size_t flat_index(const std::array<std::size_t, 3>& idx) const {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < axes_.size(); ++k) flat = flat * axes_[k].points + idx[k];
    return flat;
  }

  std::array<double, 3> coordinates(std::size_t flat) const {
    const auto idx = multi_index(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < axes_.size(); ++k) x[k] = axes_[k].coordinate(idx[k]);
    return x;
  }

  bool operator==(const UniformGrid&) const = default;

private:
  std::vector<Axis> axes_;
};

class ScalarFieldOnGrid {
public:
  ScalarFieldOnGrid(UniformGrid grid, Vector values) : grid_(std::move(grid)), values_(std::move(values)) {
    require(values_.size() == grid_.size(), "field has " + std::to_string(values_.size()) + " values for a grid of " +
                                                std::to_string(grid_.size()) + " points");
  }

  explicit ScalarFieldOnGrid(UniformGrid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

  /// Samples f at every grid point.
  static ScalarFieldOnGrid sample(const UniformGrid& grid, const std::function<double(const std::array<double, 3>&)>& f) {
    Vector v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.coordinates(i));
    return {grid, std::move(v)};
  }

  const UniformGrid& grid() const noexcept { return grid_; }
  const Vector& values() const noexcept { return values_; }
  Vector& values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

private:
  UniformGrid grid_;
  Vector values_;
};

/// Delta f = -sum_k (f[i+e_k] - 2 f[i] + f[i-e_k]) / h_k^2, raw-array form.
/// Dirichlet axes read zero outside the grid, periodic axes wrap.
inline void apply_fd_laplacian(const UniformGrid& grid, std::span<const double> in, std::span<double> out) {
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  for (std::size_t k = 0; k < grid.dimension(); ++k) {
    const Axis& ax = grid.axis(k);
    const std::size_t stride = grid.stride(k);
    const std::size_t m = ax.points;
    const double w = 1.0 / (ax.spacing * ax.spacing);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t pos = (i / stride) % m;
      double left = 0.0, right = 0.0;
      if (pos > 0)
        left = in[i - stride];
      else if (ax.boundary == Boundary::Periodic)
        left = in[i + (m - 1) * stride];
      if (pos + 1 < m)
        right = in[i + stride];
      else if (ax.boundary == Boundary::Periodic)
        right = in[i - (m - 1) * stride];
      out[i] += w * (2.0 * in[i] - left - right);
    }
  }
}

inline ScalarFieldOnGrid fd_laplacian(const ScalarFieldOnGrid& f) {
  ScalarFieldOnGrid out(f.grid());
  apply_fd_laplacian(f.grid(), f.values(), out.values());
  return out;
}

/// <f, g> = sum f g * cell volume.
inline double inner_product(const ScalarFieldOnGrid& f, const ScalarFieldOnGrid& g) {
  require(f.grid() == g.grid(), "inner product of fields on different grids");
  return dot(f.values(), g.values()) * f.grid().cell_volume();
}

/// (f x g)(x, y) = f(x) g(y) on the product grid, M1 axes first.
inline ScalarFieldOnGrid tensor_product_field(const ScalarFieldOnGrid& f, const ScalarFieldOnGrid& g) {
  const std::size_t dim = f.grid().dimension() + g.grid().dimension();
  require(dim <= 3, "product grid dimension " + std::to_string(dim) + " exceeds 3");
  std::vector<Axis> axes = f.grid().axes();
  axes.insert(axes.end(), g.grid().axes().begin(), g.grid().axes().end());
  UniformGrid product(std::move(axes));
  Vector v(product.size());
  const std::size_t ng = g.size();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < ng; ++j) v[i * ng + j] = f[i] * g[j];
  return {std::move(product), std::move(v)};
}

/// Diagonal and off-diagonal of the 1-D Dirichlet Laplacian matrix.  Periodic
/// 1-D grids are not tridiagonal and return false.
inline bool tridiagonal_laplacian(const UniformGrid& grid, Vector& diag, Vector& off) {
  if (grid.dimension() != 1 || grid.axis(0).boundary != Boundary::Dirichlet) return false;
  const Axis& ax = grid.axis(0);
  const double w = 1.0 / (ax.spacing * ax.spacing);
  diag.assign(ax.points, 2.0 * w);
  off.assign(ax.points - 1, -w);
  return true;
}

/// One CSV row per grid point: coordinates, then value.
inline void write_csv(std::ostream& os, const ScalarFieldOnGrid& f, const char* value_name = "value") {
  static constexpr const char* names[3] = {"x", "y", "z"};
  const std::size_t d = f.grid().dimension();
  for (std::size_t k = 0; k < d; ++k) os << names[k] << ',';
  os << value_name << '\n';
  char buf[32];
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = f.grid().coordinates(i);
    for (std::size_t k = 0; k < d; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", x[k]);
      os << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", f[i]);
    os << buf << '\n';
  }
}

}  // namespace jaynes::grids
