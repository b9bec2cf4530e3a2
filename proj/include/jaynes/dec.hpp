#pragma once

// Discrete exterior calculus on flat periodic structured meshes (1-D rings and
// 2-D tori): cochains, the coboundary d, the diagonal Hodge star, the
// codifferential delta = (sign) * star d star, and the deRham Laplacian
// d delta + delta d.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "jaynes/core.hpp"

namespace jaynes::dec {

/// Oriented incidence of a k-cell into its (k-1)-faces.
struct Incidence {
  std::size_t face;
  int sign;
};

/// Periodic structured mesh.  Cells are indexed as follows:
///   vertices  (i, j)           -> i * ny + j
///   1-D edges i                -> edge from vertex i to i+1 (wrapping)
///   2-D edges x-edges first    -> (i, j) from (i, j) to (i+1, j)
///             then y-edges     -> nx*ny + (i, j) from (i, j) to (i, j+1)
///   2-D faces (i, j)           -> boundary x(i,j) + y(i+1,j) - x(i,j+1) - y(i,j)
class PeriodicMesh {
public:
  PeriodicMesh(std::vector<std::size_t> cells, std::vector<double> lengths)
      : cells_(std::move(cells)), lengths_(std::move(lengths)) {
    require(cells_.size() == 1 || cells_.size() == 2, "periodic mesh dimension must be 1 or 2");
    require(lengths_.size() == cells_.size(), "one length per axis required");
    for (std::size_t k = 0; k < cells_.size(); ++k) {
      require(cells_[k] >= 3, "need at least 3 cells per axis");
      require(lengths_[k] > 0.0 && std::isfinite(lengths_[k]), "axis length must be positive");
    }
    build_tables();
    check_boundary_of_boundary();
  }

  std::size_t dimension() const noexcept { return cells_.size(); }
  std::size_t cells_per_axis(std::size_t k) const { return cells_[k]; }
  double length(std::size_t k) const { return lengths_[k]; }
  double spacing(std::size_t k) const { return lengths_[k] / static_cast<double>(cells_[k]); }
  const std::vector<std::size_t>& cells() const noexcept { return cells_; }
  const std::vector<double>& lengths() const noexcept { return lengths_; }

  std::size_t count(std::size_t k) const {
    require(k <= dimension(), "cell degree exceeds mesh dimension");
    return boundary_[k].size();
  }

  /// Faces of k-cell `cell` with orientation signs (k >= 1).
  const std::vector<Incidence>& boundary(std::size_t k, std::size_t cell) const { return boundary_[k][cell]; }

  /// Measure of the primal k-cell.
  double primal_measure(std::size_t k, std::size_t cell) const {
    if (k == 0) return 1.0;
    if (dimension() == 1) return spacing(0);
    if (k == 2) return spacing(0) * spacing(1);
    return cell < vertex_count() ? spacing(0) : spacing(1);
  }

  /// Measure of the dual (n-k)-cell of primal k-cell `cell`.
  double dual_measure(std::size_t k, std::size_t cell) const {
    if (k == dimension()) return 1.0;
    if (dimension() == 1) return spacing(0);
    if (k == 0) return spacing(0) * spacing(1);
    return cell < vertex_count() ? spacing(1) : spacing(0);
  }

  /// Diagonal Hodge star weight dual/primal.
  double star_weight(std::size_t k, std::size_t cell) const { return dual_measure(k, cell) / primal_measure(k, cell); }

  std::size_t vertex_count() const { return boundary_[0].size(); }

  std::size_t vertex_index(std::size_t i, std::size_t j = 0) const {
    return dimension() == 1 ? i % cells_[0] : (i % cells_[0]) * cells_[1] + (j % cells_[1]);
  }

  std::array<double, 2> vertex_position(std::size_t v) const {
    if (dimension() == 1) return {spacing(0) * static_cast<double>(v), 0.0};
    return {spacing(0) * static_cast<double>(v / cells_[1]), spacing(1) * static_cast<double>(v % cells_[1])};
  }

private:
  void build_tables() {
    const std::size_t n = dimension();
    boundary_.assign(n + 1, {});
    if (n == 1) {
      const std::size_t nx = cells_[0];
      boundary_[0].resize(nx);
      boundary_[1].resize(nx);
      for (std::size_t i = 0; i < nx; ++i) boundary_[1][i] = {{i, -1}, {(i + 1) % nx, +1}};
      return;
    }
    const std::size_t nx = cells_[0], ny = cells_[1], nv = nx * ny;
    boundary_[0].resize(nv);
    boundary_[1].resize(2 * nv);
    boundary_[2].resize(nv);
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t v = vertex_index(i, j);
        boundary_[1][v] = {{v, -1}, {vertex_index(i + 1, j), +1}};
        boundary_[1][nv + v] = {{v, -1}, {vertex_index(i, j + 1), +1}};
        boundary_[2][v] = {{v, +1}, {nv + vertex_index(i + 1, j), +1}, {vertex_index(i, j + 1), -1}, {nv + v, -1}};
      }
  }

  void check_boundary_of_boundary() const {
    for (std::size_t k = 2; k <= dimension(); ++k) {
      for (std::size_t c = 0; c < count(k); ++c) {
        std::vector<std::pair<std::size_t, int>> acc;
        for (const Incidence& f : boundary_[k][c])
          for (const Incidence& g : boundary_[k - 1][f.face]) {
            auto it = std::find_if(acc.begin(), acc.end(), [&](const auto& e) { return e.first == g.face; });
            if (it == acc.end())
              acc.emplace_back(g.face, f.sign * g.sign);
            else
              it->second += f.sign * g.sign;
          }
        for (const auto& [face, total] : acc) require(total == 0, "incidence tables are not closed");
      }
    }
  }

  std::vector<std::size_t> cells_;
  std::vector<double> lengths_;
  std::vector<std::vector<std::vector<Incidence>>> boundary_;
};

using MeshPtr = std::shared_ptr<const PeriodicMesh>;

inline MeshPtr make_mesh(std::vector<std::size_t> cells, std::vector<double> lengths) {
  return std::make_shared<const PeriodicMesh>(std::move(cells), std::move(lengths));
}

/// Degree-k cochain.  Primal cochains live on k-cells; dual cochains of
/// degree j live on dual j-cells, indexed by the primal (n-j)-cells.
class Cochain {
public:
  Cochain(MeshPtr mesh, std::size_t degree, Vector coefficients, bool dual = false)
      : mesh_(std::move(mesh)), degree_(degree), dual_(dual), c_(std::move(coefficients)) {
    require(mesh_ != nullptr, "cochain needs a mesh");
    require(degree_ <= mesh_->dimension(), "cochain degree exceeds mesh dimension");
    require(c_.size() == mesh_->count(primal_degree()), "coefficient count " + std::to_string(c_.size()) +
                                                             " does not match the cell count " +
                                                             std::to_string(mesh_->count(primal_degree())));
  }

  static Cochain zero(MeshPtr mesh, std::size_t degree, bool dual = false) {
    const std::size_t n = mesh->count(dual ? mesh->dimension() - degree : degree);
    return {std::move(mesh), degree, Vector(n, 0.0), dual};
  }

  const MeshPtr& mesh() const noexcept { return mesh_; }
  std::size_t degree() const noexcept { return degree_; }
  bool is_dual() const noexcept { return dual_; }
  /// Degree of the primal cells the coefficients are indexed by.
  std::size_t primal_degree() const { return dual_ ? mesh_->dimension() - degree_ : degree_; }
  const Vector& coefficients() const noexcept { return c_; }
  Vector& coefficients() noexcept { return c_; }
  std::size_t size() const noexcept { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }

  Cochain& operator+=(const Cochain& o) {
    require(compatible(o), "adding incompatible cochains");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }

  friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }

  friend Cochain operator*(double s, Cochain a) {
    for (double& v : a.c_) v *= s;
    return a;
  }

  bool compatible(const Cochain& o) const { return mesh_ == o.mesh_ && degree_ == o.degree_ && dual_ == o.dual_; }

private:
  MeshPtr mesh_;
  std::size_t degree_;
  bool dual_;
  Vector c_;
};

inline int parity_sign(std::size_t e) { return (e % 2 == 0) ? 1 : -1; }

/// Coboundary.  Primal: signed incidence sums.  Dual: (-1)^k times the
/// transpose of the primal d_{k-1}, k the primal degree of the source cells.
inline Cochain exterior_derivative(const Cochain& c) {
  const PeriodicMesh& m = *c.mesh();
  const std::size_t n = m.dimension();
  require(c.degree() < n, "exterior derivative of a top-degree cochain");
  if (!c.is_dual()) {
    const std::size_t k = c.degree() + 1;
    Vector out(m.count(k), 0.0);
    for (std::size_t cell = 0; cell < out.size(); ++cell) {
      double s = 0.0;
      for (const Incidence& f : m.boundary(k, cell)) s += f.sign * c[f.face];
      out[cell] = s;
    }
    return {c.mesh(), k, std::move(out)};
  }
  const std::size_t k = c.primal_degree();  // source indexed by primal k-cells
  Vector out(m.count(k - 1), 0.0);
  const double sign = parity_sign(k);
  for (std::size_t cell = 0; cell < m.count(k); ++cell)
    for (const Incidence& f : m.boundary(k, cell)) out[f.face] += sign * f.sign * c[cell];
  return {c.mesh(), c.degree() + 1, std::move(out), true};
}

/// Diagonal Hodge star.  Primal k -> dual (n-k) scales by dual/primal
/// measure; dual -> primal scales back with sign (-1)^{k(n-k)}, so applying
/// the star twice is (-1)^{k(n-k)} times the identity.
inline Cochain hodge_star(const Cochain& c) {
  const PeriodicMesh& m = *c.mesh();
  const std::size_t n = m.dimension();
  const std::size_t k = c.primal_degree();
  Vector out(c.size());
  if (!c.is_dual()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = m.star_weight(k, i) * c[i];
    return {c.mesh(), n - k, std::move(out), true};
  }
  const double sign = parity_sign(k * (n - k));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sign * c[i] / m.star_weight(k, i);
  return {c.mesh(), k, std::move(out), false};
}

/// <<a, b>> = sum a * star b over primal k-cells.
inline double cochain_inner_product(const Cochain& a, const Cochain& b) {
  require(a.compatible(b) && !a.is_dual(), "inner product needs two primal cochains of equal degree on one mesh");
  const PeriodicMesh& m = *a.mesh();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * m.star_weight(a.degree(), i) * b[i];
  return s;
}

/// delta = (-1)^{k + (k-1)(n-k+1)} star d star on primal k-cochains; the sign
/// makes delta the adjoint of d in <<.,.>>.
inline Cochain codifferential(const Cochain& c) {
  require(!c.is_dual(), "codifferential expects a primal cochain");
  require(c.degree() >= 1, "codifferential of a 0-cochain");
  const std::size_t n = c.mesh()->dimension();
  const std::size_t k = c.degree();
  const double sign = parity_sign(k + (k - 1) * (n - k + 1));
  return sign * hodge_star(exterior_derivative(hodge_star(c)));
}

/// Delta = d delta + delta d (missing terms at degree 0 and n).
inline Cochain derham_laplacian(const Cochain& c) {
  require(!c.is_dual(), "deRham Laplacian expects a primal cochain");
  const std::size_t n = c.mesh()->dimension();
  Cochain out = Cochain::zero(c.mesh(), c.degree());
  if (c.degree() >= 1) out += exterior_derivative(codifferential(c));
  if (c.degree() < n) out += codifferential(exterior_derivative(c));
  return out;
}

}  // namespace jaynes::dec
