#pragma once

// Moving frames on 2-D charts.  A configuration is a coframe e^m = E[m][i] dx^i
// and connection 1-forms w^m_n = W[m][n][i] dx^i.  The structure equations
//   T^m   = d e^m + w^m_n ^ e^n
//   O^m_n = d w^m_n + w^m_a ^ w^a_n
// are evaluated pointwise with fourth-order central differences.  A 2-form in
// two dimensions is stored as its single dx^0 ^ dx^1 coefficient, which makes
// antisymmetry exact.
//
// The torsion functional sum_m <e^m, Delta e^m> is evaluated on a sampled
// coframe with the flat-chart Laplacian acting on each component field, and
// minimized by projected gradient descent over pointwise-orthonormal frames.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "jaynes/core.hpp"
#include "jaynes/geometry.hpp"
#include "jaynes/metrics.hpp"
#include "jaynes/grids.hpp"
#include "jaynes/variational.hpp"

namespace jaynes::cartan {

using geometry::ChartBox;
using geometry::Point;
using Mat2 = std::array<std::array<double, 2>, 2>;
/// conn[m][n] = coordinate components of w^m_n
using Connection2 = std::array<std::array<std::array<double, 2>, 2>, 2>;

using CoframeFn = std::function<Mat2(const Point&)>;
using ConnectionFn = std::function<Connection2(const Point&)>;

inline double wedge(const std::array<double, 2>& a, const std::array<double, 2>& b) { return a[0] * b[1] - a[1] * b[0]; }

inline double det2(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

struct FrameConfiguration {
  ChartBox chart;
  CoframeFn coframe;
  ConnectionFn connection;
  double step = 0.0;  ///< finite-difference step; 0 means 1e-3 of the chart scale

  double fd_step() const {
    if (step > 0.0) return step;
    return 1e-3 * std::max(chart.hi[0] - chart.lo[0], chart.hi[1] - chart.lo[1]);
  }

  void check_point(const Point& x, double margin) const {
    for (std::size_t k = 0; k < 2; ++k) {
      if (chart.periodic[k]) continue;
      require(x[k] - margin > chart.lo[k] && x[k] + margin < chart.hi[k], "finite-difference stencil exits the chart");
    }
  }
};

inline Connection2 zero_connection(const Point&) { return Connection2{}; }

struct TorsionCurvatureReport {
  std::array<double, 2> torsion{};  ///< T^m_{01}
  Mat2 curvature{};                 ///< O^m_n_{01}
  double torsion_norm = 0.0;
  double curvature_norm = 0.0;
};

namespace detail {

/// Fourth-order central difference of f along axis k.
template <class F>
auto central(const F& f, const Point& x, std::size_t k, double h) {
  auto at = [&](double s) {
    Point y = x;
    y[k] += s * h;
    return f(y);
  };
  const auto m2 = at(-2.0), m1 = at(-1.0), p1 = at(1.0), p2 = at(2.0);
  auto out = m2;
  using T = decltype(out);
  if constexpr (std::is_same_v<T, Mat2>) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) out[a][b] = (m2[a][b] - 8.0 * m1[a][b] + 8.0 * p1[a][b] - p2[a][b]) / (12.0 * h);
  } else {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          out[a][b][c] = (m2[a][b][c] - 8.0 * m1[a][b][c] + 8.0 * p1[a][b][c] - p2[a][b][c]) / (12.0 * h);
  }
  return out;
}

/// (d e^m)_{01} = d_0 E[m][1] - d_1 E[m][0]
inline std::array<double, 2> coframe_exterior_derivative(const CoframeFn& e, const Point& x, double h) {
  const Mat2 d0 = central(e, x, 0, h), d1 = central(e, x, 1, h);
  return {d0[0][1] - d1[0][0], d0[1][1] - d1[1][0]};
}

}  // namespace detail

inline std::array<double, 2> structure_torsion(const FrameConfiguration& cfg, const Point& x) {
  const double h = cfg.fd_step();
  cfg.check_point(x, 2.0 * h);
  const auto de = detail::coframe_exterior_derivative(cfg.coframe, x, h);
  const Mat2 e = cfg.coframe(x);
  const Connection2 w = cfg.connection(x);
  std::array<double, 2> t{};
  for (int m = 0; m < 2; ++m) {
    t[m] = de[m];
    for (int n = 0; n < 2; ++n) t[m] += wedge(w[m][n], e[n]);
  }
  return t;
}

inline Mat2 structure_curvature(const FrameConfiguration& cfg, const Point& x) {
  const double h = cfg.fd_step();
  cfg.check_point(x, 2.0 * h);
  const Connection2 d0 = detail::central(cfg.connection, x, 0, h), d1 = detail::central(cfg.connection, x, 1, h);
  const Connection2 w = cfg.connection(x);
  Mat2 o{};
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) {
      o[m][n] = d0[m][n][1] - d1[m][n][0];
      for (int a = 0; a < 2; ++a) o[m][n] += wedge(w[m][a], w[a][n]);
    }
  return o;
}

inline TorsionCurvatureReport structure_report(const FrameConfiguration& cfg, const Point& x) {
  TorsionCurvatureReport r;
  r.torsion = structure_torsion(cfg, x);
  r.curvature = structure_curvature(cfg, x);
  r.torsion_norm = std::hypot(r.torsion[0], r.torsion[1]);
  double c2 = 0.0;
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) c2 += r.curvature[m][n] * r.curvature[m][n];
  r.curvature_norm = std::sqrt(c2);
  return r;
}

/// max |E^T E - g| at x.
inline double orthonormality_defect(const Mat2& e, const geometry::Mat& g) {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) worst = std::max(worst, std::abs(e[0][i] * e[0][j] + e[1][i] * e[1][j] - g[i][j]));
  return worst;
}

/// Torsion-free metric-compatible connection of an orthonormal coframe.  In
/// two dimensions w^1_2 = a e^1 + b e^2 with d e^1 = -a e^1^e^2 and
/// d e^2 = -b e^1^e^2.  The returned function validates orthonormality at every
/// point it is evaluated.
inline ConnectionFn levi_civita_connection(const geometry::ParametrizedMetric& metric, CoframeFn coframe, double step = 0.0) {
  require(metric.dimension() == 2, "frames are implemented on 2-D charts");
  const ChartBox chart = metric.chart();
  const double h = step > 0.0 ? step : 1e-3 * std::max(chart.hi[0] - chart.lo[0], chart.hi[1] - chart.lo[1]);
  return [metric, coframe = std::move(coframe), h](const Point& x) {
    const Mat2 e = coframe(x);
    const geometry::Mat g = metric.components(x);
    const double scale = std::max({1.0, std::abs(g[0][0]), std::abs(g[1][1])});
    require(orthonormality_defect(e, g) <= 1e-10 * scale, "coframe is not orthonormal for the metric");
    const double vol = det2(e);
    require(std::abs(vol) > 1e-300, "coframe is degenerate");
    const auto de = detail::coframe_exterior_derivative(coframe, x, h);
    const double a = -de[0] / vol, b = -de[1] / vol;
    Connection2 w{};
    for (int i = 0; i < 2; ++i) {
      w[0][1][i] = a * e[0][i] + b * e[1][i];
      w[1][0][i] = -w[0][1][i];
    }
    return w;
  };
}

/// O^m_n expressed through the coordinate Riemann tensor:
/// E[m][a] R^a_{b01} (E^{-1})[b][n].
inline Mat2 frame_curvature_from_riemann(const geometry::CurvatureBundle& cb, const Mat2& e) {
  const double d = det2(e);
  const Mat2 inv{{{e[1][1] / d, -e[0][1] / d}, {-e[1][0] / d, e[0][0] / d}}};
  Mat2 out{};
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) {
      double s = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) s += e[m][a] * cb.riemann[a][b][0][1] * inv[b][n];
      out[m][n] = s;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Named analytic configurations

enum class PerturbationKind {
  Component,  ///< adds to one coframe entry (leaves the orthonormal set)
  Rotation    ///< rotates the frame pointwise by the sinusoidal angle
};

struct Perturbation {
  PerturbationKind kind = PerturbationKind::Component;
  int frame_index = 0;  ///< m of E[m][i]
  int coord_index = 0;  ///< i of E[m][i]
  double amplitude = 0.0;
  std::array<int, 2> mode{1, 0};  ///< adds amplitude * sin(2 pi (k0 x / L0 + k1 y / L1))
};

/// Cartesian coframe (dx, dy) with zero connection on [0, L)^2, both periodic.
inline FrameConfiguration cartesian_frame(double length = 1.0, std::vector<Perturbation> perturbations = {}) {
  require(length > 0.0, "torus chart length must be positive");
  for (const Perturbation& p : perturbations)
    require(p.frame_index >= 0 && p.frame_index < 2 && p.coord_index >= 0 && p.coord_index < 2 && std::isfinite(p.amplitude),
            "perturbation indices must be 0 or 1 and the amplitude finite");
  FrameConfiguration cfg;
  cfg.chart = ChartBox{{0.0, 0.0, 0.0}, {length, length, 0.0}, {true, true, false}};
  cfg.coframe = [length, perturbations](const Point& x) {
    Mat2 e{{{1.0, 0.0}, {0.0, 1.0}}};
    for (const Perturbation& p : perturbations) {
      const double s = p.amplitude * std::sin(2.0 * pi * (p.mode[0] * x[0] + p.mode[1] * x[1]) / length);
      if (p.kind == PerturbationKind::Component) {
        e[p.frame_index][p.coord_index] += s;
      } else {
        const Mat2 r{{{std::cos(s), -std::sin(s)}, {std::sin(s), std::cos(s)}}};
        Mat2 out{};
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) out[a][b] = r[a][0] * e[0][b] + r[a][1] * e[1][b];
        e = out;
      }
    }
    return e;
  };
  cfg.connection = zero_connection;
  return cfg;
}

/// Orthonormal polar coframe (dr, r dphi) on the polar-plane chart.
inline FrameConfiguration polar_frame(bool levi_civita = true, double r_max = 2.0) {
  FrameConfiguration cfg;
  cfg.chart = ChartBox{{0.0, 0.0, 0.0}, {r_max, 2.0 * pi, 0.0}, {false, true, false}};
  cfg.coframe = [](const Point& x) { return Mat2{{{1.0, 0.0}, {0.0, x[0]}}}; };
  if (levi_civita)
    cfg.connection = levi_civita_connection(geometry::polar_plane_metric(r_max), cfg.coframe);
  else
    cfg.connection = zero_connection;
  return cfg;
}

/// Orthonormal coframe (dtheta, sin(theta) dphi) on the sphere of radius r.
inline FrameConfiguration sphere_frame(double r = 1.0, bool levi_civita = true) {
  FrameConfiguration cfg;
  cfg.chart = ChartBox{{0.0, 0.0, 0.0}, {pi, 2.0 * pi, 0.0}, {false, true, false}};
  cfg.coframe = [r](const Point& x) { return Mat2{{{r, 0.0}, {0.0, r * std::sin(x[0])}}}; };
  if (levi_civita)
    cfg.connection = levi_civita_connection(geometry::sphere_metric(r), cfg.coframe);
  else
    cfg.connection = zero_connection;
  return cfg;
}

// ---------------------------------------------------------------------------
// Sampled coframes and the torsion functional

/// Coframe sampled at the nodes of a 2-D grid, with the frame metric each
/// node's coframe must be orthonormal for (identity when unset).
struct FrameField {
  grids::UniformGrid grid;
  std::vector<Mat2> coframe;
  std::vector<Mat2> target_metric;
  std::optional<std::vector<Connection2>> connection;

  FrameField(grids::UniformGrid g, std::vector<Mat2> e, std::vector<Mat2> metric = {})
      : grid(std::move(g)), coframe(std::move(e)), target_metric(std::move(metric)) {
    require(grid.dimension() == 2, "frame fields live on 2-D grids");
    require(coframe.size() == grid.size(), "one coframe per grid node required");
    if (target_metric.empty()) target_metric.assign(grid.size(), Mat2{{{1.0, 0.0}, {0.0, 1.0}}});
    require(target_metric.size() == grid.size(), "one target metric per grid node required");
  }

  /// Component field E[m][i] as a scalar field.
  grids::ScalarFieldOnGrid component(int m, int i) const {
    Vector v(coframe.size());
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = coframe[p][m][i];
    return {grid, std::move(v)};
  }
};

inline FrameField sample(const FrameConfiguration& cfg, const grids::UniformGrid& grid,
                         const std::function<geometry::Mat(const Point&)>& metric = {}) {
  std::vector<Mat2> e(grid.size()), g;
  std::vector<Connection2> w(grid.size());
  if (metric) g.resize(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto c = grid.coordinates(p);
    const Point x{c[0], c[1], 0.0};
    e[p] = cfg.coframe(x);
    w[p] = cfg.connection(x);
    if (metric) {
      const auto m = metric(x);
      g[p] = Mat2{{{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}};
    }
  }
  FrameField f(grid, std::move(e), std::move(g));
  f.connection = std::move(w);
  return f;
}

namespace detail {

/// Edge-based Dirichlet form of one component: periodic axes wrap, other
/// axes keep interior edges only.  On a fully periodic grid this equals
/// <f, Delta f> with the grid's finite-difference Laplacian.
inline double dirichlet_form(const grids::UniformGrid& grid, const Vector& f) {
  const std::size_t nx = grid.axis(0).points, ny = grid.axis(1).points;
  const double hx = grid.axis(0).spacing, hy = grid.axis(1).spacing;
  const bool px = grid.axis(0).boundary == grids::Boundary::Periodic;
  const bool py = grid.axis(1).boundary == grids::Boundary::Periodic;
  double e = 0.0;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t p = i * ny + j;
      if (i + 1 < nx || px) {
        const double d = f[((i + 1) % nx) * ny + j] - f[p];
        e += d * d / (hx * hx);
      }
      if (j + 1 < ny || py) {
        const double d = f[i * ny + (j + 1) % ny] - f[p];
        e += d * d / (hy * hy);
      }
    }
  return e * hx * hy;
}

/// Graph Laplacian matching dirichlet_form (its gradient is 2 * this * area).
inline Vector graph_laplacian(const grids::UniformGrid& grid, const Vector& f) {
  const std::size_t nx = grid.axis(0).points, ny = grid.axis(1).points;
  const double wx = 1.0 / (grid.axis(0).spacing * grid.axis(0).spacing);
  const double wy = 1.0 / (grid.axis(1).spacing * grid.axis(1).spacing);
  const bool px = grid.axis(0).boundary == grids::Boundary::Periodic;
  const bool py = grid.axis(1).boundary == grids::Boundary::Periodic;
  Vector out(f.size(), 0.0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t p = i * ny + j;
      if (i + 1 < nx || px) {
        const std::size_t q = ((i + 1) % nx) * ny + j;
        out[p] += wx * (f[p] - f[q]);
        out[q] += wx * (f[q] - f[p]);
      }
      if (j + 1 < ny || py) {
        const std::size_t q = i * ny + (j + 1) % ny;
        out[p] += wy * (f[p] - f[q]);
        out[q] += wy * (f[q] - f[p]);
      }
    }
  return out;
}

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

inline Mat2 transpose(const Mat2& a) { return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}}; }

/// Symmetric square root of an SPD 2x2 matrix.
inline Mat2 spd_sqrt(const Mat2& g) {
  const double s = std::sqrt(det2(g));
  const double t = std::sqrt(g[0][0] + g[1][1] + 2.0 * s);
  return {{{(g[0][0] + s) / t, g[0][1] / t}, {g[1][0] / t, (g[1][1] + s) / t}}};
}

inline Mat2 inverse(const Mat2& a) {
  const double d = det2(a);
  return {{{a[1][1] / d, -a[0][1] / d}, {-a[1][0] / d, a[0][0] / d}}};
}

/// Nearest orthogonal matrix (polar factor), keeping the sign of det.
inline Mat2 polar_factor(const Mat2& m) {
  if (det2(m) >= 0.0) {
    const double t = std::atan2(m[1][0] - m[0][1], m[0][0] + m[1][1]);
    return {{{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}}};
  }
  const double t = std::atan2(m[1][0] + m[0][1], m[0][0] - m[1][1]);
  return {{{std::cos(t), std::sin(t)}, {std::sin(t), -std::cos(t)}}};
}

/// Projects E onto {Q S : Q orthogonal}, S = sqrt(g), so E^T E = g.
inline Mat2 project_orthonormal(const Mat2& e, const Mat2& g) {
  const Mat2 s = spd_sqrt(g);
  return mul(polar_factor(mul(e, inverse(s))), s);
}

}  // namespace detail

/// sum over frame index m and coordinate index i of <E[m][i], Delta E[m][i]>.
inline double torsion_functional(const FrameField& field) {
  double total = 0.0;
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 2; ++i) total += detail::dirichlet_form(field.grid, field.component(m, i).values());
  return total;
}

inline double torsion_functional(const FrameConfiguration& cfg, const grids::UniformGrid& quadrature) {
  return torsion_functional(sample(cfg, quadrature));
}

/// Grid for sampling a chart: periodic axes get n nodes on [lo, hi), the
/// others n cell midpoints of (lo, hi).
inline grids::UniformGrid chart_grid(const ChartBox& chart, std::size_t nx, std::size_t ny) {
  std::vector<grids::Axis> axes;
  const std::size_t n[2] = {nx, ny};
  for (std::size_t k = 0; k < 2; ++k) {
    const double len = chart.hi[k] - chart.lo[k];
    if (chart.periodic[k])
      axes.push_back(grids::Axis::periodic_interval(chart.lo[k], chart.hi[k], n[k]));
    else
      axes.push_back({n[k], len / static_cast<double>(n[k]), chart.lo[k] + 0.5 * len / static_cast<double>(n[k]),
                      grids::Boundary::Dirichlet});
  }
  return grids::UniformGrid(std::move(axes));
}

enum class ConnectionMode { Implicit, Frozen };

struct TrajectoryRow {
  int iteration = 0;
  double value = 0.0;
  double gradient_norm = 0.0;
};

struct TorsionFunctionalResult {
  double value = 0.0;
  double gradient_norm = 0.0;
  FrameField configuration;
  int iterations = 0;
  bool converged = false;
  std::vector<TrajectoryRow> trajectory;
};

namespace detail {

/// Riemannian gradient of the functional at each node, tangent to the
/// orthonormal-frame constraint.
inline std::vector<Mat2> projected_gradient(const FrameField& f, double& norm) {
  const std::size_t n = f.grid.size();
  std::array<Vector, 4> lap;
  for (int c = 0; c < 4; ++c) lap[c] = graph_laplacian(f.grid, f.component(c / 2, c % 2).values());
  std::vector<Mat2> out(n);
  double n2 = 0.0;
  const double area = f.grid.cell_volume();
  for (std::size_t p = 0; p < n; ++p) {
    Mat2 g{};
    for (int c = 0; c < 4; ++c) g[c / 2][c % 2] = 2.0 * lap[c][p];
    // E = Q S: the gradient with respect to Q is G S, projected onto Q * skew.
    const Mat2 s = spd_sqrt(f.target_metric[p]);
    const Mat2 q = mul(f.coframe[p], inverse(s));
    const Mat2 a = mul(transpose(q), mul(g, s));
    const double w = 0.5 * (a[1][0] - a[0][1]);
    const Mat2 skew{{{0.0, -w}, {w, 0.0}}};
    const Mat2 tangent_q = mul(q, skew);
    out[p] = mul(tangent_q, s);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) n2 += tangent_q[i][j] * tangent_q[i][j];
  }
  norm = std::sqrt(n2 * area);
  return out;
}

/// Levi-Civita connection of a sampled coframe from second-order central
/// differences (one-sided at non-periodic edges).
inline std::vector<Connection2> discrete_levi_civita(const FrameField& f) {
  const auto& grid = f.grid;
  const std::size_t nx = grid.axis(0).points, ny = grid.axis(1).points;
  auto deriv = [&](std::size_t p, int axis, int m, int i) {
    const std::size_t ix = p / ny, iy = p % ny;
    const std::size_t len = axis == 0 ? nx : ny;
    const std::size_t pos = axis == 0 ? ix : iy;
    const bool periodic = grid.axis(axis).boundary == grids::Boundary::Periodic;
    const double h = grid.axis(axis).spacing;
    auto at = [&](std::size_t k) { return f.coframe[axis == 0 ? k * ny + iy : ix * ny + k][m][i]; };
    if (periodic) return (at((pos + 1) % len) - at((pos + len - 1) % len)) / (2.0 * h);
    if (pos == 0) return (at(1) - at(0)) / h;
    if (pos + 1 == len) return (at(len - 1) - at(len - 2)) / h;
    return (at(pos + 1) - at(pos - 1)) / (2.0 * h);
  };
  std::vector<Connection2> out(f.coframe.size());
  for (std::size_t p = 0; p < out.size(); ++p) {
    const Mat2& e = f.coframe[p];
    const double vol = det2(e);
    const double de0 = deriv(p, 0, 0, 1) - deriv(p, 1, 0, 0);
    const double de1 = deriv(p, 0, 1, 1) - deriv(p, 1, 1, 0);
    const double a = -de0 / vol, b = -de1 / vol;
    for (int i = 0; i < 2; ++i) {
      out[p][0][1][i] = a * e[0][i] + b * e[1][i];
      out[p][1][0][i] = -out[p][0][1][i];
    }
  }
  return out;
}

}  // namespace detail

/// Projected gradient descent with Armijo backtracking.  The initial coframe is
/// first projected onto the constraint; accepted iterates never increase the
/// functional.  Throws ConvergenceError when backtracking cannot find descent.
inline TorsionFunctionalResult minimize_torsion_functional(const FrameField& initial, const variational::SolverConfig& config,
                                                           ConnectionMode mode = ConnectionMode::Implicit) {
  require(config.tolerance > 0.0, "tolerance must be positive");
  require(config.max_iterations >= 1, "max_iterations must be at least 1");
  FrameField current = initial;
  for (std::size_t p = 0; p < current.coframe.size(); ++p)
    current.coframe[p] = detail::project_orthonormal(current.coframe[p], current.target_metric[p]);

  double value = torsion_functional(current);
  double gnorm = 0.0;
  auto grad = detail::projected_gradient(current, gnorm);

  const double hx = initial.grid.axis(0).spacing, hy = initial.grid.axis(1).spacing;
  const double lambda_max = 2.0 * (4.0 / (hx * hx) + 4.0 / (hy * hy));
  double step = 1.0 / lambda_max;

  TorsionFunctionalResult result{value, gnorm, current, 0, false, {}};
  result.trajectory.push_back({0, value, gnorm});

  int it = 0;
  while (gnorm >= config.tolerance && it < config.max_iterations) {
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      FrameField trial = current;
      for (std::size_t p = 0; p < trial.coframe.size(); ++p) {
        Mat2 e = trial.coframe[p];
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) e[i][j] -= step * grad[p][i][j];
        trial.coframe[p] = detail::project_orthonormal(e, trial.target_metric[p]);
      }
      const double trial_value = torsion_functional(trial);
      if (trial_value <= value - 1e-4 * step * gnorm * gnorm) {
        current = std::move(trial);
        value = trial_value;
        accepted = true;
        step *= 1.5;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.value = value;
      result.configuration = current;
      throw ConvergenceError("torsion descent stalled: no decrease after backtracking", gnorm);
    }
    ++it;
    grad = detail::projected_gradient(current, gnorm);
    result.trajectory.push_back({it, value, gnorm});
  }

  if (mode == ConnectionMode::Implicit)
    current.connection = detail::discrete_levi_civita(current);
  result.value = value;
  result.gradient_norm = gnorm;
  result.configuration = std::move(current);
  result.iterations = it;
  result.converged = gnorm < config.tolerance;
  return result;
}

inline void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows) {
  os << "iteration,value,gradient_norm\n";
  char buf[80];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", r.iteration, r.value, r.gradient_norm);
    os << buf;
  }
}

}  // namespace jaynes::cartan
