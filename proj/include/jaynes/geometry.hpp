#pragma once

// Riemannian curvature on chart-parametrized metrics, with index and sign
// conventions of Misner-Thorne-Wheeler:
//   Gamma^a_{bc}  = 1/2 g^{ad} (d_b g_{dc} + d_c g_{db} - d_d g_{bc})
//   R^a_{bmn}     = d_m Gamma^a_{bn} - d_n Gamma^a_{bm}
//                   + Gamma^a_{ml} Gamma^l_{bn} - Gamma^a_{nl} Gamma^l_{bm}
//   R_{bn}        = R^a_{ban},   R = g^{bn} R_{bn}
// With these conventions the round sphere of radius r has R = 2 / r^2.
//
// Metric derivatives come either from a closed-form jet supplied by the
// metric family or from fourth-order central differences.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "jaynes/core.hpp"

namespace jaynes::geometry {

using Point = std::array<double, 3>;
using Mat = std::array<std::array<double, 3>, 3>;

/// g, its first and second coordinate derivatives at a point.
/// d1[c][a][b] = d_c g_ab,  d2[c][d][a][b] = d_c d_d g_ab.
struct MetricJet {
  Mat g{};
  std::array<Mat, 3> d1{};
  std::array<std::array<Mat, 3>, 3> d2{};
};

enum class DerivativeMode { ClosedForm, CentralDifference };

struct ChartBox {
  Point lo{};
  Point hi{};
  /// Axes that wrap (e.g. an azimuth); stencils may cross them freely.
  std::array<bool, 3> periodic{false, false, false};
};

class ParametrizedMetric {
public:
  using MetricFn = std::function<Mat(const Point&)>;
  using JetFn = std::function<MetricJet(const Point&)>;

  ParametrizedMetric(std::string name, std::size_t dimension, ChartBox chart, MetricFn g, JetFn jet = {})
      : name_(std::move(name)), n_(dimension), chart_(chart), g_(std::move(g)), jet_(std::move(jet)) {
    require(n_ == 2 || n_ == 3, "metric dimension must be 2 or 3");
    require(static_cast<bool>(g_), "metric needs a component function");
    for (std::size_t k = 0; k < n_; ++k) require(chart_.lo[k] < chart_.hi[k], "chart box is empty");
    mode_ = jet_ ? DerivativeMode::ClosedForm : DerivativeMode::CentralDifference;
    double scale = 0.0;
    for (std::size_t k = 0; k < n_; ++k) scale = std::max(scale, chart_.hi[k] - chart_.lo[k]);
    step_ = 1e-3 * scale;
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t dimension() const noexcept { return n_; }
  const ChartBox& chart() const noexcept { return chart_; }
  DerivativeMode mode() const noexcept { return mode_; }
  double step() const noexcept { return step_; }
  bool has_closed_form() const noexcept { return static_cast<bool>(jet_); }

  /// Switches to finite differences with the given step (0 keeps the default
  /// of 1e-3 of the chart scale).
  ParametrizedMetric with_finite_differences(double step = 0.0) const {
    ParametrizedMetric m = *this;
    m.mode_ = DerivativeMode::CentralDifference;
    if (step > 0.0) m.step_ = step;
    return m;
  }

  Mat components(const Point& x) const { return g_(x); }

  bool inside(const Point& x, double margin = 0.0) const {
    for (std::size_t k = 0; k < n_; ++k) {
      if (chart_.periodic[k]) continue;
      if (x[k] - margin <= chart_.lo[k] || x[k] + margin >= chart_.hi[k]) return false;
    }
    return true;
  }

  MetricJet jet(const Point& x) const {
    if (mode_ == DerivativeMode::ClosedForm) {
      require(inside(x), "point lies outside the chart interior");
      return jet_(x);
    }
    require(inside(x, 2.0 * step_), "finite-difference stencil exits the chart");
    return fd_jet(x);
  }

private:
  MetricJet fd_jet(const Point& x) const {
    const double h = step_;
    MetricJet j;
    j.g = g_(x);
    auto shifted = [&](std::size_t a, double da, std::size_t b, double db) {
      Point y = x;
      y[a] += da;
      y[b] += db;
      return g_(y);
    };
    static constexpr double w1[4] = {1.0, -8.0, 8.0, -1.0};  // at -2h, -h, +h, +2h, over 12h
    static constexpr double off[4] = {-2.0, -1.0, 1.0, 2.0};
    for (std::size_t c = 0; c < n_; ++c) {
      // first derivative and pure second derivative
      Mat first{}, second{};
      for (int s = 0; s < 4; ++s) {
        const Mat gs = shifted(c, off[s] * h, c, 0.0);
        for (std::size_t a = 0; a < n_; ++a)
          for (std::size_t b = 0; b < n_; ++b) first[a][b] += w1[s] * gs[a][b] / (12.0 * h);
      }
      static constexpr double w2[4] = {-1.0, 16.0, 16.0, -1.0};
      for (int s = 0; s < 4; ++s) {
        const Mat gs = shifted(c, off[s] * h, c, 0.0);
        for (std::size_t a = 0; a < n_; ++a)
          for (std::size_t b = 0; b < n_; ++b) second[a][b] += w2[s] * gs[a][b];
      }
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b) second[a][b] = (second[a][b] - 30.0 * j.g[a][b]) / (12.0 * h * h);
      j.d1[c] = first;
      j.d2[c][c] = second;
    }
    for (std::size_t c = 0; c < n_; ++c)
      for (std::size_t d = c + 1; d < n_; ++d) {
        Mat mixed{};
        for (int s = 0; s < 4; ++s)
          for (int t = 0; t < 4; ++t) {
            const Mat gs = shifted(c, off[s] * h, d, off[t] * h);
            const double w = w1[s] * w1[t] / (144.0 * h * h);
            for (std::size_t a = 0; a < n_; ++a)
              for (std::size_t b = 0; b < n_; ++b) mixed[a][b] += w * gs[a][b];
          }
        j.d2[c][d] = mixed;
        j.d2[d][c] = mixed;
      }
    return j;
  }

  std::string name_;
  std::size_t n_;
  ChartBox chart_;
  MetricFn g_;
  JetFn jet_;
  DerivativeMode mode_ = DerivativeMode::ClosedForm;
  double step_ = 1e-3;
};

// ---------------------------------------------------------------------------
// Small dense helpers on the leading n x n block

inline Mat inverse(const Mat& a, std::size_t n) {
  Mat inv{};
  if (n == 2) {
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    require(std::abs(det) > 1e-300, "metric is singular");
    inv[0][0] = a[1][1] / det;
    inv[1][1] = a[0][0] / det;
    inv[0][1] = -a[0][1] / det;
    inv[1][0] = -a[1][0] / det;
    return inv;
  }
  const double c00 = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  const double c01 = a[1][2] * a[2][0] - a[1][0] * a[2][2];
  const double c02 = a[1][0] * a[2][1] - a[1][1] * a[2][0];
  const double det = a[0][0] * c00 + a[0][1] * c01 + a[0][2] * c02;
  require(std::abs(det) > 1e-300, "metric is singular");
  inv[0][0] = c00 / det;
  inv[1][0] = c01 / det;
  inv[2][0] = c02 / det;
  inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
  inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
  inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
  inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
  inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
  inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
  return inv;
}

inline double determinant(const Mat& a, std::size_t n) {
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

/// Symmetric and positive definite (leading minors) within the given slack.
inline bool is_spd(const Mat& a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(a[i][j] - a[j][i]) > 1e-12 * (1.0 + std::abs(a[i][j]))) return false;
  if (!(a[0][0] > 0.0)) return false;
  if (!(a[0][0] * a[1][1] - a[0][1] * a[1][0] > 0.0)) return false;
  return n == 2 || determinant(a, 3) > 0.0;
}

// ---------------------------------------------------------------------------
// Christoffel symbols and curvature

/// gamma[a][b][c] = Gamma^a_{bc}
using Christoffel = std::array<Mat, 3>;
/// riemann[a][b][m][n] = R^a_{bmn}
using Riemann = std::array<std::array<Mat, 3>, 3>;

namespace detail {

struct Connection {
  Mat ginv{};
  Christoffel gamma{};
  std::array<Christoffel, 3> dgamma{};  ///< dgamma[d] = d_d Gamma
};

inline Connection connection(const MetricJet& j, std::size_t n) {
  Connection c;
  c.ginv = inverse(j.g, n);
  // first-kind symbols T[d][b][c] = 1/2 (d_b g_dc + d_c g_db - d_d g_bc)
  std::array<Mat, 3> t{};
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t e = 0; e < n; ++e) t[d][b][e] = 0.5 * (j.d1[b][d][e] + j.d1[e][d][b] - j.d1[d][b][e]);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t e = 0; e < n; ++e) {
        double s = 0.0;
        for (std::size_t d = 0; d < n; ++d) s += c.ginv[a][d] * t[d][b][e];
        c.gamma[a][b][e] = s;
      }
  for (std::size_t q = 0; q < n; ++q) {
    // d_q g^{-1} = -g^{-1} (d_q g) g^{-1}
    Mat dginv{};
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double s = 0.0;
        for (std::size_t u = 0; u < n; ++u)
          for (std::size_t v = 0; v < n; ++v) s -= c.ginv[a][u] * j.d1[q][u][v] * c.ginv[v][b];
        dginv[a][b] = s;
      }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t e = 0; e < n; ++e) {
          double s = 0.0;
          for (std::size_t d = 0; d < n; ++d) {
            const double dt = 0.5 * (j.d2[q][b][d][e] + j.d2[q][e][d][b] - j.d2[q][d][b][e]);
            s += dginv[a][d] * t[d][b][e] + c.ginv[a][d] * dt;
          }
          c.dgamma[q][a][b][e] = s;
        }
  }
  return c;
}

inline Riemann riemann_from(const Connection& c, std::size_t n) {
  Riemann r{};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t v = 0; v < n; ++v) {
          double s = c.dgamma[m][a][b][v] - c.dgamma[v][a][b][m];
          for (std::size_t l = 0; l < n; ++l) s += c.gamma[a][m][l] * c.gamma[l][b][v] - c.gamma[a][v][l] * c.gamma[l][b][m];
          r[a][b][m][v] = s;
        }
  return r;
}

}  // namespace detail

inline Christoffel christoffel(const ParametrizedMetric& metric, const Point& x) {
  const MetricJet j = metric.jet(x);
  require(is_spd(j.g, metric.dimension()), "metric is not symmetric positive definite at the point");
  return detail::connection(j, metric.dimension()).gamma;
}

struct CurvatureBundle {
  std::size_t dimension = 2;
  Christoffel christoffel{};
  Riemann riemann{};
  Mat ricci{};
  double scalar = 0.0;
  Mat metric{};
  Mat metric_inverse{};

  /// max |R^a_{bmn} + R^a_{bnm}|
  double last_pair_antisymmetry() const {
    double m = 0.0;
    const std::size_t n = dimension;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t u = 0; u < n; ++u)
          for (std::size_t v = 0; v < n; ++v) m = std::max(m, std::abs(riemann[a][b][u][v] + riemann[a][b][v][u]));
    return m;
  }

  /// max |R^a_{bmn} + R^a_{mnb} + R^a_{nbm}|
  double first_bianchi() const {
    double m = 0.0;
    const std::size_t n = dimension;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t u = 0; u < n; ++u)
          for (std::size_t v = 0; v < n; ++v)
            m = std::max(m, std::abs(riemann[a][b][u][v] + riemann[a][u][v][b] + riemann[a][v][b][u]));
    return m;
  }

  double ricci_asymmetry() const {
    double m = 0.0;
    for (std::size_t a = 0; a < dimension; ++a)
      for (std::size_t b = 0; b < dimension; ++b) m = std::max(m, std::abs(ricci[a][b] - ricci[b][a]));
    return m;
  }
};

namespace detail {

inline CurvatureBundle bundle_from(const MetricJet& j, std::size_t n) {
  require(is_spd(j.g, n), "metric is not symmetric positive definite at the point");
  const Connection c = connection(j, n);
  CurvatureBundle out;
  out.dimension = n;
  out.christoffel = c.gamma;
  out.riemann = riemann_from(c, n);
  out.metric = j.g;
  out.metric_inverse = c.ginv;
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t v = 0; v < n; ++v) {
      double s = 0.0;
      for (std::size_t a = 0; a < n; ++a) s += out.riemann[a][b][a][v];
      out.ricci[b][v] = s;
    }
  double r = 0.0;
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t v = 0; v < n; ++v) r += c.ginv[b][v] * out.ricci[b][v];
  out.scalar = r;
  return out;
}

}  // namespace detail

inline CurvatureBundle curvature(const ParametrizedMetric& metric, const Point& x) {
  return detail::bundle_from(metric.jet(x), metric.dimension());
}

/// max over indices of |g_{mn;a}|.
inline double covariant_constancy_check(const ParametrizedMetric& metric, const Point& x) {
  const std::size_t n = metric.dimension();
  const MetricJet j = metric.jet(x);
  const auto c = detail::connection(j, n);
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t v = 0; v < n; ++v) {
        double s = j.d1[a][m][v];
        for (std::size_t l = 0; l < n; ++l) s -= c.gamma[l][a][m] * j.g[l][v] + c.gamma[l][a][v] * j.g[m][l];
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

// ---------------------------------------------------------------------------
// deRham's Laplacian on covariant tensors of rank 1 and 2
//
// For rank p the formula evaluated is
//   (Delta a)_K = - a_{K;i}^{;i}
//                 + sum_v (-1)^v  S^h_{k_v}  a_{h K\k_v}
//                 + 2 sum_{m<v} (-1)^{m+v} R^h_{k_v}^i_{k_m} a_{i h K\{k_m,k_v}}
// with S^h_k = R^h_i^i_k = g^{im} R^h_{imk} and every curvature index slot in
// the MTW order (up, down, up, down) written in the formula.  On forms this is
// the Weitzenbock identity: on the unit sphere it returns 2 df for f = cos(theta)
// and 0 for the area form.  Applied to the (symmetric) metric the two single
// terms cancel and the double term leaves -2 Ric.

/// Components of a covariant rank-p tensor (p = 1 or 2) and their first two
/// coordinate derivatives.  Flat index of a_{ab} is 3a + b.
struct TensorJet {
  std::size_t rank = 1;
  std::array<double, 9> value{};
  std::array<std::array<double, 9>, 3> d1{};
  std::array<std::array<std::array<double, 9>, 3>, 3> d2{};
};

using TensorJetFn = std::function<TensorJet(const Point&)>;

/// Antisymmetric covariant tensor field of rank 1 or 2 given by its jet.
class AlternatingTensorField {
public:
  AlternatingTensorField(std::size_t rank, TensorJetFn jet) : rank_(rank), jet_(std::move(jet)) {
    require(rank_ == 1 || rank_ == 2, "only ranks 1 and 2 are supported");
    require(static_cast<bool>(jet_), "tensor field needs a jet function");
  }

  std::size_t rank() const noexcept { return rank_; }

  TensorJet jet(const Point& x, std::size_t n) const {
    TensorJet j = jet_(x);
    require(j.rank == rank_, "tensor jet rank does not match the field rank");
    if (rank_ == 2)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          require(std::abs(j.value[3 * a + b] + j.value[3 * b + a]) <= 1e-12,
                  "rank-2 field is not antisymmetric");
    return j;
  }

private:
  std::size_t rank_;
  TensorJetFn jet_;
};

struct TensorLaplacianTerms {
  std::size_t rank = 1;
  std::array<double, 9> rough{};   ///< -a_{K;i}^{;i}
  std::array<double, 9> single{};  ///< single-contraction curvature sum
  std::array<double, 9> pair{};    ///< double-sum curvature term (rank 2)
  std::array<double, 9> total{};
};

namespace detail {

inline std::size_t tensor_size(std::size_t rank, std::size_t n) { return rank == 1 ? n : n * n; }

inline std::size_t flat(std::size_t rank, std::size_t a, std::size_t b = 0) { return rank == 1 ? a : 3 * a + b; }

/// Evaluates the formula above on any covariant rank-1/2 jet (no symmetry
/// requirement; the metric itself is passed through here).
inline TensorLaplacianTerms derham_terms(const MetricJet& mj, const TensorJet& a, std::size_t n) {
  const Connection c = connection(mj, n);
  const Riemann r = riemann_from(c, n);
  const std::size_t p = a.rank;
  TensorLaplacianTerms out;
  out.rank = p;

  auto val = [&](std::size_t k0, std::size_t k1) { return a.value[flat(p, k0, k1)]; };
  auto dv = [&](std::size_t q, std::size_t k0, std::size_t k1) { return a.d1[q][flat(p, k0, k1)]; };
  auto ddv = [&](std::size_t q, std::size_t s, std::size_t k0, std::size_t k1) { return a.d2[q][s][flat(p, k0, k1)]; };

  // A[i][K] = a_{K;i} and its partial derivatives dA[j][i][K].
  std::array<std::array<double, 9>, 3> cov{};
  std::array<std::array<std::array<double, 9>, 3>, 3> dcov{};
  const std::size_t kmax0 = n, kmax1 = (p == 2 ? n : 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k0 = 0; k0 < kmax0; ++k0)
      for (std::size_t k1 = 0; k1 < kmax1; ++k1) {
        double s = dv(i, k0, k1);
        for (std::size_t h = 0; h < n; ++h) {
          s -= c.gamma[h][i][k0] * val(h, k1);
          if (p == 2) s -= c.gamma[h][i][k1] * val(k0, h);
        }
        cov[i][flat(p, k0, k1)] = s;
        for (std::size_t j = 0; j < n; ++j) {
          double ds = ddv(j, i, k0, k1);
          for (std::size_t h = 0; h < n; ++h) {
            ds -= c.dgamma[j][h][i][k0] * val(h, k1) + c.gamma[h][i][k0] * dv(j, h, k1);
            if (p == 2) ds -= c.dgamma[j][h][i][k1] * val(k0, h) + c.gamma[h][i][k1] * dv(j, k0, h);
          }
          dcov[j][i][flat(p, k0, k1)] = ds;
        }
      }

  // S^h_k = g^{im} R^h_{imk}
  Mat sh{};
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t m = 0; m < n; ++m) s += c.ginv[i][m] * r[h][i][m][k];
      sh[h][k] = s;
    }

  for (std::size_t k0 = 0; k0 < kmax0; ++k0)
    for (std::size_t k1 = 0; k1 < kmax1; ++k1) {
      const std::size_t K = flat(p, k0, k1);
      // -g^{ij} a_{K;i;j}
      double rough = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double second = dcov[j][i][K];
          for (std::size_t h = 0; h < n; ++h) {
            second -= c.gamma[h][j][i] * cov[h][K];
            second -= c.gamma[h][j][k0] * cov[i][flat(p, h, k1)];
            if (p == 2) second -= c.gamma[h][j][k1] * cov[i][flat(p, k0, h)];
          }
          rough -= c.ginv[i][j] * second;
        }
      out.rough[K] = rough;

      double single = 0.0, pair = 0.0;
      if (p == 1) {
        for (std::size_t h = 0; h < n; ++h) single -= sh[h][k0] * a.value[flat(1, h)];
      } else {
        for (std::size_t h = 0; h < n; ++h) single += -sh[h][k0] * val(h, k1) + sh[h][k1] * val(h, k0);
        // 2 (-1)^{1+2} R^h_{k1}^i_{k0} a_{ih},  R^h_{k1}^i_{k0} = R^h_{k1 m k0} g^{mi}
        for (std::size_t h = 0; h < n; ++h)
          for (std::size_t i = 0; i < n; ++i) {
            double rr = 0.0;
            for (std::size_t m = 0; m < n; ++m) rr += r[h][k1][m][k0] * c.ginv[m][i];
            pair -= 2.0 * rr * val(i, h);
          }
      }
      out.single[K] = single;
      out.pair[K] = pair;
      out.total[K] = rough + single + pair;
    }
  return out;
}

}  // namespace detail

inline TensorLaplacianTerms derham_laplacian_tensor(const ParametrizedMetric& metric, const AlternatingTensorField& field,
                                                    const Point& x) {
  const std::size_t n = metric.dimension();
  return detail::derham_terms(metric.jet(x), field.jet(x, n), n);
}

struct MetricLaplacianReport {
  std::size_t dimension = 2;
  TensorLaplacianTerms terms;
  Mat laplacian{};
  Mat ricci{};
  /// Frobenius norm of (Delta g - Ric).
  double difference_norm = 0.0;
  double ricci_norm = 0.0;
  /// Frobenius norm of the -g_{mn;a}^{;a} part alone.
  double rough_norm = 0.0;
  /// Least-squares c with Delta g ~ c Ric (0 when Ric vanishes).
  double ricci_ratio = 0.0;
};

/// Applies the rank-2 formula to g_{mn} itself and compares with Ricci.
inline MetricLaplacianReport laplacian_of_metric(const ParametrizedMetric& metric, const Point& x) {
  const std::size_t n = metric.dimension();
  const MetricJet mj = metric.jet(x);
  TensorJet tj;
  tj.rank = 2;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      tj.value[3 * a + b] = mj.g[a][b];
      for (std::size_t q = 0; q < n; ++q) {
        tj.d1[q][3 * a + b] = mj.d1[q][a][b];
        for (std::size_t s = 0; s < n; ++s) tj.d2[q][s][3 * a + b] = mj.d2[q][s][a][b];
      }
    }
  MetricLaplacianReport rep;
  rep.dimension = n;
  rep.terms = detail::derham_terms(mj, tj, n);
  const CurvatureBundle cb = detail::bundle_from(mj, n);
  double diff2 = 0.0, ric2 = 0.0, rough2 = 0.0, cross = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      rep.laplacian[a][b] = rep.terms.total[3 * a + b];
      rep.ricci[a][b] = cb.ricci[a][b];
      diff2 += std::pow(rep.laplacian[a][b] - rep.ricci[a][b], 2);
      ric2 += rep.ricci[a][b] * rep.ricci[a][b];
      rough2 += std::pow(rep.terms.rough[3 * a + b], 2);
      cross += rep.laplacian[a][b] * rep.ricci[a][b];
    }
  rep.difference_norm = std::sqrt(diff2);
  rep.ricci_norm = std::sqrt(ric2);
  rep.rough_norm = std::sqrt(rough2);
  rep.ricci_ratio = ric2 > 0.0 ? cross / ric2 : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Hilbert action

/// Midpoint tensor-product rule over a box (defaults to the chart).
struct QuadratureSpec {
  std::vector<std::size_t> nodes;
  std::optional<ChartBox> box;
};

template <class Visitor>
void for_each_node(const ParametrizedMetric& metric, const QuadratureSpec& q, Visitor&& visit) {
  const std::size_t n = metric.dimension();
  require(q.nodes.size() == n, "quadrature needs one node count per chart axis");
  const ChartBox box = q.box.value_or(metric.chart());
  Point h{};
  for (std::size_t k = 0; k < n; ++k) {
    require(q.nodes[k] >= 1, "quadrature node counts must be positive");
    if (!metric.chart().periodic[k])
      require(box.lo[k] >= metric.chart().lo[k] && box.hi[k] <= metric.chart().hi[k], "quadrature box leaves the chart");
    h[k] = (box.hi[k] - box.lo[k]) / static_cast<double>(q.nodes[k]);
  }
  const double cell = n == 2 ? h[0] * h[1] : h[0] * h[1] * h[2];
  const std::size_t n2 = n == 3 ? q.nodes[2] : 1;
  for (std::size_t i = 0; i < q.nodes[0]; ++i)
    for (std::size_t j = 0; j < q.nodes[1]; ++j)
      for (std::size_t k = 0; k < n2; ++k) {
        Point x{box.lo[0] + (static_cast<double>(i) + 0.5) * h[0], box.lo[1] + (static_cast<double>(j) + 0.5) * h[1],
                n == 3 ? box.lo[2] + (static_cast<double>(k) + 0.5) * h[2] : 0.0};
        visit(x, cell);
      }
}

/// sum R sqrt(det g) dV over the quadrature nodes.
inline double hilbert_action(const ParametrizedMetric& metric, const QuadratureSpec& q) {
  double total = 0.0;
  for_each_node(metric, q, [&](const Point& x, double cell) {
    const CurvatureBundle cb = curvature(metric, x);
    total += cb.scalar * std::sqrt(determinant(cb.metric, metric.dimension())) * cell;
  });
  return total;
}

/// CSV of scalar curvature and volume density at the quadrature nodes.
inline void write_curvature_csv(std::ostream& os, const ParametrizedMetric& metric, const QuadratureSpec& q) {
  const std::size_t n = metric.dimension();
  os << (n == 2 ? "x0,x1" : "x0,x1,x2") << ",scalar_curvature,volume_density\n";
  char buf[96];
  for_each_node(metric, q, [&](const Point& x, double) {
    const CurvatureBundle cb = curvature(metric, x);
    for (std::size_t k = 0; k < n; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g,", x[k]);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", cb.scalar, std::sqrt(determinant(cb.metric, n)));
    os << buf;
  });
}

}  // namespace jaynes::geometry
