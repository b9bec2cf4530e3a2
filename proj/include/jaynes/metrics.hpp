#pragma once

// Named metric families with closed-form jets.  Every family is selectable by
// name plus numeric parameters, which is how the CLI and the acceptance
// battery build them.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "jaynes/core.hpp"
#include "jaynes/geometry.hpp"

namespace jaynes::geometry {

/// A scalar function with gradient and Hessian at a point.
struct ScalarJet {
  double v = 0.0;
  Point d{};
  Mat dd{};
};

namespace detail {

inline MetricJet diagonal_jet(std::size_t n, const std::array<ScalarJet, 3>& comps) {
  MetricJet j;
  for (std::size_t a = 0; a < n; ++a) {
    j.g[a][a] = comps[a].v;
    for (std::size_t c = 0; c < n; ++c) {
      j.d1[c][a][a] = comps[a].d[c];
      for (std::size_t d = 0; d < n; ++d) j.d2[c][d][a][a] = comps[a].dd[c][d];
    }
  }
  return j;
}

/// e^{2u} g from the jets of g and u.
inline MetricJet conformal(const MetricJet& base, const ScalarJet& u, std::size_t n) {
  const double w = std::exp(2.0 * u.v);
  MetricJet out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double g = base.g[a][b];
      out.g[a][b] = w * g;
      for (std::size_t c = 0; c < n; ++c) {
        out.d1[c][a][b] = w * (2.0 * u.d[c] * g + base.d1[c][a][b]);
        for (std::size_t d = 0; d < n; ++d)
          out.d2[c][d][a][b] = w * (4.0 * u.d[c] * u.d[d] * g + 2.0 * u.dd[c][d] * g + 2.0 * u.d[c] * base.d1[d][a][b] +
                                    2.0 * u.d[d] * base.d1[c][a][b] + base.d2[c][d][a][b]);
      }
    }
  return out;
}

inline ParametrizedMetric from_jet(std::string name, std::size_t n, ChartBox box, std::function<MetricJet(const Point&)> jet) {
  auto g = [jet](const Point& x) { return jet(x).g; };
  return {std::move(name), n, box, g, std::move(jet)};
}

inline double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

inline MetricJet sphere_jet(const Point& x, double r) {
  const double s = std::sin(x[0]), c = std::cos(x[0]), r2 = r * r;
  std::array<ScalarJet, 3> comps{};
  comps[0].v = r2;
  comps[1].v = r2 * s * s;
  comps[1].d[0] = 2.0 * r2 * s * c;
  comps[1].dd[0][0] = 2.0 * r2 * (c * c - s * s);
  return diagonal_jet(2, comps);
}

}  // namespace detail

inline constexpr double two_pi = 2.0 * pi;

inline ParametrizedMetric euclidean_metric(std::size_t n) {
  ChartBox box{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
  return detail::from_jet("euclidean", n, box, [n](const Point&) {
    MetricJet j;
    for (std::size_t a = 0; a < n; ++a) j.g[a][a] = 1.0;
    return j;
  });
}

/// Identity metric on [0, L)^2 with both axes periodic.
inline ParametrizedMetric flat_torus_metric(double length = two_pi) {
  require(length > 0.0, "torus side length must be positive");
  ChartBox box{{0.0, 0.0, 0.0}, {length, length, 0.0}, {true, true, false}};
  return detail::from_jet("flat_torus", 2, box, [](const Point&) {
    MetricJet j;
    j.g[0][0] = j.g[1][1] = 1.0;
    return j;
  });
}

/// Round sphere of radius r in (theta, phi).
inline ParametrizedMetric sphere_metric(double r = 1.0) {
  require(r > 0.0, "sphere radius must be positive");
  ChartBox box{{0.0, 0.0, 0.0}, {pi, two_pi, 0.0}, {false, true, false}};
  return detail::from_jet("sphere", 2, box, [r](const Point& x) { return detail::sphere_jet(x, r); });
}

/// Flat plane in polar coordinates (r, phi), r in (0, r_max).
inline ParametrizedMetric polar_plane_metric(double r_max = 2.0) {
  require(r_max > 0.0, "polar chart radius must be positive");
  ChartBox box{{0.0, 0.0, 0.0}, {r_max, two_pi, 0.0}, {false, true, false}};
  return detail::from_jet("polar_plane", 2, box, [](const Point& x) {
    std::array<ScalarJet, 3> comps{};
    comps[0].v = 1.0;
    comps[1].v = x[0] * x[0];
    comps[1].d[0] = 2.0 * x[0];
    comps[1].dd[0][0] = 2.0;
    return detail::diagonal_jet(2, comps);
  });
}

/// Torus of revolution, tube radius a around a circle of radius R.
inline ParametrizedMetric torus_metric(double major = 2.0, double minor = 1.0) {
  require(major > minor && minor > 0.0, "torus needs major > minor > 0");
  ChartBox box{{0.0, 0.0, 0.0}, {two_pi, two_pi, 0.0}, {true, true, false}};
  return detail::from_jet("torus", 2, box, [major, minor](const Point& x) {
    const double s = std::sin(x[0]), c = std::cos(x[0]);
    const double rho = major + minor * c;
    std::array<ScalarJet, 3> comps{};
    comps[0].v = minor * minor;
    comps[1].v = rho * rho;
    comps[1].d[0] = -2.0 * minor * s * rho;
    comps[1].dd[0][0] = -2.0 * minor * c * rho + 2.0 * minor * minor * s * s;
    return detail::diagonal_jet(2, comps);
  });
}

/// e^{2 eps f} times the round sphere, f = sin(theta) cos(phi) (the x
/// coordinate of the embedded sphere, hence smooth through the poles).
inline ParametrizedMetric conformal_sphere_metric(double r = 1.0, double eps = 0.05) {
  require(r > 0.0, "sphere radius must be positive");
  ChartBox box{{0.0, 0.0, 0.0}, {pi, two_pi, 0.0}, {false, true, false}};
  return detail::from_jet("conformal_sphere", 2, box, [r, eps](const Point& x) {
    const double st = std::sin(x[0]), ct = std::cos(x[0]), sp = std::sin(x[1]), cp = std::cos(x[1]);
    ScalarJet u;
    u.v = eps * st * cp;
    u.d = {eps * ct * cp, -eps * st * sp, 0.0};
    u.dd[0][0] = -eps * st * cp;
    u.dd[0][1] = u.dd[1][0] = -eps * ct * sp;
    u.dd[1][1] = -eps * st * cp;
    return detail::conformal(detail::sphere_jet(x, r), u, 2);
  });
}

/// Round 3-sphere of radius r in hyperspherical (chi, theta, phi).
inline ParametrizedMetric three_sphere_metric(double r = 1.0) {
  require(r > 0.0, "sphere radius must be positive");
  ChartBox box{{0.0, 0.0, 0.0}, {pi, pi, two_pi}, {false, false, true}};
  return detail::from_jet("three_sphere", 3, box, [r](const Point& x) {
    const double r2 = r * r;
    const double sc = std::sin(x[0]), cc = std::cos(x[0]), st = std::sin(x[1]), ct = std::cos(x[1]);
    std::array<ScalarJet, 3> comps{};
    comps[0].v = r2;
    comps[1].v = r2 * sc * sc;
    comps[1].d[0] = 2.0 * r2 * sc * cc;
    comps[1].dd[0][0] = 2.0 * r2 * (cc * cc - sc * sc);
    comps[2].v = r2 * sc * sc * st * st;
    comps[2].d[0] = 2.0 * r2 * sc * cc * st * st;
    comps[2].d[1] = 2.0 * r2 * sc * sc * st * ct;
    comps[2].dd[0][0] = 2.0 * r2 * (cc * cc - sc * sc) * st * st;
    comps[2].dd[1][1] = 2.0 * r2 * sc * sc * (ct * ct - st * st);
    comps[2].dd[0][1] = comps[2].dd[1][0] = 4.0 * r2 * sc * cc * st * ct;
    return detail::diagonal_jet(3, comps);
  });
}

/// g_aa = exp(sum_k A_ak sin(B_ak x_k + C_ak)) on [-1, 1]^n, coefficients
/// drawn from the seed.
inline ParametrizedMetric random_diagonal_metric(std::size_t n, std::uint64_t seed, double amplitude = 0.3) {
  Rng rng(seed);
  std::array<std::array<double, 3>, 3> amp{}, freq{}, phase{};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t k = 0; k < n; ++k) {
      amp[a][k] = amplitude * rng.uniform(-1.0, 1.0);
      freq[a][k] = rng.uniform(0.5, 2.0);
      phase[a][k] = rng.uniform(0.0, two_pi);
    }
  ChartBox box{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
  return detail::from_jet("random_diagonal", n, box, [n, amp, freq, phase](const Point& x) {
    std::array<ScalarJet, 3> comps{};
    for (std::size_t a = 0; a < n; ++a) {
      double u = 0.0;
      Point du{}, ddu{};
      for (std::size_t k = 0; k < n; ++k) {
        const double arg = freq[a][k] * x[k] + phase[a][k];
        u += amp[a][k] * std::sin(arg);
        du[k] = amp[a][k] * freq[a][k] * std::cos(arg);
        ddu[k] = -amp[a][k] * freq[a][k] * freq[a][k] * std::sin(arg);
      }
      const double g = std::exp(u);
      comps[a].v = g;
      for (std::size_t c = 0; c < n; ++c) {
        comps[a].d[c] = g * du[c];
        for (std::size_t d = 0; d < n; ++d) comps[a].dd[c][d] = g * (du[c] * du[d] + (c == d ? ddu[c] : 0.0));
      }
    }
    return detail::diagonal_jet(n, comps);
  });
}

/// g = I + sum of small symmetric sinusoids (full, non-diagonal) on [-1, 1]^n.
inline ParametrizedMetric random_smooth_metric(std::size_t n, std::uint64_t seed, double amplitude = 0.1) {
  Rng rng(seed);
  struct Mode {
    std::size_t a, b, k;
    double amp, freq, phase;
  };
  std::vector<Mode> modes;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t k = 0; k < n; ++k)
        modes.push_back({a, b, k, amplitude / static_cast<double>(n) * rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0),
                         rng.uniform(0.0, two_pi)});
  ChartBox box{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
  return detail::from_jet("random_smooth", n, box, [n, modes](const Point& x) {
    MetricJet j;
    for (std::size_t a = 0; a < n; ++a) j.g[a][a] = 1.0;
    for (const Mode& m : modes) {
      const double arg = m.freq * x[m.k] + m.phase;
      const double v = m.amp * std::sin(arg), dv = m.amp * m.freq * std::cos(arg), ddv = -m.amp * m.freq * m.freq * std::sin(arg);
      j.g[m.a][m.b] += v;
      j.d1[m.k][m.a][m.b] += dv;
      j.d2[m.k][m.k][m.a][m.b] += ddv;
      if (m.a != m.b) {
        j.g[m.b][m.a] += v;
        j.d1[m.k][m.b][m.a] += dv;
        j.d2[m.k][m.k][m.b][m.a] += ddv;
      }
    }
    return j;
  });
}

struct MetricFamilyInfo {
  std::string name;
  std::string description;
  std::map<std::string, double> defaults;
};

inline std::vector<MetricFamilyInfo> metric_families() {
  return {
      {"euclidean", "identity metric on [-1,1]^n", {{"dimension", 2}}},
      {"flat_torus", "identity metric on the periodic square [0,L)^2", {{"length", two_pi}}},
      {"sphere", "round sphere in (theta, phi)", {{"radius", 1.0}}},
      {"polar_plane", "flat plane in polar (r, phi)", {{"r_max", 2.0}}},
      {"torus", "torus of revolution in (theta, phi)", {{"major", 2.0}, {"minor", 1.0}}},
      {"conformal_sphere", "exp(2 eps sin(theta) cos(phi)) times the round sphere", {{"radius", 1.0}, {"epsilon", 0.05}}},
      {"three_sphere", "round 3-sphere in (chi, theta, phi)", {{"radius", 1.0}}},
      {"random_diagonal", "seeded smooth diagonal metric on [-1,1]^n", {{"dimension", 3}, {"seed", 1}, {"amplitude", 0.3}}},
      {"random_smooth", "seeded smooth full metric on [-1,1]^n", {{"dimension", 2}, {"seed", 1}, {"amplitude", 0.1}}},
  };
}

inline ParametrizedMetric make_metric(const std::string& family, const std::map<std::string, double>& p = {}) {
  using detail::param;
  if (family == "euclidean") return euclidean_metric(static_cast<std::size_t>(param(p, "dimension", 2)));
  if (family == "flat_torus") return flat_torus_metric(param(p, "length", two_pi));
  if (family == "sphere") return sphere_metric(param(p, "radius", 1.0));
  if (family == "polar_plane") return polar_plane_metric(param(p, "r_max", 2.0));
  if (family == "torus") return torus_metric(param(p, "major", 2.0), param(p, "minor", 1.0));
  if (family == "conformal_sphere") return conformal_sphere_metric(param(p, "radius", 1.0), param(p, "epsilon", 0.05));
  if (family == "three_sphere") return three_sphere_metric(param(p, "radius", 1.0));
  if (family == "random_diagonal")
    return random_diagonal_metric(static_cast<std::size_t>(param(p, "dimension", 3)),
                                  static_cast<std::uint64_t>(param(p, "seed", 1)), param(p, "amplitude", 0.3));
  if (family == "random_smooth")
    return random_smooth_metric(static_cast<std::size_t>(param(p, "dimension", 2)),
                                static_cast<std::uint64_t>(param(p, "seed", 1)), param(p, "amplitude", 0.1));
  throw ValidationError("unknown metric family '" + family + "'");
}

}  // namespace jaynes::geometry
