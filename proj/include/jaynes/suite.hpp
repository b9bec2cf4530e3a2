#pragma once

// The acceptance battery: one criterion per verified property, each a list of
// measured quantities against fixed bounds.  Shared by the CLI `suite`
// command and the acceptance test binary.  Oracles here are computed
// independently of the code paths they check (closed forms, a dense Jacobi
// eigensolver, long-double bisection, exact rational arithmetic).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "jaynes/cartan.hpp"
#include "jaynes/core.hpp"
#include "jaynes/dec.hpp"
#include "jaynes/geometry.hpp"
#include "jaynes/grids.hpp"
#include "jaynes/metrics.hpp"
#include "jaynes/probkit.hpp"
#include "jaynes/schroedinger.hpp"
#include "jaynes/spinor.hpp"
#include "jaynes/surfaces.hpp"
#include "jaynes/variational.hpp"

namespace jaynes::suite {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// measured must lie in [lower, upper].
struct Check {
  std::string label;
  double measured = 0.0;
  double lower = -kInf;
  double upper = kInf;
  bool pass = false;
};

inline Check at_most(std::string label, double measured, double upper) {
  return {std::move(label), measured, -kInf, upper, std::isfinite(measured) && measured <= upper};
}
inline Check at_least(std::string label, double measured, double lower) {
  return {std::move(label), measured, lower, kInf, std::isfinite(measured) && measured >= lower};
}
inline Check in_range(std::string label, double measured, double lower, double upper) {
  return {std::move(label), measured, lower, upper, std::isfinite(measured) && measured >= lower && measured <= upper};
}

struct CriterionResult {
  std::string name;
  std::string description;
  std::vector<Check> checks;
  std::string error;  ///< exception text when the criterion could not complete
  double runtime_ms = 0.0;
  double budget_ms = 0.0;
  bool within_budget = true;
  bool pass = false;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// Multiplies the kinetic stencil of the ground-state problems; anything
  /// but +1 is a deliberately broken build used as a negative control.
  double stencil_sign = 1.0;
  /// Run only these criteria (all when empty).
  std::vector<std::string> only;
};

struct SuiteReport {
  std::vector<CriterionResult> criteria;
  double total_ms = 0.0;
  bool all_pass = false;
};

namespace oracle {

/// Lowest eigenvalue of a dense symmetric matrix by cyclic Jacobi rotations.
inline double jacobi_lowest_eigenvalue(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  double lo = a[0][0];
  for (std::size_t i = 1; i < n; ++i) lo = std::min(lo, a[i][i]);
  return lo;
}

/// -u'' + V u on n interior nodes of (a, b), zero walls, assembled densely.
inline double dense_dirichlet_ground(double a, double b, std::size_t n, const std::function<double(double)>& v) {
  const double h = (b - a) / static_cast<double>(n + 1);
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = 2.0 / (h * h) + v(a + h * static_cast<double>(i + 1));
    if (i + 1 < n) m[i][i + 1] = m[i + 1][i] = -1.0 / (h * h);
  }
  return jacobi_lowest_eigenvalue(std::move(m));
}

/// beta with sum_k E_k exp(-beta E_k) / Z = mean, by long-double bisection.
inline long double maxent_beta(const Vector& e, double mean) {
  auto mean_at = [&](long double beta) {
    long double emin = e[0];
    for (double x : e) emin = std::min<long double>(emin, x);
    long double z = 0.0L, s = 0.0L;
    for (double x : e) {
      const long double w = std::exp(-beta * (x - emin));
      z += w;
      s += w * x;
    }
    return s / z;
  };
  long double lo = -1.0L, hi = 1.0L;
  while (mean_at(lo) < mean) lo *= 2.0L;
  while (mean_at(hi) > mean) hi *= 2.0L;
  for (int i = 0; i < 400; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (mean_at(mid) > mean ? lo : hi) = mid;
  }
  return 0.5L * (lo + hi);
}

}  // namespace oracle

namespace detail {

using grids::Axis;
using grids::ScalarFieldOnGrid;
using grids::UniformGrid;

inline double max_increase(const std::vector<cartan::TrajectoryRow>& rows) {
  double worst = -kInf;
  for (std::size_t i = 1; i < rows.size(); ++i) worst = std::max(worst, rows[i].value - rows[i - 1].value);
  return rows.size() < 2 ? 0.0 : worst;
}

// -- probkit ----------------------------------------------------------------

inline std::vector<Check> maxent_boltzmann(const SuiteOptions& opt) {
  Rng rng(opt.seed * 1000 + 1);
  double comp = 0.0, mean = 0.0, beta_err = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng.index(11);
    Vector e(n);
    for (double& x : e) x = rng.uniform(-5.0, 5.0);
    const probkit::EnergyLevels levels(e);
    const double target = levels.min() + (0.05 + 0.9 * rng.uniform()) * (levels.max() - levels.min());
    const auto sol = probkit::solve_maxent(levels, target);
    // Boltzmann form alpha exp(-beta E_k), alpha from the reported beta.
    long double z = 0.0L;
    for (double x : e) z += std::exp(-static_cast<long double>(sol.beta) * x);
    long double s = 0.0L;
    for (std::size_t k = 0; k < n; ++k) {
      const long double p = std::exp(-static_cast<long double>(sol.beta) * e[k]) / z;
      comp = std::max(comp, static_cast<double>(std::abs(p - sol.distribution[k])));
      s += sol.distribution[k] * static_cast<long double>(e[k]);
    }
    mean = std::max(mean, static_cast<double>(std::abs(s - target)));
    beta_err = std::max(beta_err, static_cast<double>(std::abs(oracle::maxent_beta(e, target) - sol.beta)));
  }
  const auto two = probkit::solve_maxent(probkit::EnergyLevels({0.0, 1.0}), 0.25);
  return {at_most("componentwise |p_k - alpha exp(-beta E_k)|, 50 level sets", comp, 1e-10),
          at_most("mean-energy residual, 50 level sets", mean, 1e-10),
          at_most("|beta - long-double bisection oracle|", beta_err, 1e-8),
          at_most("two-level mean 0.25: |beta - ln 3|", std::abs(two.beta - std::log(3.0)), 1e-9)};
}

inline probkit::DiscreteDistribution random_distribution(Rng& rng, std::size_t n) {
  Vector w(n);
  for (double& x : w) x = rng.uniform() < 0.15 ? 0.0 : rng.uniform();
  w[rng.index(n)] += 0.5;
  return probkit::DiscreteDistribution::normalized(std::move(w));
}

inline std::vector<Check> entropy_additivity(const SuiteOptions& opt) {
  Rng rng(opt.seed * 1000 + 2);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto p = random_distribution(rng, 1 + rng.index(12));
    const auto q = random_distribution(rng, 1 + rng.index(12));
    const double d = probkit::entropy(probkit::product_distribution(p, q)) - probkit::entropy(p) - probkit::entropy(q);
    worst = std::max(worst, std::abs(d));
  }
  return {at_most("max |S(PQ) - S(P) - S(Q)|, 200 pairs", worst, 1e-12)};
}

inline std::vector<Check> mixing_monotonicity(const SuiteOptions& opt) {
  Rng rng(opt.seed * 1000 + 3);
  double worst = kInf;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.index(11);
    const auto p = random_distribution(rng, n);
    const auto m = probkit::random_doubly_stochastic(n, rng);
    worst = std::min(worst, probkit::entropy(probkit::apply_mixing(p, m)) - probkit::entropy(p));
  }
  return {at_least("min S(TP) - S(P), 200 doubly stochastic maps", worst, -1e-12)};
}

// -- grids / schroedinger ---------------------------------------------------

inline ScalarFieldOnGrid random_smooth_field(Rng& rng, const UniformGrid& grid) {
  std::vector<std::array<double, 4>> modes;
  for (int m = 0; m < 4; ++m)
    modes.push_back({rng.normal(), static_cast<double>(1 + rng.index(4)), static_cast<double>(1 + rng.index(4)), 0.0});
  return ScalarFieldOnGrid::sample(grid, [&](const std::array<double, 3>& x) {
    double s = 0.0;
    for (const auto& md : modes) {
      double v = md[0] * std::sin(md[1] * pi * x[0]);
      if (grid.dimension() == 2) v *= std::sin(md[2] * pi * x[1]);
      s += v;
    }
    return s;
  });
}

inline std::vector<Check> kinetic_additivity(const SuiteOptions& opt) {
  Rng rng(opt.seed * 1000 + 4);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const UniformGrid g1({Axis::dirichlet_interval(0.0, 1.0, 20 + rng.index(40))});
    const bool planar = t % 2 == 1;
    const UniformGrid g2 = planar ? UniformGrid({Axis::dirichlet_interval(0.0, 1.0, 8 + rng.index(12)),
                                                 Axis::dirichlet_interval(0.0, 1.0, 8 + rng.index(12))})
                                  : UniformGrid({Axis::dirichlet_interval(0.0, 1.0, 20 + rng.index(40))});
    const auto f = schroedinger::QuantumState::normalized(random_smooth_field(rng, g1));
    const auto g = schroedinger::QuantumState::normalized(random_smooth_field(rng, g2));
    worst = std::max(worst, schroedinger::kinetic_additivity_check(f, g).residual);
  }
  return {at_most("max |<fg, D fg> - <f, D f> - <g, D g>|, 50 pairs (1x1 and 1x2)", worst, 1e-10)};
}

inline std::vector<Check> ground_states(const SuiteOptions& opt) {
  using schroedinger::Potential;
  const variational::SolverConfig cfg;
  auto energy = [&](double a, double b, std::size_t n, const Potential& v) {
    return schroedinger::ground_state(UniformGrid({Axis::dirichlet_interval(a, b, n)}), v, cfg, opt.stencil_sign).total_energy;
  };
  const double box = energy(0.0, 1.0, 2000, Potential::zero());
  const double harm = energy(-10.0, 10.0, 4000, Potential::harmonic());
  const double hyd = energy(0.0, 40.0, 8000, Potential::coulomb_radial());

  // Dense oracle at coarse N: the same discrete problem solved independently.
  const std::size_t nc = 120;
  auto rel = [](double x, double y) { return std::abs(x - y) / std::abs(y); };
  const double box_c = rel(energy(0.0, 1.0, nc, Potential::zero()),
                           oracle::dense_dirichlet_ground(0.0, 1.0, nc, [](double) { return 0.0; }));
  const double harm_c = rel(energy(-10.0, 10.0, nc, Potential::harmonic()),
                            oracle::dense_dirichlet_ground(-10.0, 10.0, nc, [](double x) { return x * x; }));
  const double hyd_c = rel(energy(0.0, 40.0, nc, Potential::coulomb_radial()),
                           oracle::dense_dirichlet_ground(0.0, 40.0, nc, [](double r) { return -2.0 / r; }));

  // Refinement: second-order stencil, error ratio ~4 per doubling.
  const double e1 = energy(0.0, 1.0, 249, Potential::zero()) - pi * pi;
  const double e2 = energy(0.0, 1.0, 499, Potential::zero()) - pi * pi;

  return {at_most("box N=2000: |E/pi^2 - 1|", std::abs(box / (pi * pi) - 1.0), 5e-6),
          at_most("harmonic N=4000: |E - 1|", std::abs(harm - 1.0), 1e-4),
          at_most("radial hydrogen N=8000: |E + 1|", std::abs(hyd + 1.0), 1e-3),
          at_most("box N=120 vs dense Jacobi oracle (relative)", box_c, 1e-9),
          at_most("harmonic N=120 vs dense Jacobi oracle (relative)", harm_c, 1e-9),
          at_most("hydrogen N=120 vs dense Jacobi oracle (relative)", hyd_c, 1e-9),
          in_range("box error ratio h -> h/2", e1 / e2, 3.5, 4.5)};
}

inline std::vector<Check> no_collapse(const SuiteOptions&) {
  Vector sigmas;
  for (int i = 0; i <= 40; ++i) sigmas.push_back(0.1 * std::pow(100.0, i / 40.0));
  const auto rows = schroedinger::collapse_scan(sigmas);
  double kmin = kInf, kmax = -kInf;
  for (const auto& r : rows) {
    kmin = std::min(kmin, r.kinetic * r.sigma * r.sigma);
    kmax = std::max(kmax, r.kinetic * r.sigma * r.sigma);
  }
  const auto best = schroedinger::collapse_minimum(0.05, 20.0);
  const double edge_gap = std::min(rows.front().total, rows.back().total) - best.total;
  return {at_most("|E_min + 8/(3 pi)|", std::abs(best.total + 8.0 / (3.0 * pi)), 1e-3),
          in_range("argmin sigma (interior of scan [0.1, 10])", best.sigma, 0.1, 10.0),
          at_least("scan end energies minus E_min", edge_gap, 1e-3),
          at_most("kinetic * sigma^2 spread (relative)", (kmax - kmin) / (0.5 * (kmax + kmin)), 1e-6)};
}

// -- surfaces ---------------------------------------------------------------

inline UniformGrid unit_square(std::size_t n) {
  return UniformGrid({Axis::closed_interval(0.0, 1.0, n), Axis::closed_interval(0.0, 1.0, n)});
}

inline double max_deviation(const ScalarFieldOnGrid& h, const std::function<double(double, double)>& f) {
  double e = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto x = h.grid().coordinates(i);
    e = std::max(e, std::abs(h[i] - f(x[0], x[1])));
  }
  return e;
}

inline std::vector<Check> soap_film(const SuiteOptions& opt) {
  variational::SolverConfig tight;
  tight.tolerance = 1e-10;
  const auto quad = [](double x, double y) { return x * x - y * y; };
  const auto g33 = unit_square(33);
  const double quad_err = max_deviation(surfaces::solve_film(surfaces::WireFrame::from_function(g33, quad), tight).height, quad);

  // At N = 129 the 5-point stencil weights are ~6.6e4, so the interior
  // Laplacian cannot be driven much below 1e-10 in double precision.
  variational::SolverConfig fine;
  fine.tolerance = 1e-8;
  const auto harmonic = [](double x, double y) { return std::sin(pi * x) * std::sinh(pi * y); };
  const auto g129 = unit_square(129);
  const double harm_err =
      max_deviation(surfaces::solve_film(surfaces::WireFrame::from_function(g129, harmonic), fine).height, harmonic);

  Rng rng(opt.seed * 1000 + 7);
  double violation = -kInf;
  const auto g17 = unit_square(17);
  const std::size_t ring = surfaces::boundary_nodes(g17).size();
  for (int t = 0; t < 50; ++t) {
    Vector b(ring);
    for (double& v : b) v = rng.uniform(-1.0, 1.0);
    const auto sol = surfaces::solve_film(surfaces::WireFrame(g17, b), tight);
    const double bmin = *std::min_element(b.begin(), b.end()), bmax = *std::max_element(b.begin(), b.end());
    for (std::size_t i = 0; i < sol.height.size(); ++i)
      violation = std::max({violation, sol.height[i] - bmax, bmin - sol.height[i]});
  }
  return {at_most("x^2 - y^2 frame, 33x33: max interior error", quad_err, 1e-12),
          at_most("sin(pi x) sinh(pi y) frame, N=129: max error", harm_err, 1e-3),
          at_most("maximum principle, 50 random frames: max excursion", violation, 1e-12)};
}

inline std::vector<Check> mean_value(const SuiteOptions& opt) {
  const UniformGrid g({Axis::closed_interval(-1.0, 1.0, 201), Axis::closed_interval(-1.0, 1.0, 201)});
  const double h = g.axis(0).spacing;
  const std::array<std::size_t, 2> c{100, 100};
  const auto x2 = ScalarFieldOnGrid::sample(g, [](const std::array<double, 3>& x) { return x[0] * x[0]; });
  const auto r8 = surfaces::mean_value_residual(x2, c, 8.0 * h);
  const auto r16 = surfaces::mean_value_residual(x2, c, 16.0 * h);
  const double eps = 8.0 * h;
  const double x2_rel = std::abs(r8.ball_average_minus_center - r8.laplacian_prediction) / std::abs(r8.laplacian_prediction);
  const double x2_continuum = std::abs(r8.laplacian_prediction - eps * eps / 4.0) / (eps * eps / 4.0);

  // Random smooth fields q |x|^2 + trigonometric modes: relative agreement at
  // radius 8 spacings, band 5e-2 (lattice-ball effects plus O(eps^2)).
  Rng rng(opt.seed * 1000 + 8);
  double worst = 0.0;
  for (int t = 0; t < 30; ++t) {
    const double q = rng.uniform(0.5, 1.5);
    std::array<std::array<double, 4>, 3> m{};
    for (auto& md : m) md = {rng.uniform(-0.3, 0.3), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(0.0, 2.0 * pi)};
    const auto f = ScalarFieldOnGrid::sample(g, [&](const std::array<double, 3>& x) {
      double s = q * (x[0] * x[0] + x[1] * x[1]);
      for (const auto& md : m) s += md[0] * std::cos(md[1] * x[0] + md[2] * x[1] + md[3]);
      return s;
    });
    const auto r = surfaces::mean_value_residual(f, c, eps);
    worst = std::max(worst, std::abs(r.ball_average_minus_center - r.laplacian_prediction) / std::abs(r.laplacian_prediction));
  }
  return {at_most("f = x^2, radius 8h: |avg - prediction| / |prediction|", x2_rel, 5e-2),
          at_most("f = x^2, radius 8h: prediction vs eps^2/4 (relative)", x2_continuum, 1e-12),
          at_most("30 random smooth fields, radius 8h: max relative disagreement", worst, 5e-2),
          in_range("radius-halving ratio (16h -> 8h)", r8.ball_average_minus_center / r16.ball_average_minus_center, 0.23, 0.27)};
}

// -- DEC --------------------------------------------------------------------

inline dec::Cochain random_cochain(Rng& rng, const dec::MeshPtr& mesh, std::size_t k) {
  Vector v(mesh->count(k));
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return {mesh, k, std::move(v)};
}

inline std::vector<Check> dec_identities(const SuiteOptions& opt) {
  Rng rng(opt.seed * 1000 + 9);
  const std::vector<dec::MeshPtr> meshes{dec::make_mesh({24}, {24.0}), dec::make_mesh({8, 8}, {8.0, 8.0}),
                                         dec::make_mesh({6, 10}, {6.0, 5.0})};
  double dd = 0.0, adj = 0.0, sa = 0.0, psd = kInf;
  for (const auto& mesh : meshes) {
    const std::size_t n = mesh->dimension();
    for (int t = 0; t < 20; ++t) {
      for (std::size_t k = 0; k + 2 <= n; ++k)
        dd = std::max(dd, max_abs(dec::exterior_derivative(dec::exterior_derivative(random_cochain(rng, mesh, k))).coefficients()));
      for (std::size_t k = 0; k < n; ++k) {
        const auto a = random_cochain(rng, mesh, k);
        const auto b = random_cochain(rng, mesh, k + 1);
        adj = std::max(adj, std::abs(dec::cochain_inner_product(dec::exterior_derivative(a), b) -
                                     dec::cochain_inner_product(a, dec::codifferential(b))));
      }
      for (std::size_t k = 0; k <= n; ++k) {
        const auto a = random_cochain(rng, mesh, k);
        const auto b = random_cochain(rng, mesh, k);
        const auto la = dec::derham_laplacian(a);
        sa = std::max(sa, std::abs(dec::cochain_inner_product(la, b) - dec::cochain_inner_product(a, dec::derham_laplacian(b))));
        psd = std::min(psd, dec::cochain_inner_product(a, la));
      }
    }
  }
  const auto torus = dec::make_mesh({64, 64}, {1.0, 1.0});
  Vector e(torus->count(0));
  for (std::size_t v = 0; v < e.size(); ++v) {
    const auto x = torus->vertex_position(v);
    e[v] = std::cos(2.0 * pi * (x[0] + x[1]));
  }
  const dec::Cochain ec(torus, 0, std::move(e));
  const double lambda = dec::cochain_inner_product(ec, dec::derham_laplacian(ec)) / dec::cochain_inner_product(ec, ec);
  return {at_most("max |d d c|, random cochains, 1-D and 2-D meshes", dd, 1e-14),
          at_most("max |<<da, b>> - <<a, delta b>>|", adj, 1e-12),
          at_most("max |<<La, b>> - <<a, Lb>>|", sa, 1e-12),
          at_least("min <<a, La>>", psd, -1e-12),
          at_most("64^2 torus (1,1) mode: |lambda / 8 pi^2 - 1|", std::abs(lambda / (8.0 * pi * pi) - 1.0), 1e-2)};
}

// -- geometry ---------------------------------------------------------------

inline std::vector<geometry::Point> sphere_points() {
  std::vector<geometry::Point> pts;
  for (double th : {0.4, 1.0, 1.7, 2.5})
    for (double ph : {0.3, 2.0, 4.4}) pts.push_back({th, ph, 0.0});
  return pts;
}

inline std::vector<Check> curvature_ricci(const SuiteOptions&) {
  std::vector<Check> out;
  const auto pts = sphere_points();
  double scal = 0.0;
  for (double r : {1.0, 2.0}) {
    const auto m = geometry::sphere_metric(r);
    for (const auto& x : pts) scal = std::max(scal, std::abs(geometry::curvature(m, x).scalar - 2.0 / (r * r)));
  }
  out.push_back(at_most("sphere r=1,2: max |R - 2/r^2| (closed-form derivatives)", scal, 1e-6));

  for (double r : {1.0, 2.0}) {
    const auto m = geometry::sphere_metric(r);
    double d = 0.0;
    for (const auto& x : pts) d = std::max(d, geometry::laplacian_of_metric(m, x).difference_norm);
    char label[64];
    std::snprintf(label, sizeof label, "sphere r=%g: max ||Delta g - Ric||", r);
    out.push_back(at_most(label, d, 1e-4));
  }
  double flat = 0.0;
  for (const auto& m : {geometry::euclidean_metric(2), geometry::flat_torus_metric(), geometry::polar_plane_metric()})
    for (const geometry::Point& x : {geometry::Point{0.7, 0.4, 0.0}, geometry::Point{0.3, -0.6, 0.0}, geometry::Point{1.3, 4.0, 0.0}})
      if (m.inside(x)) flat = std::max(flat, geometry::laplacian_of_metric(m, x).difference_norm);
  out.push_back(at_most("flat charts (Euclidean, torus, polar): max ||Delta g - Ric||", flat, 1e-4));

  double cov = 0.0;
  for (const auto& m : {geometry::sphere_metric(1.0), geometry::sphere_metric(2.0), geometry::torus_metric(),
                        geometry::polar_plane_metric(), geometry::conformal_sphere_metric()})
    for (const auto& x : pts)
      if (m.inside(x)) cov = std::max(cov, geometry::covariant_constancy_check(m, x));
  out.push_back(at_most("covariant constancy max |g_{mn;a}|", cov, 1e-8));
  return out;
}

inline std::vector<Check> hilbert_action(const SuiteOptions&) {
  const geometry::QuadratureSpec q{{200, 400}, std::nullopt};
  const double target = 8.0 * pi;
  const double s1 = geometry::hilbert_action(geometry::sphere_metric(1.0), q);
  const double s2 = geometry::hilbert_action(geometry::sphere_metric(2.0), q);
  const double flat = geometry::hilbert_action(geometry::flat_torus_metric(), geometry::QuadratureSpec{{64, 64}, std::nullopt});
  const double bump = geometry::hilbert_action(geometry::conformal_sphere_metric(1.0, 0.05), q);
  return {at_most("sphere r=1: |S / 8 pi - 1|", std::abs(s1 / target - 1.0), 1e-3),
          at_most("sphere r=2: |S / 8 pi - 1|", std::abs(s2 / target - 1.0), 1e-3),
          at_most("flat torus: |S|", std::abs(flat), 1e-10),
          at_most("conformal bump on sphere: |S / 8 pi - 1|", std::abs(bump / target - 1.0), 1e-2)};
}

// -- cartan -----------------------------------------------------------------

inline std::vector<Check> cartan_structure(const SuiteOptions&) {
  const auto polar = cartan::polar_frame();
  const auto sphere = cartan::sphere_frame(1.0);
  const auto polar_metric = geometry::polar_plane_metric();
  const auto sphere_metric = geometry::sphere_metric(1.0);
  double tor = 0.0, omega = 0.0, agree = 0.0, flat_curv = 0.0;
  for (const auto& x : sphere_points()) {
    const auto t = cartan::structure_torsion(sphere, x);
    tor = std::max({tor, std::abs(t[0]), std::abs(t[1])});
    const auto o = cartan::structure_curvature(sphere, x);
    omega = std::max(omega, std::abs(o[0][1] - std::sin(x[0])));
    const auto oc = cartan::frame_curvature_from_riemann(geometry::curvature(sphere_metric, x), sphere.coframe(x));
    for (int m = 0; m < 2; ++m)
      for (int n = 0; n < 2; ++n) agree = std::max(agree, std::abs(o[m][n] - oc[m][n]));
  }
  for (double r : {0.5, 1.0, 1.5})
    for (double ph : {0.3, 2.0, 4.4}) {
      const geometry::Point x{r, ph, 0.0};
      const auto t = cartan::structure_torsion(polar, x);
      tor = std::max({tor, std::abs(t[0]), std::abs(t[1])});
      const auto o = cartan::structure_curvature(polar, x);
      const auto oc = cartan::frame_curvature_from_riemann(geometry::curvature(polar_metric, x), polar.coframe(x));
      for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) {
          agree = std::max(agree, std::abs(o[m][n] - oc[m][n]));
          flat_curv = std::max(flat_curv, std::abs(o[m][n]));
        }
    }
  return {at_most("Levi-Civita torsion, polar plane and sphere", tor, 1e-6),
          at_most("sphere |Omega^1_2 - sin(theta)|", omega, 1e-6),
          at_most("polar plane curvature", flat_curv, 1e-6),
          at_most("frame vs coordinate curvature", agree, 1e-4)};
}

inline std::vector<Check> torsion_explorer(const SuiteOptions& opt) {
  const auto grid = cartan::chart_grid(cartan::cartesian_frame().chart, 16, 16);
  variational::SolverConfig cfg;
  cfg.tolerance = 1e-8;
  cfg.max_iterations = 500;
  const auto flat = cartan::minimize_torsion_functional(cartan::sample(cartan::cartesian_frame(), grid), cfg);

  cartan::Perturbation p;
  p.kind = cartan::PerturbationKind::Rotation;
  p.amplitude = 0.1;
  const auto pert = cartan::minimize_torsion_functional(cartan::sample(cartan::cartesian_frame(1.0, {p}), grid), cfg);
  double spread = 0.0;
  const auto& e0 = pert.configuration.coframe.front();
  for (const auto& e : pert.configuration.coframe)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) spread = std::max(spread, std::abs(e[a][b] - e0[a][b]));

  Rng rng(opt.seed * 1000 + 13);
  double seeds = -kInf;
  for (int s = 0; s < 100; ++s) {
    std::vector<cartan::Perturbation> ps(3);
    for (auto& q : ps) {
      q.kind = rng.uniform() < 0.5 ? cartan::PerturbationKind::Rotation : cartan::PerturbationKind::Component;
      q.frame_index = static_cast<int>(rng.index(2));
      q.coord_index = static_cast<int>(rng.index(2));
      q.amplitude = rng.uniform(-0.3, 0.3);
      q.mode = {static_cast<int>(rng.index(3)), static_cast<int>(1 + rng.index(2))};
    }
    variational::SolverConfig short_run;
    short_run.tolerance = 1e-8;
    short_run.max_iterations = 40;
    const auto r = cartan::minimize_torsion_functional(cartan::sample(cartan::cartesian_frame(1.0, ps), grid), short_run);
    seeds = std::max(seeds, max_increase(r.trajectory));
  }
  return {at_most("flat coframe: gradient norm", flat.gradient_norm, 1e-8),
          at_most("flat coframe: iterations", flat.iterations, 0),
          at_most("rotated coframe eps=0.1, 16^2: final functional", pert.value, 1e-6),
          at_most("rotated coframe: iterations", pert.iterations, 500),
          at_most("rotated coframe: max functional increase", max_increase(pert.trajectory), 1e-12),
          at_most("rotated coframe: distance to a constant coframe", spread, 1e-3),
          at_most("100 random seeds: max functional increase", seeds, 1e-12)};
}

// -- spinor -----------------------------------------------------------------

inline std::vector<Check> spinor_checks(const SuiteOptions& opt) {
  using spinor::Rational;
  const auto g = spinor::build_gamma<Rational>();
  const auto id = spinor::identity4<Rational>();
  int table = 0;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      const Rational expected = m == n ? Rational(g.signature[m]) : Rational(0);
      if (!(spinor::half_anticommutator(g, m, n) == expected * id)) ++table;
    }
  const spinor::FourVector<Rational> k{{Rational(3), Rational(1), Rational(2), Rational(0)}};
  const auto s = spinor::dirac_slash(g, k);
  const int example = (s * s == Rational(4) * id) ? 0 : 1;

  Rng rng(opt.seed * 1000 + 14);
  auto random_rational = [&] {
    return Rational(static_cast<std::int64_t>(rng.index(41)) - 20, static_cast<std::int64_t>(1 + rng.index(12)));
  };
  int square = 0, linear = 0;
  for (int t = 0; t < 200; ++t) {
    spinor::FourVector<Rational> a, b;
    for (int m = 0; m < 4; ++m) {
      a.k[m] = random_rational();
      b.k[m] = random_rational();
    }
    const auto sa = spinor::dirac_slash(g, a);
    if (!(sa * sa == spinor::minkowski_square(a) * id)) ++square;
    if (!(spinor::dirac_slash(g, a + b) == sa + spinor::dirac_slash(g, b))) ++linear;
  }
  return {at_most("anticommutator entries differing from g_mn I (of 16)", table, 0),
          at_most("slash(3,1,2,0)^2 != 4 I", example, 0),
          at_most("slash(k)^2 != (k.k) I, 200 rational k", square, 0),
          at_most("slash(a+b) != slash(a) + slash(b), 200 pairs", linear, 0)};
}

struct Entry {
  const char* name;
  const char* description;
  double budget_ms;
  std::function<std::vector<Check>(const SuiteOptions&)> run;
};

inline const std::vector<Entry>& entries() {
  static const std::vector<Entry> list{
      {"maxent_boltzmann", "MaxEnt solutions have Boltzmann form; two-level beta = ln 3", 1000, maxent_boltzmann},
      {"entropy_additivity", "S(PQ) = S(P) + S(Q) for independent distributions", 1000, entropy_additivity},
      {"mixing_monotonicity", "entropy never decreases under doubly stochastic maps", 1000, mixing_monotonicity},
      {"kinetic_additivity", "kinetic energy additive over product grids", 10000, kinetic_additivity},
      {"ground_states", "box, harmonic and radial hydrogen ground-state energies", 60000, ground_states},
      {"no_collapse", "Gaussian-trial hydrogen energy has an interior minimum", 5000, no_collapse},
      {"soap_film", "minimal-surface heights: exactness, accuracy, maximum principle", 30000, soap_film},
      {"mean_value", "ball average minus center tracks -(eps^2/8) Delta f", 5000, mean_value},
      {"dec_identities", "dd = 0, adjointness, Laplacian symmetry/PSD, torus spectrum", 30000, dec_identities},
      {"curvature_ricci", "scalar curvature, Delta g vs Ricci, covariant constancy", 30000, curvature_ricci},
      {"hilbert_action", "integral of R dvol: sphere 8 pi, flat torus 0, conformal invariance", 60000, hilbert_action},
      {"cartan_structure", "structure equations: torsion-free Levi-Civita, sphere curvature form", 30000,
       cartan_structure},
      {"torsion_explorer", "torsion functional descent: stationarity, convergence, monotonicity", 120000,
       torsion_explorer},
      {"spinor_checks", "gamma-matrix anticommutators and slash identities, exact", 1000, spinor_checks},
  };
  return list;
}

inline bool selected(const SuiteOptions& opt, const std::string& name) {
  return opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), name) != opt.only.end();
}

inline CriterionResult run_entry(const Entry& e, const SuiteOptions& opt) {
  CriterionResult r;
  r.name = e.name;
  r.description = e.description;
  r.budget_ms = e.budget_ms;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    r.checks = e.run(opt);
  } catch (const std::exception& ex) {
    r.error = ex.what();
  }
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.within_budget = r.runtime_ms <= r.budget_ms;
  r.pass = r.error.empty() && !r.checks.empty() && r.within_budget;
  for (const Check& c : r.checks) r.pass = r.pass && c.pass;
  return r;
}

}  // namespace detail

/// Text form of the deterministic part of a result (no timings).
inline std::string canonical_text(const std::vector<CriterionResult>& rs) {
  std::string out;
  char buf[96];
  for (const auto& r : rs) {
    out += r.name + (r.error.empty() ? "" : " error: " + r.error) + "\n";
    for (const Check& c : r.checks) {
      std::snprintf(buf, sizeof buf, " %.17g %d\n", c.measured, c.pass ? 1 : 0);
      out += c.label + buf;
    }
  }
  return out;
}

inline std::vector<std::string> criterion_names() {
  std::vector<std::string> names;
  for (const auto& e : detail::entries()) names.emplace_back(e.name);
  names.emplace_back("determinism");
  return names;
}

/// Runs the battery.  The determinism criterion reruns every selected item
/// and compares the results byte for byte.
inline SuiteReport run_suite(const SuiteOptions& opt = {}) {
  for (const auto& n : opt.only) {
    const auto names = criterion_names();
    require(std::find(names.begin(), names.end(), n) != names.end(), "unknown criterion '" + n + "'");
  }
  SuiteReport rep;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& e : detail::entries())
    if (detail::selected(opt, e.name)) rep.criteria.push_back(detail::run_entry(e, opt));

  if (detail::selected(opt, "determinism")) {
    CriterionResult d;
    d.name = "determinism";
    d.description = "rerunning the battery reproduces identical results";
    d.budget_ms = 360000;
    SuiteOptions rerun_opt = opt;
    rerun_opt.only.clear();
    std::vector<CriterionResult> first, second;
    // Rerun everything when determinism is requested alone, else compare
    // against the items just run.
    const bool alone = opt.only.size() == 1;
    for (const auto& e : detail::entries()) {
      if (!alone && !detail::selected(opt, e.name)) continue;
      if (alone) first.push_back(detail::run_entry(e, rerun_opt));
      second.push_back(detail::run_entry(e, rerun_opt));
    }
    if (!alone)
      for (const auto& c : rep.criteria) first.push_back(c);
    int differing = 0;
    for (std::size_t i = 0; i < first.size(); ++i)
      if (canonical_text({first[i]}) != canonical_text({second[i]})) ++differing;
    d.checks.push_back(at_most("criteria whose results differ between two runs", differing, 0));
    d.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    d.within_budget = d.runtime_ms <= d.budget_ms;
    d.pass = d.within_budget && d.checks.front().pass;
    rep.criteria.push_back(std::move(d));
  }
  rep.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  rep.all_pass = !rep.criteria.empty();
  for (const auto& c : rep.criteria) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

}  // namespace jaynes::suite
