// Command-line front end: reads a RunConfig JSON, dispatches to one module,
// writes report.json plus CSV artifacts into the output directory.
//
// Exit status: 0 success, 1 suite criteria failed, 2 validation error,
// 3 convergence error, 4 any other failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "jaynes/jaynes.hpp"

namespace fs = std::filesystem;
using jaynes::io::json;
using jaynes::io::ObjectReader;

namespace {

constexpr const char* kToolVersion = "0.1.0";

enum class LogLevel { Quiet, Info, Debug };

LogLevel log_level() {
  const char* v = std::getenv("JAYNES_LOG");
  if (!v) return LogLevel::Info;
  const std::string s(v);
  if (s == "quiet" || s == "0") return LogLevel::Quiet;
  if (s == "debug" || s == "2") return LogLevel::Debug;
  return LogLevel::Info;
}

void log(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) <= static_cast<int>(log_level())) std::cerr << "[jaynes] " << msg << "\n";
}

std::ofstream open_artifact(const fs::path& dir, const std::string& name) {
  std::ofstream out(dir / name);
  if (!out) throw jaynes::ValidationError("cannot write " + (dir / name).string());
  log(LogLevel::Debug, "writing " + (dir / name).string());
  return out;
}

// -- maxent -------------------------------------------------------------------

json run_maxent(const jaynes::io::RunConfig& cfg, const fs::path&) {
  ObjectReader r(cfg.parameters, "/parameters");
  const jaynes::Vector levels = r.numbers("levels");
  const double mean = r.number("mean");
  const bool maxwell = r.has("maxwell_alpha");
  const double alpha = r.number("maxwell_alpha", 1.0);
  r.finish();
  const auto sol = jaynes::probkit::solve_maxent(jaynes::probkit::EnergyLevels(levels), mean);
  json res = jaynes::io::to_json(sol);
  if (maxwell) {
    const auto p = jaynes::probkit::MaxwellParameters::make(alpha);
    res["maxwell"] = {{"alpha", alpha},
                      {"second_moment", jaynes::probkit::maxwell_second_moment(p)},
                      {"second_moment_exact", 1.5 / alpha}};
  }
  return res;
}

// -- schrodinger --------------------------------------------------------------

jaynes::schroedinger::Potential read_potential(const json& params) {
  using jaynes::schroedinger::Potential;
  if (!params.contains("potential")) return Potential::zero();
  ObjectReader r(params.at("potential"), "/parameters/potential");
  const std::string kind = r.string("kind");
  const double strength = r.number("strength", 1.0);
  r.finish();
  if (kind == "zero") return Potential::zero();
  if (kind == "harmonic") return Potential::harmonic(strength);
  if (kind == "coulomb_radial") return Potential::coulomb_radial(strength);
  ObjectReader::fail("/parameters/potential/kind", "expected zero, harmonic or coulomb_radial");
}

json run_schrodinger(const jaynes::io::RunConfig& cfg, const fs::path& out) {
  ObjectReader r(cfg.parameters, "/parameters");
  const std::string mode = r.string("mode", "ground_state");
  if (mode == "collapse_scan") {
    jaynes::Vector sigmas;
    if (r.has("sigmas")) {
      sigmas = r.numbers("sigmas");
    } else {
      for (int i = 0; i <= 40; ++i) sigmas.push_back(0.1 * std::pow(100.0, i / 40.0));
    }
    r.finish();
    const auto rows = jaynes::schroedinger::collapse_scan(sigmas);
    auto f = open_artifact(out, "collapse.csv");
    jaynes::io::write_collapse_csv(f, rows);
    const auto best = jaynes::schroedinger::collapse_minimum();
    return {{"mode", mode},
            {"points", rows.size()},
            {"minimum", {{"sigma", best.sigma}, {"total", best.total}, {"kinetic", best.kinetic}, {"potential", best.potential}}},
            {"closed_form_minimum", -8.0 / (3.0 * jaynes::pi)},
            {"artifacts", {"collapse.csv"}}};
  }
  if (mode != "ground_state") ObjectReader::fail("/parameters/mode", "expected ground_state or collapse_scan");
  const auto grid = jaynes::io::read_grid(r.raw("grid"), "/parameters/grid");
  r.touch("potential");
  const auto pot = read_potential(cfg.parameters);
  r.touch("solver");
  const auto solver = jaynes::io::read_solver(cfg.parameters, "/parameters", cfg.seed);
  r.finish();
  const auto gs = jaynes::schroedinger::ground_state(grid, pot, solver);
  auto f = open_artifact(out, "state.csv");
  jaynes::grids::write_csv(f, gs.state.field(), "psi");
  json res = jaynes::io::to_json(gs);
  res["mode"] = mode;
  res["potential"] = jaynes::schroedinger::to_string(pot.kind);
  res["artifacts"] = {"state.csv"};
  return res;
}

// -- film ---------------------------------------------------------------------

json run_film(const jaynes::io::RunConfig& cfg, const fs::path& out) {
  using jaynes::pi;
  ObjectReader r(cfg.parameters, "/parameters");
  const long long n = r.integer("points", 65);
  if (n < 3) ObjectReader::fail("/parameters/points", "need at least 3 points per side");
  const jaynes::grids::UniformGrid grid({jaynes::grids::Axis::closed_interval(0.0, 1.0, static_cast<std::size_t>(n)),
                                         jaynes::grids::Axis::closed_interval(0.0, 1.0, static_cast<std::size_t>(n))});
  std::string fn = "harmonic";
  double value = 1.0;
  if (r.has("boundary")) {
    ObjectReader b(r.raw("boundary"), "/parameters/boundary");
    fn = b.string("function", fn);
    value = b.number("value", value);
    b.finish();
  }
  jaynes::variational::SolverConfig defaults;
  defaults.tolerance = 1e-8;
  r.touch("solver");
  const auto solver = jaynes::io::read_solver(cfg.parameters, "/parameters", cfg.seed, defaults);
  const bool mv = r.has("mean_value_radius");
  const double mv_radius = r.number("mean_value_radius", 4.0);
  r.finish();

  std::function<double(double, double)> exact;
  std::optional<jaynes::surfaces::WireFrame> frame;
  if (fn == "harmonic") {
    exact = [](double x, double y) { return std::sin(pi * x) * std::sinh(pi * y); };
  } else if (fn == "saddle") {
    exact = [](double x, double y) { return x * x - y * y; };
  } else if (fn == "constant") {
    exact = [value](double, double) { return value; };
  } else if (fn == "random") {
    jaynes::Rng rng(cfg.seed);
    jaynes::Vector b(jaynes::surfaces::boundary_nodes(grid).size());
    for (double& v : b) v = rng.uniform(-value, value);
    frame.emplace(grid, std::move(b));
  } else {
    ObjectReader::fail("/parameters/boundary/function", "expected harmonic, saddle, constant or random");
  }
  if (!frame) frame.emplace(jaynes::surfaces::WireFrame::from_function(grid, exact));

  const auto sol = jaynes::surfaces::solve_film(*frame, solver);
  auto f = open_artifact(out, "film.csv");
  jaynes::grids::write_csv(f, sol.height, "height");
  json res = {{"boundary_function", fn},
              {"points", n},
              {"boundary_residual", sol.boundary_residual},
              {"interior_laplacian_norm", sol.interior_laplacian_norm},
              {"dirichlet_energy", jaynes::surfaces::dirichlet_energy(sol.height)},
              {"iterations", sol.iterations},
              {"artifacts", {"film.csv"}}};
  if (exact) {
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.coordinates(i);
      err = std::max(err, std::abs(sol.height[i] - exact(x[0], x[1])));
    }
    res["max_error_vs_analytic"] = err;
  }
  if (mv) {
    const std::size_t c = static_cast<std::size_t>(n / 2);
    const auto rep = jaynes::surfaces::mean_value_residual(sol.height, {c, c}, mv_radius * grid.axis(0).spacing);
    res["mean_value"] = {{"radius_spacings", mv_radius},
                         {"ball_average_minus_center", rep.ball_average_minus_center},
                         {"laplacian_prediction", rep.laplacian_prediction},
                         {"ball_points", rep.ball_points}};
  }
  return res;
}

// -- curvature ----------------------------------------------------------------

json run_curvature(const jaynes::io::RunConfig& cfg, const fs::path& out) {
  namespace geo = jaynes::geometry;
  ObjectReader r(cfg.parameters, "/parameters");
  const std::string family = r.string("family");
  const auto families = geo::metric_families();
  const auto it = std::find_if(families.begin(), families.end(), [&](const auto& f) { return f.name == family; });
  if (it == families.end()) ObjectReader::fail("/parameters/family", "unknown metric family '" + family + "'");
  std::map<std::string, double> params;
  for (const auto& [key, fallback] : it->defaults) params[key] = r.number(key, fallback);
  const std::string derivs = r.string("derivatives", "closed_form");
  if (derivs != "closed_form" && derivs != "finite_difference")
    ObjectReader::fail("/parameters/derivatives", "expected closed_form or finite_difference");
  geo::ParametrizedMetric metric = geo::make_metric(family, params);
  if (derivs == "finite_difference") metric = metric.with_finite_differences();

  std::vector<std::size_t> nodes(metric.dimension(), 64);
  if (r.has("quadrature")) {
    const auto q = r.integers("quadrature");
    if (q.size() != metric.dimension()) ObjectReader::fail("/parameters/quadrature", "one node count per chart axis required");
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (q[k] < 1) ObjectReader::fail("/parameters/quadrature/" + std::to_string(k), "node counts must be positive");
      nodes[k] = static_cast<std::size_t>(q[k]);
    }
  }
  std::vector<geo::Point> points;
  if (r.has("points")) {
    const json& pts = r.raw("points");
    if (!pts.is_array()) ObjectReader::fail("/parameters/points", "expected an array of points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string path = "/parameters/points/" + std::to_string(i);
      if (!pts[i].is_array() || pts[i].size() != metric.dimension()) ObjectReader::fail(path, "point has the wrong dimension");
      geo::Point x{};
      for (std::size_t k = 0; k < pts[i].size(); ++k) x[k] = ObjectReader::as_number(pts[i][k], path + "/" + std::to_string(k));
      if (!metric.inside(x)) ObjectReader::fail(path, "point lies outside the chart");
      points.push_back(x);
    }
  }
  r.finish();

  const geo::QuadratureSpec q{nodes, std::nullopt};
  json res = {{"family", family}, {"parameters", params}, {"derivatives", derivs}, {"quadrature", nodes},
              {"hilbert_action", geo::hilbert_action(metric, q)}, {"artifacts", {"curvature.csv"}}};
  json per_point = json::array();
  for (const auto& x : points) {
    const auto cb = geo::curvature(metric, x);
    json row = {{"point", std::vector<double>(x.begin(), x.begin() + static_cast<long>(metric.dimension()))},
                {"scalar_curvature", cb.scalar},
                {"covariant_constancy", geo::covariant_constancy_check(metric, x)}};
    if (metric.dimension() <= 3) {
      const auto lg = geo::laplacian_of_metric(metric, x);
      row["laplacian_of_metric"] = {{"difference_norm", lg.difference_norm}, {"ricci_norm", lg.ricci_norm}, {"ricci_ratio", lg.ricci_ratio}};
    }
    per_point.push_back(row);
  }
  res["points"] = per_point;
  auto f = open_artifact(out, "curvature.csv");
  geo::write_curvature_csv(f, metric, q);
  return res;
}

// -- cartan -------------------------------------------------------------------

jaynes::cartan::FrameConfiguration read_frame(ObjectReader& r, std::optional<jaynes::geometry::ParametrizedMetric>& metric) {
  using namespace jaynes::cartan;
  const std::string family = r.string("frame", "cartesian");
  const std::string conn = r.string("connection", "levi_civita");
  if (conn != "levi_civita" && conn != "zero") ObjectReader::fail("/parameters/connection", "expected levi_civita or zero");
  const bool lc = conn == "levi_civita";
  if (family == "cartesian") {
    const double length = r.number("length", 1.0);
    std::vector<Perturbation> ps;
    if (r.has("perturbations")) {
      const json& arr = r.raw("perturbations");
      if (!arr.is_array()) ObjectReader::fail("/parameters/perturbations", "expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        ObjectReader p(arr[i], "/parameters/perturbations/" + std::to_string(i));
        Perturbation q;
        const std::string kind = p.string("kind", "component");
        if (kind == "rotation")
          q.kind = PerturbationKind::Rotation;
        else if (kind != "component")
          ObjectReader::fail(p.child("kind"), "expected component or rotation");
        q.frame_index = static_cast<int>(p.integer("frame_index", 0));
        q.coord_index = static_cast<int>(p.integer("coord_index", 0));
        q.amplitude = p.number("amplitude");
        if (p.has("mode")) {
          const auto m = p.integers("mode");
          if (m.size() != 2) ObjectReader::fail(p.child("mode"), "expected two wave numbers");
          q.mode = {static_cast<int>(m[0]), static_cast<int>(m[1])};
        }
        p.finish();
        ps.push_back(q);
      }
    }
    metric = jaynes::geometry::flat_torus_metric(length);
    return cartesian_frame(length, ps);
  }
  if (family == "polar") {
    const double r_max = r.number("r_max", 2.0);
    metric = jaynes::geometry::polar_plane_metric(r_max);
    return polar_frame(lc, r_max);
  }
  if (family == "sphere") {
    const double radius = r.number("radius", 1.0);
    metric = jaynes::geometry::sphere_metric(radius);
    return sphere_frame(radius, lc);
  }
  ObjectReader::fail("/parameters/frame", "expected cartesian, polar or sphere");
}

json run_cartan(const jaynes::io::RunConfig& cfg, const fs::path& out) {
  using namespace jaynes::cartan;
  ObjectReader r(cfg.parameters, "/parameters");
  std::optional<jaynes::geometry::ParametrizedMetric> metric;
  const FrameConfiguration frame = read_frame(r, metric);

  std::vector<jaynes::geometry::Point> points;
  if (r.has("points")) {
    const json& pts = r.raw("points");
    if (!pts.is_array()) ObjectReader::fail("/parameters/points", "expected an array of [x, y] points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string path = "/parameters/points/" + std::to_string(i);
      if (!pts[i].is_array() || pts[i].size() != 2) ObjectReader::fail(path, "expected [x, y]");
      points.push_back({ObjectReader::as_number(pts[i][0], path + "/0"), ObjectReader::as_number(pts[i][1], path + "/1"), 0.0});
    }
  }
  std::array<std::size_t, 2> n{16, 16};
  if (r.has("grid")) {
    const auto g = r.integers("grid");
    if (g.size() != 2 || g[0] < 3 || g[1] < 3) ObjectReader::fail("/parameters/grid", "expected [nx, ny] with at least 3 nodes each");
    n = {static_cast<std::size_t>(g[0]), static_cast<std::size_t>(g[1])};
  }
  std::optional<jaynes::variational::SolverConfig> minimize;
  ConnectionMode mode = ConnectionMode::Implicit;
  if (r.has("minimize")) {
    ObjectReader m(r.raw("minimize"), "/parameters/minimize");
    jaynes::variational::SolverConfig c;
    c.seed = cfg.seed;
    c.tolerance = m.number("tolerance", 1e-8);
    c.max_iterations = static_cast<int>(m.integer("max_iterations", 500));
    if (!(c.tolerance > 0.0)) ObjectReader::fail(m.child("tolerance"), "tolerance must be positive");
    if (c.max_iterations < 1) ObjectReader::fail(m.child("max_iterations"), "max_iterations must be at least 1");
    const std::string cm = m.string("connection_mode", "implicit");
    if (cm == "frozen")
      mode = ConnectionMode::Frozen;
    else if (cm != "implicit")
      ObjectReader::fail(m.child("connection_mode"), "expected implicit or frozen");
    m.finish();
    minimize = c;
  }
  r.finish();

  json rows = json::array();
  for (const auto& x : points) {
    const auto rep = structure_report(frame, x);
    rows.push_back({{"point", {x[0], x[1]}},
                    {"torsion", rep.torsion},
                    {"torsion_norm", rep.torsion_norm},
                    {"curvature_12", rep.curvature[0][1]},
                    {"curvature_norm", rep.curvature_norm}});
  }
  const auto grid = chart_grid(frame.chart, n[0], n[1]);
  const auto metric_fn = [&metric](const jaynes::geometry::Point& x) { return metric->components(x); };
  const FrameField field = sample(frame, grid, metric_fn);
  json res = {{"points", rows}, {"grid", {n[0], n[1]}}, {"torsion_functional", torsion_functional(field)}};
  if (minimize) {
    const auto result = minimize_torsion_functional(field, *minimize, mode);
    auto t = open_artifact(out, "trajectory.csv");
    write_trajectory_csv(t, result.trajectory);
    auto f = open_artifact(out, "frame.csv");
    jaynes::io::write_frame_csv(f, result.configuration);
    res["minimize"] = {{"value", result.value},
                       {"gradient_norm", result.gradient_norm},
                       {"iterations", result.iterations},
                       {"converged", result.converged},
                       {"connection_mode", mode == ConnectionMode::Frozen ? "frozen" : "implicit"}};
    res["artifacts"] = {"trajectory.csv", "frame.csv"};
  }
  return res;
}

// -- spinor -------------------------------------------------------------------

json run_spinor(const jaynes::io::RunConfig& cfg, const fs::path&) {
  using jaynes::spinor::Rational;
  ObjectReader r(cfg.parameters, "/parameters");
  r.finish();
  const auto g = jaynes::spinor::build_gamma<Rational>();
  const auto id = jaynes::spinor::identity4<Rational>();
  json table = json::array();
  bool all = true;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      const auto a = jaynes::spinor::half_anticommutator(g, m, n);
      const Rational expected = m == n ? Rational(g.signature[m]) : Rational(0);
      // The anticommutator is scalar; report its (0,0) entry and whether the
      // whole matrix equals expected * I.
      const bool ok = a == expected * id;
      all = all && ok;
      table.push_back({{"mu", m}, {"nu", n}, {"value", a[0][0].re.to_string()}, {"metric", expected.to_string()}, {"matches", ok}});
    }
  const jaynes::spinor::FourVector<Rational> k{{Rational(3), Rational(1), Rational(2), Rational(0)}};
  const auto s = jaynes::spinor::dirac_slash(g, k);
  return {{"signature", g.signature},
          {"anticommutators", table},
          {"all_match", all},
          {"slash_example", {{"k", {3, 1, 2, 0}}, {"k_dot_k", minkowski_square(k).to_string()}, {"square_equals_4I", s * s == Rational(4) * id}}}};
}

// -- suite --------------------------------------------------------------------

json run_suite_command(const jaynes::io::RunConfig& cfg, const fs::path&, bool& failed, json& timing) {
  ObjectReader r(cfg.parameters, "/parameters");
  jaynes::suite::SuiteOptions opt;
  opt.seed = cfg.seed;
  opt.stencil_sign = r.number("stencil_sign", 1.0);
  if (r.has("only")) {
    const json& only = r.raw("only");
    if (!only.is_array()) ObjectReader::fail("/parameters/only", "expected an array of criterion names");
    const auto names = jaynes::suite::criterion_names();
    for (std::size_t i = 0; i < only.size(); ++i) {
      const std::string path = "/parameters/only/" + std::to_string(i);
      if (!only[i].is_string()) ObjectReader::fail(path, "expected a criterion name");
      const auto name = only[i].get<std::string>();
      if (std::find(names.begin(), names.end(), name) == names.end()) ObjectReader::fail(path, "unknown criterion '" + name + "'");
      opt.only.push_back(name);
    }
  }
  r.finish();
  const auto rep = jaynes::suite::run_suite(opt);
  for (const auto& c : rep.criteria) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-4s %-22s %9.1f ms (budget %.0f ms)", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                  c.runtime_ms, c.budget_ms);
    std::cout << buf << (c.error.empty() ? "" : "  error: " + c.error) << "\n";
    if (!c.pass)
      for (const auto& k : c.checks)
        if (!k.pass) std::cout << "       failing: " << k.label << " = " << k.measured << "\n";
  }
  failed = !rep.all_pass;
  timing = jaynes::io::timing_json(rep);
  return jaynes::io::results_json(rep);
}

void list_families() {
  std::cout << "commands:";
  for (const auto& c : jaynes::io::command_names()) std::cout << " " << c;
  std::cout << "\n\nmetric families (curvature):\n";
  for (const auto& f : jaynes::geometry::metric_families()) {
    std::cout << "  " << f.name << ": " << f.description << " [";
    bool first = true;
    for (const auto& [k, v] : f.defaults) {
      std::cout << (first ? "" : ", ") << k << "=" << v;
      first = false;
    }
    std::cout << "]\n";
  }
  std::cout << "\nframe families (cartan):\n"
            << "  cartesian: (dx, dy) on the periodic square [0,L)^2 [length=1], optional perturbations\n"
            << "  polar: (dr, r dphi) on the polar plane [r_max=2]\n"
            << "  sphere: (r dtheta, r sin(theta) dphi) [radius=1]\n"
            << "\nsuite criteria:";
  for (const auto& n : jaynes::suite::criterion_names()) std::cout << " " << n;
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jaynes: least-bias states, minimal surfaces, curvature and frames"};
  std::string config_path, output_dir;
  std::optional<std::uint64_t> seed;
  bool families = false;
  app.add_option("--config", config_path, "RunConfig JSON file")->check(CLI::ExistingFile);
  app.add_option("--output", output_dir, "output directory (overrides output_dir)");
  app.add_option("--seed", seed, "random seed (overrides seed)");
  app.add_flag("--list-families", families, "list metric and frame families, commands and criteria");
  CLI11_PARSE(app, argc, argv);

  if (families) {
    list_families();
    return 0;
  }
  if (config_path.empty()) {
    std::cerr << "error: --config is required (see --help)\n";
    return 2;
  }

  try {
    jaynes::io::RunConfig cfg = jaynes::io::load_run_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    const fs::path out(cfg.output_dir);
    fs::create_directories(out);
    log(LogLevel::Info, "running '" + cfg.command + "' into " + out.string());

    const auto t0 = std::chrono::steady_clock::now();
    json results;
    json timing_detail;
    bool suite_failed = false;
    if (cfg.command == "maxent") results = run_maxent(cfg, out);
    else if (cfg.command == "schrodinger") results = run_schrodinger(cfg, out);
    else if (cfg.command == "film") results = run_film(cfg, out);
    else if (cfg.command == "curvature") results = run_curvature(cfg, out);
    else if (cfg.command == "cartan") results = run_cartan(cfg, out);
    else if (cfg.command == "spinor-check") results = run_spinor(cfg, out);
    else results = run_suite_command(cfg, out, suite_failed, timing_detail);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();

    json report = {{"schema_version", jaynes::io::kSchemaVersion},
                   {"command", cfg.command},
                   {"inputs_echo", jaynes::io::to_json(cfg)},
                   {"results", results},
                   {"timing_ms", ms},
                   {"tool_version", kToolVersion}};
    if (!timing_detail.is_null()) report["timing_detail"] = timing_detail;
    auto f = open_artifact(out, "report.json");
    f << report.dump(2) << "\n";
    log(LogLevel::Info, "wrote " + (out / "report.json").string() + " in " + std::to_string(ms) + " ms");
    if (suite_failed) {
      std::cerr << "suite: failing criteria:";
      for (const auto& n : results["failing"]) std::cerr << " " << n.get<std::string>();
      std::cerr << "\n";
      return 1;
    }
    return 0;
  } catch (const jaynes::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const jaynes::ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << " (residual " << e.residual() << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
