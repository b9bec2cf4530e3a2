#pragma once

// JSON and CSV plumbing for configs, reports and fields.  Config readers
// reject unknown keys and report problems with JSON-pointer paths.

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "jaynes/cartan.hpp"
#include "jaynes/core.hpp"
#include "jaynes/dec.hpp"
#include "jaynes/grids.hpp"
#include "jaynes/probkit.hpp"
#include "jaynes/schroedinger.hpp"
#include "jaynes/suite.hpp"
#include "jaynes/variational.hpp"

namespace jaynes::io {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

/// Reads keys out of a JSON object, remembering which were consumed so the
/// rest can be rejected.  Every error names the offending JSON pointer.
class ObjectReader {
public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  std::string child(const std::string& key) const { return path_ + "/" + key; }
  bool has(const std::string& key) const { return obj_.contains(key); }
  /// Marks an optional key as handled elsewhere.
  void touch(const std::string& key) { used_.insert(key); }

  const json& raw(const std::string& key) {
    used_.insert(key);
    if (!obj_.contains(key)) fail(child(key), "missing required key");
    return obj_.at(key);
  }

  double number(const std::string& key) { return as_number(raw(key), child(key)); }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : (used_.insert(key), fallback); }

  long long integer(const std::string& key) { return as_integer(raw(key), child(key)); }
  long long integer(const std::string& key, long long fallback) {
    return has(key) ? integer(key) : (used_.insert(key), fallback);
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail(child(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : (used_.insert(key), fallback);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return used_.insert(key), fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(child(key), "expected true or false");
    return v.get<bool>();
  }

  Vector numbers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) fail(child(key), "expected an array of numbers");
    Vector out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], child(key) + "/" + std::to_string(i)));
    return out;
  }

  std::vector<long long> integers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) fail(child(key), "expected an array of integers");
    std::vector<long long> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_integer(v[i], child(key) + "/" + std::to_string(i)));
    return out;
  }

  /// Rejects any key that was never read.
  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!used_.count(it.key())) fail(child(it.key()), "unknown key");
  }

  [[noreturn]] static void fail(const std::string& pointer, const std::string& message) {
    throw ValidationError((pointer.empty() ? std::string("/") : pointer) + ": " + message);
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "expected a finite number");
    return d;
  }

  static long long as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<long long>();
  }

private:
  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

// ---------------------------------------------------------------------------
// RunConfig

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"maxent", "schrodinger", "film", "curvature", "cartan", "spinor-check", "suite"};
  return names;
}

struct RunConfig {
  std::string schema_version = kSchemaVersion;
  std::string command;
  json parameters = json::object();
  std::string output_dir = "out";
  std::uint64_t seed = 1;
};

inline RunConfig parse_run_config(const json& j) {
  ObjectReader r(j, "");
  RunConfig c;
  c.schema_version = r.string("schema_version");
  if (c.schema_version != kSchemaVersion)
    ObjectReader::fail("/schema_version", "unsupported schema version '" + c.schema_version + "', expected " + kSchemaVersion);
  c.command = r.string("command");
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), c.command) == names.end())
    ObjectReader::fail("/command", "unknown command '" + c.command + "'");
  if (r.has("parameters")) {
    c.parameters = r.raw("parameters");
    if (!c.parameters.is_object()) ObjectReader::fail("/parameters", "expected an object");
  }
  c.output_dir = r.string("output_dir", c.output_dir);
  const long long seed = r.integer("seed", 1);
  if (seed < 0) ObjectReader::fail("/seed", "seed must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  r.finish();
  return c;
}

inline json to_json(const RunConfig& c) {
  return {{"schema_version", c.schema_version}, {"command", c.command}, {"parameters", c.parameters},
          {"output_dir", c.output_dir}, {"seed", c.seed}};
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

// ---------------------------------------------------------------------------
// Shared parameter readers

inline variational::SolverConfig read_solver(const json& parent, const std::string& path, std::uint64_t seed,
                                             variational::SolverConfig defaults = {}) {
  variational::SolverConfig c = defaults;
  c.seed = seed;
  if (!parent.contains("solver")) return c;
  ObjectReader r(parent.at("solver"), path + "/solver");
  c.tolerance = r.number("tolerance", c.tolerance);
  if (!(c.tolerance > 0.0)) ObjectReader::fail(r.child("tolerance"), "tolerance must be positive");
  c.max_iterations = static_cast<int>(r.integer("max_iterations", c.max_iterations));
  if (c.max_iterations < 1) ObjectReader::fail(r.child("max_iterations"), "max_iterations must be at least 1");
  if (r.has("shift")) c.shift = r.number("shift");
  r.finish();
  return c;
}

/// {"axes": [{"boundary": "dirichlet"|"periodic"|"closed", "lo", "hi", "points"}]}
inline grids::UniformGrid read_grid(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const json& axes = r.raw("axes");
  if (!axes.is_array() || axes.empty() || axes.size() > 3) ObjectReader::fail(r.child("axes"), "expected 1 to 3 axes");
  std::vector<grids::Axis> out;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    ObjectReader a(axes[k], r.child("axes") + "/" + std::to_string(k));
    const std::string kind = a.string("boundary", "dirichlet");
    const double lo = a.number("lo"), hi = a.number("hi");
    const long long n = a.integer("points");
    if (!(hi > lo)) ObjectReader::fail(a.child("hi"), "hi must exceed lo");
    if (n < 3) ObjectReader::fail(a.child("points"), "need at least 3 points");
    const auto un = static_cast<std::size_t>(n);
    if (kind == "dirichlet")
      out.push_back(grids::Axis::dirichlet_interval(lo, hi, un));
    else if (kind == "periodic")
      out.push_back(grids::Axis::periodic_interval(lo, hi, un));
    else if (kind == "closed")
      out.push_back(grids::Axis::closed_interval(lo, hi, un));
    else
      ObjectReader::fail(a.child("boundary"), "expected dirichlet, periodic or closed");
    a.finish();
  }
  r.finish();
  return grids::UniformGrid(std::move(out));
}

inline json to_json(const grids::UniformGrid& g) {
  json axes = json::array();
  for (const auto& a : g.axes())
    axes.push_back({{"points", a.points}, {"spacing", a.spacing}, {"origin", a.origin}, {"boundary", grids::to_string(a.boundary)}});
  return {{"dimension", g.dimension()}, {"axes", axes}};
}

// ---------------------------------------------------------------------------
// Meshes

inline json to_json(const dec::PeriodicMesh& m) {
  return {{"dimension", m.dimension()}, {"cells", m.cells()}, {"lengths", m.lengths()}};
}

inline dec::MeshPtr mesh_from_json(const json& j, const std::string& path = "") {
  ObjectReader r(j, path);
  const long long dim = r.integer("dimension");
  const auto cells = r.integers("cells");
  const Vector lengths = r.numbers("lengths");
  r.finish();
  if (dim != 1 && dim != 2) ObjectReader::fail(r.child("dimension"), "mesh dimension must be 1 or 2");
  if (cells.size() != static_cast<std::size_t>(dim)) ObjectReader::fail(r.child("cells"), "one cell count per axis required");
  if (lengths.size() != static_cast<std::size_t>(dim)) ObjectReader::fail(r.child("lengths"), "one length per axis required");
  std::vector<std::size_t> c;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k] < 1) ObjectReader::fail(r.child("cells") + "/" + std::to_string(k), "cell counts must be positive");
    c.push_back(static_cast<std::size_t>(cells[k]));
  }
  return dec::make_mesh(std::move(c), lengths);
}

// ---------------------------------------------------------------------------
// Results

inline json to_json(const probkit::MaxEntSolution& s) {
  return {{"beta", s.beta},
          {"log_normalizer", s.log_normalizer},
          {"multipliers", {s.multipliers.first, s.multipliers.second}},
          {"distribution", s.distribution.weights()},
          {"entropy", probkit::entropy(s.distribution)},
          {"mean_residual", s.mean_residual},
          {"iterations", s.iterations}};
}

inline json to_json(const schroedinger::GroundStateResult& r) {
  return {{"total_energy", r.total_energy}, {"kinetic", r.kinetic},   {"potential", r.potential},
          {"residual", r.residual},         {"iterations", r.iterations}, {"coupling", r.coupling},
          {"grid", to_json(r.state.field().grid())}};
}

inline json check_bound(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// Deterministic part of the suite output (no timings).
inline json results_json(const suite::SuiteReport& rep) {
  json rows = json::array();
  for (const auto& c : rep.criteria) {
    json checks = json::array();
    for (const auto& k : c.checks)
      checks.push_back({{"label", k.label},
                        {"measured", check_bound(k.measured)},
                        {"lower", check_bound(k.lower)},
                        {"upper", check_bound(k.upper)},
                        {"pass", k.pass}});
    json row = {{"name", c.name}, {"description", c.description}, {"pass", c.pass}, {"checks", checks}, {"budget_ms", c.budget_ms}};
    if (!c.error.empty()) row["error"] = c.error;
    rows.push_back(row);
  }
  json failing = json::array();
  for (const auto& c : rep.criteria)
    if (!c.pass) failing.push_back(c.name);
  return {{"criteria", rows}, {"all_pass", rep.all_pass}, {"failing", failing}};
}

inline json timing_json(const suite::SuiteReport& rep) {
  json t = json::object();
  for (const auto& c : rep.criteria) t[c.name] = {{"runtime_ms", c.runtime_ms}, {"budget_ms", c.budget_ms}, {"within_budget", c.within_budget}};
  return t;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_collapse_csv(std::ostream& os, const std::vector<schroedinger::CollapseRow>& rows) {
  os << "sigma,kinetic,potential,total\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.sigma, r.kinetic, r.potential, r.total);
    os << buf;
  }
}

inline void write_frame_csv(std::ostream& os, const cartan::FrameField& f) {
  os << "x,y,e00,e01,e10,e11\n";
  char buf[192];
  for (std::size_t p = 0; p < f.coframe.size(); ++p) {
    const auto x = f.grid.coordinates(p);
    const auto& e = f.coframe[p];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", x[0], x[1], e[0][0], e[0][1], e[1][0], e[1][1]);
    os << buf;
  }
}

/// Reads a coframe CSV written by write_frame_csv back onto `grid`.
inline cartan::FrameField read_frame_csv(std::istream& is, const grids::UniformGrid& grid) {
  std::string line;
  std::getline(is, line);
  require(line == "x,y,e00,e01,e10,e11", "unexpected frame CSV header '" + line + "'");
  std::vector<cartan::Mat2> e;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    double v[6];
    require(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3], &v[4], &v[5]) == 6,
            "frame CSV row " + std::to_string(row) + " is malformed");
    e.push_back({{{v[2], v[3]}, {v[4], v[5]}}});
  }
  return cartan::FrameField(grid, std::move(e));
}

}  // namespace jaynes::io
