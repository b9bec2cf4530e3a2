#include <gtest/gtest.h>

#include <sstream>

#include "jaynes/io.hpp"

using namespace jaynes;
using namespace jaynes::io;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Io, RunConfigRoundTrip) {
  const json j = json::parse(R"({"schema_version": "1.0", "command": "maxent",
                                 "parameters": {"levels": [0, 1], "mean": 0.25}, "output_dir": "o", "seed": 7})");
  const RunConfig c = parse_run_config(j);
  EXPECT_EQ(c.command, "maxent");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.output_dir, "o");
  EXPECT_EQ(to_json(c), j);
  EXPECT_EQ(to_json(parse_run_config(to_json(c))), j);
}

TEST(Io, RunConfigErrorsNameThePointer) {
  EXPECT_EQ(error_of([] { parse_run_config(json::parse(R"({"schema_version": "1.0", "command": "maxent", "sed": 1})")); }),
            "/sed: unknown key");
  EXPECT_EQ(error_of([] { parse_run_config(json::parse(R"({"schema_version": "1.0"})")); }), "/command: missing required key");
  EXPECT_NE(error_of([] { parse_run_config(json::parse(R"({"schema_version": "2.0", "command": "maxent"})")); })
                .find("/schema_version"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_run_config(json::parse(R"({"schema_version": "1.0", "command": "fly"})")); }).find("/command"),
            std::string::npos);
  EXPECT_EQ(error_of([] { parse_run_config(json::parse(R"({"schema_version": "1.0", "command": "maxent", "seed": -1})")); }),
            "/seed: seed must be nonnegative");
  EXPECT_EQ(error_of([] { parse_run_config(json::parse("[1]")); }), "/: expected an object");
  EXPECT_THROW(load_run_config("/nonexistent/config.json"), ValidationError);
}

TEST(Io, ParameterReaderRejectsUnknownKey) {
  const json p = json::parse(R"({"levels": [0, 1], "mean": 0.5, "levle": 3})");
  EXPECT_EQ(error_of([&] {
              ObjectReader r(p, "/parameters");
              r.numbers("levels");
              r.number("mean");
              r.finish();
            }),
            "/parameters/levle: unknown key");
  EXPECT_EQ(error_of([&] {
              ObjectReader r(json::parse(R"({"mean": "x"})"), "/parameters");
              r.number("mean");
            }),
            "/parameters/mean: expected a number");
}

TEST(Io, GridAndSolverReaders) {
  const json g = json::parse(R"({"axes": [{"boundary": "periodic", "lo": 0, "hi": 1, "points": 8},
                                          {"lo": 0, "hi": 2, "points": 5}]})");
  const auto grid = read_grid(g, "/parameters/grid");
  EXPECT_EQ(grid.size(), 40u);
  EXPECT_EQ(grid.axis(0).boundary, grids::Boundary::Periodic);
  EXPECT_EQ(grid.axis(1), grids::Axis::dirichlet_interval(0.0, 2.0, 5));
  EXPECT_EQ(error_of([] { read_grid(json::parse(R"({"axes": [{"lo": 1, "hi": 0, "points": 5}]})"), "/g"); }),
            "/g/axes/0/hi: hi must exceed lo");
  EXPECT_EQ(error_of([] { read_grid(json::parse(R"({"axes": [{"lo": 0, "hi": 1, "points": 5, "kind": 1}]})"), "/g"); }),
            "/g/axes/0/kind: unknown key");

  const auto s = read_solver(json::parse(R"({"solver": {"tolerance": 1e-6, "max_iterations": 9}})"), "/parameters", 3);
  EXPECT_EQ(s.tolerance, 1e-6);
  EXPECT_EQ(s.max_iterations, 9);
  EXPECT_EQ(s.seed, 3u);
  EXPECT_EQ(error_of([] { read_solver(json::parse(R"({"solver": {"tolerance": 0}})"), "/p", 1); }),
            "/p/solver/tolerance: tolerance must be positive");
}

TEST(Io, MeshRoundTrip) {
  const auto m = dec::make_mesh({5, 7}, {1.0, 2.5});
  const json j = to_json(*m);
  const auto back = mesh_from_json(j);
  EXPECT_EQ(to_json(*back), j);
  EXPECT_EQ(back->count(1), m->count(1));
  EXPECT_EQ(error_of([] { mesh_from_json(json::parse(R"({"dimension": 2, "cells": [4], "lengths": [1, 1]})")); }),
            "/cells: one cell count per axis required");
}

TEST(Io, FrameCsvRoundTrip) {
  const auto grid = cartan::chart_grid(cartan::cartesian_frame().chart, 5, 4);
  cartan::Perturbation p;
  p.amplitude = 0.2;
  const auto f = cartan::sample(cartan::cartesian_frame(1.0, {p}), grid);
  std::stringstream ss;
  write_frame_csv(ss, f);
  const auto back = read_frame_csv(ss, grid);
  ASSERT_EQ(back.coframe.size(), f.coframe.size());
  for (std::size_t i = 0; i < f.coframe.size(); ++i) EXPECT_EQ(back.coframe[i], f.coframe[i]);
  std::stringstream bad("x,y\n");
  EXPECT_THROW(read_frame_csv(bad, grid), ValidationError);
}

TEST(Io, ResultJson) {
  const auto s = probkit::solve_maxent(probkit::EnergyLevels({0.0, 1.0}), 0.25);
  const json j = to_json(s);
  EXPECT_NEAR(j["beta"].get<double>(), std::log(3.0), 1e-9);
  EXPECT_EQ(j["distribution"].size(), 2u);
  std::ostringstream os;
  write_collapse_csv(os, schroedinger::collapse_scan({1.0}));
  EXPECT_EQ(os.str().substr(0, 27), "sigma,kinetic,potential,tot");
}
