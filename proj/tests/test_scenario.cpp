#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "pipeflow/output.hpp"
#include "pipeflow/scenario.hpp"

using namespace pipeflow;

namespace {

const std::string kScenarioDir = PIPEFLOW_SCENARIO_DIR;

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("shipped scenario files") {
  const Scenario sod = parse_scenario_file(kScenarioDir + "/sod.cfg");
  CHECK(sod.bc.mode == BoundaryMode::ClosedPipe);
  CHECK(sod.coeffs == PhysCoeffs{});
  CHECK(sod.eos == GasModel::ideal_gas(1.0, 2.5));
  CHECK(sod.init.rho(-0.1) == 1.0);
  CHECK(sod.init.rho(0.0) == 3.0);
  CHECK(sod.init.m(1.0) == 0.0);
  CHECK(sod.init.theta(1.0) == 1.0);

  const Scenario pipe = parse_scenario_file(kScenarioDir + "/pipeline.cfg");
  CHECK(pipe == pipeline_scenario(500, 0.01, 32.0));
  CHECK(pipe.bc == BoundarySpec::in_out(0.3, 1.2, 0.3));
  CHECK(pipe.coeffs == PhysCoeffs{0, 20, 0, 5, 1});
}

TEST_CASE("serialization round-trip") {
  for (const Scenario& sc : {sod_scenario(), pipeline_scenario()}) {
    const std::string text = serialize_scenario(sc);
    const Scenario back = parse_scenario(text);
    CHECK(back == sc);
    CHECK(serialize_scenario(back) == text);
  }

  Scenario custom = sod_scenario(40);
  PowerLawParams p;
  p.c_gamma = 1.0;
  p.gamma = 1.4;
  p.c_log = 0.5;
  p.c_powers = {{0.1, 2.0}};
  p.c_v_poly = {2.0, 0.1};
  custom.eos = GasModel::power_law(p);
  custom.init.theta = FieldExpr(PiecewiseConstant{{-1.0, 1.0}, {1.0, 1.5, 1.2}});
  CHECK(parse_scenario(serialize_scenario(custom)) == custom);
}

TEST_CASE("validation errors name the offending key") {
  Scenario sc = sod_scenario();
  std::string text = serialize_scenario(sc);
  const auto replace = [](std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  CHECK(error_of(replace(text, "\"n_elems\": 100", "\"n_elems\": 1")).find("mesh.n_elems") !=
        std::string::npos);
  CHECK(error_of(replace(text, "\"b\": 0.0", "\"b\": -1.0")).find("coeffs") != std::string::npos);
  CHECK(error_of(replace(text, "\"tau\": 0.05", "\"tau\": 0.05, \"dt\": 1")).find("time.dt") !=
        std::string::npos);
  CHECK(error_of(replace(text, "\"kind\": \"IdealGas\"", "\"kind\": \"Steam\"")).find("eos") !=
        std::string::npos);
  const std::string syntax = error_of("{\n  \"name\": \"x\",\n  \"mesh\": {\n}");
  CHECK(syntax.find("syntax error") != std::string::npos);
  CHECK(syntax.find("line") != std::string::npos);
  CHECK_THROWS_AS(parse_scenario_file(kScenarioDir + "/missing.cfg"), ScenarioError);
}

TEST_CASE("overrides") {
  const Scenario base = pipeline_scenario();
  Overrides ov;
  ov.tau = 0.05;
  ov.n_elems = 100;
  ov.t_end = 3.0;
  ov.out_dir = "elsewhere";
  const Scenario sc = apply_overrides(base, ov);
  CHECK(sc.time.tau == 0.05);
  CHECK(sc.solver.tau == 0.05);
  CHECK(sc.mesh.n_elems == 100);
  CHECK(sc.time.t_end == 3.0);
  CHECK(sc.time.snapshot_times == std::vector<double>{1.0, 2.0});
  CHECK(sc.output.directory == "elsewhere");

  Overrides bad;
  bad.n_elems = 1;
  CHECK_THROWS_AS(apply_overrides(base, bad), ScenarioError);
}

TEST_CASE("snapshot columns are consistent") {
  const Scenario sc = sod_scenario(20);
  const DiscreteProblem pb = make_problem(sc);
  State s = initial_state(sc, pb);
  for (int i = 1; i < 20; ++i) s.m[i] = 0.05 * i;
  const Snapshot snap = make_snapshot(pb, s);
  CHECK(snap.midpoints.size() == 20);
  CHECK(snap.nodes.size() == 21);
  for (const auto* rows : {&snap.midpoints, &snap.nodes}) {
    for (const SnapshotRow& r : *rows) {
      CHECK(std::abs(r.p - r.rho * r.rho * pb.model().dP_drho({r.rho, r.theta})) <= 1e-12);
      CHECK(std::abs(r.u * r.rho - r.m) <= 1e-12);
    }
  }
  std::ostringstream out;
  write_snapshot_csv(out, snap);
  const std::string csv = out.str();
  CHECK(csv.find("# midpoints\nx,rho,m,theta,p,u,e,s\n") != std::string::npos);
  CHECK(csv.find("# nodes\nx,rho,m,theta,p,u,e,s\n") != std::string::npos);
}
