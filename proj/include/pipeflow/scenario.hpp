#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pipeflow/assembly.hpp"
#include "pipeflow/eos.hpp"
#include "pipeflow/mesh.hpp"
#include "pipeflow/solver.hpp"

namespace pipeflow {

/// Parse or validation failure; the message starts with the offending key
/// path (e.g. "mesh.n_elems: ...").
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeSpec {
  double tau = 0.01;
  double t_end = 1.0;
  std::vector<double> snapshot_times;

  bool operator==(const TimeSpec&) const = default;
};

struct OutputSpec {
  std::string directory = "out";
  std::vector<std::string> formats{"csv"};

  bool operator==(const OutputSpec&) const = default;
};

struct InitialData {
  FieldExpr rho{1.0};
  FieldExpr m{0.0};
  FieldExpr theta{1.0};

  bool operator==(const InitialData&) const = default;
};

struct Scenario {
  std::string name = "scenario";
  Mesh1D mesh;
  GasModel eos = GasModel::ideal_gas(1.0, 2.5);
  PhysCoeffs coeffs;
  BoundarySpec bc;
  InitialData init;
  TimeSpec time;
  OutputSpec output;
  SolverConfig solver;
  int quadrature_points = 3;

  bool operator==(const Scenario& other) const;
};

/// Reads a JSON scenario file. Throws ScenarioError with the key path on any
/// invalid entry and with line/column context on syntax errors.
Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& scenario);

/// Re-checks every invariant; throws ScenarioError.
void validate_scenario(const Scenario& scenario);

struct Overrides {
  std::optional<double> tau;
  std::optional<int> n_elems;
  std::optional<double> t_end;
  std::optional<std::string> out_dir;
};

/// Applies command-line overrides; snapshot times past a shortened t_end are
/// dropped. The result is validated.
Scenario apply_overrides(Scenario scenario, const Overrides& overrides);

DiscreteProblem make_problem(const Scenario& scenario);
/// Projected initial data with boundary values applied.
State initial_state(const Scenario& scenario, const DiscreteProblem& problem);
SolverConfig solver_config(const Scenario& scenario);

/// The Sod shock tube on [-2.5, 2.5]: rho = 1 | 3, m = 0, theta = 1,
/// closed pipe, ideal gas R = 1, c_v = 2.5, inviscid.
Scenario sod_scenario(int n_elems = 100, double tau = 0.05, double t_end = 1.0);
/// Gas injection through a pipe on [-2.5, 2.5]: rho = 3, m = 0, theta = 1,
/// m = 0.3 and theta = 1.2 at the inlet, m = 0.3 at the outlet,
/// a = 0, b = 20, c = 0, d = 5, theta* = 1.
Scenario pipeline_scenario(int n_elems = 500, double tau = 0.01, double t_end = 32.0);

}  // namespace pipeflow
