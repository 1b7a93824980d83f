#include "pipeflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pipeflow {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!keys.contains(key)) fail(path + "." + key, "unknown key");
  }
}

const json& section(const json& root, const std::string& key) {
  if (!root.contains(key)) fail(key, "missing section");
  const json& s = root.at(key);
  if (!s.is_object()) fail(key, "expected an object");
  return s;
}

double number(const json& obj, const std::string& path, const std::string& key,
              std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(path + "." + key, "missing value");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path + "." + key, "must be finite");
  return x;
}

int integer(const json& obj, const std::string& path, const std::string& key,
            std::optional<int> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(path + "." + key, "missing value");
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

GasModel parse_eos(const json& s) {
  if (!s.contains("kind") || !s.at("kind").is_string()) fail("eos.kind", "missing kind");
  GasKind kind;
  try {
    kind = gas_kind_from_string(s.at("kind").get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail("eos.kind", e.what());
  }
  if (kind == GasKind::IdealGas) {
    reject_unknown_keys(s, "eos", {"kind", "R", "c_v"});
    const double R = number(s, "eos", "R");
    const double c_v = number(s, "eos", "c_v");
    if (!(R > 0.0)) fail("eos.R", "must be > 0");
    if (!(c_v > 0.0)) fail("eos.c_v", "must be > 0");
    return GasModel::ideal_gas(R, c_v);
  }

  reject_unknown_keys(s, "eos",
                      {"kind", "R", "c_v", "c_gamma", "gamma", "C_powers", "c_prime",
                       "c_second"});
  PowerLawParams p;
  p.c_gamma = number(s, "eos", "c_gamma");
  p.gamma = number(s, "eos", "gamma");
  p.c_log = number(s, "eos", "R", 0.0);
  if (!s.contains("c_v")) fail("eos.c_v", "missing value");
  const json& cv = s.at("c_v");
  p.c_v_poly = cv.is_number() ? std::vector<double>{cv.get<double>()}
                              : number_list(cv, "eos.c_v");
  if (p.c_v_poly.empty()) fail("eos.c_v", "needs at least one coefficient");
  if (s.contains("C_powers")) {
    const json& terms = s.at("C_powers");
    if (!terms.is_array()) fail("eos.C_powers", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string path = "eos.C_powers[" + std::to_string(i) + "]";
      if (!terms[i].is_object()) fail(path, "expected {coeff, exponent}");
      reject_unknown_keys(terms[i], path, {"coeff", "exponent"});
      p.c_powers.push_back({number(terms[i], path, "coeff"),
                            number(terms[i], path, "exponent")});
    }
  }
  p.c_prime = number(s, "eos", "c_prime", 0.0);
  p.c_second = number(s, "eos", "c_second", 0.0);
  if (!(p.gamma > 1.0)) fail("eos.gamma", "must be > 1");
  try {
    return GasModel::power_law(p);
  } catch (const std::invalid_argument& e) {
    fail("eos", e.what());
  }
}

json eos_to_json(const GasModel& model) {
  const PowerLawParams& p = model.params();
  if (model.kind() == GasKind::IdealGas) {
    return {{"kind", "IdealGas"}, {"R", p.c_log}, {"c_v", p.c_v_poly.front()}};
  }
  json j = {{"kind", "PowerLaw"}, {"c_gamma", p.c_gamma}, {"gamma", p.gamma},
            {"R", p.c_log},       {"c_prime", p.c_prime}, {"c_second", p.c_second}};
  j["c_v"] = p.c_v_poly.size() == 1 ? json(p.c_v_poly.front()) : json(p.c_v_poly);
  json terms = json::array();
  for (const auto& t : p.c_powers) terms.push_back({{"coeff", t.coeff}, {"exponent", t.exponent}});
  j["C_powers"] = terms;
  return j;
}

FieldExpr parse_field(const json& v, const std::string& path) {
  if (v.is_number()) return FieldExpr(v.get<double>());
  if (!v.is_object()) fail(path, "expected a number or {breaks, values}");
  reject_unknown_keys(v, path, {"breaks", "values"});
  if (!v.contains("breaks") || !v.contains("values")) {
    fail(path, "piecewise field needs 'breaks' and 'values'");
  }
  PiecewiseConstant pw{number_list(v.at("breaks"), path + ".breaks"),
                       number_list(v.at("values"), path + ".values")};
  try {
    return FieldExpr(std::move(pw));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

json field_to_json(const FieldExpr& f, const std::string& path) {
  if (f.is_constant()) return f.constant();
  if (f.is_piecewise()) {
    return {{"breaks", f.piecewise().breaks}, {"values", f.piecewise().values}};
  }
  fail(path, "callable initial data cannot be serialized");
}

Scenario from_json(const json& root) {
  if (!root.is_object()) fail("<root>", "expected an object");
  reject_unknown_keys(root, "<root>",
                      {"name", "mesh", "eos", "coeffs", "bc", "init", "time", "output",
                       "solver"});
  Scenario sc;
  if (root.contains("name")) {
    if (!root.at("name").is_string()) fail("name", "expected a string");
    sc.name = root.at("name").get<std::string>();
  }

  const json& mesh = section(root, "mesh");
  reject_unknown_keys(mesh, "mesh", {"x_left", "x_right", "n_elems"});
  sc.mesh = Mesh1D{number(mesh, "mesh", "x_left"), number(mesh, "mesh", "x_right"),
                   integer(mesh, "mesh", "n_elems")};

  sc.eos = parse_eos(section(root, "eos"));

  if (root.contains("coeffs")) {
    const json& c = section(root, "coeffs");
    reject_unknown_keys(c, "coeffs", {"a", "b", "c", "d", "theta_ext"});
    sc.coeffs = PhysCoeffs{number(c, "coeffs", "a", 0.0), number(c, "coeffs", "b", 0.0),
                           number(c, "coeffs", "c", 0.0), number(c, "coeffs", "d", 0.0),
                           number(c, "coeffs", "theta_ext", 1.0)};
  }

  const json& bc = section(root, "bc");
  if (!bc.contains("mode") || !bc.at("mode").is_string()) fail("bc.mode", "missing mode");
  try {
    sc.bc.mode = boundary_mode_from_string(bc.at("mode").get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail("bc.mode", e.what());
  }
  if (sc.bc.mode == BoundaryMode::InOut) {
    reject_unknown_keys(bc, "bc", {"mode", "m_in", "theta_in", "m_out"});
    sc.bc.m_in = number(bc, "bc", "m_in");
    sc.bc.theta_in = number(bc, "bc", "theta_in");
    sc.bc.m_out = number(bc, "bc", "m_out");
  } else {
    reject_unknown_keys(bc, "bc", {"mode"});
  }

  const json& init = section(root, "init");
  reject_unknown_keys(init, "init", {"rho", "m", "theta"});
  for (const char* key : {"rho", "m", "theta"}) {
    if (!init.contains(key)) fail(std::string("init.") + key, "missing value");
  }
  sc.init.rho = parse_field(init.at("rho"), "init.rho");
  sc.init.m = parse_field(init.at("m"), "init.m");
  sc.init.theta = parse_field(init.at("theta"), "init.theta");

  const json& time = section(root, "time");
  reject_unknown_keys(time, "time", {"tau", "t_end", "snapshot_times"});
  sc.time.tau = number(time, "time", "tau");
  sc.time.t_end = number(time, "time", "t_end");
  if (time.contains("snapshot_times")) {
    sc.time.snapshot_times = number_list(time.at("snapshot_times"), "time.snapshot_times");
  }

  if (root.contains("output")) {
    const json& out = section(root, "output");
    reject_unknown_keys(out, "output", {"directory", "formats"});
    if (out.contains("directory")) {
      if (!out.at("directory").is_string()) fail("output.directory", "expected a string");
      sc.output.directory = out.at("directory").get<std::string>();
    }
    if (out.contains("formats")) {
      const json& f = out.at("formats");
      if (!f.is_array()) fail("output.formats", "expected an array of strings");
      sc.output.formats.clear();
      for (const auto& item : f) {
        if (!item.is_string()) fail("output.formats", "expected strings");
        sc.output.formats.push_back(item.get<std::string>());
      }
    }
  }

  if (root.contains("solver")) {
    const json& s = section(root, "solver");
    reject_unknown_keys(s, "solver",
                        {"newton_tol_abs", "newton_tol_rel", "max_newton_iters",
                         "max_damping_halvings", "max_step_rejections",
                         "quadrature_points"});
    SolverConfig d;
    sc.solver.newton_tol_abs = number(s, "solver", "newton_tol_abs", d.newton_tol_abs);
    sc.solver.newton_tol_rel = number(s, "solver", "newton_tol_rel", d.newton_tol_rel);
    sc.solver.max_newton_iters = integer(s, "solver", "max_newton_iters", d.max_newton_iters);
    sc.solver.max_damping_halvings =
        integer(s, "solver", "max_damping_halvings", d.max_damping_halvings);
    sc.solver.max_step_rejections =
        integer(s, "solver", "max_step_rejections", d.max_step_rejections);
    sc.quadrature_points = integer(s, "solver", "quadrature_points", 3);
  }
  sc.solver.tau = sc.time.tau;
  sc.solver.t_end = sc.time.t_end;

  validate_scenario(sc);
  return sc;
}

}  // namespace

bool Scenario::operator==(const Scenario& o) const {
  return name == o.name && mesh.x_left == o.mesh.x_left &&
         mesh.x_right == o.mesh.x_right && mesh.n_elems == o.mesh.n_elems &&
         eos == o.eos && coeffs == o.coeffs && bc == o.bc && init == o.init &&
         time == o.time && output == o.output && solver == o.solver &&
         quadrature_points == o.quadrature_points;
}

void validate_scenario(const Scenario& sc) {
  if (!(sc.mesh.x_left < sc.mesh.x_right)) fail("mesh.x_right", "must exceed x_left");
  if (sc.mesh.n_elems < 2) fail("mesh.n_elems", "must be >= 2");

  if (sc.eos.kind() == GasKind::PowerLaw) {
    const auto report = check_admissibility(sc.eos, {1e-2, 1e2}, {1e-2, 1e2}, 25);
    if (!report.pass) fail("eos", "potentials violate the admissibility inequalities");
  }

  const PhysCoeffs& c = sc.coeffs;
  if (!(c.a >= 0.0)) fail("coeffs.a", "must be >= 0");
  if (!(c.b >= 0.0)) fail("coeffs.b", "must be >= 0");
  if (!(c.c >= 0.0)) fail("coeffs.c", "must be >= 0");
  if (!(c.d >= 0.0)) fail("coeffs.d", "must be >= 0");
  if (!(c.theta_ext > 0.0)) fail("coeffs.theta_ext", "must be > 0");

  if (sc.bc.mode == BoundaryMode::InOut) {
    if (!(sc.bc.m_in > 0.0)) fail("bc.m_in", "must be > 0");
    if (!(sc.bc.m_out > 0.0)) fail("bc.m_out", "must be > 0");
    if (!(sc.bc.theta_in > 0.0)) fail("bc.theta_in", "must be > 0");
  }

  const Mesh1D mesh = sc.mesh;
  const auto positive_field = [&](const FieldExpr& f, Space space, const char* path) {
    std::vector<double> v;
    try {
      v = project_initial(f, mesh, space);
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
    if (!std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; })) {
      fail(path, "must be > 0 on the whole pipe");
    }
  };
  positive_field(sc.init.rho, Space::Q, "init.rho");
  positive_field(sc.init.theta, Space::W, "init.theta");
  try {
    project_initial(sc.init.m, mesh, Space::V);
  } catch (const std::exception& e) {
    fail("init.m", e.what());
  }

  if (!(sc.time.tau > 0.0)) fail("time.tau", "must be > 0");
  if (!(sc.time.t_end >= 0.0)) fail("time.t_end", "must be >= 0");
  for (std::size_t i = 0; i < sc.time.snapshot_times.size(); ++i) {
    const double t = sc.time.snapshot_times[i];
    if (!(t >= 0.0 && t <= sc.time.t_end)) {
      fail("time.snapshot_times[" + std::to_string(i) + "]", "must lie in [0, t_end]");
    }
  }

  if (sc.quadrature_points < 1) fail("solver.quadrature_points", "must be >= 1");
  try {
    SolverConfig cfg = sc.solver;
    cfg.tau = sc.time.tau;
    cfg.t_end = sc.time.t_end;
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    fail("solver", e.what());
  }
}

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("syntax error: ") + e.what());
  }
  return from_json(root);
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path + ": " + e.what());
  }
}

std::string serialize_scenario(const Scenario& sc) {
  json root;
  root["name"] = sc.name;
  root["mesh"] = {{"x_left", sc.mesh.x_left},
                  {"x_right", sc.mesh.x_right},
                  {"n_elems", sc.mesh.n_elems}};
  root["eos"] = eos_to_json(sc.eos);
  root["coeffs"] = {{"a", sc.coeffs.a},
                    {"b", sc.coeffs.b},
                    {"c", sc.coeffs.c},
                    {"d", sc.coeffs.d},
                    {"theta_ext", sc.coeffs.theta_ext}};
  if (sc.bc.mode == BoundaryMode::InOut) {
    root["bc"] = {{"mode", "InOut"},
                  {"m_in", sc.bc.m_in},
                  {"theta_in", sc.bc.theta_in},
                  {"m_out", sc.bc.m_out}};
  } else {
    root["bc"] = {{"mode", "ClosedPipe"}};
  }
  root["init"] = {{"rho", field_to_json(sc.init.rho, "init.rho")},
                  {"m", field_to_json(sc.init.m, "init.m")},
                  {"theta", field_to_json(sc.init.theta, "init.theta")}};
  root["time"] = {{"tau", sc.time.tau},
                  {"t_end", sc.time.t_end},
                  {"snapshot_times", sc.time.snapshot_times}};
  root["output"] = {{"directory", sc.output.directory}, {"formats", sc.output.formats}};
  root["solver"] = {{"newton_tol_abs", sc.solver.newton_tol_abs},
                    {"newton_tol_rel", sc.solver.newton_tol_rel},
                    {"max_newton_iters", sc.solver.max_newton_iters},
                    {"max_damping_halvings", sc.solver.max_damping_halvings},
                    {"max_step_rejections", sc.solver.max_step_rejections},
                    {"quadrature_points", sc.quadrature_points}};
  return root.dump(2) + "\n";
}

Scenario apply_overrides(Scenario sc, const Overrides& ov) {
  if (ov.tau) sc.time.tau = *ov.tau;
  if (ov.n_elems) sc.mesh.n_elems = *ov.n_elems;
  if (ov.t_end) {
    sc.time.t_end = *ov.t_end;
    std::erase_if(sc.time.snapshot_times,
                  [&](double t) { return t > sc.time.t_end; });
  }
  if (ov.out_dir) sc.output.directory = *ov.out_dir;
  sc.solver.tau = sc.time.tau;
  sc.solver.t_end = sc.time.t_end;
  validate_scenario(sc);
  return sc;
}

DiscreteProblem make_problem(const Scenario& sc) {
  return DiscreteProblem(build_mesh(sc.mesh.x_left, sc.mesh.x_right, sc.mesh.n_elems),
                         sc.eos, sc.coeffs, sc.bc,
                         QuadratureRule::gauss(sc.quadrature_points));
}

State initial_state(const Scenario& sc, const DiscreteProblem& problem) {
  State s;
  s.rho = project_initial(sc.init.rho, problem.mesh(), Space::Q);
  s.m = project_initial(sc.init.m, problem.mesh(), Space::V);
  s.theta = project_initial(sc.init.theta, problem.mesh(), Space::W);
  s.t = 0.0;
  problem.apply_boundary(s);
  return s;
}

SolverConfig solver_config(const Scenario& sc) {
  SolverConfig cfg = sc.solver;
  cfg.tau = sc.time.tau;
  cfg.t_end = sc.time.t_end;
  return cfg;
}

Scenario sod_scenario(int n_elems, double tau, double t_end) {
  Scenario sc;
  sc.name = "sod";
  sc.mesh = Mesh1D{-2.5, 2.5, n_elems};
  sc.eos = GasModel::ideal_gas(1.0, 2.5);
  sc.coeffs = PhysCoeffs{};
  sc.bc = BoundarySpec::closed_pipe();
  sc.init.rho = FieldExpr(PiecewiseConstant{{0.0}, {1.0, 3.0}});
  sc.init.m = FieldExpr(0.0);
  sc.init.theta = FieldExpr(1.0);
  sc.time = TimeSpec{tau, t_end, {t_end}};
  sc.output.directory = "out/sod";
  sc.solver.tau = tau;
  sc.solver.t_end = t_end;
  return sc;
}

Scenario pipeline_scenario(int n_elems, double tau, double t_end) {
  Scenario sc;
  sc.name = "pipeline";
  sc.mesh = Mesh1D{-2.5, 2.5, n_elems};
  sc.eos = GasModel::ideal_gas(1.0, 2.5);
  sc.coeffs = PhysCoeffs{0.0, 20.0, 0.0, 5.0, 1.0};
  sc.bc = BoundarySpec::in_out(0.3, 1.2, 0.3);
  sc.init.rho = FieldExpr(3.0);
  sc.init.m = FieldExpr(0.0);
  sc.init.theta = FieldExpr(1.0);
  std::vector<double> snaps;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    if (t <= t_end) snaps.push_back(t);
  }
  sc.time = TimeSpec{tau, t_end, snaps};
  sc.output.directory = "out/pipeline";
  sc.solver.tau = tau;
  sc.solver.t_end = t_end;
  return sc;
}

}  // namespace pipeflow
