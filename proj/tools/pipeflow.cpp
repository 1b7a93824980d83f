// Command-line front end: run, refine, verify-sod, steady.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 solver failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pipeflow/banded.hpp"
#include "pipeflow/diagnostics.hpp"
#include "pipeflow/output.hpp"
#include "pipeflow/riemann.hpp"
#include "pipeflow/scenario.hpp"
#include "pipeflow/solver.hpp"

namespace fs = std::filesystem;
using namespace pipeflow;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonArgs {
  std::string config;
  double tau = 0.0;
  int n_elems = 0;
  double t_end = -1.0;
  std::string out_dir;
  bool plot = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config, "scenario file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--tau", args.tau, "time step")->check(CLI::PositiveNumber);
  cmd->add_option("--n-elems", args.n_elems, "number of elements");
  cmd->add_option("--t-end", args.t_end, "final time")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out-dir", args.out_dir, "output directory");
}

Scenario load(const CommonArgs& args) {
  Overrides ov;
  if (args.tau > 0) ov.tau = args.tau;
  if (args.n_elems != 0) ov.n_elems = args.n_elems;
  if (args.t_end >= 0) ov.t_end = args.t_end;
  if (!args.out_dir.empty()) ov.out_dir = args.out_dir;
  return apply_overrides(parse_scenario_file(args.config), ov);
}

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_t%.4f.csv", t);
  return buf;
}

void write_snapshot(const DiscreteProblem& pb, const State& s, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  write_snapshot_csv(out, make_snapshot(pb, s));
}

void write_plot(const std::vector<std::string>& csv_files, const fs::path& dir) {
  std::ostringstream script;
  write_snapshot_plot_script(script, csv_files, (dir / "snapshots.png").string());
  write_file((dir / "snapshots.gp").string(), script.str());
}

int cmd_run(const CommonArgs& args) {
  const Scenario sc = load(args);
  const DiscreteProblem pb = make_problem(sc);
  const fs::path dir = prepare_dir(sc.output.directory);

  RunOptions opt;
  opt.snapshot_times = sc.time.snapshot_times;
  const RunResult res = run(pb, initial_state(sc, pb), solver_config(sc), opt);

  // Initial state, requested times and the final state, without repeats.
  std::vector<const State*> states{&res.initial};
  for (const State& s : res.snapshots) states.push_back(&s);
  states.push_back(&res.final);
  std::vector<std::string> files;
  for (const State* s : states) {
    const std::string name = snapshot_name(s->t);
    if (std::find(files.begin(), files.end(), name) != files.end()) continue;
    write_snapshot(pb, *s, dir / name);
    files.push_back(name);
  }
  {
    std::ofstream out(dir / "balance.csv");
    write_balance_csv(out, res.balance);
  }
  if (args.plot) {
    std::vector<std::string> paths;
    for (const auto& f : files) paths.push_back((dir / f).string());
    write_plot(paths, dir);
  }

  const TotalChange tc = total_change(res.balance);
  std::printf("%s: %zu steps to t=%.6g (%d rejected), %zu snapshots in %s\n", sc.name.c_str(),
              res.steps.size(), res.final.t, res.rejected_steps, files.size(),
              dir.string().c_str());
  std::printf("dM=%.6e dE=%.6e dS=%.6e\n", tc.dM, tc.dE, tc.dS);
  return 0;
}

int cmd_refine(const CommonArgs& args, int levels) {
  if (levels < 2) throw UsageError("refine needs --levels >= 2");
  const Scenario base = load(args);
  const double length = base.mesh.length();
  // Coarsest level: h = tau = 1/20 unless overridden.
  const double h0 = args.n_elems != 0 ? length / args.n_elems : 1.0 / 20;
  const double tau0 = args.tau > 0 ? args.tau : h0;

  std::vector<std::future<RefineRow>> jobs;
  for (int i = 0; i < levels; ++i) {
    const double scale = std::ldexp(1.0, -i);
    Scenario sc = base;
    sc.mesh.n_elems = static_cast<int>(std::lround(length / (h0 * scale)));
    sc.time.tau = sc.solver.tau = tau0 * scale;
    sc.time.snapshot_times.clear();
    validate_scenario(sc);
    jobs.push_back(std::async(std::launch::async, [sc] {
      const DiscreteProblem pb = make_problem(sc);
      const RunResult res = run(pb, initial_state(sc, pb), solver_config(sc));
      const TotalChange tc = total_change(res.balance);
      return RefineRow{sc.mesh.width(), sc.time.tau, tc.dM, tc.dE, tc.dS};
    }));
  }
  std::vector<RefineRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());

  const fs::path dir = prepare_dir(base.output.directory);
  {
    std::ofstream out(dir / "refine.csv");
    write_refine_csv(out, rows);
  }
  std::printf("%10s %10s %12s %12s %12s\n", "h", "tau", "dM", "dE", "dS");
  for (const auto& r : rows) {
    std::printf("%10.6f %10.6f %12.4e %12.6f %12.6f\n", r.h, r.tau, r.dM, r.dE, r.dS);
  }
  return 0;
}

// Riemann data from the left/right limits of the initial fields at x0.
RiemannState riemann_side(const Scenario& sc, double x) {
  const double rho = sc.init.rho(x), m = sc.init.m(x), theta = sc.init.theta(x);
  return {rho, m / rho, sc.eos.pressure({rho, theta})};
}

int cmd_verify_sod(const CommonArgs& args) {
  const Scenario sc = load(args);
  if (sc.eos.kind() != GasKind::IdealGas || sc.bc.mode != BoundaryMode::ClosedPipe ||
      !(sc.coeffs == PhysCoeffs{0, 0, 0, 0, sc.coeffs.theta_ext})) {
    throw UsageError("verify-sod needs an inviscid ideal-gas closed-pipe scenario");
  }
  if (!(sc.time.t_end > 0)) throw UsageError("verify-sod needs t_end > 0");
  const FieldExpr& rho0 = sc.init.rho;
  if (!rho0.is_piecewise() || rho0.piecewise().breaks.size() != 1) {
    throw UsageError("verify-sod needs init.rho with exactly one break");
  }
  const double x0 = rho0.piecewise().breaks.front();
  const double eps = 1e-9 * (sc.mesh.x_right - sc.mesh.x_left);
  const ExactRiemannSolution exact(riemann_side(sc, x0 - eps), riemann_side(sc, x0 + eps),
                                   sc.eos.adiabatic_index());

  const DiscreteProblem pb = make_problem(sc);
  const RunResult res = run(pb, initial_state(sc, pb), solver_config(sc));
  const double t = res.final.t;
  const ProfileComparison cmp = compare_profile(pb.mesh(), res.final.rho, exact, t, x0);

  const fs::path dir = prepare_dir(sc.output.directory);
  std::ofstream out(dir / "verify_sod.csv");
  out.precision(17);
  out << "x,rho,rho_exact,u,u_exact,p,p_exact\n";
  const Snapshot snap = make_snapshot(pb, res.final);
  for (const SnapshotRow& r : snap.midpoints) {
    const RiemannState e = exact.sample((r.x - x0) / t);
    out << r.x << ',' << r.rho << ',' << e.rho << ',' << r.u << ',' << e.u << ',' << r.p << ','
        << e.p << '\n';
  }
  write_snapshot(pb, res.final, dir / snapshot_name(t));

  std::printf("t=%.6g h=%.6g\n", t, pb.mesh().width());
  std::printf("star state: p=%.6f u=%.6f rho_left=%.6f rho_right=%.6f\n", exact.p_star(),
              exact.u_star(), exact.rho_star_left(), exact.rho_star_right());
  std::printf("L1 density error %.6e\n", cmp.l1_error);
  std::printf("shock exact x=%.6f simulated x=%.6f offset=%.6f (%.2f h)\n", cmp.exact_shock_x,
              cmp.simulated_shock_x, cmp.shock_offset, cmp.shock_offset / pb.mesh().width());
  return 0;
}

int cmd_steady(const CommonArgs& args) {
  const Scenario sc = load(args);
  if (sc.bc.mode != BoundaryMode::InOut || sc.bc.m_in != sc.bc.m_out) {
    throw UsageError("steady needs an InOut scenario with m_in == m_out");
  }
  const DiscreteProblem pb = make_problem(sc);
  const State s0 = initial_state(sc, pb);
  const SolverConfig cfg = solver_config(sc);
  const SteadyResult steady = steady_state(pb, s0, cfg);

  std::vector<double> times;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    if (t <= sc.time.t_end) times.push_back(t);
  }
  RunOptions opt;
  opt.snapshot_times = times;
  const RunResult res = run(pb, s0, cfg, opt);
  std::vector<HistoryRow> history;
  for (const State& s : res.snapshots) {
    history.push_back({s.t, distance_to_steady(pb, s, steady.state)});
  }

  const fs::path dir = prepare_dir(sc.output.directory);
  write_snapshot(pb, steady.state, dir / "steady.csv");
  {
    std::ofstream out(dir / "history.csv");
    write_history_csv(out, history);
  }
  if (args.plot) {
    std::vector<std::string> files{(dir / "steady.csv").string()};
    for (const State& s : res.snapshots) {
      write_snapshot(pb, s, dir / snapshot_name(s.t));
      files.push_back((dir / snapshot_name(s.t)).string());
    }
    write_plot(files, dir);
  }

  std::printf("steady state after %d steps (last increment %.2e), mass %.12f\n", steady.steps,
              steady.last_increment, total_mass(pb, steady.state));
  std::printf("%8s %10s %10s %10s\n", "t", "drho", "dm", "dtheta");
  for (const auto& r : history) {
    std::printf("%8.3f %10.4f %10.4f %10.4f\n", r.t, r.distance.drho, r.distance.dm,
                r.distance.dtheta);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-isothermal pipe flow simulator"};
  app.require_subcommand(1);

  CommonArgs run_args, refine_args, verify_args, steady_args;
  int levels = 5;

  CLI::App* run_cmd = app.add_subcommand("run", "march a scenario to t_end");
  add_common(run_cmd, run_args);
  run_cmd->add_flag("--plot", run_args.plot, "also write a gnuplot script");

  CLI::App* refine_cmd = app.add_subcommand("refine", "balance table under h = tau refinement");
  add_common(refine_cmd, refine_args);
  refine_cmd->add_option("--levels", levels, "number of refinement levels (>= 2)");

  CLI::App* verify_cmd = app.add_subcommand("verify-sod", "compare with the exact Riemann solution");
  add_common(verify_cmd, verify_args);

  CLI::App* steady_cmd = app.add_subcommand("steady", "steady state and distance history");
  add_common(steady_cmd, steady_args);
  steady_cmd->add_flag("--plot", steady_args.plot, "also write a gnuplot script");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (*refine_cmd) return cmd_refine(refine_args, levels);
    if (*verify_cmd) return cmd_verify_sod(verify_args);
    if (*steady_cmd) return cmd_steady(steady_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SolverError& e) {
    std::cerr << "solver failure at t=" << e.time() << ": " << e.what() << '\n';
    return kExitSolver;
  } catch (const PositivityError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const SingularMatrixError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const RiemannError& e) {
    std::cerr << "oracle failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
