// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <string>
#include <vector>

#include "pipeflow/diagnostics.hpp"
#include "pipeflow/riemann.hpp"
#include "pipeflow/scenario.hpp"
#include "pipeflow/solver.hpp"

using namespace pipeflow;

namespace {

int g_failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", id, title.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool within(double value, double reference, double rel) {
  return std::abs(value - reference) <= rel * std::abs(reference);
}

struct SodLevel {
  int inv_h;
  RunResult result;
};

SodLevel run_sod(int inv_h, double t_end = 1.0) {
  const double h = 1.0 / inv_h;
  const Scenario sc = sod_scenario(static_cast<int>(std::lround(5.0 / h)), h, t_end);
  const DiscreteProblem pb = make_problem(sc);
  return {inv_h, run(pb, initial_state(sc, pb), solver_config(sc))};
}

// Table of energy and entropy changes over [0, 1] for h = tau.
constexpr std::array<int, 5> kLevels{20, 40, 80, 160, 320};
constexpr std::array<double, 5> kTableE{-0.0509, -0.0400, -0.0321, -0.0268, -0.0237};
constexpr std::array<double, 5> kTableS{0.0797, 0.0549, 0.0384, 0.0276, 0.0207};

void criterion_refinement(const std::vector<SodLevel>& levels) {
  bool pass = true;
  std::string detail;
  double prev_E = -1e300, prev_S = 1e300;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const TotalChange tc = total_change(levels[i].result.balance);
    const double M0 = levels[i].result.balance.front().M;
    const bool ok_M = std::abs(tc.dM) <= 1e-10 * M0;
    const bool ok_E = tc.dE < 0 && within(tc.dE, kTableE[i], 0.25);
    const bool ok_S = tc.dS > 0 && within(tc.dS, kTableS[i], 0.25);
    const bool ok_trend = tc.dE > prev_E && tc.dS < prev_S;
    pass = pass && ok_M && ok_E && ok_S && ok_trend;
    prev_E = tc.dE;
    prev_S = tc.dS;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%sh=1/%d dM=%.1e dE=%.4f (%+.1f%%) dS=%.4f (%+.1f%%)",
                  i ? "; " : "", levels[i].inv_h, tc.dM, tc.dE,
                  100 * (tc.dE - kTableE[i]) / std::abs(kTableE[i]), tc.dS,
                  100 * (tc.dS - kTableS[i]) / std::abs(kTableS[i]));
    detail += buf;
  }
  report(1, "Sod energy/entropy refinement table", pass, detail);
}

void criterion_stepwise(const SodLevel& level) {
  const double slack = 10 * SolverConfig{}.newton_tol_abs;
  int violations = 0;
  double worst_E = -1e300, worst_S = 1e300;
  const auto& bal = level.result.balance;
  for (std::size_t i = 1; i < bal.size(); ++i) {
    worst_E = std::max(worst_E, bal[i].dE);
    worst_S = std::min(worst_S, bal[i].dS);
    if (bal[i].dE > slack || bal[i].dS < -slack) ++violations;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "h=tau=1/40, %zu steps, max dE=%.3e, min dS=%.3e, violations=%d",
                bal.size() - 1, worst_E, worst_S, violations);
  report(2, "step-wise energy decrease and entropy increase", violations == 0, buf);
}

struct Verdict {
  bool pass;
  std::string detail;
};

// Criteria 3 and 4 share one pipeline run.
std::array<Verdict, 2> criteria_pipeline() {
  const Scenario sc = pipeline_scenario(500, 0.01, 32.0);
  const DiscreteProblem pb = make_problem(sc);
  const State s0 = initial_state(sc, pb);
  const SolverConfig cfg = solver_config(sc);

  const SteadyResult steady = steady_state(pb, s0, cfg);
  RunOptions opt;
  opt.snapshot_times = {1, 2, 4, 8, 16, 32};
  const RunResult res = run(pb, s0, cfg, opt);

  const std::array<double, 6> times{1, 2, 4, 8, 16, 32};
  const std::array<std::array<double, 6>, 3> table{{
      {0.6190, 0.4730, 0.3117, 0.1426, 0.0318, 0.0017},
      {0.3560, 0.1629, 0.0986, 0.0424, 0.0091, 0.0005},
      {0.0916, 0.0719, 0.0422, 0.0183, 0.0041, 0.0002},
  }};
  const char* names[3] = {"drho", "dm", "dtheta"};
  std::array<std::array<double, 6>, 3> got{};
  for (std::size_t j = 0; j < times.size(); ++j) {
    const SteadyDistance d = distance_to_steady(pb, res.snapshots.at(j), steady.state);
    got[0][j] = d.drho;
    got[1][j] = d.dm;
    got[2][j] = d.dtheta;
  }

  bool values_ok = true, monotone = true, tail_ok = true;
  std::string detail;
  for (int c = 0; c < 3; ++c) {
    detail += std::string(c ? "; " : "") + names[c] + "=";
    for (std::size_t j = 0; j < times.size(); ++j) {
      values_ok = values_ok && within(got[c][j], table[c][j], 0.25);
      if (j > 0) monotone = monotone && got[c][j] < got[c][j - 1];
      detail += fmt(j ? ",%.4f" : "%.4f", got[c][j]);
    }
    // Exponential tail: decay rate per unit time on [8,16] and [16,32].
    const double r1 = std::log(got[c][3] / got[c][4]) / 8.0;
    const double r2 = std::log(got[c][4] / got[c][5]) / 16.0;
    tail_ok = tail_ok && r1 > 0 && r2 > 0 && std::max(r1, r2) <= 1.5 * std::min(r1, r2);
    detail += fmt(" (rate %.3f", r1) + fmt("/%.3f)", r2);
  }
  detail += std::string(" | within 25%: ") + (values_ok ? "yes" : "no") +
            ", monotone: " + (monotone ? "yes" : "no") + ", exponential tail: " +
            (tail_ok ? "yes" : "no");
  const Verdict history{values_ok && monotone && tail_ok, detail};

  double worst_step = 0, worst_total = 0;
  for (std::size_t i = 0; i < res.balance.size(); ++i) {
    if (i > 0) worst_step = std::max(worst_step, std::abs(res.balance[i].dM) / res.balance[i - 1].M);
    worst_total = std::max(worst_total, std::abs(res.balance[i].M - 15.0));
  }
  worst_total = std::max(worst_total, std::abs(total_mass(pb, steady.state) - 15.0));
  char buf[200];
  std::snprintf(buf, sizeof buf, "max relative step drift %.2e, max |M-15| %.2e over %zu steps",
                worst_step, worst_total, res.balance.size() - 1);
  return {history, Verdict{worst_step <= 1e-10 && worst_total <= 1e-8, buf}};
}

// Central-difference oracle, step 1e-5 relative to the argument.
double diff(const std::function<double(double)>& f, double x) {
  const double eps = 1e-5 * x;
  return (f(x + eps) - f(x - eps)) / (2 * eps);
}

void criterion_eos() {
  const auto start = std::chrono::steady_clock::now();
  PowerLawParams pl;
  pl.c_gamma = 1.0;
  pl.gamma = 1.4;
  pl.c_log = 1.0;
  pl.c_v_poly = {1.0};
  const GasModel models[2] = {GasModel::ideal_gas(1.0, 2.5), GasModel::power_law(pl)};

  auto bad = [](double lhs, double rhs) { return std::abs(lhs - rhs) > 1e-8 * (1 + std::abs(lhs)); };
  int failures = 0, checks = 0;
  for (const GasModel& g : models) {
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const double rho = 0.1 + 9.9 * i / 19.0, th = 0.1 + 9.9 * j / 19.0;
        auto e_of_rho = [&](double r) { return g.internal_energy({r, th}); };
        auto e_of_th = [&](double t) { return g.internal_energy({rho, t}); };
        auto p_of_th = [&](double t) { return g.pressure({rho, t}); };
        auto s_of_rho = [&](double r) { return g.entropy({r, th}); };
        auto s_of_th = [&](double t) { return g.entropy({rho, t}); };
        const double p = g.pressure({rho, th});
        const double e_rho = diff(e_of_rho, rho);
        failures += bad(e_rho, (p - th * diff(p_of_th, th)) / (rho * rho));
        failures += bad(th * diff(s_of_rho, rho), e_rho - p / (rho * rho));
        failures += bad(th * diff(s_of_th, th), diff(e_of_th, th));
        const double h = g.enthalpy({rho, th});
        failures += std::abs(h - (g.internal_energy({rho, th}) + p / rho)) > 1e-8 * std::abs(h);
        checks += 4;
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d identity checks on 20x20 grid, %d failures, %.3f s", checks,
                failures, secs);
  report(5, "thermodynamic identities", failures == 0 && secs < 1.0, buf);
}

double sod_energy_change(double tau, double t_end) {
  const Scenario sc = sod_scenario(100, tau, t_end);
  const DiscreteProblem pb = make_problem(sc);
  return std::abs(total_change(run(pb, initial_state(sc, pb), solver_config(sc)).balance).dE);
}

void criterion_dissipation_order() {
  const std::array<double, 3> taus{1e-2, 5e-3, 2.5e-3};
  std::array<double, 3> dE{};
  for (std::size_t i = 0; i < taus.size(); ++i) dE[i] = sod_energy_change(taus[i], 0.1);
  const double o1 = std::log2(dE[0] / dE[1]);
  const double o2 = std::log2(dE[1] / dE[2]);
  const bool pass = o1 >= 0.7 && o1 <= 1.3 && o2 >= 0.7 && o2 <= 1.3;
  // Informational only: the same ratio for two further halvings.
  const double dE4 = sod_energy_change(1.25e-3, 0.1), dE5 = sod_energy_change(6.25e-4, 0.1);
  char buf[260];
  std::snprintf(buf, sizeof buf,
                "|dE| = %.3e, %.3e, %.3e; observed orders %.3f, %.3f "
                "(further halvings, not graded: %.3f, %.3f)",
                dE[0], dE[1], dE[2], o1, o2, std::log2(dE[2] / dE4), std::log2(dE4 / dE5));
  report(6, "numerical dissipation is first order in tau", pass, buf);
}

void criterion_oracle(const SodLevel& coarse, const SodLevel& fine) {
  const ExactRiemannSolution exact({1.0, 0.0, 1.0}, {3.0, 0.0, 3.0}, 1.4);
  auto compare = [&](const SodLevel& lvl) {
    const Mesh1D mesh = build_mesh(-2.5, 2.5, 5 * lvl.inv_h);
    return compare_profile(mesh, lvl.result.final.rho, exact, 1.0);
  };
  const ProfileComparison c = compare(coarse), f = compare(fine);
  const double h = 1.0 / fine.inv_h;
  const bool pass = f.shock_offset <= 3 * h && f.l1_error < c.l1_error;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "h=1/320 shock at %.4f vs exact %.4f (offset %.4f, limit %.4f); "
                "L1 error 1/80 %.4f, 1/320 %.4f",
                f.simulated_shock_x, f.exact_shock_x, f.shock_offset, 3 * h, c.l1_error,
                f.l1_error);
  report(7, "agreement with the exact Riemann solution", pass, buf);
}

}  // namespace

int main() {
  std::vector<std::future<SodLevel>> jobs;
  for (int inv_h : kLevels) jobs.push_back(std::async(std::launch::async, run_sod, inv_h, 1.0));
  auto pipeline = std::async(std::launch::async, criteria_pipeline);

  std::vector<SodLevel> levels;
  try {
    for (auto& j : jobs) levels.push_back(j.get());
  } catch (const std::exception& e) {
    report(1, "Sod energy/entropy refinement table", false, e.what());
    return 1;
  }
  criterion_refinement(levels);
  criterion_stepwise(levels[1]);
  try {
    const auto [history, mass] = pipeline.get();
    report(3, "pipeline distance-to-steady-state history", history.pass, history.detail);
    report(4, "open-boundary mass bookkeeping", mass.pass, mass.detail);
  } catch (const std::exception& e) {
    report(3, "pipeline distance-to-steady-state history", false, e.what());
    report(4, "open-boundary mass bookkeeping", false, e.what());
  }
  criterion_eos();
  criterion_dissipation_order();
  criterion_oracle(levels[2], levels[4]);
  std::printf("[SKIP] criterion 8: figure appearance and convergence rates -- excluded by "
              "definition, covered by criteria 2, 6 and 7\n");

  std::printf("%s: %d failing criteria\n", g_failures ? "FAILED" : "PASSED", g_failures);
  return g_failures ? 1 : 0;
}
