#include "pipeflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace pipeflow {

namespace {

double norm2(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double max_abs(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

std::string at_time(const char* what, double t) {
  std::ostringstream msg;
  msg << what << " in step to t=" << t;
  return msg.str();
}

}  // namespace

void SolverConfig::validate() const {
  if (!(newton_tol_abs > 0.0 && newton_tol_abs < 1.0) ||
      !(newton_tol_rel > 0.0 && newton_tol_rel < 1.0)) {
    throw std::invalid_argument("Newton tolerances must lie in (0, 1)");
  }
  if (max_newton_iters <= 0 || max_damping_halvings <= 0 || max_step_rejections <= 0) {
    throw std::invalid_argument("solver iteration limits must be positive");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
}

StepResult step(const DiscreteProblem& problem, const State& old, double tau,
                const SolverConfig& cfg) {
  const double t_next = old.t + tau;
  State current = old;
  current.t = t_next;

  std::vector<double> u = problem.pack(current);
  std::vector<double> r = problem.residual_vector(current, old, tau);
  double norm = norm2(r);

  StepStats stats;
  stats.initial_residual_norm = norm;
  const double target = std::max(cfg.newton_tol_abs, cfg.newton_tol_rel * norm);

  while (norm > target) {
    if (stats.newton_iters >= cfg.max_newton_iters) {
      throw NoConvergence(at_time("Newton iteration budget exhausted", t_next), t_next);
    }
    std::vector<double> du;
    try {
      BandLU lu(problem.jacobian(current, old, tau));
      for (double& x : r) x = -x;
      du = lu.solve(r);
    } catch (const SingularMatrixError&) {
      throw NoConvergence(at_time("singular Jacobian", t_next), t_next);
    }

    bool accepted = false;
    bool saw_positive = false;
    double lambda = 1.0;
    for (int halving = 0; halving <= cfg.max_damping_halvings; ++halving) {
      std::vector<double> trial_u(u);
      for (std::size_t i = 0; i < u.size(); ++i) trial_u[i] += lambda * du[i];
      State trial = problem.unpack(trial_u, current);
      if (is_positive(trial)) {
        saw_positive = true;
        std::vector<double> trial_r = problem.residual_vector(trial, old, tau);
        const double trial_norm = norm2(trial_r);
        if (trial_norm < norm) {
          u = std::move(trial_u);
          current = std::move(trial);
          r = std::move(trial_r);
          norm = trial_norm;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
      ++stats.damping_events;
    }
    ++stats.newton_iters;
    if (!accepted) {
      if (!saw_positive) {
        throw PositivityLoss(at_time("no damped Newton update keeps rho, theta > 0", t_next),
                             t_next);
      }
      throw NoConvergence(at_time("damped Newton update does not reduce the residual", t_next),
                          t_next);
    }
  }
  stats.final_residual_norm = norm;
  return {std::move(current), stats};
}

RunResult run(const DiscreteProblem& problem, const State& initial,
              const SolverConfig& cfg, const RunOptions& options) {
  cfg.validate();
  State cur = initial;
  problem.apply_boundary(cur);
  if (!is_positive(cur)) {
    throw std::invalid_argument("initial state must have rho, theta > 0");
  }

  RunResult out;
  out.initial = cur;
  out.balance.push_back(make_report(problem, cur, nullptr));
  if (options.keep_all_states) out.states.push_back(cur);

  std::vector<double> pending = options.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snap = 0;
  const double eps = 1e-9 * cfg.tau;
  const auto take_snapshots = [&](const State& prev, const State& now) {
    while (next_snap < pending.size() && now.t >= pending[next_snap] - eps) {
      const double target = pending[next_snap];
      const bool prev_closer = std::abs(prev.t - target) < std::abs(now.t - target);
      out.snapshots.push_back(prev_closer ? prev : now);
      ++next_snap;
    }
  };
  take_snapshots(cur, cur);

  const double t_end = cur.t + cfg.t_end;
  double tau = cfg.tau;
  int accepted_since_cut = 0;
  int rejections_this_step = 0;
  while (t_end - cur.t > eps) {
    const double remaining = t_end - cur.t;
    double dt = std::min(tau, remaining);
    if (remaining - dt < eps) dt = remaining;
    try {
      StepResult res = step(problem, cur, dt, cfg);
      if (remaining - dt < eps) res.state.t = t_end;
      out.steps.push_back(res.stats);
      out.balance.push_back(
          make_report(problem, res.state, &out.balance.back(), res.stats.newton_iters));
      take_snapshots(cur, res.state);
      cur = std::move(res.state);
      if (options.keep_all_states) out.states.push_back(cur);
      rejections_this_step = 0;
      if (tau < cfg.tau && ++accepted_since_cut >= 2) {
        tau = cfg.tau;
        accepted_since_cut = 0;
      }
    } catch (const SolverError& err) {
      ++out.rejected_steps;
      StepStats rejected;
      rejected.rejected = true;
      out.steps.push_back(rejected);
      if (++rejections_this_step > cfg.max_step_rejections) throw;
      tau *= 0.5;
      accepted_since_cut = 0;
    }
  }
  // Requested times beyond the last step map to the final state.
  while (next_snap < pending.size()) {
    out.snapshots.push_back(cur);
    ++next_snap;
  }
  out.final = std::move(cur);
  return out;
}

SteadyResult steady_state(const DiscreteProblem& problem, const State& initial,
                          const SolverConfig& cfg, const SteadyOptions& options) {
  cfg.validate();
  State cur = initial;
  problem.apply_boundary(cur);
  if (!is_positive(cur)) {
    throw std::invalid_argument("initial state must have rho, theta > 0");
  }

  SteadyResult out;
  double tau = cfg.tau;
  int failures = 0;
  while (out.steps < options.max_steps) {
    try {
      StepResult res = step(problem, cur, tau, cfg);
      const State& nxt = res.state;
      const double incr = std::max(
          {max_abs_diff(nxt.rho, cur.rho) / max_abs(nxt.rho),
           max_abs_diff(nxt.m, cur.m) / std::max(max_abs(nxt.m), 1e-300),
           max_abs_diff(nxt.theta, cur.theta) / max_abs(nxt.theta)});
      cur = res.state;
      ++out.steps;
      failures = 0;
      out.last_increment = incr;
      if (incr < options.tol) {
        out.state = std::move(cur);
        return out;
      }
      if (res.stats.newton_iters <= 4) tau = std::min(tau * options.growth, options.max_tau);
    } catch (const SolverError&) {
      if (++failures > cfg.max_step_rejections) throw;
      tau *= 0.5;
    }
  }
  throw NoConvergence("steady state not reached within step budget", cur.t);
}

}  // namespace pipeflow
