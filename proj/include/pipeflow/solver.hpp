#pragma once

#include <stdexcept>
#include <vector>

#include "pipeflow/assembly.hpp"
#include "pipeflow/diagnostics.hpp"

namespace pipeflow {

struct SolverConfig {
  double newton_tol_abs = 1e-11;
  double newton_tol_rel = 1e-9;
  int max_newton_iters = 50;
  int max_damping_halvings = 12;
  double tau = 0.01;
  double t_end = 1.0;
  int max_step_rejections = 8;

  void validate() const;
  bool operator==(const SolverConfig&) const = default;
};

struct StepStats {
  int newton_iters = 0;
  double initial_residual_norm = 0.0;
  double final_residual_norm = 0.0;
  int damping_events = 0;
  bool rejected = false;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  /// Time level the failed step was trying to reach.
  double time() const { return t_; }

 private:
  double t_;
};

/// Newton iteration budget exhausted.
class NoConvergence : public SolverError {
 public:
  using SolverError::SolverError;
};

/// No damping factor produced a positive iterate.
class PositivityLoss : public SolverError {
 public:
  using SolverError::SolverError;
};

struct StepResult {
  State state;
  StepStats stats;
};

/// One implicit Euler step by damped Newton, starting from the old state.
/// The Newton update is halved while it would make a rho or theta dof
/// non-positive or fail to reduce the residual norm.
StepResult step(const DiscreteProblem& problem, const State& old, double tau,
                const SolverConfig& cfg);

struct RunOptions {
  std::vector<double> snapshot_times;
  /// Record the initial state and the state after every accepted step
  /// (memory heavy).
  bool keep_all_states = false;
};

struct RunResult {
  State initial;
  State final;
  /// Snapshots at the requested times (nearest completed step).
  std::vector<State> snapshots;
  /// Initial plus every accepted state when RunOptions::keep_all_states is set.
  std::vector<State> states;
  /// One report for t = 0 followed by one per accepted step.
  std::vector<BalanceReport> balance;
  std::vector<StepStats> steps;
  int rejected_steps = 0;
};

/// Marches from `initial` (boundary values are applied first) to cfg.t_end
/// with time step cfg.tau. A failed step is retried with half the step, up
/// to cfg.max_step_rejections times; the nominal step is restored after two
/// consecutive accepted steps.
RunResult run(const DiscreteProblem& problem, const State& initial,
              const SolverConfig& cfg, const RunOptions& options = {});

struct SteadyOptions {
  double tol = 1e-10;
  int max_steps = 20000;
  /// Geometric growth factor for the step once Newton converges comfortably.
  double growth = 2.0;
  double max_tau = 1e4;
};

struct SteadyResult {
  State state;
  int steps = 0;
  double last_increment = 0.0;
};

/// Time-marches with an increasing step until the largest relative increment
/// over the three components (max-norm) drops below options.tol. The mass
/// equation keeps the total mass of `initial`, which selects the steady
/// state among the solutions of the stationary system.
SteadyResult steady_state(const DiscreteProblem& problem, const State& initial,
                          const SolverConfig& cfg, const SteadyOptions& options = {});

}  // namespace pipeflow
