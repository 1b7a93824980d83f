#pragma once

#include <span>
#include <vector>

#include "pipeflow/assembly.hpp"

namespace pipeflow {

// Global functionals, all integrated with the problem's quadrature rule.

/// M = int rho_h
double total_mass(const DiscreteProblem& problem, const State& state);
/// E = int m_h^2 / (2 rho_h) + rho_h e(rho_h, theta_h)
double total_energy(const DiscreteProblem& problem, const State& state);
/// S = int rho_h s(rho_h, theta_h)
double total_entropy(const DiscreteProblem& problem, const State& state);

/// Dissipation and exchange rates of the generalized model at one state.
/// For a closed pipe, dE/dt = -(visc + fric + exch_E) and
/// dS/dt = cond + exch_S hold for the continuous model.
struct Dissipation {
  double visc = 0.0;    // int a / rho^2 |d_x m|^2
  double fric = 0.0;    // int b |m|^3 / rho^2
  double cond = 0.0;    // int c / theta^2 |d_x theta|^2
  double exch_E = 0.0;  // int d (theta - theta*)
  double exch_S = 0.0;  // int d (theta* - theta) / theta
};

Dissipation dissipation_terms(const DiscreteProblem& problem, const State& state);

struct BalanceReport {
  double t = 0.0;
  double M = 0.0, E = 0.0, S = 0.0;
  double dM = 0.0, dE = 0.0, dS = 0.0;
  Dissipation rates;
  int newton_iters = 0;
};

/// Report for `state`; increments are taken against `previous` when given
/// and are zero otherwise.
BalanceReport make_report(const DiscreteProblem& problem, const State& state,
                          const BalanceReport* previous, int newton_iters = 0);

/// One report per state of a trajectory, increments between neighbours.
std::vector<BalanceReport> balance_series(const DiscreteProblem& problem,
                                          std::span<const State> trajectory);

struct TotalChange {
  double dM, dE, dS;
};

/// Final minus initial totals of a balance series.
TotalChange total_change(std::span<const BalanceReport> series);

struct SteadyDistance {
  double drho, dm, dtheta;
};

/// L2 norms of the field differences, integrated with the shared rule.
SteadyDistance distance_to_steady(const DiscreteProblem& problem,
                                  const State& state, const State& steady);

}  // namespace pipeflow
