#include "pipeflow/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace pipeflow {

namespace {

void require_positive_state(const State& state) {
  if (!is_positive(state)) {
    throw PositivityError("diagnostics require a positive state");
  }
}

// Calls fn(weight, rho, m, theta, m_x, theta_x) at every quadrature point.
template <typename Fn>
void for_each_point(const DiscreteProblem& problem, const State& state, Fn&& fn) {
  const Mesh1D& mesh = problem.mesh();
  const QuadratureRule& quad = problem.quadrature();
  const double h = mesh.width();
  for (int k = 0; k < mesh.n_elems; ++k) {
    const double mx = (state.m[k + 1] - state.m[k]) / h;
    const double thx = (state.theta[k + 1] - state.theta[k]) / h;
    for (int q = 0; q < quad.size(); ++q) {
      const double xi = quad.points[q];
      const double m = state.m[k] * (1.0 - xi) + state.m[k + 1] * xi;
      const double theta = state.theta[k] * (1.0 - xi) + state.theta[k + 1] * xi;
      fn(quad.weights[q] * h, state.rho[k], m, theta, mx, thx);
    }
  }
}

}  // namespace

double total_mass(const DiscreteProblem& problem, const State& state) {
  problem.check_shape(state);
  require_positive_state(state);
  double M = 0.0;
  for_each_point(problem, state,
                 [&](double w, double rho, double, double, double, double) {
                   M += w * rho;
                 });
  return M;
}

double total_energy(const DiscreteProblem& problem, const State& state) {
  problem.check_shape(state);
  require_positive_state(state);
  const GasModel& gas = problem.model();
  double E = 0.0;
  for_each_point(problem, state,
                 [&](double w, double rho, double m, double theta, double, double) {
                   E += w * (0.5 * m * m / rho +
                             rho * gas.internal_energy({rho, theta}));
                 });
  return E;
}

double total_entropy(const DiscreteProblem& problem, const State& state) {
  problem.check_shape(state);
  require_positive_state(state);
  const GasModel& gas = problem.model();
  double S = 0.0;
  for_each_point(problem, state,
                 [&](double w, double rho, double, double theta, double, double) {
                   S += w * rho * gas.entropy({rho, theta});
                 });
  return S;
}

Dissipation dissipation_terms(const DiscreteProblem& problem, const State& state) {
  problem.check_shape(state);
  require_positive_state(state);
  const PhysCoeffs& c = problem.coeffs();
  Dissipation out;
  for_each_point(problem, state,
                 [&](double w, double rho, double m, double theta, double mx,
                     double thx) {
                   const double inv_rho2 = 1.0 / (rho * rho);
                   out.visc += w * c.a * inv_rho2 * mx * mx;
                   out.fric += w * c.b * std::abs(m) * m * m * inv_rho2;
                   out.cond += w * c.c * thx * thx / (theta * theta);
                   out.exch_E += w * c.d * (theta - c.theta_ext);
                   out.exch_S += w * c.d * (c.theta_ext - theta) / theta;
                 });
  return out;
}

BalanceReport make_report(const DiscreteProblem& problem, const State& state,
                          const BalanceReport* previous, int newton_iters) {
  BalanceReport r;
  r.t = state.t;
  r.M = total_mass(problem, state);
  r.E = total_energy(problem, state);
  r.S = total_entropy(problem, state);
  if (previous != nullptr) {
    r.dM = r.M - previous->M;
    r.dE = r.E - previous->E;
    r.dS = r.S - previous->S;
  }
  r.rates = dissipation_terms(problem, state);
  r.newton_iters = newton_iters;
  return r;
}

std::vector<BalanceReport> balance_series(const DiscreteProblem& problem,
                                          std::span<const State> trajectory) {
  std::vector<BalanceReport> out;
  out.reserve(trajectory.size());
  for (const State& s : trajectory) {
    out.push_back(make_report(problem, s, out.empty() ? nullptr : &out.back()));
  }
  return out;
}

TotalChange total_change(std::span<const BalanceReport> series) {
  if (series.empty()) throw std::invalid_argument("empty balance series");
  const BalanceReport& first = series.front();
  const BalanceReport& last = series.back();
  return {last.M - first.M, last.E - first.E, last.S - first.S};
}

SteadyDistance distance_to_steady(const DiscreteProblem& problem,
                                  const State& state, const State& steady) {
  problem.check_shape(state);
  problem.check_shape(steady);
  const Mesh1D& mesh = problem.mesh();
  const QuadratureRule& quad = problem.quadrature();
  const double h = mesh.width();
  double sr = 0.0, sm = 0.0, st = 0.0;
  for (int k = 0; k < mesh.n_elems; ++k) {
    const double dr = state.rho[k] - steady.rho[k];
    for (int q = 0; q < quad.size(); ++q) {
      const double xi = quad.points[q];
      const double w = quad.weights[q] * h;
      const double dm = (state.m[k] - steady.m[k]) * (1.0 - xi) +
                        (state.m[k + 1] - steady.m[k + 1]) * xi;
      const double dt = (state.theta[k] - steady.theta[k]) * (1.0 - xi) +
                        (state.theta[k + 1] - steady.theta[k + 1]) * xi;
      sr += w * dr * dr;
      sm += w * dm * dm;
      st += w * dt * dt;
    }
  }
  return {std::sqrt(sr), std::sqrt(sm), std::sqrt(st)};
}

}  // namespace pipeflow
