#include "pipeflow/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pipeflow {

bool is_positive(const State& state) {
  const auto pos = [](double v) { return v > 0.0; };
  return std::all_of(state.rho.begin(), state.rho.end(), pos) &&
         std::all_of(state.theta.begin(), state.theta.end(), pos);
}

void PhysCoeffs::validate() const {
  if (!(a >= 0.0) || !(b >= 0.0) || !(c >= 0.0) || !(d >= 0.0)) {
    throw std::invalid_argument("coefficients a, b, c, d must be >= 0");
  }
  if (!(theta_ext > 0.0)) {
    throw std::invalid_argument("theta_ext must be > 0");
  }
}

std::string to_string(BoundaryMode mode) {
  return mode == BoundaryMode::ClosedPipe ? "ClosedPipe" : "InOut";
}

BoundaryMode boundary_mode_from_string(const std::string& name) {
  if (name == "ClosedPipe") return BoundaryMode::ClosedPipe;
  if (name == "InOut") return BoundaryMode::InOut;
  throw std::invalid_argument("unknown boundary mode '" + name + "'");
}

BoundarySpec BoundarySpec::in_out(double m_in, double theta_in, double m_out) {
  BoundarySpec bc{BoundaryMode::InOut, m_in, theta_in, m_out};
  bc.validate();
  return bc;
}

void BoundarySpec::validate() const {
  if (mode == BoundaryMode::InOut) {
    if (!(m_in > 0.0) || !(m_out > 0.0)) {
      throw std::invalid_argument("InOut boundary requires m_in > 0 and m_out > 0");
    }
    if (!(theta_in > 0.0)) {
      throw std::invalid_argument("InOut boundary requires theta_in > 0");
    }
  }
}

DiscreteProblem::DiscreteProblem(Mesh1D mesh, GasModel model, PhysCoeffs coeffs,
                                 BoundarySpec bc, QuadratureRule quad)
    : mesh_(mesh),
      model_(std::move(model)),
      coeffs_(coeffs),
      bc_(bc),
      quad_(std::move(quad)),
      layout_(mesh_, true, true, bc.mode == BoundaryMode::InOut) {
  coeffs_.validate();
  bc_.validate();
}

void DiscreteProblem::apply_boundary(State& state) const {
  check_shape(state);
  const int n = mesh_.n_elems;
  if (bc_.mode == BoundaryMode::ClosedPipe) {
    state.m[0] = 0.0;
    state.m[n] = 0.0;
  } else {
    state.m[0] = bc_.m_in;
    state.m[n] = bc_.m_out;
    state.theta[0] = bc_.theta_in;
  }
}

void DiscreteProblem::check_shape(const State& state) const {
  const auto nq = static_cast<std::size_t>(mesh_.n_elems);
  if (state.rho.size() != nq || state.m.size() != nq + 1 ||
      state.theta.size() != nq + 1) {
    throw std::invalid_argument("state does not match mesh layout");
  }
}

std::vector<double> DiscreteProblem::pack(const State& state) const {
  check_shape(state);
  std::vector<double> u(layout_.n_free());
  const int n = mesh_.n_elems;
  for (int i = 0; i <= n; ++i) {
    if (layout_.m_index(i) >= 0) u[layout_.m_index(i)] = state.m[i];
    if (layout_.theta_index(i) >= 0) u[layout_.theta_index(i)] = state.theta[i];
    if (i < n) u[layout_.rho_index(i)] = state.rho[i];
  }
  return u;
}

State DiscreteProblem::unpack(std::span<const double> free, const State& base) const {
  check_shape(base);
  if (free.size() != static_cast<std::size_t>(layout_.n_free())) {
    throw std::invalid_argument("free vector has wrong length");
  }
  State s = base;
  const int n = mesh_.n_elems;
  for (int i = 0; i <= n; ++i) {
    if (layout_.m_index(i) >= 0) s.m[i] = free[layout_.m_index(i)];
    if (layout_.theta_index(i) >= 0) s.theta[i] = free[layout_.theta_index(i)];
    if (i < n) s.rho[i] = free[layout_.rho_index(i)];
  }
  return s;
}

DiscreteProblem::FullResidual DiscreteProblem::assemble(const State& next,
                                                        const State& old,
                                                        double tau) const {
  check_shape(next);
  check_shape(old);
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be > 0");

  const int n = mesh_.n_elems;
  const double h = mesh_.width();
  const double inv_tau = 1.0 / tau;
  const auto [a, b, c, d, theta_ext] = coeffs_;

  FullResidual r{std::vector<double>(n, 0.0), std::vector<double>(n + 1, 0.0),
                 std::vector<double>(n + 1, 0.0)};

  for (int k = 0; k < n; ++k) {
    const double rho = next.rho[k];
    const double rho_old = old.rho[k];
    if (!(rho > 0.0)) {
      std::ostringstream msg;
      msg << "non-positive density " << rho << " in element " << k;
      throw PositivityError(msg.str());
    }
    const double m_l = next.m[k], m_r = next.m[k + 1];
    const double th_l = next.theta[k], th_r = next.theta[k + 1];
    const double mx = (m_r - m_l) / h;
    const double thx = (th_r - th_l) / h;
    const double drho = (rho - rho_old) * inv_tau;
    const double inv_rho2 = 1.0 / (rho * rho);

    // Basis derivatives on this element: left node, right node.
    const double dphi[2] = {-1.0 / h, 1.0 / h};

    double rq = 0.0;
    double rv[2] = {0.0, 0.0};
    double rw[2] = {0.0, 0.0};

    for (int q = 0; q < quad_.size(); ++q) {
      const double xi = quad_.points[q];
      const double wq = quad_.weights[q] * h;
      const double phi[2] = {1.0 - xi, xi};

      const double m = m_l * phi[0] + m_r * phi[1];
      const double theta = th_l * phi[0] + th_r * phi[1];
      if (!(theta > 0.0)) {
        std::ostringstream msg;
        msg << "non-positive temperature " << theta << " in element " << k;
        throw PositivityError(msg.str());
      }
      const double m_old = old.m[k] * phi[0] + old.m[k + 1] * phi[1];
      const double theta_old = old.theta[k] * phi[0] + old.theta[k + 1] * phi[1];

      const ThermoValues tv = model_.evaluate({rho, theta});
      const double e_old = model_.internal_energy({rho_old, theta_old});
      const double dm = (m - m_old) * inv_tau;
      const double de = (tv.internal_energy - e_old) * inv_tau;
      const double inv_theta = 1.0 / theta;

      // mass: (d_tau rho + d_x m, q)
      rq += wq * (drho + mx);

      // flux equation: coefficient of v and of d_x v
      const double v_coef = dm / rho_old - 0.5 * m * inv_rho2 * drho +
                            0.5 * m * inv_rho2 * mx - tv.P_theta * thx +
                            b * std::abs(m) * m * inv_rho2;
      const double vx_coef = -(0.5 * m * m * inv_rho2 + tv.rhoP_rho) + a * inv_rho2 * mx;

      // temperature equation
      const double G = tv.Q - theta * tv.P_theta;
      const double source = rho_old * de - tv.pressure / rho * drho +
                            m * tv.P_theta * thx - d * (theta_ext - theta);

      for (int s = 0; s < 2; ++s) {
        rv[s] += wq * (v_coef * phi[s] + vx_coef * dphi[s]);

        const double w_over_theta = phi[s] * inv_theta;
        const double dx_w_over_theta =
            dphi[s] * inv_theta - phi[s] * thx * inv_theta * inv_theta;
        const double dx_m_w_over_theta = mx * w_over_theta + m * dx_w_over_theta;
        rw[s] += wq * (source * w_over_theta - G * dx_m_w_over_theta +
                       c * thx * dx_w_over_theta);
      }
    }

    r.q[k] += rq;
    r.v[k] += rv[0];
    r.v[k + 1] += rv[1];
    r.w[k] += rw[0];
    r.w[k + 1] += rw[1];
  }

  if (bc_.mode == BoundaryMode::InOut) {
    // Outflow term from integration by parts: (Q - theta P_theta) w / theta m_out.
    const double theta_r = next.theta[n];
    if (!(theta_r > 0.0)) throw PositivityError("non-positive outflow temperature");
    const ThermoValues tv = model_.evaluate({next.rho[n - 1], theta_r});
    r.w[n] += (tv.Q - theta_r * tv.P_theta) / theta_r * next.m[n];
  }
  return r;
}

Residual DiscreteProblem::residual(const State& next, const State& old,
                                   double tau) const {
  const FullResidual full = assemble(next, old, tau);
  Residual r;
  r.r_Q = full.q;
  for (int i = 0; i < layout_.n_V(); ++i) {
    if (!layout_.m_fixed(i)) r.r_V.push_back(full.v[i]);
    if (!layout_.theta_fixed(i)) r.r_W.push_back(full.w[i]);
  }
  return r;
}

std::vector<double> DiscreteProblem::flatten(const FullResidual& r) const {
  std::vector<double> out(layout_.n_free());
  const int n = mesh_.n_elems;
  for (int i = 0; i <= n; ++i) {
    if (layout_.m_index(i) >= 0) out[layout_.m_index(i)] = r.v[i];
    if (layout_.theta_index(i) >= 0) out[layout_.theta_index(i)] = r.w[i];
    if (i < n) out[layout_.rho_index(i)] = r.q[i];
  }
  return out;
}

std::vector<double> DiscreteProblem::residual_vector(const State& next,
                                                     const State& old,
                                                     double tau) const {
  return flatten(assemble(next, old, tau));
}

BandMatrix DiscreteProblem::jacobian(const State& next, const State& old,
                                     double tau, FdScheme scheme) const {
  const int kl = SpaceLayout::kLowerBandwidth;
  const int ku = SpaceLayout::kUpperBandwidth;
  const int nf = layout_.n_free();
  const int stride = kl + ku + 1;

  const std::vector<double> u = pack(next);
  std::vector<double> r0;
  if (scheme == FdScheme::Forward) r0 = residual_vector(next, old, tau);

  std::vector<double> step(nf);
  for (int j = 0; j < nf; ++j) step[j] = std::max(1e-7, 1e-7 * std::abs(u[j]));

  BandMatrix J(nf, kl, ku);
  std::vector<double> up(u);
  for (int color = 0; color < std::min(stride, nf); ++color) {
    for (int j = color; j < nf; j += stride) up[j] = u[j] + step[j];
    const std::vector<double> rp = residual_vector(unpack(up, next), old, tau);
    std::vector<double> rm;
    if (scheme == FdScheme::Central) {
      for (int j = color; j < nf; j += stride) up[j] = u[j] - step[j];
      rm = residual_vector(unpack(up, next), old, tau);
    }
    for (int j = color; j < nf; j += stride) {
      up[j] = u[j];
      const int i0 = std::max(0, j - ku);
      const int i1 = std::min(nf - 1, j + kl);
      for (int i = i0; i <= i1; ++i) {
        J(i, j) = scheme == FdScheme::Forward
                      ? (rp[i] - r0[i]) / step[j]
                      : (rp[i] - rm[i]) / (2.0 * step[j]);
      }
    }
  }
  return J;
}

}  // namespace pipeflow
