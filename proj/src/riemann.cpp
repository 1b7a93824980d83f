#include "pipeflow/riemann.hpp"

#include <algorithm>
#include <cmath>

namespace pipeflow {

namespace {

struct PressureFunction {
  double value;
  double derivative;
};

// Toro's f_K(p) for one side of the star region.
PressureFunction side_function(double p, const RiemannState& s, double c, double g) {
  if (p > s.p) {
    const double A = 2.0 / ((g + 1.0) * s.rho);
    const double B = (g - 1.0) / (g + 1.0) * s.p;
    const double root = std::sqrt(A / (p + B));
    return {(p - s.p) * root, root * (1.0 - 0.5 * (p - s.p) / (p + B))};
  }
  const double ratio = p / s.p;
  const double expo = (g - 1.0) / (2.0 * g);
  return {2.0 * c / (g - 1.0) * (std::pow(ratio, expo) - 1.0),
          std::pow(ratio, -(g + 1.0) / (2.0 * g)) / (s.rho * c)};
}

double star_density(double p_star, const RiemannState& s, double g) {
  const double ratio = p_star / s.p;
  if (p_star > s.p) {
    const double gm = (g - 1.0) / (g + 1.0);
    return s.rho * (ratio + gm) / (gm * ratio + 1.0);
  }
  return s.rho * std::pow(ratio, 1.0 / g);
}

}  // namespace

ExactRiemannSolution::ExactRiemannSolution(RiemannState left, RiemannState right,
                                           double gamma)
    : left_(left), right_(right), gamma_(gamma) {
  if (!(gamma > 1.0)) throw RiemannError("gamma must be > 1");
  if (!(left.rho > 0.0 && left.p > 0.0 && right.rho > 0.0 && right.p > 0.0)) {
    throw RiemannError("Riemann states need rho > 0 and p > 0");
  }
  const double g = gamma;
  c_l_ = std::sqrt(g * left.p / left.rho);
  c_r_ = std::sqrt(g * right.p / right.rho);
  const double du = right.u - left.u;
  if (2.0 * (c_l_ + c_r_) / (g - 1.0) <= du) {
    throw RiemannError("Riemann data generate vacuum");
  }

  const auto f = [&](double p) {
    const auto fl = side_function(p, left, c_l_, g);
    const auto fr = side_function(p, right, c_r_, g);
    return PressureFunction{fl.value + fr.value + du, fl.derivative + fr.derivative};
  };

  // f is increasing in p with f(0+) < 0 when no vacuum forms.
  double lo = 0.0;
  double hi = std::max(left.p, right.p);
  while (f(hi).value < 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw RiemannError("star pressure bracket failed");
  }
  // Two-rarefaction guess, always inside (0, hi].
  const double expo = (g - 1.0) / (2.0 * g);
  double p = std::pow((c_l_ + c_r_ - 0.5 * (g - 1.0) * du) /
                          (c_l_ / std::pow(left.p, expo) + c_r_ / std::pow(right.p, expo)),
                      1.0 / expo);
  if (!(p > lo && p < hi)) p = 0.5 * (lo + hi);

  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    const auto fp = f(p);
    if (fp.value < 0.0) lo = p; else hi = p;
    double next = p - fp.value / fp.derivative;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double change = std::abs(next - p) / (0.5 * (next + p));
    p = next;
    if (change < 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged) throw RiemannError("star pressure iteration did not converge");

  p_star_ = p;
  const auto fl = side_function(p, left, c_l_, g);
  const auto fr = side_function(p, right, c_r_, g);
  u_star_ = 0.5 * (left.u + right.u) + 0.5 * (fr.value - fl.value);
  rho_star_l_ = star_density(p, left, g);
  rho_star_r_ = star_density(p, right, g);
}

double ExactRiemannSolution::left_shock_speed() const {
  const double g = gamma_;
  return left_.u - c_l_ * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / left_.p +
                                    (g - 1.0) / (2.0 * g));
}

double ExactRiemannSolution::right_shock_speed() const {
  const double g = gamma_;
  return right_.u + c_r_ * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / right_.p +
                                     (g - 1.0) / (2.0 * g));
}

RiemannState ExactRiemannSolution::sample(double xi) const {
  const double g = gamma_;
  const double gm1 = g - 1.0;
  const double gp1 = g + 1.0;
  if (xi <= u_star_) {
    if (left_is_shock()) {
      return xi <= left_shock_speed() ? left_
                                      : RiemannState{rho_star_l_, u_star_, p_star_};
    }
    const double head = left_.u - c_l_;
    const double c_star = c_l_ * std::pow(p_star_ / left_.p, gm1 / (2.0 * g));
    const double tail = u_star_ - c_star;
    if (xi <= head) return left_;
    if (xi >= tail) return {rho_star_l_, u_star_, p_star_};
    const double base = 2.0 / gp1 + gm1 / (gp1 * c_l_) * (left_.u - xi);
    return {left_.rho * std::pow(base, 2.0 / gm1),
            2.0 / gp1 * (c_l_ + 0.5 * gm1 * left_.u + xi),
            left_.p * std::pow(base, 2.0 * g / gm1)};
  }
  if (right_is_shock()) {
    return xi >= right_shock_speed() ? right_
                                     : RiemannState{rho_star_r_, u_star_, p_star_};
  }
  const double head = right_.u + c_r_;
  const double c_star = c_r_ * std::pow(p_star_ / right_.p, gm1 / (2.0 * g));
  const double tail = u_star_ + c_star;
  if (xi >= head) return right_;
  if (xi <= tail) return {rho_star_r_, u_star_, p_star_};
  const double base = 2.0 / gp1 - gm1 / (gp1 * c_r_) * (right_.u - xi);
  return {right_.rho * std::pow(base, 2.0 / gm1),
          2.0 / gp1 * (-c_r_ + 0.5 * gm1 * right_.u + xi),
          right_.p * std::pow(base, 2.0 * g / gm1)};
}

RiemannState solve_riemann(RiemannState left, RiemannState right, double gamma,
                           double x_over_t) {
  return ExactRiemannSolution(left, right, gamma).sample(x_over_t);
}

ProfileComparison compare_profile(const Mesh1D& mesh, std::span<const double> rho,
                                  const ExactRiemannSolution& exact, double t,
                                  double x0) {
  if (!(t > 0.0)) throw std::invalid_argument("profile comparison needs t > 0");
  if (rho.size() != static_cast<std::size_t>(mesh.n_elems)) {
    throw std::invalid_argument("density vector does not match mesh");
  }
  const double h = mesh.width();
  ProfileComparison out{0.0, 0.0, x0, x0};
  for (int k = 0; k < mesh.n_elems; ++k) {
    const double xi = (mesh.midpoint(k) - x0) / t;
    out.l1_error += h * std::abs(rho[k] - exact.sample(xi).rho);
  }

  const double x_contact = x0 + exact.contact_speed() * t;
  const auto locate = [&](double x_shock) {
    const double half = 0.5 * std::abs(x_contact - x_shock);
    const double lo = std::max(mesh.x_left, x_shock - half);
    const double hi = std::min(mesh.x_right, x_shock + half);
    double best = -1.0;
    double where = x_shock;
    for (int k = 0; k + 1 < mesh.n_elems; ++k) {
      const double x_face = mesh.node(k + 1);
      if (x_face < lo || x_face > hi) continue;
      const double jump = std::abs(rho[k + 1] - rho[k]);
      if (jump > best) {
        best = jump;
        where = x_face;
      }
    }
    out.exact_shock_x = x_shock;
    out.simulated_shock_x = where;
    out.shock_offset = std::max(out.shock_offset, std::abs(where - x_shock));
  };
  if (exact.left_is_shock()) locate(x0 + exact.left_shock_speed() * t);
  if (exact.right_is_shock()) locate(x0 + exact.right_shock_speed() * t);
  return out;
}

}  // namespace pipeflow
