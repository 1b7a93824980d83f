#pragma once

#include <span>
#include <stdexcept>

#include "pipeflow/mesh.hpp"

namespace pipeflow {

/// Primitive state of an ideal polytropic gas.
struct RiemannState {
  double rho;
  double u;
  double p;
};

class RiemannError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Star region and wave fan of the exact solution of a Riemann problem.
class ExactRiemannSolution {
 public:
  /// Solves for the star pressure by safeguarded Newton iteration
  /// (bisection fallback, relative tolerance 1e-12). Throws RiemannError
  /// if the data generate vacuum.
  ExactRiemannSolution(RiemannState left, RiemannState right, double gamma);

  double p_star() const { return p_star_; }
  double u_star() const { return u_star_; }
  double rho_star_left() const { return rho_star_l_; }
  double rho_star_right() const { return rho_star_r_; }
  bool left_is_shock() const { return p_star_ > left_.p; }
  bool right_is_shock() const { return p_star_ > right_.p; }
  /// Shock speed of the left/right wave (meaningful only if it is a shock).
  double left_shock_speed() const;
  double right_shock_speed() const;
  double contact_speed() const { return u_star_; }

  /// State at x / t = xi.
  RiemannState sample(double xi) const;

 private:
  RiemannState left_, right_;
  double gamma_;
  double c_l_, c_r_;
  double p_star_, u_star_;
  double rho_star_l_, rho_star_r_;
};

RiemannState solve_riemann(RiemannState left, RiemannState right, double gamma,
                           double x_over_t);

struct ProfileComparison {
  double l1_error;        // sum_k h |rho_k - rho_exact(midpoint_k)|
  double shock_offset;    // max over shocks of |x_sim - x_exact|
  double exact_shock_x;   // position of the (last examined) exact shock
  double simulated_shock_x;
};

/// Compares P0 density coefficients at time t > 0 with the exact solution
/// of the Riemann problem with initial jump at x0. The simulated shock is
/// the steepest density jump between neighbouring elements inside a window
/// around the exact shock that reaches halfway to the contact.
ProfileComparison compare_profile(const Mesh1D& mesh, std::span<const double> rho,
                                  const ExactRiemannSolution& exact, double t,
                                  double x0 = 0.0);

}  // namespace pipeflow
