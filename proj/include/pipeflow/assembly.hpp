#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pipeflow/banded.hpp"
#include "pipeflow/eos.hpp"
#include "pipeflow/mesh.hpp"

namespace pipeflow {

/// Coefficient vectors of one time level: rho in Q_h (one value per
/// element), m in V_h and theta in W_h (nodal values).
struct State {
  std::vector<double> rho;
  std::vector<double> m;
  std::vector<double> theta;
  double t = 0.0;

  bool operator==(const State&) const = default;
};

/// True iff every rho and theta coefficient is strictly positive.
bool is_positive(const State& state);

/// Viscosity a, friction b, heat conduction c, wall heat transfer d and the
/// ambient temperature.
struct PhysCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double theta_ext = 1.0;

  void validate() const;
  bool operator==(const PhysCoeffs&) const = default;
};

enum class BoundaryMode { ClosedPipe, InOut };

std::string to_string(BoundaryMode mode);
BoundaryMode boundary_mode_from_string(const std::string& name);

/// ClosedPipe pins m = 0 at both ends. InOut prescribes the inflow mass flux
/// and temperature at x_left and the outflow mass flux at x_right.
struct BoundarySpec {
  BoundaryMode mode = BoundaryMode::ClosedPipe;
  double m_in = 0.0;
  double theta_in = 1.0;
  double m_out = 0.0;

  static BoundarySpec closed_pipe() { return {}; }
  static BoundarySpec in_out(double m_in, double theta_in, double m_out);

  void validate() const;
  bool operator==(const BoundarySpec&) const = default;
};

/// Residual blocks, one entry per free test basis function in increasing
/// dof order: r_Q for the mass equation, r_V for the flux equation and r_W
/// for the entropy/temperature equation.
struct Residual {
  std::vector<double> r_Q;
  std::vector<double> r_V;
  std::vector<double> r_W;
};

/// Raised when rho or theta is non-positive where the residual needs it.
class PositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FdScheme { Forward, Central };

/// One pipe with its gas, physical coefficients and boundary conditions,
/// discretized with P0 density, P1 mass flux and P1 temperature.
///
/// Every integral (residual, Jacobian, diagnostics) uses the single
/// quadrature rule held here.
class DiscreteProblem {
 public:
  DiscreteProblem(Mesh1D mesh, GasModel model, PhysCoeffs coeffs,
                  BoundarySpec bc, QuadratureRule quad = QuadratureRule::gauss(3));

  const Mesh1D& mesh() const { return mesh_; }
  const GasModel& model() const { return model_; }
  const PhysCoeffs& coeffs() const { return coeffs_; }
  const BoundarySpec& boundary() const { return bc_; }
  const QuadratureRule& quadrature() const { return quad_; }
  const SpaceLayout& layout() const { return layout_; }

  /// Writes the prescribed boundary values into the constrained dofs.
  void apply_boundary(State& state) const;

  /// Throws std::invalid_argument unless the vector lengths match the mesh.
  void check_shape(const State& state) const;

  /// Free unknowns in interleaved layout order.
  std::vector<double> pack(const State& state) const;
  /// Copy of `base` with the free unknowns replaced by `free`.
  State unpack(std::span<const double> free, const State& base) const;

  /// Fully discrete residual of the implicit Euler step old -> next.
  Residual residual(const State& next, const State& old, double tau) const;

  /// Same residual in interleaved free-unknown order (row i tests the basis
  /// function whose unknown has free index i).
  std::vector<double> residual_vector(const State& next, const State& old,
                                      double tau) const;

  /// Finite-difference Jacobian of residual_vector with respect to the free
  /// unknowns. Column step max(1e-7, 1e-7 |u_j|); columns further apart than
  /// the bandwidth are perturbed together.
  BandMatrix jacobian(const State& next, const State& old, double tau,
                      FdScheme scheme = FdScheme::Forward) const;

 private:
  struct FullResidual {
    std::vector<double> q, v, w;
  };
  FullResidual assemble(const State& next, const State& old, double tau) const;
  std::vector<double> flatten(const FullResidual& r) const;

  Mesh1D mesh_;
  GasModel model_;
  PhysCoeffs coeffs_;
  BoundarySpec bc_;
  QuadratureRule quad_;
  SpaceLayout layout_;
};

}  // namespace pipeflow
