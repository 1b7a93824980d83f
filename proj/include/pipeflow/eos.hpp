#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pipeflow {

/// Raised when a thermodynamic function is queried outside rho, theta > 0.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class GasKind { IdealGas, PowerLaw };

std::string to_string(GasKind kind);
GasKind gas_kind_from_string(const std::string& name);

struct ThermoPoint {
  double rho;
  double theta;
};

/// coeff * (rho^exponent - 1); vanishes at rho = 1.
struct PowerTerm {
  double coeff;
  double exponent;

  bool operator==(const PowerTerm&) const = default;
};

/// Parameters of the generalized power-law fluid
///
///   P(rho, theta) = c_gamma / (gamma - 1) (rho^(gamma-1) - 1) + C(rho) theta + c'
///   Q(theta)      = int_1^theta c_v(t) dt + c''
///
/// with C(rho) = c_log log(rho) + sum_j a_j (rho^e_j - 1) and a polynomial
/// heat capacity c_v(theta) = sum_j b_j theta^j.
struct PowerLawParams {
  double c_gamma = 0.0;
  double gamma = 1.4;
  double c_log = 0.0;
  std::vector<PowerTerm> c_powers;
  std::vector<double> c_v_poly{1.0};
  double c_prime = 0.0;
  double c_second = 0.0;

  bool operator==(const PowerLawParams&) const = default;
};

/// All potential derivatives and derived quantities at one point.
struct ThermoValues {
  double P, P_rho, P_rhorho, P_theta, P_thetatheta, P_thetarho, rhoP_rho;
  double Q, Q_theta;
  double pressure, internal_energy, enthalpy, entropy;
};

/// A fluid described by a pressure potential P(rho, theta) and a thermal
/// potential Q(theta). Immutable after construction.
///
/// The ideal gas is the member of the power-law family with c_gamma = 0,
/// C(rho) = R log(rho), constant c_v and c'' = c_v, so that e = c_v theta
/// and s = c_v log(theta) - R log(rho).
class GasModel {
 public:
  static GasModel ideal_gas(double R, double c_v);
  static GasModel power_law(const PowerLawParams& params);

  GasKind kind() const { return kind_; }
  const PowerLawParams& params() const { return params_; }

  /// Ideal-gas accessors; R is c_log and c_v the constant heat capacity.
  double gas_constant() const { return params_.c_log; }
  double heat_capacity() const { return params_.c_v_poly.front(); }
  /// c_p / c_v for the ideal gas, gamma for the power law.
  double adiabatic_index() const;

  double potential_P(ThermoPoint pt) const;
  double potential_Q(ThermoPoint pt) const;
  double dP_drho(ThermoPoint pt) const;
  double d2P_drhorho(ThermoPoint pt) const;
  double dP_dtheta(ThermoPoint pt) const;
  double d2P_dthetatheta(ThermoPoint pt) const;
  double d2P_dthetarho(ThermoPoint pt) const;
  /// (rho P)_rho = P + rho P_rho
  double d_rhoP_drho(ThermoPoint pt) const;
  double dQ_dtheta(ThermoPoint pt) const;
  /// (rho P_rho)_rho, evaluated without cancellation.
  double d_rhoPrho_drho(ThermoPoint pt) const;

  double pressure(ThermoPoint pt) const;
  double internal_energy(ThermoPoint pt) const;
  double enthalpy(ThermoPoint pt) const;
  double entropy(ThermoPoint pt) const;

  ThermoValues evaluate(ThermoPoint pt) const;

  bool operator==(const GasModel&) const = default;

 private:
  GasModel(GasKind kind, PowerLawParams params);

  double barotropic(double rho) const;
  double barotropic_d1(double rho) const;
  double barotropic_d2(double rho) const;
  double thermal_C(double rho) const;
  double thermal_C_d1(double rho) const;
  double thermal_C_d2(double rho) const;
  double thermal_Q(double theta) const;
  double thermal_Q_d1(double theta) const;
  double entropy_integral(double theta) const;

  GasKind kind_;
  PowerLawParams params_;
};

/// Worst-case margins of the structural inequalities over a sample grid.
struct AdmissibilityReport {
  double min_P_rho;
  double min_rhoP_rho_rho;
  double min_heat_capacity;  // min of Q_theta - theta P_thetatheta
  double cv_lower;
  bool pass;
};

struct Range {
  double lo;
  double hi;
};

/// Samples n_samples x n_samples points (linear spacing, endpoints
/// included) and records min P_rho, min (rho P_rho)_rho and
/// min Q_theta - theta P_thetatheta. Passes iff the first two are >= 0 and
/// the third is positive and >= cv_lower.
AdmissibilityReport check_admissibility(const GasModel& model, Range rho_range,
                                        Range theta_range, int n_samples,
                                        double cv_lower = 0.0);

}  // namespace pipeflow
