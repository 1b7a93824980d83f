#include "pipeflow/eos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pipeflow {

namespace {

void require_positive(ThermoPoint pt) {
  if (!(pt.rho > 0.0) || !(pt.theta > 0.0)) {
    std::ostringstream msg;
    msg << "thermodynamic state outside domain: rho=" << pt.rho
        << ", theta=" << pt.theta;
    throw DomainError(msg.str());
  }
}

}  // namespace

std::string to_string(GasKind kind) {
  return kind == GasKind::IdealGas ? "IdealGas" : "PowerLaw";
}

GasKind gas_kind_from_string(const std::string& name) {
  if (name == "IdealGas") return GasKind::IdealGas;
  if (name == "PowerLaw") return GasKind::PowerLaw;
  throw std::invalid_argument("unknown gas kind '" + name + "'");
}

GasModel::GasModel(GasKind kind, PowerLawParams params)
    : kind_(kind), params_(std::move(params)) {}

GasModel GasModel::ideal_gas(double R, double c_v) {
  if (!(R > 0.0) || !(c_v > 0.0)) {
    throw std::invalid_argument("ideal gas requires R > 0 and c_v > 0");
  }
  PowerLawParams p;
  p.c_gamma = 0.0;
  p.gamma = (R + c_v) / c_v;
  p.c_log = R;
  p.c_v_poly = {c_v};
  p.c_second = c_v;
  return GasModel(GasKind::IdealGas, std::move(p));
}

GasModel GasModel::power_law(const PowerLawParams& params) {
  if (!(params.gamma > 1.0)) {
    throw std::invalid_argument("power law requires gamma > 1");
  }
  if (params.c_v_poly.empty()) {
    throw std::invalid_argument("power law requires c_v coefficients");
  }
  for (const auto& term : params.c_powers) {
    if (term.exponent == 0.0) {
      throw std::invalid_argument("power term exponent must be nonzero");
    }
  }
  return GasModel(GasKind::PowerLaw, params);
}

double GasModel::adiabatic_index() const { return params_.gamma; }

double GasModel::barotropic(double rho) const {
  if (params_.c_gamma == 0.0) return 0.0;
  const double g = params_.gamma;
  return params_.c_gamma / (g - 1.0) * (std::pow(rho, g - 1.0) - 1.0);
}

double GasModel::barotropic_d1(double rho) const {
  if (params_.c_gamma == 0.0) return 0.0;
  return params_.c_gamma * std::pow(rho, params_.gamma - 2.0);
}

double GasModel::barotropic_d2(double rho) const {
  if (params_.c_gamma == 0.0) return 0.0;
  const double g = params_.gamma;
  return params_.c_gamma * (g - 2.0) * std::pow(rho, g - 3.0);
}

double GasModel::thermal_C(double rho) const {
  double c = params_.c_log == 0.0 ? 0.0 : params_.c_log * std::log(rho);
  for (const auto& t : params_.c_powers) {
    c += t.coeff * (std::pow(rho, t.exponent) - 1.0);
  }
  return c;
}

double GasModel::thermal_C_d1(double rho) const {
  double c = params_.c_log / rho;
  for (const auto& t : params_.c_powers) {
    c += t.coeff * t.exponent * std::pow(rho, t.exponent - 1.0);
  }
  return c;
}

double GasModel::thermal_C_d2(double rho) const {
  double c = -params_.c_log / (rho * rho);
  for (const auto& t : params_.c_powers) {
    c += t.coeff * t.exponent * (t.exponent - 1.0) *
         std::pow(rho, t.exponent - 2.0);
  }
  return c;
}

// (rho P_rho)_rho = c_gamma (gamma - 1) rho^(gamma-2) + theta sum_j a_j e_j^2 rho^(e_j-1);
// the log term of C drops out exactly.
double GasModel::d_rhoPrho_drho(ThermoPoint pt) const {
  require_positive(pt);
  double c = 0.0;
  for (const auto& t : params_.c_powers) {
    c += t.coeff * t.exponent * t.exponent * std::pow(pt.rho, t.exponent - 1.0);
  }
  return params_.c_gamma * (params_.gamma - 1.0) * std::pow(pt.rho, params_.gamma - 2.0) +
         c * pt.theta;
}

// Q = sum_j b_j (theta^(j+1) - 1) / (j+1) + c''
double GasModel::thermal_Q(double theta) const {
  const auto& b = params_.c_v_poly;
  double acc = 0.0;
  for (std::size_t j = b.size(); j-- > 0;) {
    acc = acc * theta + b[j] / static_cast<double>(j + 1);
  }
  double at_one = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    at_one += b[j] / static_cast<double>(j + 1);
  }
  return acc * theta - at_one + params_.c_second;
}

double GasModel::thermal_Q_d1(double theta) const {
  const auto& b = params_.c_v_poly;
  double acc = 0.0;
  for (std::size_t j = b.size(); j-- > 0;) acc = acc * theta + b[j];
  return acc;
}

// int_1^theta c_v(t) / t dt = b_0 log(theta) + sum_{j>=1} b_j (theta^j - 1) / j
double GasModel::entropy_integral(double theta) const {
  const auto& b = params_.c_v_poly;
  double acc = b[0] * std::log(theta);
  double power = 1.0;
  for (std::size_t j = 1; j < b.size(); ++j) {
    power *= theta;
    acc += b[j] * (power - 1.0) / static_cast<double>(j);
  }
  return acc;
}

double GasModel::potential_P(ThermoPoint pt) const {
  require_positive(pt);
  return barotropic(pt.rho) + thermal_C(pt.rho) * pt.theta + params_.c_prime;
}

double GasModel::potential_Q(ThermoPoint pt) const {
  require_positive(pt);
  return thermal_Q(pt.theta);
}

double GasModel::dP_drho(ThermoPoint pt) const {
  require_positive(pt);
  return barotropic_d1(pt.rho) + thermal_C_d1(pt.rho) * pt.theta;
}

double GasModel::d2P_drhorho(ThermoPoint pt) const {
  require_positive(pt);
  return barotropic_d2(pt.rho) + thermal_C_d2(pt.rho) * pt.theta;
}

double GasModel::dP_dtheta(ThermoPoint pt) const {
  require_positive(pt);
  return thermal_C(pt.rho);
}

double GasModel::d2P_dthetatheta(ThermoPoint pt) const {
  require_positive(pt);
  return 0.0;
}

double GasModel::d2P_dthetarho(ThermoPoint pt) const {
  require_positive(pt);
  return thermal_C_d1(pt.rho);
}

double GasModel::d_rhoP_drho(ThermoPoint pt) const {
  return potential_P(pt) + pt.rho * dP_drho(pt);
}

double GasModel::dQ_dtheta(ThermoPoint pt) const {
  require_positive(pt);
  return thermal_Q_d1(pt.theta);
}

double GasModel::pressure(ThermoPoint pt) const {
  return pt.rho * pt.rho * dP_drho(pt);
}

double GasModel::internal_energy(ThermoPoint pt) const {
  return potential_P(pt) - pt.theta * dP_dtheta(pt) + thermal_Q(pt.theta);
}

double GasModel::enthalpy(ThermoPoint pt) const {
  return d_rhoP_drho(pt) - pt.theta * dP_dtheta(pt) + thermal_Q(pt.theta);
}

double GasModel::entropy(ThermoPoint pt) const {
  require_positive(pt);
  return entropy_integral(pt.theta) - thermal_C(pt.rho);
}

ThermoValues GasModel::evaluate(ThermoPoint pt) const {
  require_positive(pt);
  const double rho = pt.rho;
  const double theta = pt.theta;
  const double C = thermal_C(rho);
  const double C1 = thermal_C_d1(rho);

  ThermoValues v{};
  v.P = barotropic(rho) + C * theta + params_.c_prime;
  v.P_rho = barotropic_d1(rho) + C1 * theta;
  v.P_rhorho = barotropic_d2(rho) + thermal_C_d2(rho) * theta;
  v.P_theta = C;
  v.P_thetatheta = 0.0;
  v.P_thetarho = C1;
  v.rhoP_rho = v.P + rho * v.P_rho;
  v.Q = thermal_Q(theta);
  v.Q_theta = thermal_Q_d1(theta);
  v.pressure = rho * rho * v.P_rho;
  v.internal_energy = v.P - theta * v.P_theta + v.Q;
  v.enthalpy = v.rhoP_rho - theta * v.P_theta + v.Q;
  v.entropy = entropy_integral(theta) - C;
  return v;
}

AdmissibilityReport check_admissibility(const GasModel& model, Range rho_range,
                                        Range theta_range, int n_samples,
                                        double cv_lower) {
  if (!(rho_range.lo > 0.0) || !(theta_range.lo > 0.0) ||
      rho_range.hi < rho_range.lo || theta_range.hi < theta_range.lo) {
    throw std::invalid_argument("admissibility ranges must be positive");
  }
  if (n_samples < 2) {
    throw std::invalid_argument("admissibility check needs >= 2 samples");
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  AdmissibilityReport r{inf, inf, inf, cv_lower, false};
  const double drho = (rho_range.hi - rho_range.lo) / (n_samples - 1);
  const double dtheta = (theta_range.hi - theta_range.lo) / (n_samples - 1);
  for (int i = 0; i < n_samples; ++i) {
    for (int j = 0; j < n_samples; ++j) {
      const ThermoPoint pt{rho_range.lo + i * drho, theta_range.lo + j * dtheta};
      const ThermoValues v = model.evaluate(pt);
      r.min_P_rho = std::min(r.min_P_rho, v.P_rho);
      r.min_rhoP_rho_rho = std::min(r.min_rhoP_rho_rho, model.d_rhoPrho_drho(pt));
      r.min_heat_capacity = std::min(
          r.min_heat_capacity, v.Q_theta - pt.theta * v.P_thetatheta);
    }
  }
  r.pass = r.min_P_rho >= 0.0 && r.min_rhoP_rho_rho >= 0.0 &&
           r.min_heat_capacity > 0.0 && r.min_heat_capacity >= cv_lower;
  return r;
}

}  // namespace pipeflow
