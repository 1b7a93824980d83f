#include <doctest.h>

#include <cmath>
#include <vector>

#include "pipeflow/eos.hpp"

using namespace pipeflow;

namespace {

GasModel air() { return GasModel::ideal_gas(1.0, 2.5); }

GasModel stiff_law() {
  PowerLawParams p;
  p.c_gamma = 1.0;
  p.gamma = 1.4;
  p.c_log = 0.7;
  p.c_powers = {{0.2, 0.5}};
  p.c_v_poly = {1.5, 0.3};
  p.c_prime = 0.1;
  p.c_second = -0.2;
  return GasModel::power_law(p);
}

// Central differences with step 1e-5 relative to the argument.
template <class F>
double d_rho(F f, double rho, double theta) {
  const double eps = 1e-5 * rho;
  return (f(rho + eps, theta) - f(rho - eps, theta)) / (2 * eps);
}
template <class F>
double d_theta(F f, double rho, double theta) {
  const double eps = 1e-5 * theta;
  return (f(rho, theta + eps) - f(rho, theta - eps)) / (2 * eps);
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * (1 + std::abs(a)); }

}  // namespace

TEST_CASE("ideal gas potentials at reference points") {
  const GasModel g = air();
  CHECK(g.potential_P({1, 1}) == doctest::Approx(0.0));
  CHECK(g.potential_P({std::exp(1.0), 2}) == doctest::Approx(2.0));
  CHECK(g.dP_dtheta({1, 1}) == doctest::Approx(0.0));
  CHECK(g.d_rhoP_drho({2, 3}) == doctest::Approx(3 * (std::log(2.0) + 1)));
}

TEST_CASE("ideal gas derived quantities") {
  const GasModel g = air();
  CHECK(g.pressure({1, 1}) == doctest::Approx(1.0));
  CHECK(g.internal_energy({1, 1}) == doctest::Approx(2.5));
  CHECK(g.enthalpy({1, 1}) == doctest::Approx(3.5));
  CHECK(g.entropy({1, 1}) == doctest::Approx(0.0));
  CHECK(g.pressure({3, 1}) == doctest::Approx(3.0));
  CHECK(g.entropy({3, 1}) == doctest::Approx(-std::log(3.0)));
  CHECK(g.enthalpy({2, 1.2}) == doctest::Approx(4.2));
  CHECK(g.adiabatic_index() == doctest::Approx(1.4));

  for (double rho : {0.3, 1.0, 7.0}) {
    for (double th : {0.2, 1.0, 4.0}) {
      CHECK(g.pressure({rho, th}) == doctest::Approx(rho * th).epsilon(1e-14));
      CHECK(g.internal_energy({rho, th}) == doctest::Approx(2.5 * th).epsilon(1e-14));
      CHECK(g.enthalpy({rho, th}) == doctest::Approx(3.5 * th).epsilon(1e-14));
      CHECK(g.entropy({rho, th}) ==
            doctest::Approx(2.5 * std::log(th) - std::log(rho)).epsilon(1e-14));
    }
  }
}

TEST_CASE("power law vanishes at unit density") {
  PowerLawParams p;
  p.c_gamma = 1.0;
  p.gamma = 1.4;
  const GasModel g = GasModel::power_law(p);
  CHECK(g.potential_P({1, 1}) == doctest::Approx(0.0));
  CHECK(g.potential_P({1, 3}) == doctest::Approx(0.0));
  // P_rho = c_gamma rho^(gamma - 2)
  CHECK(g.dP_drho({2, 1}) == doctest::Approx(std::pow(2.0, -0.6)));
}

TEST_CASE("non-positive arguments raise DomainError") {
  const GasModel g = air();
  CHECK_THROWS_AS(g.pressure({0, 1}), DomainError);
  CHECK_THROWS_AS(g.entropy({1, -1}), DomainError);
  CHECK_THROWS_AS(g.evaluate({-1, 1}), DomainError);
  CHECK_THROWS_AS(stiff_law().potential_Q({1, 0}), DomainError);
}

TEST_CASE("analytic derivatives agree with central differences") {
  for (const GasModel& g : {air(), stiff_law()}) {
    const double rho = 1.7, th = 0.9;
    auto P = [&](double r, double t) { return g.potential_P({r, t}); };
    auto Prho = [&](double r, double t) { return g.dP_drho({r, t}); };
    auto Pth = [&](double r, double t) { return g.dP_dtheta({r, t}); };
    auto rP = [&](double r, double t) { return r * g.potential_P({r, t}); };
    auto Q = [&](double r, double t) { return g.potential_Q({r, t}); };
    CHECK(close(g.dP_drho({rho, th}), d_rho(P, rho, th), 1e-6));
    CHECK(close(g.d2P_drhorho({rho, th}), d_rho(Prho, rho, th), 1e-6));
    CHECK(close(g.dP_dtheta({rho, th}), d_theta(P, rho, th), 1e-6));
    CHECK(close(g.d2P_dthetatheta({rho, th}), d_theta(Pth, rho, th), 1e-6));
    CHECK(close(g.d2P_dthetarho({rho, th}), d_rho(Pth, rho, th), 1e-6));
    CHECK(close(g.d_rhoP_drho({rho, th}), d_rho(rP, rho, th), 1e-6));
    CHECK(close(g.dQ_dtheta({rho, th}), d_theta(Q, rho, th), 1e-6));
    auto rPrho = [&](double r, double t) { return r * g.dP_drho({r, t}); };
    CHECK(close(g.d_rhoPrho_drho({rho, th}), d_rho(rPrho, rho, th), 1e-6));
  }
}

TEST_CASE("evaluate bundles the individual functions") {
  const GasModel g = stiff_law();
  const ThermoPoint pt{2.2, 1.3};
  const ThermoValues v = g.evaluate(pt);
  CHECK(v.P == doctest::Approx(g.potential_P(pt)));
  CHECK(v.rhoP_rho == doctest::Approx(g.d_rhoP_drho(pt)));
  CHECK(v.pressure == doctest::Approx(g.pressure(pt)));
  CHECK(v.internal_energy == doctest::Approx(g.internal_energy(pt)));
  CHECK(v.enthalpy == doctest::Approx(g.enthalpy(pt)));
  CHECK(v.entropy == doctest::Approx(g.entropy(pt)));
}

TEST_CASE("thermodynamic identities on a grid") {
  for (const GasModel& g : {air(), stiff_law()}) {
    auto e = [&](double r, double t) { return g.internal_energy({r, t}); };
    auto p = [&](double r, double t) { return g.pressure({r, t}); };
    auto s = [&](double r, double t) { return g.entropy({r, t}); };
    int failures = 0;
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const double rho = 0.1 + 9.9 * i / 19.0;
        const double th = 0.1 + 9.9 * j / 19.0;
        const double pr = p(rho, th);
        const double e_rho = d_rho(e, rho, th);
        // Gibbs: e_rho = (p - theta p_theta) / rho^2
        if (!close(e_rho, (pr - th * d_theta(p, rho, th)) / (rho * rho), 1e-8)) ++failures;
        // theta s_rho = e_rho - p / rho^2, theta s_theta = e_theta
        if (!close(th * d_rho(s, rho, th), e_rho - pr / (rho * rho), 1e-8)) ++failures;
        if (!close(th * d_theta(s, rho, th), d_theta(e, rho, th), 1e-8)) ++failures;
        const double h = g.enthalpy({rho, th});
        if (std::abs(h - (e(rho, th) + pr / rho)) > 1e-12 * std::abs(h)) ++failures;
      }
    }
    CHECK(failures == 0);
  }
}

TEST_CASE("admissibility sampling") {
  const auto ok = check_admissibility(air(), {0.1, 10}, {0.1, 10}, 20);
  CHECK(ok.pass);
  CHECK(ok.min_heat_capacity == doctest::Approx(2.5));

  PowerLawParams p;
  p.c_gamma = 1.0;
  p.gamma = 1.4;
  CHECK(check_admissibility(GasModel::power_law(p), {0.1, 10}, {0.1, 10}, 20).pass);

  p.c_gamma = -1.0;
  const auto bad = check_admissibility(GasModel::power_law(p), {0.1, 10}, {0.1, 10}, 20);
  CHECK_FALSE(bad.pass);
  CHECK(bad.min_P_rho < 0);

  CHECK_THROWS_AS(check_admissibility(air(), {0.1, 10}, {0.1, 10}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_admissibility(air(), {0.0, 10}, {0.1, 10}, 5),
                  std::invalid_argument);
}

TEST_CASE("gas kind names round-trip") {
  CHECK(gas_kind_from_string(to_string(GasKind::IdealGas)) == GasKind::IdealGas);
  CHECK(gas_kind_from_string(to_string(GasKind::PowerLaw)) == GasKind::PowerLaw);
  CHECK_THROWS(gas_kind_from_string("vanderwaals"));
}
