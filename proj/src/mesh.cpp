#include "pipeflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pipeflow {

namespace {

void check_in_domain(const Mesh1D& mesh, double x) {
  const double slack = 1e-12 * mesh.length();
  if (!(x >= mesh.x_left - slack && x <= mesh.x_right + slack)) {
    std::ostringstream msg;
    msg << "x=" << x << " outside [" << mesh.x_left << ", " << mesh.x_right
        << "]";
    throw std::out_of_range(msg.str());
  }
}

void check_size(std::span<const double> coeffs, std::size_t expected) {
  if (coeffs.size() != expected) {
    throw std::invalid_argument("coefficient vector has wrong length");
  }
}

}  // namespace

int Mesh1D::element_of(double x) const {
  const double s = (x - x_left) / width();
  const int k = static_cast<int>(std::ceil(s)) - 1;
  return std::clamp(k, 0, n_elems - 1);
}

Mesh1D build_mesh(double x_left, double x_right, int n_elems) {
  if (!std::isfinite(x_left) || !std::isfinite(x_right) || !(x_left < x_right)) {
    throw std::invalid_argument("mesh requires x_left < x_right");
  }
  if (n_elems < 2) {
    throw std::invalid_argument("mesh requires n_elems >= 2");
  }
  return Mesh1D{x_left, x_right, n_elems};
}

QuadratureRule QuadratureRule::gauss(int n_points) {
  if (n_points < 1) {
    throw std::invalid_argument("quadrature needs at least one point");
  }
  QuadratureRule rule;
  rule.points.resize(n_points);
  rule.weights.resize(n_points);
  // Newton iteration on the Legendre polynomial, mapped from [-1,1] to [0,1].
  for (int i = 0; i < n_points; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n_points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= n_points; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n_points * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.points[n_points - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[n_points - 1 - i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

int space_dim(const Mesh1D& mesh, Space space) {
  return space == Space::Q ? mesh.n_elems : mesh.n_elems + 1;
}

double eval_Q(const Mesh1D& mesh, std::span<const double> coeffs, double x) {
  check_size(coeffs, static_cast<std::size_t>(mesh.n_elems));
  check_in_domain(mesh, x);
  return coeffs[mesh.element_of(x)];
}

double eval_P1(const Mesh1D& mesh, std::span<const double> coeffs, double x) {
  check_size(coeffs, static_cast<std::size_t>(mesh.n_nodes()));
  check_in_domain(mesh, x);
  const int k = mesh.element_of(x);
  const double xi = (x - mesh.node(k)) / mesh.width();
  return coeffs[k] * (1.0 - xi) + coeffs[k + 1] * xi;
}

double eval_P1_dx(const Mesh1D& mesh, std::span<const double> coeffs, double x) {
  check_size(coeffs, static_cast<std::size_t>(mesh.n_nodes()));
  check_in_domain(mesh, x);
  const int k = mesh.element_of(x);
  return (coeffs[k + 1] - coeffs[k]) / mesh.width();
}

double PiecewiseConstant::operator()(double x) const {
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (x < breaks[i]) return values[i];
  }
  return values.back();
}

FieldExpr::FieldExpr(PiecewiseConstant pw) : expr_(std::move(pw)) {
  const auto& p = std::get<PiecewiseConstant>(expr_);
  if (p.values.size() != p.breaks.size() + 1) {
    throw std::invalid_argument(
        "piecewise field needs exactly one more value than breaks");
  }
  if (!std::is_sorted(p.breaks.begin(), p.breaks.end())) {
    throw std::invalid_argument("piecewise breaks must be increasing");
  }
}

double FieldExpr::operator()(double x) const {
  return std::visit(
      [x](const auto& e) -> double {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, double>) {
          return e;
        } else {
          return e(x);
        }
      },
      expr_);
}

bool FieldExpr::operator==(const FieldExpr& other) const {
  if (is_constant() && other.is_constant()) return constant() == other.constant();
  if (is_piecewise() && other.is_piecewise()) {
    return piecewise() == other.piecewise();
  }
  return false;
}

std::vector<double> project_initial(const FieldExpr& expr, const Mesh1D& mesh,
                                    Space space) {
  std::vector<double> out(space_dim(mesh, space));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int j = static_cast<int>(i);
    const double x = space == Space::Q ? mesh.midpoint(j) : mesh.node(j);
    out[i] = expr(x);
    if (!std::isfinite(out[i])) {
      std::ostringstream msg;
      msg << "initial field not finite at x=" << x;
      throw std::invalid_argument(msg.str());
    }
  }
  return out;
}

SpaceLayout::SpaceLayout(const Mesh1D& mesh, bool fix_m_left, bool fix_m_right,
                         bool fix_theta_left)
    : n_q_(mesh.n_elems),
      rho_index_(mesh.n_elems, -1),
      m_index_(mesh.n_elems + 1, -1),
      theta_index_(mesh.n_elems + 1, -1) {
  const int n = mesh.n_elems;
  for (int i = 0; i <= n; ++i) {
    const bool m_fixed = (i == 0 && fix_m_left) || (i == n && fix_m_right);
    if (!m_fixed) m_index_[i] = n_free_++;
    if (!(i == 0 && fix_theta_left)) theta_index_[i] = n_free_++;
    if (i < n) rho_index_[i] = n_free_++;
  }
}

int SpaceLayout::n_free_V() const {
  return static_cast<int>(
      std::count_if(m_index_.begin(), m_index_.end(), [](int i) { return i >= 0; }));
}

int SpaceLayout::n_free_W() const {
  return static_cast<int>(std::count_if(theta_index_.begin(), theta_index_.end(),
                                        [](int i) { return i >= 0; }));
}

}  // namespace pipeflow
