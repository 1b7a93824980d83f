#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace pipeflow {

/// Uniform partition of [x_left, x_right] into n_elems elements.
struct Mesh1D {
  double x_left = 0.0;
  double x_right = 1.0;
  int n_elems = 2;

  double width() const { return (x_right - x_left) / n_elems; }
  double length() const { return x_right - x_left; }
  int n_nodes() const { return n_elems + 1; }
  double node(int i) const { return x_left + i * width(); }
  double midpoint(int k) const { return x_left + (k + 0.5) * width(); }

  /// Element containing x. On interior element boundaries the element to the
  /// left is returned; x_left itself belongs to element 0.
  int element_of(double x) const;
};

Mesh1D build_mesh(double x_left, double x_right, int n_elems);

/// Gauss-Legendre rule on the reference element [0, 1]; weights sum to 1.
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  static QuadratureRule gauss(int n_points);
  int size() const { return static_cast<int>(points.size()); }
};

enum class Space {
  Q,  // piecewise constants, one value per element (density)
  V,  // continuous piecewise linears, nodal values (mass flux)
  W,  // continuous piecewise linears, nodal values (temperature)
};

int space_dim(const Mesh1D& mesh, Space space);

double eval_Q(const Mesh1D& mesh, std::span<const double> coeffs, double x);
double eval_P1(const Mesh1D& mesh, std::span<const double> coeffs, double x);
double eval_P1_dx(const Mesh1D& mesh, std::span<const double> coeffs, double x);

inline double eval_V(const Mesh1D& mesh, std::span<const double> c, double x) {
  return eval_P1(mesh, c, x);
}
inline double eval_W(const Mesh1D& mesh, std::span<const double> c, double x) {
  return eval_P1(mesh, c, x);
}
inline double eval_W_dx(const Mesh1D& mesh, std::span<const double> c, double x) {
  return eval_P1_dx(mesh, c, x);
}

/// Piecewise-constant profile: values[i] on x < breaks[i] (and x >= the
/// previous break), values.back() on x >= breaks.back().
struct PiecewiseConstant {
  std::vector<double> breaks;
  std::vector<double> values;

  double operator()(double x) const;
  bool operator==(const PiecewiseConstant&) const = default;
};

/// Initial datum for one field: a constant, a piecewise constant, or an
/// arbitrary callable (programmatic use only, not serializable).
class FieldExpr {
 public:
  FieldExpr() : expr_(0.0) {}
  FieldExpr(double value) : expr_(value) {}
  FieldExpr(PiecewiseConstant pw);
  FieldExpr(std::function<double(double)> fn) : expr_(std::move(fn)) {}

  double operator()(double x) const;

  bool is_constant() const { return std::holds_alternative<double>(expr_); }
  bool is_piecewise() const {
    return std::holds_alternative<PiecewiseConstant>(expr_);
  }
  bool is_callable() const {
    return std::holds_alternative<std::function<double(double)>>(expr_);
  }
  double constant() const { return std::get<double>(expr_); }
  const PiecewiseConstant& piecewise() const {
    return std::get<PiecewiseConstant>(expr_);
  }

  bool operator==(const FieldExpr& other) const;

 private:
  std::variant<double, PiecewiseConstant, std::function<double(double)>> expr_;
};

/// Q: element-midpoint evaluation. V, W: nodal interpolation.
std::vector<double> project_initial(const FieldExpr& expr, const Mesh1D& mesh,
                                    Space space);

/// Degree-of-freedom bookkeeping for the three spaces.
///
/// Free unknowns are numbered node by node in the interleaved order
/// m_i, theta_i, rho_i (rho only for i < n_elems), skipping constrained
/// dofs. Each residual row then couples only to unknowns within a fixed
/// distance, which keeps the Jacobian banded.
class SpaceLayout {
 public:
  SpaceLayout(const Mesh1D& mesh, bool fix_m_left, bool fix_m_right,
              bool fix_theta_left);

  int n_Q() const { return n_q_; }
  int n_V() const { return n_q_ + 1; }
  int n_W() const { return n_q_ + 1; }
  int n_free() const { return n_free_; }
  int n_free_V() const;
  int n_free_W() const;

  /// Global free index, or -1 for a constrained dof.
  int rho_index(int k) const { return rho_index_[k]; }
  int m_index(int i) const { return m_index_[i]; }
  int theta_index(int i) const { return theta_index_[i]; }

  bool m_fixed(int i) const { return m_index_[i] < 0; }
  bool theta_fixed(int i) const { return theta_index_[i] < 0; }

  static constexpr int kLowerBandwidth = 4;
  static constexpr int kUpperBandwidth = 4;

 private:
  int n_q_;
  int n_free_ = 0;
  std::vector<int> rho_index_;
  std::vector<int> m_index_;
  std::vector<int> theta_index_;
};

}  // namespace pipeflow
