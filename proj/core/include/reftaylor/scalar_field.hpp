#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace reftaylor {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box [lo, hi] in R^n. Fields declare one as their domain.
struct Box {
  Point lo;
  Point hi;

  static Box unit(int dim);
  static Box cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Point& x, double tol = 0.0) const;
  Point center() const { return 0.5 * (lo + hi); }
  double measure() const;
};

/// A twice-differentiable real function on a box in R^n.
///
/// Gradients are returned as vectors, so Df(x).(h) is `gradient(x).dot(h)`.
/// The Hessian is optional; without one it is synthesized by central
/// differences of the gradient with step 1e-5 * (1 + |x|), which limits the
/// Hessian to roughly 1e-9 relative accuracy on smooth fields.
class ScalarField {
public:
  using ValueFn = std::function<double(const Point&)>;
  using GradientFn = std::function<Vector(const Point&)>;
  using HessianFn = std::function<Matrix(const Point&)>;

  ScalarField() = default;
  ScalarField(std::string name, Box domain, ValueFn value, GradientFn gradient,
              HessianFn hessian = {});

  const std::string& name() const { return name_; }
  int dim() const { return domain_.dim(); }
  const Box& domain() const { return domain_; }
  bool has_analytic_hessian() const { return static_cast<bool>(hessian_); }

  double value(const Point& x) const { return value_(x); }
  Vector gradient(const Point& x) const { return gradient_(x); }
  /// Df(x).(h)
  double derivative(const Point& x, const Point& h) const { return gradient_(x).dot(h); }
  Matrix hessian(const Point& x) const;
  /// D^2 f(x).(h, h2)
  double hessian_form(const Point& x, const Point& h, const Point& h2) const;

  double operator()(const Point& x) const { return value_(x); }

private:
  std::string name_;
  Box domain_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
};

/// Builds a field on R (dim 1) from scalar callables f, f', f''.
ScalarField make_field_1d(std::string name, double lo, double hi,
                          std::function<double(double)> f,
                          std::function<double(double)> df,
                          std::function<double(double)> d2f = {});

/// Convenience constructors for 1-vectors.
inline Point point1(double x) {
  Point p(1);
  p[0] = x;
  return p;
}

/// Largest relative mismatch between central differences of value() (step
/// `step`) and the analytic directional derivative, over the given probes.
/// Each mismatch is scaled by 1 + |Df(x).(h)|.
double gradient_consistency_error(const ScalarField& f, std::span<const Point> points,
                                  std::span<const Point> directions, double step = 1e-5);

}  // namespace reftaylor
