#include "reftaylor/scalar_field.hpp"

#include <algorithm>
#include <cmath>

#include "reftaylor/errors.hpp"

namespace reftaylor {

Box Box::unit(int dim) { return cube(dim, 0.0, 1.0); }

Box Box::cube(int dim, double lo, double hi) {
  if (dim < 1) throw InvalidArgument("box dimension must be positive");
  if (!(lo < hi)) throw InvalidArgument("box requires lo < hi");
  return Box{Point::Constant(dim, lo), Point::Constant(dim, hi)};
}

bool Box::contains(const Point& x, double tol) const {
  if (x.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lo[i] - tol && x[i] <= hi[i] + tol)) return false;
  }
  return true;
}

double Box::measure() const { return (hi - lo).prod(); }

ScalarField::ScalarField(std::string name, Box domain, ValueFn value, GradientFn gradient,
                         HessianFn hessian)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)) {
  if (domain_.lo.size() != domain_.hi.size() || domain_.lo.size() == 0)
    throw InvalidArgument("field '" + name_ + "': malformed domain box");
  if (!value_ || !gradient_)
    throw InvalidArgument("field '" + name_ + "': value and gradient are required");
}

Matrix ScalarField::hessian(const Point& x) const {
  if (hessian_) return hessian_(x);
  const int n = dim();
  const double step = 1e-5 * (1.0 + x.norm());
  Matrix H(n, n);
  Point xp = x;
  Point xm = x;
  for (int j = 0; j < n; ++j) {
    xp[j] = x[j] + step;
    xm[j] = x[j] - step;
    H.col(j) = (gradient_(xp) - gradient_(xm)) / (2.0 * step);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return 0.5 * (H + H.transpose());
}

double ScalarField::hessian_form(const Point& x, const Point& h, const Point& h2) const {
  return h.dot(hessian(x) * h2);
}

ScalarField make_field_1d(std::string name, double lo, double hi,
                          std::function<double(double)> f,
                          std::function<double(double)> df,
                          std::function<double(double)> d2f) {
  ScalarField::HessianFn hess;
  if (d2f) {
    hess = [d2f](const Point& x) {
      Matrix H(1, 1);
      H(0, 0) = d2f(x[0]);
      return H;
    };
  }
  return ScalarField(
      std::move(name), Box::cube(1, lo, hi), [f](const Point& x) { return f(x[0]); },
      [df](const Point& x) { return point1(df(x[0])); }, std::move(hess));
}

double gradient_consistency_error(const ScalarField& f, std::span<const Point> points,
                                  std::span<const Point> directions, double step) {
  double worst = 0.0;
  for (const auto& x : points) {
    for (const auto& h : directions) {
      const double fd = (f.value(x + step * h) - f.value(x - step * h)) / (2.0 * step);
      const double exact = f.derivative(x, h);
      worst = std::max(worst, std::abs(fd - exact) / (1.0 + std::abs(exact)));
    }
  }
  return worst;
}

}  // namespace reftaylor
