#include "reftaylor/interp1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "reftaylor/errors.hpp"

namespace reftaylor {

Interval::Interval(double lo, double hi) : a(lo), b(hi) {
  if (!(lo < hi)) throw InvalidArgument("interval requires a < b");
}

LinearInterpolant1D lerp_interpolant(const ScalarField& f, Interval iv) {
  if (f.dim() != 1) throw InvalidArgument("lerp_interpolant: field must be one-dimensional");
  if (!f.domain().contains(point1(iv.a)) || !f.domain().contains(point1(iv.b)))
    throw DomainError("lerp_interpolant: interval leaves the domain of '" + f.name() + "'");
  return LinearInterpolant1D(iv, f.value(point1(iv.a)), f.value(point1(iv.b)));
}

DerivativeNorms1D sampled_norms(const ScalarField& f, Interval iv, int grid) {
  if (grid < 2) throw InvalidArgument("sampled_norms: grid needs at least 2 points");
  DerivativeNorms1D n;
  for (int i = 0; i < grid; ++i) {
    const Point x = point1(iv.a + iv.length() * i / (grid - 1));
    n.f1_inf = std::max(n.f1_inf, std::abs(f.gradient(x)[0]));
    n.f2_inf = std::max(n.f2_inf, std::abs(f.hessian(x)(0, 0)));
  }
  return n;
}

BoundComparison compare_bounds(const ScalarField& f, Interval iv, DerivativeNorms1D norms,
                               int grid) {
  if (norms.f1_inf < 0.0 || norms.f2_inf < 0.0)
    throw InvalidArgument("compare_bounds: norms must be nonnegative");
  if (grid < 2) throw InvalidArgument("compare_bounds: grid needs at least 2 points");
  const auto pi = lerp_interpolant(f, iv);
  BoundComparison c;
  const double len = iv.length();
  c.classical = len * len * norms.f2_inf / 8.0;
  c.refined = len * norms.f1_inf / 4.0 + len * len * norms.f2_inf / 16.0;
  c.beta = c.classical > 0.0 ? c.refined / c.classical : std::numeric_limits<double>::infinity();

  double scale = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = iv.a + len * i / (grid - 1);
    const double fx = f.value(point1(x));
    c.measured_sup_error = std::max(c.measured_sup_error, std::abs(pi(x) - fx));
    scale = std::max(scale, std::abs(fx));
  }
  if (norms.f2_inf == 0.0 && c.measured_sup_error > 1e-12 * (1.0 + scale))
    throw Inconsistency("compare_bounds: |f''| = 0 supplied but '" + f.name() +
                        "' is not affine on the grid");
  return c;
}

bool ClassPParams::satisfies_gradient_condition() const {
  return fprime_a >= -delta / (2.0 * lambda);
}

namespace {

void validate(const ClassPParams& p) {
  if (!(p.lambda > 0.0)) throw InvalidArgument("class (P): Lambda must be positive");
  if (!(p.delta > 0.0)) throw InvalidArgument("class (P): delta must be positive");
  if (p.fprime_a < -p.delta / p.lambda)
    throw InvalidArgument("class (P): f'(a) must be >= -delta/Lambda");
}

}  // namespace

ScalarField class_p_function(const ClassPParams& p, Interval iv) {
  validate(p);
  const double a = iv.a;
  const double L = p.lambda;
  const double d = p.delta;
  const double c = p.fprime_a + d / L;  // f''(x) = c L e^{L(x-a)}
  auto f = [=](double x) {
    const double em1 = std::expm1(L * (x - a));
    return p.f_a + p.fprime_a / L * em1 + d / L * (em1 / L - (x - a));
  };
  auto df = [=](double x) {
    return p.fprime_a * std::exp(L * (x - a)) + d / L * std::expm1(L * (x - a));
  };
  auto d2f = [=](double x) { return c * L * std::exp(L * (x - a)); };
  return make_field_1d("classP", iv.a, iv.b, f, df, d2f);
}

DerivativeNorms1D class_p_norms(const ClassPParams& p, Interval iv) {
  validate(p);
  const double L = p.lambda;
  const double d = p.delta;
  const double span = iv.length();
  const double df_b = p.fprime_a * std::exp(L * span) + d / L * std::expm1(L * span);
  return DerivativeNorms1D{std::max(std::abs(p.fprime_a), std::abs(df_b)),
                           (p.fprime_a + d / L) * L * std::exp(L * span)};
}

double lambda_from_beta(double beta, Interval iv) {
  if (!(beta > 0.5)) throw InvalidArgument("lambda_from_beta: beta must exceed 1/2");
  if (beta > 1.0) throw InvalidArgument("lambda_from_beta: beta must not exceed 1");
  return 4.0 / ((2.0 * beta - 1.0) * iv.length());
}

double class_p_lower_bound(const ClassPParams& p, Interval iv, double x) {
  const double L = p.lambda;
  const double s = x - iv.a;
  return std::max(p.f_a + p.fprime_a / L * std::expm1(L * s),
                  p.f_a - p.fprime_a / L * std::expm1(-L * s));
}

}  // namespace reftaylor
