#pragma once

#include "reftaylor/scalar_field.hpp"

namespace reftaylor {

struct Interval {
  double a;
  double b;

  Interval(double lo, double hi);
  double length() const { return b - a; }
};

/// Degree-1 interpolant of f on [a, b] through (a, f(a)) and (b, f(b)).
class LinearInterpolant1D {
public:
  LinearInterpolant1D(Interval iv, double fa, double fb) : iv_(iv), fa_(fa), fb_(fb) {}

  double operator()(double x) const {
    return (x - iv_.b) / (iv_.a - iv_.b) * fa_ + (x - iv_.a) / (iv_.b - iv_.a) * fb_;
  }
  const Interval& interval() const { return iv_; }

private:
  Interval iv_;
  double fa_;
  double fb_;
};

LinearInterpolant1D lerp_interpolant(const ScalarField& f, Interval iv);

/// Sup norms of f' and f'' on an interval.
struct DerivativeNorms1D {
  double f1_inf = 0.0;
  double f2_inf = 0.0;
};

/// Grid maxima of |f'| and |f''| (10001 points by default).
DerivativeNorms1D sampled_norms(const ScalarField& f, Interval iv, int grid = 10001);

struct BoundComparison {
  double classical = 0.0;  // (b-a)^2 |f''| / 8
  double refined = 0.0;    // (b-a) |f'| / 4 + (b-a)^2 |f''| / 16
  double beta = 0.0;       // refined / classical
  double measured_sup_error = 0.0;

  bool improves() const { return beta < 1.0; }
  double best() const { return refined < classical ? refined : classical; }
};

/// Compares the two sup-norm interpolation bounds against the measured
/// maximum of |Pi(f) - f| on a uniform grid of `grid` points.
/// Throws Inconsistency if f2_inf is zero but f is visibly not affine.
BoundComparison compare_bounds(const ScalarField& f, Interval iv, DerivativeNorms1D norms,
                               int grid = 1001);

/// Parameters of the convex exponential family solving
///   f'' - Lambda f' = delta,  f'(a) >= -delta / Lambda.
struct ClassPParams {
  double lambda = 1.0;
  double delta = 1.0;
  double f_a = 0.0;
  double fprime_a = 0.0;

  /// f'(a) >= -delta/(2 Lambda). Only in this range does |f'| <= f''/Lambda
  /// hold on the whole interval; between -delta/Lambda and -delta/(2 Lambda)
  /// it fails near x = a.
  bool satisfies_gradient_condition() const;
};

/// f(x) = f(a) + f'(a)/L (e^{L(x-a)} - 1) + delta/L [ (e^{L(x-a)} - 1)/L - (x - a) ],
/// with analytic first and second derivatives. Domain is the interval.
ScalarField class_p_function(const ClassPParams& p, Interval iv);

/// Analytic sup norms of a class-(P) function: f' is monotone on the interval
/// and f'' is a nonnegative increasing exponential.
DerivativeNorms1D class_p_norms(const ClassPParams& p, Interval iv);

/// Lambda = 4 / ((2 beta - 1)(b - a)), for beta in (1/2, 1].
double lambda_from_beta(double beta, Interval iv);

/// The lower bound max(f(a) + f'(a)/L (e^{L(x-a)} - 1), f(a) - f'(a)/L (e^{-L(x-a)} - 1))
/// that convex solutions of |f'| <= f''/L must sit above.
double class_p_lower_bound(const ClassPParams& p, Interval iv, double x);

}  // namespace reftaylor
