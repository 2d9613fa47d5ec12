#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reftaylor/expansion.hpp"
#include "reftaylor/scalar_field.hpp"
#include "reftaylor/simplex.hpp"

namespace reftaylor {

/// A named test field with whatever analytic information is known about it.
struct FieldEntry {
  using SegmentBoundsFn = std::function<SegmentBounds(const Point& a, const Point& h)>;

  std::string name;
  ScalarField field;
  /// Sup over the whole domain of |||Df||| and |||D^2f|||.
  std::optional<DerivativeNorms> norms;
  /// Exact m1, M1, m2, M2 along any segment inside the domain.
  SegmentBoundsFn segment_bounds;

  int dim() const { return field.dim(); }
  bool has_analytic_norms() const { return norms.has_value(); }
  bool has_certified_segment_bounds() const { return static_cast<bool>(segment_bounds); }
  /// Analytic bounds when available, otherwise sampled (1001 points).
  SegmentBounds bounds_on(const Point& a, const Point& h) const;
};

/// Profiles g for ridge fields f(x) = g(w . x).
enum class RidgeProfile { Exp, Sin, Cube };

FieldEntry ridge_field(std::string name, RidgeProfile profile, Vector w, Box domain);

/// f(x) = c + b . x + x^T A x / 2 with symmetric A.
FieldEntry quadratic_field(std::string name, Box domain, double c, Vector b, Matrix A);

/// A quadratic plus sum_j c_j (w_j . x)^3. Along any segment phi is a
/// quadratic and phi' is affine in t, so segment bounds are exact.
struct CubicTerm {
  double coefficient;
  Vector direction;
};
FieldEntry cubic_field(std::string name, Box domain, double c, Vector b, Matrix A,
                       std::vector<CubicTerm> cubic_terms);

/// Registry names: exp1d, sin1d, cubic1d, exp2d, sin2d, quad2d, cubic2d,
/// exp3d, sin3d, quad3d, cubic3d and classP(beta=0.75). Any
/// "classP(beta=<b>)" with b in (1/2, 1] is also accepted by lookup_field.
std::vector<FieldEntry> registry();
std::vector<std::string> registry_names();

/// Throws InvalidArgument listing the registry for unknown names.
FieldEntry lookup_field(const std::string& name);

}  // namespace reftaylor
