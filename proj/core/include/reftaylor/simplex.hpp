#pragma once

#include <vector>

#include "reftaylor/scalar_field.hpp"

namespace reftaylor {

/// An n-simplex in R^n given by n + 1 affinely independent vertices.
class Simplex {
public:
  /// Throws SingularGeometry when the vertices are (numerically) affinely
  /// dependent: measure <= 1e-12 * diameter^n.
  explicit Simplex(std::vector<Point> vertices);

  int dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  /// Largest pairwise vertex distance.
  double diameter() const { return diameter_; }
  /// n-dimensional volume (length, area, volume).
  double measure() const { return measure_; }

  /// Barycentric coordinates of P (no containment check).
  Vector barycentric(const Point& P) const;
  /// Row i is the (constant) gradient of lambda_i.
  const Matrix& barycentric_gradients() const { return grad_lambda_; }
  bool contains(const Point& P, double tol = 1e-12) const;
  Point from_barycentric(const Vector& lambdas) const;
  Point centroid() const;

private:
  int dim_ = 0;
  std::vector<Point> vertices_;
  double diameter_ = 0.0;
  double measure_ = 0.0;
  Matrix inverse_;      // inverse of [A_1 ... A_{n+1}; 1 ... 1]
  Matrix grad_lambda_;  // (n+1) x n
};

struct BarycentricCoords {
  Vector lambdas;
  double sum() const { return lambdas.sum(); }
};

BarycentricCoords barycentric(const Simplex& s, const Point& P);

/// Caches vertex values and gradients of v for repeated evaluation of
///   pi(v)(P)  = sum_i lambda_i(P) v(A_i)
///   pi*(v)(P) = pi(v)(P) - 1/2 sum_i lambda_i(P) Dv(A_i).(A_i - P)
/// at points of one simplex. Neither performs a containment check.
class SimplexInterpolant {
public:
  SimplexInterpolant(const Simplex& s, const ScalarField& v);

  double pi(const Point& P) const;
  double pi_star(const Point& P) const;
  double evaluate(const Point& P, bool corrected) const {
    return corrected ? pi_star(P) : pi(P);
  }

private:
  const Simplex* simplex_;
  Vector values_;
  std::vector<Vector> gradients_;
};

/// pi_S(v)(P). Throws OutOfElement when P is outside the closed simplex.
double pi_interp(const Simplex& s, const ScalarField& v, const Point& P);
/// The corrected interpolant pi*_S(v)(P); a degree <= 2 polynomial in P that
/// reproduces quadratics. Throws OutOfElement like pi_interp.
double pi_star_interp(const Simplex& s, const ScalarField& v, const Point& P);

/// Sup over a region of the operator norms |||Dv||| (Euclidean) and
/// |||D^2 v||| (spectral).
struct DerivativeNorms {
  double d1_inf = 0.0;
  double d2_inf = 0.0;
};

struct InterpBounds {
  double classical = 0.0;  // |||D^2v||| diam^2 / 2
  double refined = 0.0;    // |||Dv||| diam / 2 + |||D^2v||| diam^2 / 4
  double corrected = 0.0;  // |||D^2v||| diam^2 / 4, applies to pi* only
  double combined = 0.0;   // min(classical, refined), applies to pi
};

InterpBounds interp_error_bounds(double diameter, DerivativeNorms norms);
InterpBounds interp_error_bounds(const Simplex& s, DerivativeNorms norms);

/// Largest |eigenvalue| of a symmetric matrix by power iteration.
double spectral_norm(const Matrix& symmetric, int max_iterations = 50, double tol = 1e-10);

/// Norms sampled at vertices, edge midpoints, the centroid and the degree-4
/// quadrature nodes of s. Not certified.
DerivativeNorms sampled_derivative_norms(const Simplex& s, const ScalarField& v);

}  // namespace reftaylor
