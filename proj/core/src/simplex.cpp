#include "reftaylor/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "reftaylor/errors.hpp"
#include "reftaylor/quadrature.hpp"

namespace reftaylor {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

Simplex::Simplex(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw InvalidArgument("simplex: no vertices");
  dim_ = static_cast<int>(vertices_.front().size());
  if (dim_ < 1 || vertices_.size() != static_cast<std::size_t>(dim_) + 1)
    throw InvalidArgument("simplex: an n-simplex needs n + 1 vertices in R^n");
  for (const auto& v : vertices_)
    if (v.size() != dim_) throw InvalidArgument("simplex: vertex dimensions differ");

  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      diameter_ = std::max(diameter_, (vertices_[i] - vertices_[j]).norm());

  Matrix edges(dim_, dim_);
  for (int j = 0; j < dim_; ++j) edges.col(j) = vertices_[j + 1] - vertices_[0];
  measure_ = std::abs(edges.determinant()) / factorial(dim_);
  if (!(diameter_ > 0.0) || !(measure_ > 1e-12 * std::pow(diameter_, dim_)))
    throw SingularGeometry("simplex: vertices are affinely dependent");

  Matrix system(dim_ + 1, dim_ + 1);
  for (int i = 0; i <= dim_; ++i) {
    system.block(0, i, dim_, 1) = vertices_[i];
    system(dim_, i) = 1.0;
  }
  inverse_ = system.inverse();
  grad_lambda_ = inverse_.leftCols(dim_);
}

Vector Simplex::barycentric(const Point& P) const {
  if (P.size() != dim_) throw InvalidArgument("barycentric: point dimension mismatch");
  Vector rhs(dim_ + 1);
  rhs.head(dim_) = P;
  rhs[dim_] = 1.0;
  return inverse_ * rhs;
}

bool Simplex::contains(const Point& P, double tol) const {
  return (barycentric(P).array() >= -tol).all();
}

Point Simplex::from_barycentric(const Vector& lambdas) const {
  Point P = Point::Zero(dim_);
  for (int i = 0; i <= dim_; ++i) P += lambdas[i] * vertices_[i];
  return P;
}

Point Simplex::centroid() const {
  return from_barycentric(Vector::Constant(dim_ + 1, 1.0 / (dim_ + 1)));
}

BarycentricCoords barycentric(const Simplex& s, const Point& P) { return {s.barycentric(P)}; }

SimplexInterpolant::SimplexInterpolant(const Simplex& s, const ScalarField& v)
    : simplex_(&s), values_(s.dim() + 1) {
  if (v.dim() != s.dim()) throw InvalidArgument("interpolant: field and simplex dimensions differ");
  gradients_.reserve(static_cast<std::size_t>(s.dim()) + 1);
  for (int i = 0; i <= s.dim(); ++i) {
    values_[i] = v.value(s.vertex(i));
    gradients_.push_back(v.gradient(s.vertex(i)));
  }
}

double SimplexInterpolant::pi(const Point& P) const {
  return simplex_->barycentric(P).dot(values_);
}

double SimplexInterpolant::pi_star(const Point& P) const {
  const Vector lambda = simplex_->barycentric(P);
  double value = lambda.dot(values_);
  double correction = 0.0;
  for (int i = 0; i <= simplex_->dim(); ++i)
    correction += lambda[i] * gradients_[i].dot(simplex_->vertex(i) - P);
  return value - 0.5 * correction;
}

namespace {

void require_inside(const Simplex& s, const Point& P) {
  if (P.size() != s.dim()) throw InvalidArgument("interpolation: point dimension mismatch");
  if (!s.contains(P)) throw OutOfElement("interpolation point lies outside the simplex");
}

}  // namespace

double pi_interp(const Simplex& s, const ScalarField& v, const Point& P) {
  require_inside(s, P);
  return SimplexInterpolant(s, v).pi(P);
}

double pi_star_interp(const Simplex& s, const ScalarField& v, const Point& P) {
  require_inside(s, P);
  return SimplexInterpolant(s, v).pi_star(P);
}

InterpBounds interp_error_bounds(double diameter, DerivativeNorms norms) {
  if (norms.d1_inf < 0.0 || norms.d2_inf < 0.0)
    throw InvalidArgument("interp_error_bounds: norms must be nonnegative");
  if (diameter < 0.0) throw InvalidArgument("interp_error_bounds: negative diameter");
  const double d2 = diameter * diameter;
  InterpBounds b;
  b.classical = norms.d2_inf / 2.0 * d2;
  b.refined = norms.d1_inf / 2.0 * diameter + norms.d2_inf / 4.0 * d2;
  b.corrected = norms.d2_inf / 4.0 * d2;
  b.combined = std::min(b.classical, b.refined);
  return b;
}

InterpBounds interp_error_bounds(const Simplex& s, DerivativeNorms norms) {
  return interp_error_bounds(s.diameter(), norms);
}

double spectral_norm(const Matrix& symmetric, int max_iterations, double tol) {
  const auto n = symmetric.rows();
  if (n == 0) return 0.0;
  // Fixed start vector with distinct entries so it is not orthogonal to a
  // coordinate-aligned dominant eigenvector.
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 + 0.37 * static_cast<double>(i);
  x.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector y = symmetric * x;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    const double next = std::abs(x.dot(y));
    x = y / norm;
    if (std::abs(next - estimate) <= tol * std::max(1.0, next)) {
      estimate = std::max(next, norm);
      break;
    }
    estimate = std::max(next, norm);
  }
  return estimate;
}

DerivativeNorms sampled_derivative_norms(const Simplex& s, const ScalarField& v) {
  std::vector<Point> samples(s.vertices());
  for (int i = 0; i <= s.dim(); ++i)
    for (int j = i + 1; j <= s.dim(); ++j) samples.push_back(0.5 * (s.vertex(i) + s.vertex(j)));
  samples.push_back(s.centroid());
  for (const auto& bary : simplex_rule_degree4(s.dim()).barycentric)
    samples.push_back(s.from_barycentric(Eigen::Map<const Vector>(bary.data(), s.dim() + 1)));

  DerivativeNorms n;
  for (const auto& P : samples) {
    n.d1_inf = std::max(n.d1_inf, v.gradient(P).norm());
    n.d2_inf = std::max(n.d2_inf, spectral_norm(v.hessian(P)));
  }
  return n;
}

}  // namespace reftaylor
