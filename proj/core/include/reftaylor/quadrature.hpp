#pragma once

#include <functional>
#include <vector>

#include "reftaylor/scalar_field.hpp"

namespace reftaylor {

/// Nodes and weights on the reference interval [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (exact for polynomials of degree 2n - 1).
GaussLegendreRule gauss_legendre(int n);

/// Composite Gauss-Legendre on [a, b] with `panels` equal panels and `points`
/// nodes per panel. Reversed limits give the negated integral.
double integrate(const std::function<double(double)>& f, double a, double b, int panels = 32,
                 int points = 5);

/// A quadrature rule on the reference simplex, in barycentric form.
/// Weights sum to 1, so the integral over a simplex S is
/// measure(S) * sum_q w_q f(sum_i lambda_{q,i} A_i).
struct SimplexRule {
  std::vector<std::vector<double>> barycentric;  // one (n+1)-tuple per node
  std::vector<double> weights;
};

/// Rule exact for polynomials of degree <= 4 on an n-simplex, n in {1, 2, 3}:
/// 3-point Gauss on segments, the 6-point symmetric rule on triangles, and a
/// 4x4x4 collapsed Gauss product on tetrahedra.
const SimplexRule& simplex_rule_degree4(int dim);

}  // namespace reftaylor
