#include "reftaylor/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "reftaylor/errors.hpp"

namespace reftaylor {

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess; roots are
  // symmetric so only half are computed.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace {

const GaussLegendreRule& cached_rule(int points) {
  static const std::array<GaussLegendreRule, 12> rules = [] {
    std::array<GaussLegendreRule, 12> r;
    for (int i = 0; i < 12; ++i) r[i] = gauss_legendre(i + 1);
    return r;
  }();
  if (points < 1 || points > 12) throw InvalidArgument("integrate: 1..12 points per panel");
  return rules[points - 1];
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, int panels,
                 int points) {
  if (panels < 1) throw InvalidArgument("integrate: panels must be positive");
  const auto& rule = cached_rule(points);
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    double panel = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      panel += rule.weights[q] * f(mid + 0.5 * width * rule.nodes[q]);
    total += 0.5 * width * panel;
  }
  return total;
}

namespace {

SimplexRule segment_rule() {
  const auto gl = gauss_legendre(3);
  SimplexRule r;
  for (int q = 0; q < 3; ++q) {
    const double t = 0.5 * (gl.nodes[q] + 1.0);
    r.barycentric.push_back({1.0 - t, t});
    r.weights.push_back(0.5 * gl.weights[q]);
  }
  return r;
}

SimplexRule triangle_rule() {
  // Symmetric 6-point rule, degree 4.
  constexpr double a1 = 0.445948490915965;
  constexpr double w1 = 0.223381589678011;
  constexpr double a2 = 0.091576213509771;
  constexpr double w2 = 0.109951743655322;
  SimplexRule r;
  const double b1 = 1.0 - 2.0 * a1;
  const double b2 = 1.0 - 2.0 * a2;
  r.barycentric = {{b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1},
                   {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}};
  r.weights = {w1, w1, w1, w2, w2, w2};
  return r;
}

SimplexRule tetrahedron_rule() {
  // Collapsed (Duffy) product of 4-point Gauss rules on [0,1]^3:
  // x = u, y = (1-u) v, z = (1-u)(1-v) w, Jacobian (1-u)^2 (1-v).
  const auto gl = gauss_legendre(4);
  SimplexRule r;
  for (int i = 0; i < 4; ++i) {
    const double u = 0.5 * (gl.nodes[i] + 1.0);
    for (int j = 0; j < 4; ++j) {
      const double v = 0.5 * (gl.nodes[j] + 1.0);
      for (int k = 0; k < 4; ++k) {
        const double w = 0.5 * (gl.nodes[k] + 1.0);
        const double x = u;
        const double y = (1.0 - u) * v;
        const double z = (1.0 - u) * (1.0 - v) * w;
        const double jac = (1.0 - u) * (1.0 - u) * (1.0 - v);
        // Reference tet volume is 1/6; weights normalized to sum to 1.
        r.barycentric.push_back({1.0 - x - y - z, x, y, z});
        r.weights.push_back(6.0 * jac * 0.125 * gl.weights[i] * gl.weights[j] * gl.weights[k]);
      }
    }
  }
  return r;
}

}  // namespace

const SimplexRule& simplex_rule_degree4(int dim) {
  static const SimplexRule seg = segment_rule();
  static const SimplexRule tri = triangle_rule();
  static const SimplexRule tet = tetrahedron_rule();
  switch (dim) {
    case 1: return seg;
    case 2: return tri;
    case 3: return tet;
    default: throw InvalidArgument("simplex quadrature: dimension must be 1, 2 or 3");
  }
}

}  // namespace reftaylor
