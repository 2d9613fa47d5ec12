#include "reftaylor/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "reftaylor/errors.hpp"
#include "reftaylor/quadrature.hpp"

namespace reftaylor {

namespace {

constexpr int kPanelsPerSubinterval = 32;
constexpr int kGaussPoints = 5;

void require_inside(const ScalarField& f, const Point& x, const char* what) {
  if (x.size() != f.dim())
    throw InvalidArgument(std::string(what) + ": dimension mismatch with field '" + f.name() + "'");
  if (!f.domain().contains(x))
    throw DomainError(std::string(what) + " lies outside the domain of '" + f.name() + "'");
}

ExpansionReport degenerate_report(const ScalarField& f, const Point& a) {
  ExpansionReport r;
  r.exact = f.value(a);
  r.approx = r.exact;
  r.degenerate = true;
  return r;
}

}  // namespace

// Neumaier-compensated, so the closed family sums to 1 up to the final rounding.
double WeightFamily::sum() const {
  double s = 0.0;
  double c = 0.0;
  for (double w : weights) {
    const double t = s + w;
    c += std::abs(s) >= std::abs(w) ? (s - t) + w : (w - t) + s;
    s = t;
  }
  return s + c;
}

WeightFamily weights(int m, WeightKind kind) {
  if (m < 1) throw InvalidArgument("weights: m must be at least 1");
  WeightFamily family{m, kind, std::vector<double>(static_cast<std::size_t>(m) + 1, 1.0 / m)};
  family.weights.front() = 1.0 / (2.0 * m);
  if (kind == WeightKind::Closed) family.weights.back() = 1.0 / (2.0 * m);
  return family;
}

double phi(const ScalarField& f, const Point& a, const Point& h, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("phi: t must lie in [0, 1]");
  return f.derivative(a + t * h, h);
}

double phi_prime(const ScalarField& f, const Point& a, const Point& h, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("phi_prime: t must lie in [0, 1]");
  return f.hessian_form(a + t * h, h, h);
}

SegmentBounds estimate_segment_bounds(const ScalarField& f, const Point& a, const Point& h,
                                      int samples) {
  if (samples < 2) throw InvalidArgument("estimate_segment_bounds: need at least 2 samples");
  const double hn = h.norm();
  if (hn == 0.0) throw InvalidArgument("estimate_segment_bounds: zero displacement");
  SegmentBounds b;
  b.certified = false;
  b.m2 = b.m1 = std::numeric_limits<double>::infinity();
  b.M2 = b.M1 = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    const Point x = a + t * h;
    const double second = f.hessian_form(x, h, h) / (hn * hn);
    const double first = f.derivative(x, h) / hn;
    b.m2 = std::min(b.m2, second);
    b.M2 = std::max(b.M2, second);
    b.m1 = std::min(b.m1, first);
    b.M1 = std::max(b.M1, first);
  }
  return b;
}

ExpansionReport taylor1(const ScalarField& f, const Point& a, const Point& h,
                        const SegmentBounds& bounds) {
  require_inside(f, a, "expansion point a");
  require_inside(f, a + h, "endpoint a + h");
  const double hn = h.norm();
  if (hn == 0.0) return degenerate_report(f, a);

  ExpansionReport r;
  r.h_norm = hn;
  r.exact = f.value(a + h);
  r.approx = f.value(a) + f.derivative(a, h);
  r.remainder_eps = (r.exact - r.approx) / hn;
  r.bound_lo = hn * bounds.m2 / 2.0;
  r.bound_hi = hn * bounds.M2 / 2.0;
  r.bounds_certified = bounds.certified;
  return r;
}

ExpansionReport taylor1(const ScalarField& f, const Point& a, const Point& h) {
  if (h.norm() == 0.0) {
    require_inside(f, a, "expansion point a");
    return degenerate_report(f, a);
  }
  return taylor1(f, a, h, estimate_segment_bounds(f, a, h));
}

ExpansionReport refined_expansion(const ScalarField& f, const Point& a, const Point& h, int m,
                                  WeightKind kind, const SegmentBounds& bounds) {
  const auto family = weights(m, kind);
  for (int k = 0; k <= m; ++k) {
    const Point node = a + (static_cast<double>(k) / m) * h;
    if (node.size() != f.dim())
      throw InvalidArgument("refined_expansion: dimension mismatch with field '" + f.name() + "'");
    if (!f.domain().contains(node))
      throw DomainError("refined_expansion: node k=" + std::to_string(k) +
                        " lies outside the domain of '" + f.name() + "'");
  }
  const double hn = h.norm();
  if (hn == 0.0) return degenerate_report(f, a);

  ExpansionReport r;
  r.h_norm = hn;
  r.exact = f.value(a + h);
  double correction = 0.0;
  for (int k = 0; k <= m; ++k)
    correction += family.weights[k] * f.derivative(a + (static_cast<double>(k) / m) * h, h);
  r.approx = f.value(a) + correction;
  r.remainder_eps = (r.exact - r.approx) / hn;

  const double half_width = hn * (bounds.M2 - bounds.m2) / (8.0 * m);
  if (kind == WeightKind::Closed) {
    r.bound_lo = -half_width;
    r.bound_hi = half_width;
  } else {
    r.bound_lo = -half_width - bounds.M1 / (2.0 * m);
    r.bound_hi = half_width - bounds.m1 / (2.0 * m);
  }
  r.bounds_certified = bounds.certified;
  return r;
}

ExpansionReport refined_expansion(const ScalarField& f, const Point& a, const Point& h, int m,
                                  WeightKind kind) {
  if (h.norm() == 0.0) return refined_expansion(f, a, h, m, kind, SegmentBounds{});
  return refined_expansion(f, a, h, m, kind, estimate_segment_bounds(f, a, h));
}

double remainder_integral_oracle(const ScalarField& f, const Point& a, const Point& h, int m) {
  if (m < 1) throw InvalidArgument("remainder_integral_oracle: m must be at least 1");
  require_inside(f, a, "expansion point a");
  require_inside(f, a + h, "endpoint a + h");
  if (h.norm() == 0.0) return 0.0;

  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    const double s_k = (k + 0.5) / m;
    total += integrate(
        [&](double t) { return (s_k - t) * f.hessian_form(a + t * h, h, h); },
        static_cast<double>(k) / m, static_cast<double>(k + 1) / m, kPanelsPerSubinterval,
        kGaussPoints);
  }
  return total;
}

std::pair<double, double> summation_identity_check(std::span<const double> a_list,
                                                   const std::function<double(double)>& u, int m) {
  if (m < 1 || a_list.size() != static_cast<std::size_t>(m))
    throw InvalidArgument("summation_identity_check: a_list must have exactly m entries");
  double lhs = 0.0;
  double rhs = 0.0;
  double partial = 0.0;
  for (int k = 0; k < m; ++k) {
    lhs += a_list[k] * integrate(u, k, m, kPanelsPerSubinterval * (m - k), kGaussPoints);
    partial += a_list[k];
    rhs += partial * integrate(u, k, k + 1, kPanelsPerSubinterval, kGaussPoints);
  }
  return {lhs, rhs};
}

}  // namespace reftaylor
