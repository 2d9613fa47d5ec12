#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "reftaylor/scalar_field.hpp"

namespace reftaylor {

/// Weight families for the m-point first-order expansion.
///
/// Closed: w_0 = w_m = 1/(2m), interior 1/m, summing to one.
/// Open:   w_0 = 1/(2m), w_k = 1/m for k >= 1 (sum 1 + 1/(2m)); its remainder
///         picks up the extra term -Df(a+h).(h)/(2m).
enum class WeightKind { Closed, Open };

struct WeightFamily {
  int m = 0;
  WeightKind kind = WeightKind::Closed;
  std::vector<double> weights;  // m + 1 entries

  double sum() const;
};

WeightFamily weights(int m, WeightKind kind = WeightKind::Closed);

/// Bounds along a segment [a, a+h], per unit |h|:
///   m2 |h|^2 <= D^2f(x).(h,h) <= M2 |h|^2,   m1 |h| <= Df(x).(h) <= M1 |h|.
/// `certified` is false when they were obtained by sampling.
struct SegmentBounds {
  double m2 = 0.0;
  double M2 = 0.0;
  double m1 = 0.0;
  double M1 = 0.0;
  bool certified = true;
};

struct ExpansionReport {
  double approx = 0.0;
  double exact = 0.0;
  /// (exact - approx) / |h|
  double remainder_eps = 0.0;
  double bound_lo = 0.0;
  double bound_hi = 0.0;
  double h_norm = 0.0;
  bool degenerate = false;       // h == 0
  bool bounds_certified = true;  // false when bounds were sampled

  double bound_width() const { return bound_hi - bound_lo; }
  bool contained(double slack = 0.0) const {
    return remainder_eps >= bound_lo - slack && remainder_eps <= bound_hi + slack;
  }
};

/// phi(t) = Df(a + t h).(h)
double phi(const ScalarField& f, const Point& a, const Point& h, double t);
/// phi'(t) = D^2f(a + t h).(h, h)
double phi_prime(const ScalarField& f, const Point& a, const Point& h, double t);

/// Samples D^2f(a+th).(h,h)/|h|^2 and Df(a+th).(h)/|h| at `samples` equispaced
/// t in [0, 1]. The result is marked uncertified.
SegmentBounds estimate_segment_bounds(const ScalarField& f, const Point& a, const Point& h,
                                      int samples = 1001);

/// Classical first-order Taylor: approx = f(a) + Df(a).(h), remainder in
/// [|h| m2 / 2, |h| M2 / 2].
ExpansionReport taylor1(const ScalarField& f, const Point& a, const Point& h,
                        const SegmentBounds& bounds);
ExpansionReport taylor1(const ScalarField& f, const Point& a, const Point& h);

/// Refined m-point expansion
///   f(a+h) ~ f(a) + sum_k w_k(m) Df(a + k h / m).(h).
/// Closed weights: remainder in +/- |h| (M2 - m2) / (8m).
/// Open weights:   [|h|(m2-M2)/(8m) - M1/(2m), |h|(M2-m2)/(8m) - m1/(2m)].
/// Throws DomainError naming the first node outside the field's domain.
ExpansionReport refined_expansion(const ScalarField& f, const Point& a, const Point& h, int m,
                                  WeightKind kind, const SegmentBounds& bounds);
ExpansionReport refined_expansion(const ScalarField& f, const Point& a, const Point& h, int m,
                                  WeightKind kind = WeightKind::Closed);

/// |h| * remainder for the closed-weight expansion, evaluated from the
/// integral representation
///   sum_k int_{k/m}^{(k+1)/m} (S_k - t) phi'(t) dt,   S_k = (k + 1/2) / m,
/// with composite 5-point Gauss-Legendre (32 panels per subinterval).
double remainder_integral_oracle(const ScalarField& f, const Point& a, const Point& h, int m);

/// Both sides of
///   sum_{k<m} int_k^m a_k u  =  sum_{k<m} int_k^{k+1} S_k u,   S_k = a_0 + ... + a_k.
/// Each integral uses composite Gauss-Legendre with 32 panels per unit length.
std::pair<double, double> summation_identity_check(std::span<const double> a_list,
                                                   const std::function<double(double)>& u, int m);

}  // namespace reftaylor
