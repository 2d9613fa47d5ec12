#include "reftaylor/field_registry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>
#include <utility>

#include "reftaylor/errors.hpp"
#include "reftaylor/interp1d.hpp"

namespace reftaylor {

namespace {

using std::numbers::pi;

struct Range {
  double lo;
  double hi;
  double abs_max() const { return std::max(std::abs(lo), std::abs(hi)); }
  Range scaled(double factor) const {
    return factor >= 0.0 ? Range{lo * factor, hi * factor} : Range{hi * factor, lo * factor};
  }
};

Range sin_range(double s0, double s1) {
  if (s0 > s1) std::swap(s0, s1);
  if (s1 - s0 >= 2.0 * pi) return {-1.0, 1.0};
  Range r{std::min(std::sin(s0), std::sin(s1)), std::max(std::sin(s0), std::sin(s1))};
  const double peak = pi / 2.0 + 2.0 * pi * std::ceil((s0 - pi / 2.0) / (2.0 * pi));
  if (peak <= s1) r.hi = 1.0;
  const double trough = -pi / 2.0 + 2.0 * pi * std::ceil((s0 + pi / 2.0) / (2.0 * pi));
  if (trough <= s1) r.lo = -1.0;
  return r;
}

Range cos_range(double s0, double s1) { return sin_range(s0 + pi / 2.0, s1 + pi / 2.0); }

Range square_range(double s0, double s1) {
  if (s0 > s1) std::swap(s0, s1);
  const double hi = std::max(s0 * s0, s1 * s1);
  if (s0 <= 0.0 && s1 >= 0.0) return {0.0, hi};
  return {std::min(s0 * s0, s1 * s1), hi};
}

Range ordered(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

// Ranges of g' and g'' over an interval of the ridge variable.
Range first_range(RidgeProfile p, double s0, double s1) {
  switch (p) {
    case RidgeProfile::Exp: return ordered(std::exp(s0), std::exp(s1));
    case RidgeProfile::Sin: return cos_range(s0, s1);
    case RidgeProfile::Cube: return square_range(s0, s1).scaled(3.0);
  }
  return {0.0, 0.0};
}

Range second_range(RidgeProfile p, double s0, double s1) {
  switch (p) {
    case RidgeProfile::Exp: return ordered(std::exp(s0), std::exp(s1));
    case RidgeProfile::Sin: return sin_range(s0, s1).scaled(-1.0);
    case RidgeProfile::Cube: return ordered(6.0 * s0, 6.0 * s1);
  }
  return {0.0, 0.0};
}

Range ridge_variable_range(const Vector& w, const Box& box) {
  double lo = 0.0;
  double hi = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    lo += std::min(w[i] * box.lo[i], w[i] * box.hi[i]);
    hi += std::max(w[i] * box.lo[i], w[i] * box.hi[i]);
  }
  return {lo, hi};
}

std::vector<Point> box_corners(const Box& box) {
  const int n = box.dim();
  std::vector<Point> corners;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Point p(n);
    for (int i = 0; i < n; ++i) p[i] = (mask >> i & 1) ? box.hi[i] : box.lo[i];
    corners.push_back(p);
  }
  return corners;
}

double max_abs_eigenvalue(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

// Extremes over t in [0, 1] of a quadratic q given q(0), q(1/2), q(1).
Range quadratic_range(double q0, double qh, double q1) {
  Range r = ordered(q0, q1);
  // q(t) = q0 + b t + c t^2 with c = 2 (q0 - 2 qh + q1), b = q1 - q0 - c.
  const double c = 2.0 * (q0 - 2.0 * qh + q1);
  const double b = q1 - q0 - c;
  if (c != 0.0) {
    const double t = -b / (2.0 * c);
    if (t > 0.0 && t < 1.0) {
      const double qt = q0 + b * t + c * t * t;
      r.lo = std::min(r.lo, qt);
      r.hi = std::max(r.hi, qt);
    }
  }
  return r;
}

}  // namespace

SegmentBounds FieldEntry::bounds_on(const Point& a, const Point& h) const {
  if (segment_bounds) return segment_bounds(a, h);
  return estimate_segment_bounds(field, a, h);
}

FieldEntry ridge_field(std::string name, RidgeProfile profile, Vector w, Box domain) {
  if (w.size() != domain.dim()) throw InvalidArgument("ridge_field: direction dimension mismatch");
  auto g = [profile](double s) {
    switch (profile) {
      case RidgeProfile::Exp: return std::exp(s);
      case RidgeProfile::Sin: return std::sin(s);
      case RidgeProfile::Cube: return s * s * s;
    }
    return 0.0;
  };
  auto g1 = [profile](double s) {
    switch (profile) {
      case RidgeProfile::Exp: return std::exp(s);
      case RidgeProfile::Sin: return std::cos(s);
      case RidgeProfile::Cube: return 3.0 * s * s;
    }
    return 0.0;
  };
  auto g2 = [profile](double s) {
    switch (profile) {
      case RidgeProfile::Exp: return std::exp(s);
      case RidgeProfile::Sin: return -std::sin(s);
      case RidgeProfile::Cube: return 6.0 * s;
    }
    return 0.0;
  };

  FieldEntry e;
  e.name = name;
  e.field = ScalarField(
      std::move(name), domain, [w, g](const Point& x) { return g(w.dot(x)); },
      [w, g1](const Point& x) { return (g1(w.dot(x)) * w).eval(); },
      [w, g2](const Point& x) { return (g2(w.dot(x)) * w * w.transpose()).eval(); });

  const Range s = ridge_variable_range(w, domain);
  const double wn = w.norm();
  e.norms = DerivativeNorms{wn * first_range(profile, s.lo, s.hi).abs_max(),
                            wn * wn * second_range(profile, s.lo, s.hi).abs_max()};
  e.segment_bounds = [w, profile](const Point& a, const Point& h) {
    const double hn = h.norm();
    if (hn == 0.0) return SegmentBounds{};
    const double s0 = w.dot(a);
    const double s1 = w.dot(a + h);
    const double wh = w.dot(h);
    const Range second = second_range(profile, s0, s1).scaled(wh * wh / (hn * hn));
    const Range first = first_range(profile, s0, s1).scaled(wh / hn);
    return SegmentBounds{second.lo, second.hi, first.lo, first.hi, true};
  };
  return e;
}

FieldEntry quadratic_field(std::string name, Box domain, double c, Vector b, Matrix A) {
  return cubic_field(std::move(name), std::move(domain), c, std::move(b), std::move(A), {});
}

FieldEntry cubic_field(std::string name, Box domain, double c, Vector b, Matrix A,
                       std::vector<CubicTerm> cubic_terms) {
  const int n = domain.dim();
  if (b.size() != n || A.rows() != n || A.cols() != n)
    throw InvalidArgument("polynomial field: coefficient dimension mismatch");
  A = 0.5 * (A + A.transpose()).eval();
  for (const auto& t : cubic_terms)
    if (t.direction.size() != n) throw InvalidArgument("polynomial field: cubic term dimension");

  FieldEntry e;
  e.name = name;
  e.field = ScalarField(
      std::move(name), domain,
      [c, b, A, cubic_terms](const Point& x) {
        double v = c + b.dot(x) + 0.5 * x.dot(A * x);
        for (const auto& t : cubic_terms) v += t.coefficient * std::pow(t.direction.dot(x), 3);
        return v;
      },
      [b, A, cubic_terms](const Point& x) {
        Vector g = b + A * x;
        for (const auto& t : cubic_terms) {
          const double s = t.direction.dot(x);
          g += 3.0 * t.coefficient * s * s * t.direction;
        }
        return g;
      },
      [A, cubic_terms](const Point& x) {
        Matrix H = A;
        for (const auto& t : cubic_terms)
          H += 6.0 * t.coefficient * t.direction.dot(x) * t.direction * t.direction.transpose();
        return H;
      });

  // Exact for quadratics; triangle-inequality upper bounds once cubic terms
  // are present (still certified).
  double d1 = 0.0;
  for (const auto& corner : box_corners(domain)) d1 = std::max(d1, (b + A * corner).norm());
  double d2 = max_abs_eigenvalue(A);
  for (const auto& t : cubic_terms) {
    const Range s = ridge_variable_range(t.direction, domain);
    const double wn = t.direction.norm();
    d1 += 3.0 * std::abs(t.coefficient) * wn * s.abs_max() * s.abs_max();
    d2 += 6.0 * std::abs(t.coefficient) * wn * wn * s.abs_max();
  }
  e.norms = DerivativeNorms{d1, d2};

  const ScalarField f = e.field;
  e.segment_bounds = [f](const Point& a, const Point& h) {
    const double hn = h.norm();
    if (hn == 0.0) return SegmentBounds{};
    const Range second = ordered(f.hessian_form(a, h, h), f.hessian_form(a + h, h, h));
    const Range first = quadratic_range(f.derivative(a, h), f.derivative(a + 0.5 * h, h),
                                        f.derivative(a + h, h));
    return SegmentBounds{second.lo / (hn * hn), second.hi / (hn * hn), first.lo / hn,
                         first.hi / hn, true};
  };
  return e;
}

namespace {

FieldEntry sine_product_2d() {
  FieldEntry e;
  e.name = "sin2d";
  e.field = ScalarField(
      "sin2d", Box::unit(2),
      [](const Point& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); },
      [](const Point& x) {
        Vector g(2);
        g << pi * std::cos(pi * x[0]) * std::sin(pi * x[1]),
            pi * std::sin(pi * x[0]) * std::cos(pi * x[1]);
        return g;
      },
      [](const Point& x) {
        const double s = std::sin(pi * x[0]) * std::sin(pi * x[1]);
        const double c = std::cos(pi * x[0]) * std::cos(pi * x[1]);
        Matrix H(2, 2);
        H << -s, c, c, -s;
        return (pi * pi * H).eval();
      });
  // |grad|^2 = pi^2 (c1^2 s2^2 + s1^2 c2^2) <= pi^2; Hessian eigenvalues
  // pi^2 (-s +/- c) with |s| + |c| <= 1.
  e.norms = DerivativeNorms{pi, pi * pi};
  return e;
}

FieldEntry class_p_entry(double beta) {
  const Interval iv(0.0, 1.0);
  const double lambda = lambda_from_beta(beta, iv);
  const ClassPParams params{lambda, lambda, 0.0, 0.0};
  FieldEntry e;
  char buf[64];
  std::snprintf(buf, sizeof buf, "classP(beta=%g)", beta);
  e.name = buf;
  const ScalarField base = class_p_function(params, iv);
  e.field = ScalarField(e.name, base.domain(), [base](const Point& x) { return base.value(x); },
                        [base](const Point& x) { return base.gradient(x); },
                        [base](const Point& x) { return base.hessian(x); });
  const auto n = class_p_norms(params, iv);
  e.norms = DerivativeNorms{n.f1_inf, n.f2_inf};
  // f' and f'' are both increasing on the interval.
  e.segment_bounds = [base](const Point& a, const Point& h) {
    const double hn = std::abs(h[0]);
    if (hn == 0.0) return SegmentBounds{};
    const Point lo = point1(std::min(a[0], a[0] + h[0]));
    const Point hi = point1(std::max(a[0], a[0] + h[0]));
    const Range second{base.hessian(lo)(0, 0), base.hessian(hi)(0, 0)};
    const Range first = Range{base.gradient(lo)[0], base.gradient(hi)[0]}.scaled(h[0] / hn);
    return SegmentBounds{second.lo, second.hi, first.lo, first.hi, true};
  };
  return e;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

std::vector<FieldEntry> registry() {
  std::vector<FieldEntry> r;
  r.push_back(ridge_field("exp1d", RidgeProfile::Exp, vec({1.0}), Box::unit(1)));
  r.push_back(ridge_field("sin1d", RidgeProfile::Sin, vec({1.0}), Box::cube(1, 0.0, pi)));
  r.push_back(ridge_field("cubic1d", RidgeProfile::Cube, vec({1.0}), Box::unit(1)));
  r.push_back(ridge_field("exp2d", RidgeProfile::Exp, vec({0.8, -0.5}), Box::unit(2)));
  r.push_back(sine_product_2d());
  {
    Matrix A(2, 2);
    A << 2.0, 1.0, 1.0, -1.0;
    r.push_back(quadratic_field("quad2d", Box::unit(2), 1.0, vec({1.0, -2.0}), A));
  }
  {
    Matrix A(2, 2);
    A << 1.0, 0.5, 0.5, -0.5;
    r.push_back(cubic_field("cubic2d", Box::unit(2), 0.5, vec({0.3, -0.2}), A,
                            {{1.0, vec({1.0, 0.0})}, {-0.5, vec({0.6, 0.8})}}));
  }
  r.push_back(ridge_field("exp3d", RidgeProfile::Exp, vec({0.5, -0.3, 0.7}), Box::unit(3)));
  r.push_back(ridge_field("sin3d", RidgeProfile::Sin, vec({1.2, 0.8, -0.6}), Box::unit(3)));
  {
    Matrix A(3, 3);
    A << 2.0, 0.5, -0.3, 0.5, 1.0, 0.2, -0.3, 0.2, -1.5;
    r.push_back(quadratic_field("quad3d", Box::unit(3), -0.5, vec({0.4, -1.0, 0.7}), A));
  }
  r.push_back(ridge_field("cubic3d", RidgeProfile::Cube, vec({1.0, 0.5, -0.5}), Box::unit(3)));
  r.push_back(class_p_entry(0.75));
  return r;
}

std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  for (const auto& e : registry()) names.push_back(e.name);
  return names;
}

FieldEntry lookup_field(const std::string& name) {
  static const std::regex class_p(R"(classP\(beta=([0-9.eE+-]+)\))");
  std::smatch match;
  if (std::regex_match(name, match, class_p)) {
    double beta = 0.0;
    try {
      beta = std::stod(match[1].str());
    } catch (const std::exception&) {
      throw InvalidArgument("bad beta in '" + name + "'");
    }
    return class_p_entry(beta);
  }
  for (auto& e : registry())
    if (e.name == name) return e;
  std::string known;
  for (const auto& n : registry_names()) known += (known.empty() ? "" : ", ") + n;
  throw InvalidArgument("unknown function '" + name + "'; registry: " + known);
}

}  // namespace reftaylor
