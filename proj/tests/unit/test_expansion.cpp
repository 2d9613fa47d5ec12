#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"

#include <reftaylor/errors.hpp>
#include <reftaylor/expansion.hpp>
#include <reftaylor/field_registry.hpp>
#include <reftaylor/quadrature.hpp>

#include "test_support.hpp"

using namespace reftaylor;
using rt_test::vec;
using std::numbers::e;
using std::numbers::pi;

namespace {

ScalarField square() {
  return make_field_1d("x^2", -4.0, 4.0, [](double x) { return x * x; },
                       [](double x) { return 2.0 * x; }, [](double) { return 2.0; });
}
ScalarField cube() {
  return make_field_1d("x^3", -4.0, 4.0, [](double x) { return x * x * x; },
                       [](double x) { return 3.0 * x * x; }, [](double x) { return 6.0 * x; });
}
ScalarField expf() {
  return make_field_1d("exp", -2.0, 2.0, [](double x) { return std::exp(x); },
                       [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); });
}
ScalarField sinf() {
  return make_field_1d("sin", -4.0, 4.0, [](double x) { return std::sin(x); },
                       [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); });
}

}  // namespace

TEST_CASE("weights: examples") {
  CHECK(weights(1, WeightKind::Closed).weights == std::vector<double>{0.5, 0.5});
  CHECK(weights(2, WeightKind::Closed).weights == std::vector<double>{0.25, 0.5, 0.25});
  const auto open = weights(3, WeightKind::Open).weights;
  REQUIRE(open.size() == 4);
  CHECK(open[0] == doctest::Approx(1.0 / 6).epsilon(1e-15));
  for (int k = 1; k <= 3; ++k) CHECK(open[k] == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("weights: families for m in [1, 64]") {
  for (int m = 1; m <= 64; ++m) {
    const auto closed = weights(m, WeightKind::Closed);
    REQUIRE(closed.weights.size() == static_cast<std::size_t>(m + 1));
    CHECK(closed.m == m);
    CHECK(closed.weights.front() == 1.0 / (2.0 * m));
    CHECK(closed.weights.back() == 1.0 / (2.0 * m));
    for (int k = 1; k < m; ++k) CHECK(closed.weights[k] == 1.0 / m);
    CHECK(std::abs(closed.sum() - 1.0) <= 1e-15);

    const auto open = weights(m, WeightKind::Open);
    CHECK(std::abs(open.sum() - (1.0 + 1.0 / (2.0 * m))) <= 1e-15);
  }
}

TEST_CASE("weights: m = 0 is rejected") {
  CHECK_THROWS_AS(weights(0), InvalidArgument);
  CHECK_THROWS_AS(weights(-3, WeightKind::Open), InvalidArgument);
}

TEST_CASE("taylor1: examples") {
  const auto r = taylor1(square(), vec({0.0}), vec({1.0}));
  CHECK(r.approx == 0.0);
  CHECK(r.exact == 1.0);
  CHECK(r.remainder_eps == 1.0);

  const auto affine = rt_test::affine_field(Box::cube(2, -1, 1), 0.3, vec({1.5, -2.0}));
  const auto ra = taylor1(affine, vec({-0.5, 0.2}), vec({0.9, -0.7}));
  CHECK(ra.remainder_eps == doctest::Approx(0.0).epsilon(1e-15));

  // x^3 on [0,1]: M2 = 6 attained at x = 1, m2 = 0 at x = 0.
  const auto rc = taylor1(cube(), vec({0.0}), vec({1.0}));
  CHECK(rc.bound_lo == doctest::Approx(0.0));
  CHECK(rc.bound_hi == doctest::Approx(3.0));
  CHECK(rc.remainder_eps == doctest::Approx(1.0));
  CHECK(rc.contained());
  CHECK_FALSE(rc.bounds_certified);
}

TEST_CASE("taylor1: zero displacement is degenerate, not an error") {
  const auto r = taylor1(expf(), vec({0.3}), vec({0.0}));
  CHECK(r.degenerate);
  CHECK(r.remainder_eps == 0.0);
  CHECK(r.exact == r.approx);
  CHECK(std::isfinite(r.bound_hi));
}

TEST_CASE("refined_expansion: examples") {
  const auto r1 = refined_expansion(square(), vec({0.0}), vec({1.0}), 1);
  CHECK(r1.approx == 1.0);
  CHECK(r1.remainder_eps == 0.0);
  CHECK(r1.bound_lo == 0.0);
  CHECK(r1.bound_hi == 0.0);

  const auto r2 = refined_expansion(square(), vec({0.0}), vec({1.0}), 2);
  CHECK(r2.approx == 1.0);
  CHECK(r2.exact == 1.0);

  const SegmentBounds exp_bounds{1.0, e, 1.0, e, true};
  const auto re = refined_expansion(expf(), vec({0.0}), vec({1.0}), 1, WeightKind::Closed,
                                    exp_bounds);
  CHECK(re.bound_hi == doctest::Approx((e - 1.0) / 8.0).epsilon(1e-15));
  CHECK(re.bound_lo == doctest::Approx(-(e - 1.0) / 8.0).epsilon(1e-15));
  CHECK(re.contained());
}

TEST_CASE("refined_expansion: matches frozen high-precision remainders for exp") {
  const SegmentBounds b{1.0, e, 1.0, e, true};
  for (const auto& frozen : rt_test::kExpRemainders) {
    CAPTURE(frozen.m);
    const auto r = refined_expansion(expf(), vec({0.0}), vec({1.0}), frozen.m,
                                     WeightKind::Closed, b);
    CHECK(r.remainder_eps == doctest::Approx(frozen.remainder).epsilon(1e-13));
    CHECK(r.contained());
  }
}

TEST_CASE("refined_expansion: open weights pick up the endpoint term") {
  // e - 1 - (1/4 + e^{1/2}/2 + e/2), frozen from a 30-digit evaluation.
  const SegmentBounds b{1.0, e, 1.0, e, true};
  const auto r = refined_expansion(expf(), vec({0.0}), vec({1.0}), 2, WeightKind::Open, b);
  CHECK(r.remainder_eps == doctest::Approx(-0.715219721120541455744181658231).epsilon(1e-13));
  CHECK(r.bound_lo == doctest::Approx(-(e - 1.0) / 16.0 - e / 4.0));
  CHECK(r.bound_hi == doctest::Approx((e - 1.0) / 16.0 - 0.25));
  CHECK(r.contained());
}

TEST_CASE("refined_expansion: m = 1 is the trapezoid of derivatives") {
  std::mt19937_64 rng(11);
  const auto f = FieldEntry(lookup_field("exp3d")).field;
  for (int i = 0; i < 20; ++i) {
    const Point a = rt_test::uniform_in_box(f.domain(), rng);
    const Point b = rt_test::uniform_in_box(f.domain(), rng);
    const Point h = b - a;
    const auto r = refined_expansion(f, a, h, 1);
    const double trapezoid = f.value(a) + 0.5 * (f.derivative(a, h) + f.derivative(b, h));
    CHECK(r.approx == doctest::Approx(trapezoid).epsilon(1e-15));
  }
}

TEST_CASE("refined_expansion: node outside the domain names k") {
  const auto f = expf();  // domain [-2, 2]
  try {
    refined_expansion(f, vec({1.0}), vec({3.0}), 3);
    FAIL("expected DomainError");
  } catch (const DomainError& err) {
    CHECK(std::string(err.what()).find("k=2") != std::string::npos);
  }
  CHECK_THROWS_AS(refined_expansion(f, vec({0.0, 0.0}), vec({1.0, 0.0}), 2), InvalidArgument);
  CHECK_THROWS_AS(refined_expansion(f, vec({0.0}), vec({1.0}), 0), InvalidArgument);
}

TEST_CASE("refined_expansion: zero displacement") {
  const auto r = refined_expansion(expf(), vec({0.5}), vec({0.0}), 4);
  CHECK(r.degenerate);
  CHECK(r.remainder_eps == 0.0);
  CHECK(r.bound_width() == 0.0);
}

TEST_CASE("refined_expansion: exact = approx + |h| eps") {
  std::mt19937_64 rng(5);
  for (const char* name : {"exp2d", "cubic3d", "sin1d"}) {
    const auto entry = lookup_field(name);
    for (int i = 0; i < 30; ++i) {
      const Point a = rt_test::uniform_in_box(entry.field.domain(), rng);
      const Point h = rt_test::uniform_in_box(entry.field.domain(), rng) - a;
      const auto r = refined_expansion(entry.field, a, h, 1 + i % 5);
      CHECK(std::abs(r.exact - (r.approx + r.h_norm * r.remainder_eps)) <=
            1e-12 * (1.0 + std::abs(r.exact)));
    }
  }
}

TEST_CASE("remainder_integral_oracle: examples") {
  std::mt19937_64 rng(3);
  const Box box = Box::cube(3, -1.0, 1.0);
  for (int m : {1, 2, 3, 5}) {
    const auto q = rt_test::random_quadratic(3, rng).field(box);
    const Point a = rt_test::uniform_in_box(box, rng);
    const Point h = rt_test::uniform_in_box(box, rng) - a;
    CHECK(std::abs(remainder_integral_oracle(q, a, h, m)) <= 1e-12);
  }

  const auto r = refined_expansion(expf(), vec({0.0}), vec({1.0}), 1);
  CHECK(remainder_integral_oracle(expf(), vec({0.0}), vec({1.0}), 1) ==
        doctest::Approx(r.exact - r.approx).epsilon(1e-10));

  // int_0^1 (1/2 - t) 6t dt = -1/2 = 1 - (0 + 3)/2
  CHECK(remainder_integral_oracle(cube(), vec({0.0}), vec({1.0}), 1) ==
        doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("phi and phi_prime") {
  const Point a = vec({0.2, -0.4});
  const Point h = vec({0.5, 0.3});
  const auto f = lookup_field("exp2d").field;
  CHECK(phi(f, a, h, 0.0) == f.derivative(a, h));
  CHECK(phi(f, a, h, 1.0) == f.derivative(a + h, h));
  CHECK(phi_prime(square(), vec({0.0}), vec({1.0}), 0.5) == 2.0);
  CHECK_THROWS_AS(phi(f, a, h, -0.01), InvalidArgument);
  CHECK_THROWS_AS(phi_prime(f, a, h, 1.5), InvalidArgument);
  CHECK_THROWS_AS(phi(f, a, h, std::nan("")), InvalidArgument);
}

TEST_CASE("estimate_segment_bounds: examples") {
  const auto sq = estimate_segment_bounds(square(), vec({-1.0}), vec({3.0}), 7);
  CHECK(sq.m2 == 2.0);
  CHECK(sq.M2 == 2.0);
  CHECK_FALSE(sq.certified);

  const auto ex = estimate_segment_bounds(expf(), vec({0.0}), vec({1.0}), 101);
  CHECK(ex.m2 == doctest::Approx(1.0));
  CHECK(ex.M2 == doctest::Approx(e));
  CHECK(ex.m1 == doctest::Approx(1.0));
  CHECK(ex.M1 == doctest::Approx(e));

  const auto sn = estimate_segment_bounds(sinf(), vec({0.0}), vec({pi}), 1001);
  CHECK(std::abs(sn.m2 + 1.0) <= 1e-4);
  CHECK(std::abs(sn.M2) <= 1e-4);

  CHECK_THROWS_AS(estimate_segment_bounds(expf(), vec({0.0}), vec({1.0}), 1), InvalidArgument);
  CHECK_THROWS_AS(estimate_segment_bounds(expf(), vec({0.0}), vec({0.0}), 10), InvalidArgument);
}

TEST_CASE("summation_identity_check: examples") {
  {
    const std::vector<double> a{1.0};
    const auto [lhs, rhs] = summation_identity_check(a, [](double) { return 1.0; }, 1);
    CHECK(lhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rhs == doctest::Approx(1.0).epsilon(1e-14));
  }
  {
    const std::vector<double> a{1.0, 1.0};
    const auto [lhs, rhs] = summation_identity_check(a, [](double) { return 1.0; }, 2);
    CHECK(lhs == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(rhs == doctest::Approx(3.0).epsilon(1e-14));
  }
  {
    const std::vector<double> a{0.5, 0.5};
    const auto [lhs, rhs] = summation_identity_check(a, [](double t) { return t; }, 2);
    CHECK(lhs == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(rhs == doctest::Approx(1.75).epsilon(1e-14));
  }
  const std::vector<double> wrong{1.0, 2.0};
  CHECK_THROWS_AS(summation_identity_check(wrong, [](double) { return 1.0; }, 3),
                  InvalidArgument);
}

TEST_CASE("property: closed-weight bounds are 1/(2m) of the classical width") {
  std::mt19937_64 rng(17);
  const auto entry = lookup_field("exp2d");
  for (int i = 0; i < 50; ++i) {
    const Point a = rt_test::uniform_in_box(entry.field.domain(), rng);
    const Point h = rt_test::uniform_in_box(entry.field.domain(), rng) - a;
    const auto b = entry.bounds_on(a, h);
    const int m = 1 + i % 8;
    const auto refined = refined_expansion(entry.field, a, h, m, WeightKind::Closed, b);
    const auto classical = taylor1(entry.field, a, h, b);
    if (classical.bound_width() <= 0.0) continue;
    CHECK(std::abs(refined.bound_width() / classical.bound_width() - 1.0 / (2.0 * m)) <= 1e-14);
  }
}

TEST_CASE("property: open weights stay contained with certified bounds") {
  std::mt19937_64 rng(23);
  for (const char* name : {"exp1d", "sin3d", "cubic2d", "quad3d"}) {
    const auto entry = lookup_field(name);
    for (int i = 0; i < 100; ++i) {
      const Point a = rt_test::uniform_in_box(entry.field.domain(), rng);
      const Point h = rt_test::uniform_in_box(entry.field.domain(), rng) - a;
      if (h.norm() < 1e-3) continue;
      const auto r = refined_expansion(entry.field, a, h, 1 + i % 6, WeightKind::Open,
                                       entry.bounds_on(a, h));
      CHECK(r.contained(1e-13 * (1.0 + std::abs(r.exact)) / r.h_norm));
    }
  }
}
