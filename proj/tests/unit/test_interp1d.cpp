#include <cmath>
#include <numbers>

#include "doctest.h"

#include <reftaylor/errors.hpp>
#include <reftaylor/field_registry.hpp>
#include <reftaylor/interp1d.hpp>

#include "test_support.hpp"

using namespace reftaylor;
using rt_test::vec;

namespace {

ScalarField square() {
  return make_field_1d("x^2", -2.0, 2.0, [](double x) { return x * x; },
                       [](double x) { return 2.0 * x; }, [](double) { return 2.0; });
}

}  // namespace

TEST_CASE("Interval rejects a >= b") {
  CHECK_THROWS_AS(Interval(1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Interval(2.0, 1.0), InvalidArgument);
  CHECK(Interval(-1.0, 2.0).length() == 3.0);
}

TEST_CASE("lerp_interpolant: examples") {
  const auto id = make_field_1d("x", -3.0, 3.0, [](double x) { return x; },
                                [](double) { return 1.0; });
  const auto pi_id = lerp_interpolant(id, Interval(-1.0, 2.5));
  for (int i = 0; i <= 1000; ++i) {
    const double x = -1.0 + 3.5 * i / 1000.0;
    CHECK(std::abs(pi_id(x) - x) <= 1e-13);
  }

  const auto p = lerp_interpolant(square(), Interval(0.0, 1.0));
  CHECK(p(0.5) == doctest::Approx(0.5));
  CHECK(p(0.5) - 0.25 == doctest::Approx(0.25));

  const auto c = make_field_1d("c", 0.0, 1.0, [](double) { return 7.5; },
                               [](double) { return 0.0; });
  const auto pc = lerp_interpolant(c, Interval(0.0, 1.0));
  CHECK(pc(0.0) == 7.5);
  CHECK(pc(0.37) == doctest::Approx(7.5).epsilon(1e-15));
  CHECK(pc(1.0) == 7.5);
}

TEST_CASE("lerp_interpolant: errors") {
  CHECK_THROWS_AS(lerp_interpolant(square(), Interval(1.0, 3.0)), DomainError);
  CHECK_THROWS_AS(lerp_interpolant(lookup_field("exp2d").field, Interval(0.0, 1.0)),
                  InvalidArgument);
}

TEST_CASE("property: affine reproduction on a 1001-point grid") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 20; ++k) {
    const double c0 = u(rng);
    const double c1 = u(rng);
    const auto f = make_field_1d("affine", -10.0, 10.0, [=](double x) { return c0 + c1 * x; },
                                 [=](double) { return c1; });
    const double a = u(rng);
    const Interval iv(a, a + 0.1 + std::abs(u(rng)));
    const auto p = lerp_interpolant(f, iv);
    for (int i = 0; i <= 1000; ++i) {
      const double x = iv.a + iv.length() * i / 1000.0;
      CHECK(std::abs(p(x) - f.value(point1(x))) <= 1e-13 * (1.0 + std::abs(f.value(point1(x)))));
    }
  }
}

TEST_CASE("compare_bounds: x^2 on [0,1]") {
  const auto cmp = compare_bounds(square(), Interval(0.0, 1.0), {2.0, 2.0});
  CHECK(cmp.classical == doctest::Approx(0.25));
  CHECK(cmp.refined == doctest::Approx(0.625));
  CHECK(cmp.beta == doctest::Approx(2.5));
  CHECK_FALSE(cmp.improves());
  CHECK(cmp.measured_sup_error == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(cmp.best() == cmp.classical);
}

TEST_CASE("compare_bounds: errors") {
  CHECK_THROWS_AS(compare_bounds(square(), Interval(0.0, 1.0), {2.0, 0.0}), Inconsistency);
  CHECK_THROWS_AS(compare_bounds(square(), Interval(0.0, 1.0), {-1.0, 2.0}), InvalidArgument);
  const auto affine = make_field_1d("a", 0.0, 1.0, [](double x) { return 2.0 * x; },
                                    [](double) { return 2.0; });
  CHECK_NOTHROW(compare_bounds(affine, Interval(0.0, 1.0), {2.0, 0.0}));
}

TEST_CASE("property: both bounds hold on the smooth 1D suite") {
  for (const char* name : {"exp1d", "sin1d", "cubic1d", "classP(beta=0.75)"}) {
    CAPTURE(name);
    const auto entry = lookup_field(name);
    const auto& box = entry.field.domain();
    for (int n : {1, 2, 5, 17}) {
      const double len = (box.hi[0] - box.lo[0]) / n;
      for (int piece = 0; piece < n; ++piece) {
        const Interval iv(box.lo[0] + piece * len, box.lo[0] + (piece + 1) * len);
        const auto cmp =
            compare_bounds(entry.field, iv, {entry.norms->d1_inf, entry.norms->d2_inf});
        CHECK(cmp.measured_sup_error <= cmp.classical);
        CHECK(cmp.measured_sup_error <= cmp.refined);
      }
    }
  }
}

TEST_CASE("sampled_norms agree with analytic norms") {
  const auto entry = lookup_field("sin1d");
  const auto n = sampled_norms(entry.field, Interval(0.0, std::numbers::pi));
  CHECK(n.f1_inf == doctest::Approx(1.0));
  CHECK(n.f2_inf == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(sampled_norms(entry.field, Interval(0.0, 1.0), 1), InvalidArgument);
}

TEST_CASE("class_p_function: delta = Lambda = 1, f(a) = f'(a) = 0") {
  const Interval iv(0.0, 1.0);
  const ClassPParams p{1.0, 1.0, 0.0, 0.0};
  const auto f = class_p_function(p, iv);
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    CHECK(f.value(point1(x)) == doctest::Approx(std::exp(x) - 1.0 - x).epsilon(1e-14));
    CHECK(f.gradient(point1(x))[0] == doctest::Approx(std::exp(x) - 1.0).epsilon(1e-14));
    CHECK(f.hessian(point1(x))(0, 0) == doctest::Approx(std::exp(x)).epsilon(1e-14));
    CHECK(std::abs(f.gradient(point1(x))[0]) <= f.hessian(point1(x))(0, 0) / p.lambda);
    CHECK(f.value(point1(x)) >= class_p_lower_bound(p, iv, x) - 1e-15);
  }
}

TEST_CASE("class_p_function: boundary case f'(a) = -delta/Lambda is affine") {
  const Interval iv(0.0, 2.0);
  const ClassPParams p{3.0, 1.5, 1.0, -0.5};
  const auto f = class_p_function(p, iv);
  for (int i = 0; i <= 20; ++i) {
    const double x = 0.1 * i;
    CHECK(f.hessian(point1(x))(0, 0) == doctest::Approx(0.0));
    CHECK(std::abs(f.value(point1(x)) - (1.0 - 0.5 * x)) <= 1e-12);
  }
}

TEST_CASE("class_p_function: the gradient condition needs f'(a) >= -delta/(2 Lambda)") {
  const Interval iv(0.0, 1.0);
  const double lambda = 4.0;
  const double delta = 2.0;
  // Accepted by the construction but |f'(a)| > f''(a)/Lambda.
  const ClassPParams low{lambda, delta, 0.0, -0.75 * delta / lambda};
  CHECK_FALSE(low.satisfies_gradient_condition());
  const auto f = class_p_function(low, iv);
  CHECK(std::abs(f.gradient(point1(0.0))[0]) > f.hessian(point1(0.0))(0, 0) / lambda);

  const ClassPParams edge{lambda, delta, 0.0, -0.5 * delta / lambda};
  CHECK(edge.satisfies_gradient_condition());
  const auto g = class_p_function(edge, iv);
  for (int i = 0; i <= 1000; ++i) {
    const Point x = point1(i / 1000.0);
    CHECK(std::abs(g.gradient(x)[0]) <= g.hessian(x)(0, 0) / lambda * (1.0 + 1e-14));
  }
}

TEST_CASE("class_p_function: errors") {
  const Interval iv(0.0, 1.0);
  CHECK_THROWS_AS(class_p_function({1.0, 1.0, 0.0, -1.0001}, iv), InvalidArgument);
  CHECK_THROWS_AS(class_p_function({0.0, 1.0, 0.0, 0.0}, iv), InvalidArgument);
  CHECK_THROWS_AS(class_p_function({1.0, -1.0, 0.0, 0.0}, iv), InvalidArgument);
}

TEST_CASE("lambda_from_beta: examples and errors") {
  CHECK(lambda_from_beta(1.0, Interval(0.0, 1.0)) == 4.0);
  CHECK(lambda_from_beta(0.75, Interval(0.0, 1.0)) == 8.0);
  CHECK(lambda_from_beta(0.75, Interval(0.0, 2.0)) == 4.0);
  CHECK_THROWS_AS(lambda_from_beta(0.5, Interval(0.0, 1.0)), InvalidArgument);
  CHECK_THROWS_AS(lambda_from_beta(0.2, Interval(0.0, 1.0)), InvalidArgument);
  CHECK_THROWS_AS(lambda_from_beta(1.01, Interval(0.0, 1.0)), InvalidArgument);
}

TEST_CASE("class (P) improvement at beta = 3/4, delta = Lambda, f'(a) = 0") {
  const Interval iv(0.0, 1.0);
  const double lambda = lambda_from_beta(0.75, iv);
  const ClassPParams p{lambda, lambda, 0.0, 0.0};
  const auto cmp = compare_bounds(class_p_function(p, iv), iv, class_p_norms(p, iv));
  // beta = 3/4 - e^{-8}/4, frozen from a 30-digit evaluation.
  CHECK(cmp.beta == doctest::Approx(0.749916134343024372040294652719).epsilon(1e-12));
  CHECK(cmp.beta <= 0.75);
  CHECK(cmp.improves());
}

TEST_CASE("property: class (P) fields are convex and beat beta * classical") {
  for (double beta : {0.6, 0.75, 0.9, 1.0}) {
    for (const Interval iv : {Interval(0.0, 1.0), Interval(-1.0, 0.5)}) {
      const double lambda = lambda_from_beta(beta, iv);
      for (double delta_scale : {0.5, 1.0, 4.0}) {
        const double delta = delta_scale * lambda;
        for (double fp : {-0.5 * delta / lambda, 0.0, 2.0}) {
          const ClassPParams p{lambda, delta, 0.3, fp};
          const auto f = class_p_function(p, iv);
          const auto n = class_p_norms(p, iv);
          const auto cmp = compare_bounds(f, iv, n);
          CHECK(cmp.refined <= beta * cmp.classical + 1e-12);
          CHECK(cmp.refined >= 0.5 * cmp.classical);
          for (int i = 0; i <= 200; ++i)
            CHECK(f.hessian(point1(iv.a + iv.length() * i / 200.0))(0, 0) >= 0.0);
        }
      }
    }
  }
}
