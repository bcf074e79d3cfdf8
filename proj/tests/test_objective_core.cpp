#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "motrpg/bench.hpp"
#include "motrpg/problem.hpp"
#include "motrpg/rng.hpp"
#include "test_support.hpp"

using namespace motrpg;
using test::vec;

TEST_CASE("objective evaluation on the worked example") {
  MOProblem p = test::example1();
  Evaluator eval(p);

  Vector F = eval.objectives(vec({-4.5, 6.5}));
  CHECK(F[0] == doctest::Approx(177.0).epsilon(1e-12));
  CHECK(F[1] == doctest::Approx(155.0).epsilon(1e-12));

  F = eval.objectives(vec({0.0, 0.0}));
  CHECK(F[0] == doctest::Approx(8.0));   // 0 + max{8, 0}
  CHECK(F[1] == doctest::Approx(50.0));  // 50 + max{0, 0}
}

TEST_CASE("least-squares term") {
  MOProblem p;
  p.name = "ls";
  p.m = 1;
  p.n = 2;
  Objective obj;
  obj.smooth = SmoothTerm::least_squares(Matrix::Identity(2, 2), Vector::Zero(2));
  obj.nonsmooth = NonsmoothTerm::weighted_l1(0.0);
  p.objectives.push_back(obj);

  Evaluator eval(p);
  auto [f, g] = eval.components(vec({3.0, 4.0}));
  CHECK(f[0] == doctest::Approx(12.5));
  CHECK(g[0] == doctest::Approx(0.0));
}

TEST_CASE("analytic gradients of the worked example") {
  MOProblem p = test::example1();
  Evaluator eval(p);
  Vector g1 = eval.smooth_gradient(vec({-4.5, 6.5}), 0);
  CHECK(g1[0] == doctest::Approx(-9.0));
  CHECK(g1[1] == doctest::Approx(13.0));
  Vector g2 = eval.smooth_gradient(vec({2.0, 3.0}), 1);
  CHECK(g2[0] == doctest::Approx(-6.0));
  CHECK(g2[1] == doctest::Approx(-4.0));
}

TEST_CASE("forward-difference gradient") {
  MOProblem p = test::half_sqnorm(2);
  p.objectives[0].smooth.gradient_mode = SmoothTerm::GradientMode::ForwardDifference;
  p.objectives[0].smooth.fd_step = 1e-7;
  Evaluator eval(p);
  Vector g = eval.smooth_gradient(vec({1.0, 0.0}), 0);
  CHECK(std::abs(g[0] - 1.0) < 1e-6);
  CHECK(std::abs(g[1] - 0.0) < 1e-6);
}

TEST_CASE("forward difference tracks the analytic gradient on the catalog") {
  // 10*h*(1 + |grad|) bound with a fixed step
  const double h = 1e-6;
  SplitMix64 rng(7);
  for (const auto& row : catalog()) {
    MOProblem p = instantiate(row.id);
    for (int rep = 0; rep < 5; ++rep) {
      const Vector x = test::random_box_point(*p.box, rng);
      for (int j = 0; j < p.m; ++j) {
        SmoothTerm term = p.objectives[static_cast<size_t>(j)].smooth;
        const Vector exact = term.analytic_gradient(x);
        term.gradient_mode = SmoothTerm::GradientMode::ForwardDifference;
        term.fd_step = h;
        term.gradient_fn = nullptr;  // force the difference path
        if (term.kind == SmoothTerm::Kind::QuadraticLeastSquares) {
          // least-squares terms always carry the analytic path; emulate by
          // rebuilding as a closed form
          Matrix A = term.A;
          Vector b = term.b;
          term = SmoothTerm::analytic(
              "", [A, b](const Vector& y) { return 0.5 * (A * y - b).squaredNorm(); },
              nullptr);
          term.gradient_mode = SmoothTerm::GradientMode::ForwardDifference;
          term.fd_step = h;
        }
        const Vector fd = smooth_gradient_raw(term, x);
        CHECK((fd - exact).norm() <= 10 * h * (1.0 + exact.norm()));
      }
    }
  }
}

TEST_CASE("active subgradients of the worked example at the critical point") {
  MOProblem p = test::example1();
  const Vector x = vec({2.0, 3.0});

  ActiveSubgradient s1 = active_subgradients(p, x, 0);
  REQUIRE(s1.generators.size() == 1);  // only x1^2 + 8 x2 is active (28 > 25)
  CHECK(s1.active_pieces == std::vector<int>{1});
  CHECK(s1.generators[0][0] == doctest::Approx(4.0));
  CHECK(s1.generators[0][1] == doctest::Approx(8.0));

  ActiveSubgradient s2 = active_subgradients(p, x, 1);
  REQUIRE(s2.generators.size() == 2);  // both pieces tie at 13
  CHECK(s2.generators[0][0] == doctest::Approx(5.0));
  CHECK(s2.generators[0][1] == doctest::Approx(1.0));
  CHECK(s2.generators[1][0] == doctest::Approx(4.0));
  CHECK(s2.generators[1][1] == doctest::Approx(6.0));
}

TEST_CASE("weighted-l1 subgradient endpoints") {
  MOProblem p;
  p.name = "l1";
  p.m = 1;
  p.n = 2;
  Objective obj;
  obj.smooth = SmoothTerm::analytic(
      "", [](const Vector&) { return 0.0; },
      [](const Vector& x) { return Vector(Vector::Zero(x.size())); });
  obj.nonsmooth = NonsmoothTerm::weighted_l1(2.0);
  p.objectives.push_back(obj);

  ActiveSubgradient s = active_subgradients(p, vec({0.5, 0.0}), 0);
  REQUIRE(s.generators.size() == 2);  // one ambiguous coordinate
  CHECK(s.active_pieces == std::vector<int>{1});
  for (const Vector& g : s.generators) CHECK(g[0] == doctest::Approx(1.0));
  CHECK(s.generators[0][1] == doctest::Approx(-1.0));
  CHECK(s.generators[1][1] == doctest::Approx(1.0));
}

TEST_CASE("zero term has a single zero generator") {
  MOProblem p = test::half_sqnorm(3);
  ActiveSubgradient s = active_subgradients(p, Vector::Ones(3), 0);
  REQUIRE(s.generators.size() == 1);
  CHECK(s.generators[0].norm() == 0.0);
}

TEST_CASE("subgradient inequality holds for returned generators") {
  SplitMix64 rng(11);
  for (const auto& row : catalog()) {
    MOProblem p = instantiate(row.id);
    const Vector x = test::random_box_point(*p.box, rng);
    for (int j = 0; j < p.m; ++j) {
      const auto& g = p.objectives[static_cast<size_t>(j)].nonsmooth;
      const double gx = g.value(x);
      const ActiveSubgradient sub = active_subgradients(p, x, j);
      for (int probe = 0; probe < 100; ++probe) {
        const Vector y = test::random_box_point(*p.box, rng);
        const double gy = g.value(y);
        for (const Vector& xi : sub.generators) {
          CHECK(gy >= gx + xi.dot(y - x) - 1e-9 * (1 + std::abs(gy)));
        }
      }
    }
  }
}

TEST_CASE("objectives are convex along random segments") {
  SplitMix64 rng(13);
  for (const auto& row : catalog()) {
    MOProblem p = instantiate(row.id);
    Evaluator eval(p);
    for (int probe = 0; probe < 40; ++probe) {
      const Vector x = test::random_box_point(*p.box, rng);
      const Vector y = test::random_box_point(*p.box, rng);
      const double alpha = rng.next_double();
      const Vector Fx = eval.objectives(x);
      const Vector Fy = eval.objectives(y);
      const Vector Fm = eval.objectives(alpha * x + (1 - alpha) * y);
      for (int j = 0; j < p.m; ++j) {
        const double bound = alpha * Fx[j] + (1 - alpha) * Fy[j];
        CHECK(Fm[j] <= bound + 1e-9 * (1 + std::abs(bound)));
      }
    }
  }
}

TEST_CASE("evaluation counters are exact") {
  MOProblem p = test::example1();
  Evaluator eval(p);
  const Vector x = vec({1.0, 1.0});

  eval.objectives(x);  // f += 2, g += 2
  CHECK(eval.counters().f_evals == 2);
  CHECK(eval.counters().g_evals == 2);
  CHECK(eval.counters().grad_evals == 0);

  eval.smooth_gradient(x, 0);  // analytic: grad += 1
  eval.smooth_gradient(x, 1);
  CHECK(eval.counters().f_evals == 2);
  CHECK(eval.counters().grad_evals == 2);

  eval.nonsmooth_value(x, 0);  // g += 1
  CHECK(eval.counters().g_evals == 3);

  // forward-difference counting with and without a cached smooth value
  MOProblem q = test::half_sqnorm(2);
  q.objectives[0].smooth.gradient_mode =
      SmoothTerm::GradientMode::ForwardDifference;
  Evaluator ev2(q);
  ev2.smooth_gradient(x, 0);  // no cache: f += n + 1 = 3, grad += 1
  CHECK(ev2.counters().f_evals == 3);
  CHECK(ev2.counters().grad_evals == 1);

  ev2.objectives(x);          // f += 1, g += 1, caches f(x)
  ev2.smooth_gradient(x, 0);  // cached: f += n = 2, grad += 1
  CHECK(ev2.counters().f_evals == 6);
  CHECK(ev2.counters().grad_evals == 2);
  CHECK(ev2.counters().g_evals == 1);
}

TEST_CASE("evaluation error paths") {
  MOProblem p = test::example1();
  Evaluator eval(p);
  CHECK_THROWS_AS(eval.objectives(Vector::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(eval.smooth_gradient(Vector::Zero(2), 5), std::invalid_argument);
  CHECK_THROWS_AS(active_subgradients(p, Vector::Zero(2), 0, -1.0),
                  std::invalid_argument);

  MOProblem bad;
  bad.name = "bad";
  bad.m = 2;
  bad.n = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("single-objective problems are accepted") {
  MOProblem p = test::half_sqnorm(2);
  CHECK_NOTHROW(p.validate());
}
