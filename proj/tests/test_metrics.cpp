#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "motrpg/metrics.hpp"
#include "motrpg/rng.hpp"
#include "test_support.hpp"

using namespace motrpg;
using test::vec;

TEST_CASE("purity") {
  {
    // identical fronts
    std::vector<Vector> f = {vec({1.0, 2.0}), vec({2.0, 1.0})};
    FrontSet fs = FrontSet::build({"A", "B"}, {f, f});
    const auto p = purity(fs);
    CHECK(*p[0] == doctest::Approx(1.0));
    CHECK(*p[1] == doctest::Approx(1.0));
  }
  {
    // one solver fully dominated by the other
    std::vector<Vector> good = {vec({0.0, 0.0})};
    std::vector<Vector> bad = {vec({1.0, 1.0}), vec({2.0, 2.0})};
    FrontSet fs = FrontSet::build({"A", "B"}, {bad, good});
    const auto p = purity(fs);
    CHECK(*p[0] == doctest::Approx(0.0));
    CHECK(*p[1] == doctest::Approx(1.0));
  }
  {
    // empty front reports missing
    FrontSet fs = FrontSet::build({"A", "B"}, {{}, {vec({1.0, 1.0})}});
    const auto p = purity(fs);
    CHECK(!p[0].has_value());
    CHECK(*p[1] == doctest::Approx(1.0));
  }
  {
    // against a hand check on random fronts
    SplitMix64 rng(83);
    std::vector<Vector> fa, fb;
    for (int i = 0; i < 60; ++i) {
      fa.push_back(vec({rng.next_double(), rng.next_double()}));
      fb.push_back(vec({rng.next_double(), rng.next_double()}));
    }
    FrontSet fs = FrontSet::build({"A", "B"}, {fa, fb});
    const auto p = purity(fs);
    for (int s = 0; s < 2; ++s) {
      const auto& front = fs.fronts[static_cast<size_t>(s)];
      int manual = 0;
      for (const auto& q : front) {
        bool member = false;
        for (const auto& r : fs.reference) {
          if ((q - r).cwiseAbs().maxCoeff() <= 1e-8) member = true;
        }
        manual += member;
      }
      CHECK(*p[static_cast<size_t>(s)] ==
            doctest::Approx(double(manual) / front.size()));
    }
  }
}

TEST_CASE("spread metrics") {
  const std::vector<Vector> uniform = {vec({0.0, 2.0}), vec({1.0, 1.0}),
                                       vec({2.0, 0.0})};
  CHECK(gamma_spread(uniform) == doctest::Approx(1.0));
  CHECK(delta_spread(uniform) == doctest::Approx(0.0));

  const std::vector<Vector> gappy = {vec({0.0, 3.0}), vec({0.1, 2.9}),
                                     vec({3.0, 0.0})};
  CHECK(gamma_spread(gappy) == doctest::Approx(2.9));
  CHECK(delta_spread(gappy) > 0);

  CHECK_THROWS_WITH_AS(gamma_spread({vec({1.0, 1.0})}),
                       "gamma spread needs a front of at least 2 points",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(delta_spread({vec({1.0, 1.0}), vec({2.0, 0.0})}),
                       "delta spread needs a front of at least 3 points",
                       std::invalid_argument);

  // direct recomputation from sorted coordinates on random fronts
  SplitMix64 rng(89);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<Vector> front;
    for (int i = 0; i < 25; ++i) {
      front.push_back(vec({rng.next_double(), rng.next_double()}));
    }
    double gamma = 0, delta = 0;
    for (int j = 0; j < 2; ++j) {
      std::vector<double> c;
      for (const auto& p : front) c.push_back(p[j]);
      std::sort(c.begin(), c.end());
      std::vector<double> gaps;
      for (std::size_t i = 0; i + 1 < c.size(); ++i) gaps.push_back(c[i + 1] - c[i]);
      double mean = 0;
      for (double g : gaps) mean += g;
      mean /= gaps.size();
      double dev = 0, mx = 0;
      for (double g : gaps) {
        dev += std::abs(g - mean);
        mx = std::max(mx, g);
      }
      gamma = std::max(gamma, mx);
      delta = std::max(delta, dev / (gaps.size() * mean));
    }
    CHECK(gamma_spread(front) == doctest::Approx(gamma));
    CHECK(delta_spread(front) == doctest::Approx(delta));
  }
}

TEST_CASE("hypervolume in two and three dimensions") {
  CHECK(hypervolume({vec({1.0, 0.0}), vec({0.0, 1.0})}, vec({2.0, 2.0})) ==
        doctest::Approx(3.0));
  CHECK(hypervolume({vec({0.0, 0.0, 0.0})}, vec({1.0, 1.0, 1.0})) ==
        doctest::Approx(1.0));

  // non-dominating points are excluded with a count
  int excluded = 0;
  const double hv = hypervolume({vec({1.0, 0.0}), vec({3.0, 0.0})},
                                vec({2.0, 2.0}), &excluded);
  CHECK(excluded == 1);
  CHECK(hv == doctest::Approx(2.0));

  CHECK_THROWS_AS(hypervolume({vec({0.0})}, vec({1.0})), std::invalid_argument);

  // dominated points change nothing
  const double a = hypervolume({vec({1.0, 0.0}), vec({0.0, 1.0})}, vec({2.0, 2.0}));
  const double b = hypervolume(
      {vec({1.0, 0.0}), vec({0.0, 1.0}), vec({1.5, 1.5})}, vec({2.0, 2.0}));
  CHECK(a == doctest::Approx(b));
}

TEST_CASE("hypervolume against a Monte Carlo estimate") {
  SplitMix64 rng(97);
  std::vector<Vector> front;
  for (int i = 0; i < 20; ++i) {
    front.push_back(
        vec({rng.next_double(), rng.next_double(), rng.next_double()}));
  }
  const Vector ref = vec({1.1, 1.1, 1.1});
  const double exact = hypervolume(front, ref);

  const long samples = 2000000;
  long hits = 0;
  for (long s = 0; s < samples; ++s) {
    const Vector p = vec({rng.next_double(0, 1.1), rng.next_double(0, 1.1),
                          rng.next_double(0, 1.1)});
    for (const auto& q : front) {
      if ((q.array() <= p.array()).all()) {
        ++hits;
        break;
      }
    }
  }
  const double mc = 1.1 * 1.1 * 1.1 * double(hits) / double(samples);
  CHECK(std::abs(exact - mc) <= 0.01 * std::max(exact, mc));
}

TEST_CASE("hypervolume grows when a nondominated point joins the front") {
  SplitMix64 rng(101);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Vector> front;
    for (int i = 0; i < 8; ++i) {
      front.push_back(vec({rng.next_double(), rng.next_double()}));
    }
    const Vector ref = vec({2.0, 2.0});
    const double before = hypervolume(front, ref);
    // a point nondominated against the current front
    std::vector<Vector> kept;
    for (auto i : nondominated_filter(front)) kept.push_back(front[i]);
    Vector extra = vec({-0.1, 1.9});
    front.push_back(extra);
    const double after = hypervolume(front, ref);
    CHECK(after >= before - 1e-12);
  }
}

TEST_CASE("performance profiles") {
  {
    // identical costs: both curves hit 1 at tau = 1
    const auto curves = perf_profile(
        {"A", "B"}, {{1.0, 1.0}, {5.0, 5.0}}, ProfileOrientation::LowerBetter);
    CHECK(curves[0].value_at(1.0) == doctest::Approx(1.0));
    CHECK(curves[1].value_at(1.0) == doctest::Approx(1.0));
  }
  {
    // cost 1 vs 2 on a single problem
    const auto curves = perf_profile({"A", "B"}, {{1.0, 2.0}},
                                     ProfileOrientation::LowerBetter);
    CHECK(curves[0].value_at(1.0) == doctest::Approx(1.0));
    CHECK(curves[1].value_at(1.9) == doctest::Approx(0.0));
    CHECK(curves[1].value_at(2.0) == doctest::Approx(1.0));
  }
  {
    // missing value counts as a failure for that solver
    const auto curves = perf_profile(
        {"A", "B"}, {{1.0, std::nullopt}, {2.0, 4.0}},
        ProfileOrientation::LowerBetter);
    CHECK(curves[0].value_at(100.0) == doctest::Approx(1.0));
    CHECK(curves[1].value_at(100.0) == doctest::Approx(0.5));
  }
  {
    // random table against direct recomputation
    SplitMix64 rng(103);
    std::vector<std::vector<std::optional<double>>> costs;
    for (int p = 0; p < 30; ++p) {
      costs.push_back({rng.next_double(1, 9), rng.next_double(1, 9)});
    }
    const auto curves =
        perf_profile({"A", "B"}, costs, ProfileOrientation::LowerBetter);
    for (double tau : {1.0, 1.3, 2.0, 4.0, 10.0}) {
      for (int s = 0; s < 2; ++s) {
        int count = 0;
        for (const auto& row : costs) {
          const double best = std::min(*row[0], *row[1]);
          if (*row[static_cast<size_t>(s)] / best <= tau) ++count;
        }
        CHECK(curves[static_cast<size_t>(s)].value_at(tau) ==
              doctest::Approx(double(count) / costs.size()));
      }
    }
    // curves are nondecreasing step functions in [0, 1]
    for (const auto& c : curves) {
      double prev = 0;
      for (const auto& [tau, rho] : c.breakpoints) {
        CHECK(tau >= 1.0);
        CHECK(rho >= prev);
        CHECK(rho <= 1.0);
        prev = rho;
      }
      CHECK(prev == doctest::Approx(1.0));
    }
  }
  {
    // higher-better orientation inverts the ratio
    const auto curves = perf_profile({"A", "B"}, {{4.0, 2.0}},
                                     ProfileOrientation::HigherBetter);
    CHECK(curves[0].value_at(1.0) == doctest::Approx(1.0));
    CHECK(curves[1].value_at(2.0) == doctest::Approx(1.0));
    CHECK(curves[1].value_at(1.5) == doctest::Approx(0.0));
  }
}

TEST_CASE("evaluation-cost formulas") {
  const FunCount a = fun_evals(10, 3, 0, 2, SolverClass::GradientBased);
  CHECK(a.fun == 16);
  const FunCount b = fun_evals(10, 3, 1, 2, SolverClass::HessianBased);
  CHECK(b.fun == 19);
  const FunCount c = fun_evals(0, 0, 0, 5, SolverClass::GradientBased);
  CHECK(c.fun == 0);

  EvalCounters counters;
  counters.f_evals = 10;
  counters.grad_evals = 3;
  CHECK(fun_evals(counters, 2, SolverClass::GradientBased).fun == 16);
}
