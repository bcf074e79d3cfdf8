#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "motrpg/hull.hpp"
#include "motrpg/rng.hpp"
#include "test_support.hpp"

using namespace motrpg;
using test::vec;

namespace {

// dense convex-combination scan over a triangle, used as a coarse reference
double scan_distance_3(const Vector& a, const Vector& b, const Vector& c) {
  double best = std::numeric_limits<double>::infinity();
  const int N = 400;
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j + i <= N; ++j) {
      const double w1 = static_cast<double>(i) / N;
      const double w2 = static_cast<double>(j) / N;
      const double w3 = 1.0 - w1 - w2;
      best = std::min(best, (w1 * a + w2 * b + w3 * c).norm());
    }
  }
  return best;
}

}  // namespace

TEST_CASE("single generator") {
  MinNormPoint r = min_norm_point({vec({3.0, 4.0})});
  CHECK(r.distance == doctest::Approx(5.0));
  CHECK(r.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("symmetric pair straddles the origin") {
  MinNormPoint r = min_norm_point({vec({1.0, 0.0}), vec({-1.0, 0.0})});
  CHECK(r.distance <= 1e-12);
  CHECK(r.weights[0] == doctest::Approx(0.5));
  CHECK(r.weights[1] == doctest::Approx(0.5));
}

TEST_CASE("triangle containing the origin") {
  MinNormPoint r =
      min_norm_point({vec({8.0, 14.0}), vec({-1.0, -3.0}), vec({-2.0, 2.0})});
  CHECK(r.distance <= 1e-10);
  // exact convex weights from the 3x3 linear system
  CHECK(r.weights[0] == doctest::Approx(0.129032258).epsilon(1e-6));
  CHECK(r.weights[1] == doctest::Approx(0.709677419).epsilon(1e-6));
  CHECK(r.weights[2] == doctest::Approx(0.161290323).epsilon(1e-6));
}

TEST_CASE("segment away from the origin") {
  // p(s) = (1,1) + s(2,-2); s* = 0.25 gives (1.5, 0.5)
  MinNormPoint r = min_norm_point({vec({1.0, 1.0}), vec({3.0, -1.0})});
  CHECK(r.distance == doctest::Approx(std::sqrt(2.5)));
  CHECK(r.point[0] == doctest::Approx(1.5));
  CHECK(r.point[1] == doctest::Approx(0.5));
}

TEST_CASE("weights stay on the simplex and reproduce the point") {
  SplitMix64 rng(41);
  for (int rep = 0; rep < 50; ++rep) {
    const int K = 2 + static_cast<int>(rng.next_u64() % 6);
    std::vector<Vector> gens;
    for (int k = 0; k < K; ++k) {
      Vector v(3);
      for (int i = 0; i < 3; ++i) v[i] = rng.next_double(-4, 4);
      gens.push_back(v);
    }
    MinNormPoint r = min_norm_point(gens);
    CHECK(r.weights.minCoeff() >= -1e-12);
    CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-10));
    Vector recon = Vector::Zero(3);
    for (int k = 0; k < K; ++k) {
      recon += r.weights[k] * gens[static_cast<size_t>(k)];
    }
    CHECK((recon - r.point).norm() <= 1e-9);
    // optimality: p'v >= p'p for every generator
    for (const auto& v : gens) {
      CHECK(r.point.dot(v) >=
            r.point.squaredNorm() - 1e-8 * (1 + r.point.squaredNorm()));
    }
  }
}

TEST_CASE("matches a dense scan on random triangles") {
  SplitMix64 rng(43);
  for (int rep = 0; rep < 20; ++rep) {
    Vector a(2), b(2), c(2);
    for (auto* v : {&a, &b, &c}) {
      (*v)[0] = rng.next_double(-3, 3);
      (*v)[1] = rng.next_double(-3, 3);
    }
    const double exact = min_norm_point({a, b, c}).distance;
    const double scanned = scan_distance_3(a, b, c);
    CHECK(exact <= scanned + 1e-9);
    CHECK(scanned <= exact + 2e-2 * (1 + exact));  // the scan is coarse
  }
}

TEST_CASE("rejects empty and mismatched input") {
  CHECK_THROWS_AS(min_norm_point({}), std::invalid_argument);
  CHECK_THROWS_AS(min_norm_point({vec({1.0}), vec({1.0, 2.0})}),
                  std::invalid_argument);
}
