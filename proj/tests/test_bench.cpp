#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "motrpg/bench.hpp"
#include "motrpg/rng.hpp"
#include "test_support.hpp"

using namespace motrpg;
using test::vec;

TEST_CASE("start sampling is deterministic and box-bounded") {
  Box box;
  box.lb = vec({-3.0, -3.0});
  box.ub = vec({7.0, 7.0});

  const auto a = sample_starts(box, 100, 7);
  const auto b = sample_starts(box, 100, 7);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK((a[i].array() >= box.lb.array()).all());
    CHECK((a[i].array() <= box.ub.array()).all());
  }
  const auto c = sample_starts(box, 100, 8);
  CHECK(a[0] != c[0]);
}

TEST_CASE("sample mean sits near the box midpoint") {
  Box box;
  box.lb = vec({-2.0, 10.0});
  box.ub = vec({4.0, 11.0});
  const int N = 10000;
  const auto pts = sample_starts(box, N, 12345);
  Vector mean = Vector::Zero(2);
  for (const auto& p : pts) mean += p;
  mean /= N;
  // per-coordinate: uniform has sd = range/sqrt(12); allow 3 sigma of the mean
  for (int i = 0; i < 2; ++i) {
    const double mid = 0.5 * (box.lb[i] + box.ub[i]);
    const double sd = (box.ub[i] - box.lb[i]) / std::sqrt(12.0);
    CHECK(std::abs(mean[i] - mid) <= 3.0 * sd / std::sqrt(double(N)));
  }
}

TEST_CASE("splitmix64 reference values") {
  // first outputs for seed 1234567, cross-checked against the published
  // reference implementation
  SplitMix64 rng(1234567);
  CHECK(rng.next_u64() == 6457827717110365317ULL);
  CHECK(rng.next_u64() == 3203168211198807973ULL);
}

TEST_CASE("dominance filter") {
  {
    std::vector<Vector> pts = {vec({1.0, 2.0}), vec({2.0, 1.0}), vec({2.0, 2.0})};
    const auto keep = nondominated_filter(pts);
    CHECK(keep == std::vector<std::size_t>{0, 1});
  }
  {
    std::vector<Vector> pts = {vec({1.0, 1.0}), vec({1.0, 1.0}), vec({1.0, 1.0})};
    const auto keep = nondominated_filter(pts);
    CHECK(keep.size() == 3);  // identical points never strictly dominate
  }
  {
    // against the O(N^2) definition on random points
    SplitMix64 rng(71);
    std::vector<Vector> pts;
    for (int i = 0; i < 200; ++i) {
      pts.push_back(vec({rng.next_double(), rng.next_double()}));
    }
    const auto keep = nondominated_filter(pts);
    std::set<std::size_t> keep_set(keep.begin(), keep.end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (i == j) continue;
        if ((pts[j].array() <= pts[i].array()).all() && pts[j] != pts[i]) {
          dominated = true;
          break;
        }
      }
      CHECK(keep_set.count(i) == (dominated ? 0u : 1u));
    }
  }
}

TEST_CASE("filter is idempotent") {
  SplitMix64 rng(73);
  std::vector<Vector> pts;
  for (int i = 0; i < 120; ++i) {
    pts.push_back(vec({rng.next_double(), rng.next_double(), rng.next_double()}));
  }
  const auto once = nondominated_filter(pts);
  std::vector<Vector> kept;
  for (auto i : once) kept.push_back(pts[i]);
  const auto twice = nondominated_filter(kept);
  CHECK(twice.size() == kept.size());
}

TEST_CASE("catalog instantiation") {
  CHECK(catalog().size() >= 12);
  for (const auto& row : catalog()) {
    MOProblem p = instantiate(row.id);
    CHECK(p.m == row.m);
    CHECK(p.n == row.n);
    REQUIRE(p.box.has_value());
    CHECK(p.box->valid());
  }
  CHECK_THROWS_AS(instantiate("nosuch"), std::invalid_argument);

  // the worked example evaluates to its reference values
  MOProblem ex1 = instantiate("Example1");
  Evaluator eval(ex1);
  const Vector F = eval.objectives(vec({-4.5, 6.5}));
  CHECK(F[0] == doctest::Approx(177.0));
  CHECK(F[1] == doctest::Approx(155.0));
}

TEST_CASE("catalog problems evaluate finitely over the box") {
  SplitMix64 rng(79);
  for (const auto& row : catalog()) {
    MOProblem p = instantiate(row.id);
    Evaluator eval(p);
    for (int i = 0; i < 400; ++i) {
      const Vector F = eval.objectives(test::random_box_point(*p.box, rng));
      CHECK(F.allFinite());
    }
  }
}

TEST_CASE("least-squares fixture generation") {
  MOLSInstance inst = generate_mols(3, 3, 10, 42, {0.30, 1.06, 1.84});
  CHECK(inst.A.size() == 3);
  for (const auto& A : inst.A) {
    CHECK(A.minCoeff() >= 0.0);
    CHECK(A.maxCoeff() <= 5.0);
  }
  for (const auto& b : inst.b) {
    CHECK(b.minCoeff() >= 0.0);
    CHECK(b.maxCoeff() <= 10.0);
  }
  // deterministic regeneration
  MOLSInstance again = generate_mols(3, 3, 10, 42, {0.30, 1.06, 1.84});
  for (int j = 0; j < 3; ++j) {
    CHECK(inst.A[static_cast<size_t>(j)] == again.A[static_cast<size_t>(j)]);
    CHECK(inst.b[static_cast<size_t>(j)] == again.b[static_cast<size_t>(j)]);
  }
  // the shipped MOLS1 problem is this instance
  MOProblem p = instantiate("MOLS1");
  CHECK(p.objectives[0].smooth.A == inst.A[0]);
  CHECK(p.objectives[0].nonsmooth.nu == doctest::Approx(0.30));
  CHECK(p.objectives[2].nonsmooth.nu == doctest::Approx(1.84));
}

TEST_CASE("archive construction dedupes near-identical objective vectors") {
  std::vector<ArchiveEntry> entries;
  for (int i = 0; i < 3; ++i) {
    ArchiveEntry e;
    e.x = vec({double(i), 0.0});
    e.F = vec({1.0, 2.0 + i * 1e-9});  // dominance-free, nearly identical
    e.solver_id = "MOTRPG";
    e.start_index = i;
    entries.push_back(e);
  }
  ParetoArchive arch = make_archive(entries);
  CHECK(arch.entries.size() == 1);
  CHECK(arch.entries[0].start_index == 0);
}

TEST_CASE("multistart produces a dominance-free archive") {
  MOProblem p = test::example1();
  const auto starts = sample_starts(*p.box, 20, 7);
  MultistartResult res =
      multistart_run(p, "MOTRPG", starts, SolverConfig{}, MOPGConfig{}, 4);
  CHECK(res.failures.empty());
  CHECK(res.runs.size() == 20);
  CHECK(!res.archive.entries.empty());
  for (const auto& a : res.archive.entries) {
    for (const auto& b : res.archive.entries) {
      if (&a == &b) continue;
      const bool dominates =
          (a.F.array() <= b.F.array()).all() && a.F != b.F;
      CHECK(!dominates);
    }
  }

  // single start: archive of size one
  MultistartResult single = multistart_run(
      p, "MOTRPG", {starts[0]}, SolverConfig{}, MOPGConfig{}, 1);
  CHECK(single.archive.entries.size() == 1);

  // parallel and serial runs agree
  MultistartResult serial =
      multistart_run(p, "MOTRPG", starts, SolverConfig{}, MOPGConfig{}, 1);
  REQUIRE(serial.archive.entries.size() == res.archive.entries.size());
  for (std::size_t i = 0; i < serial.archive.entries.size(); ++i) {
    CHECK(serial.archive.entries[i].F == res.archive.entries[i].F);
  }

  CHECK_THROWS_AS(
      multistart_run(p, "NOPE", starts, SolverConfig{}, MOPGConfig{}, 1),
      std::invalid_argument);
}
