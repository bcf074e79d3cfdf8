#include "motrpg/bench.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "motrpg/rng.hpp"

namespace motrpg {

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// Nonsmooth add-ons for the 2-D catalog rows. Both are maxima of two convex
// pieces in the shape of the worked bi-objective example; the README table
// lists them explicitly.
NonsmoothTerm g_add_on_A() {
  QuadPiece p1;  // (x1-2)^2 + (x2+2)^2
  p1.P = 2 * Matrix::Identity(2, 2);
  p1.q = vec2(-4, 4);
  p1.r = 8;
  QuadPiece p2;  // x1^2 + 8 x2
  p2.P = Matrix::Zero(2, 2);
  p2.P(0, 0) = 2;
  p2.q = vec2(0, 8);
  p2.r = 0;
  return NonsmoothTerm::max_of_quadratics({p1, p2});
}

NonsmoothTerm g_add_on_B() {
  QuadPiece p1;  // 5 x1 + x2
  p1.P = Matrix::Zero(2, 2);
  p1.q = vec2(5, 1);
  p1.r = 0;
  QuadPiece p2;  // x1^2 + x2^2
  p2.P = 2 * Matrix::Identity(2, 2);
  p2.q = Vector::Zero(2);
  p2.r = 0;
  return NonsmoothTerm::max_of_quadratics({p1, p2});
}

using Fam = std::pair<std::function<double(const Vector&)>,
                      std::function<Vector(const Vector&)>>;

const std::map<std::string, Fam>& family_registry() {
  static const std::map<std::string, Fam> reg = [] {
    std::map<std::string, Fam> r;
    r["bk1_f1"] = {[](const Vector& x) { return x.squaredNorm(); },
                   [](const Vector& x) { return Vector(2 * x); }};
    r["bk1_f2"] = {
        [](const Vector& x) {
          return (x[0] - 5) * (x[0] - 5) + (x[1] - 5) * (x[1] - 5);
        },
        [](const Vector& x) { return vec2(2 * (x[0] - 5), 2 * (x[1] - 5)); }};
    r["jin1_f1"] = {
        [](const Vector& x) { return x.squaredNorm() / x.size(); },
        [](const Vector& x) { return Vector(2.0 / x.size() * x); }};
    r["jin1_f2"] = {
        [](const Vector& x) {
          return (x.array() - 2).square().sum() / x.size();
        },
        [](const Vector& x) {
          return Vector(2.0 / x.size() * (x.array() - 2).matrix());
        }};
    r["lovison1_f1"] = {
        [](const Vector& x) { return 1.05 * x[0] * x[0] + 0.98 * x[1] * x[1]; },
        [](const Vector& x) { return vec2(2.1 * x[0], 1.96 * x[1]); }};
    r["lovison1_f2"] = {
        [](const Vector& x) {
          return 0.99 * (x[0] - 3) * (x[0] - 3) +
                 1.03 * (x[1] - 2.5) * (x[1] - 2.5);
        },
        [](const Vector& x) {
          return vec2(1.98 * (x[0] - 3), 2.06 * (x[1] - 2.5));
        }};
    r["lovison4_f1"] = {[](const Vector& x) { return x.squaredNorm(); },
                        [](const Vector& x) { return Vector(2 * x); }};
    r["lovison4_f2"] = {
        [](const Vector& x) {
          return (x[0] - 6) * (x[0] - 6) + (x[1] + 0.5) * (x[1] + 0.5);
        },
        [](const Vector& x) { return vec2(2 * (x[0] - 6), 2 * (x[1] + 0.5)); }};
    r["lrs1_f1"] = {[](const Vector& x) { return x.squaredNorm(); },
                    [](const Vector& x) { return Vector(2 * x); }};
    r["lrs1_f2"] = {
        [](const Vector& x) {
          return (x[0] - 2) * (x[0] - 2) + (x[1] - 2) * (x[1] - 2);
        },
        [](const Vector& x) { return vec2(2 * (x[0] - 2), 2 * (x[1] - 2)); }};
    r["sp1_f1"] = {
        [](const Vector& x) {
          const double u = x[0] - 1, v = x[0] - x[1];
          return u * u + v * v;
        },
        [](const Vector& x) {
          const double u = x[0] - 1, v = x[0] - x[1];
          return vec2(2 * u + 2 * v, -2 * v);
        }};
    r["sp1_f2"] = {
        [](const Vector& x) {
          const double u = x[1] - 3, v = x[0] - x[1];
          return u * u + v * v;
        },
        [](const Vector& x) {
          const double u = x[1] - 3, v = x[0] - x[1];
          return vec2(2 * v, 2 * u - 2 * v);
        }};
    r["ssfy1_f1"] = {[](const Vector& x) { return x.squaredNorm(); },
                     [](const Vector& x) { return Vector(2 * x); }};
    r["ssfy1_f2"] = {
        [](const Vector& x) {
          return (x[0] - 1) * (x[0] - 1) + (x[1] - 2) * (x[1] - 2);
        },
        [](const Vector& x) { return vec2(2 * (x[0] - 1), 2 * (x[1] - 2)); }};
    r["vu1_f1"] = {
        [](const Vector& x) { return std::sqrt(1.0 + x.squaredNorm()); },
        [](const Vector& x) {
          return Vector(x / std::sqrt(1.0 + x.squaredNorm()));
        }};
    r["vu1_f2"] = {
        [](const Vector& x) { return x[0] * x[0] + 3 * x[1] * x[1] + 1; },
        [](const Vector& x) { return vec2(2 * x[0], 6 * x[1]); }};
    r["vu2_f1"] = {[](const Vector& x) { return x[0] + x[1] + 1; },
                   [](const Vector&) { return vec2(1, 1); }};
    r["vu2_f2"] = {[](const Vector& x) { return x[0] * x[0] + 2 * x[1] - 1; },
                   [](const Vector& x) { return vec2(2 * x[0], 2); }};
    r["mop7_f1"] = {
        [](const Vector& x) {
          return (x[0] - 2) * (x[0] - 2) / 2 + (x[1] + 1) * (x[1] + 1) / 13 + 3;
        },
        [](const Vector& x) {
          return vec2(x[0] - 2, 2 * (x[1] + 1) / 13);
        }};
    r["mop7_f2"] = {
        [](const Vector& x) {
          const double u = x[0] + x[1] - 3, v = -x[0] + x[1] + 2;
          return u * u / 36 + v * v / 8 - 17;
        },
        [](const Vector& x) {
          const double u = x[0] + x[1] - 3, v = -x[0] + x[1] + 2;
          return vec2(u / 18 - v / 4, u / 18 + v / 4);
        }};
    r["mop7_f3"] = {
        [](const Vector& x) {
          const double u = x[0] + 2 * x[1] - 1, v = -x[0] + 2 * x[1];
          return u * u / 175 + v * v / 17 - 13;
        },
        [](const Vector& x) {
          const double u = x[0] + 2 * x[1] - 1, v = -x[0] + 2 * x[1];
          return vec2(2 * u / 175 - 2 * v / 17, 4 * u / 175 + 4 * v / 17);
        }};
    return r;
  }();
  return reg;
}

Box box2(double lo, double hi) {
  Box b;
  b.lb = vec2(lo, lo);
  b.ub = vec2(hi, hi);
  return b;
}

MOProblem two_objective(const std::string& name, const std::string& f1,
                        const std::string& f2, const NonsmoothTerm& g1,
                        const NonsmoothTerm& g2, const Box& box) {
  MOProblem p;
  p.name = name;
  p.m = 2;
  p.n = 2;
  p.objectives.push_back({smooth_family(f1), g1});
  p.objectives.push_back({smooth_family(f2), g2});
  p.box = box;
  p.validate();
  return p;
}

constexpr std::uint64_t kMols1Seed = 42;

}  // namespace

bool is_known_smooth_family(const std::string& family) {
  return family_registry().count(family) > 0;
}

SmoothTerm smooth_family(const std::string& family) {
  const auto it = family_registry().find(family);
  if (it == family_registry().end()) {
    throw std::invalid_argument("unknown smooth family '" + family + "'");
  }
  return SmoothTerm::analytic(family, it->second.first, it->second.second);
}

MOLSInstance generate_mols(int m, int n, int rows, std::uint64_t seed,
                           std::vector<double> nu) {
  if (m < 1 || n < 1 || rows < 1) {
    throw std::invalid_argument("MOLS generation needs m, n, rows >= 1");
  }
  if (static_cast<int>(nu.size()) != m) {
    throw std::invalid_argument("nu size must match objective count");
  }
  MOLSInstance inst;
  inst.m = m;
  inst.n = n;
  inst.rows = rows;
  inst.seed = seed;
  inst.nu = std::move(nu);
  SplitMix64 rng(seed);
  for (int j = 0; j < m; ++j) {
    Matrix A(rows, n);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < n; ++c) A(r, c) = rng.next_double(0.0, 5.0);
    }
    Vector b(rows);
    for (int r = 0; r < rows; ++r) b[r] = rng.next_double(0.0, 10.0);
    inst.A.push_back(std::move(A));
    inst.b.push_back(std::move(b));
  }
  return inst;
}

MOProblem mols_problem(const MOLSInstance& inst, const std::string& name,
                       const Box& box) {
  MOProblem p;
  p.name = name;
  p.m = inst.m;
  p.n = inst.n;
  for (int j = 0; j < inst.m; ++j) {
    Objective obj;
    obj.smooth = SmoothTerm::least_squares(inst.A[static_cast<size_t>(j)],
                                           inst.b[static_cast<size_t>(j)]);
    obj.nonsmooth =
        NonsmoothTerm::weighted_l1(inst.nu[static_cast<size_t>(j)]);
    p.objectives.push_back(std::move(obj));
  }
  p.box = box;
  p.validate();
  return p;
}

const std::vector<TestProblemSpec>& catalog() {
  static const std::vector<TestProblemSpec> rows = {
      {"Example1", 2, 2, "bk1", "example1", box2(-3, 7)},
      {"BK1-gA", 2, 2, "bk1", "gA", box2(-5, 7.5)},
      {"BK1-gB", 2, 2, "bk1", "gB", box2(-5, 7.5)},
      {"BK1-L1", 2, 2, "bk1", "l1", box2(-5, 7.5)},
      {"Jin1-gA", 2, 2, "jin1", "gA", box2(-3, 5)},
      {"Lovison1-gA", 2, 2, "lovison1", "gA", box2(-3, 5)},
      {"Lovison4-gB", 2, 2, "lovison4", "gB",
       Box{vec2(-10, -5), vec2(5, 5)}},
      {"LRS1-gB", 2, 2, "lrs1", "gB", box2(-50, 50)},
      {"SP1-gA", 2, 2, "sp1", "gA", box2(-1, 5)},
      {"SSFY1-gB", 2, 2, "ssfy1", "gB", box2(-50, 50)},
      {"VU1-gA", 2, 2, "vu1", "gA", box2(-3, 3)},
      {"VU2-gB", 2, 2, "vu2", "gB", box2(-3, 3)},
      {"MOP7-L1", 3, 2, "mop7", "l1", box2(-4, 4)},
      {"MOLS1", 3, 3, "least-squares", "l1",
       Box{-Vector::Ones(3), Vector::Ones(3)}},
  };
  return rows;
}

MOProblem instantiate(const std::string& id) {
  if (id == "Example1") {
    return two_objective("Example1", "bk1_f1", "bk1_f2", g_add_on_A(),
                         g_add_on_B(), box2(-3, 7));
  }
  if (id == "BK1-gA") {
    return two_objective(id, "bk1_f1", "bk1_f2", g_add_on_A(), g_add_on_A(),
                         box2(-5, 7.5));
  }
  if (id == "BK1-gB") {
    return two_objective(id, "bk1_f1", "bk1_f2", g_add_on_B(), g_add_on_B(),
                         box2(-5, 7.5));
  }
  if (id == "BK1-L1") {
    return two_objective(id, "bk1_f1", "bk1_f2",
                         NonsmoothTerm::weighted_l1(0.30),
                         NonsmoothTerm::weighted_l1(1.06), box2(-5, 7.5));
  }
  if (id == "Jin1-gA") {
    return two_objective(id, "jin1_f1", "jin1_f2", g_add_on_A(), g_add_on_A(),
                         box2(-3, 5));
  }
  if (id == "Lovison1-gA") {
    return two_objective(id, "lovison1_f1", "lovison1_f2", g_add_on_A(),
                         g_add_on_A(), box2(-3, 5));
  }
  if (id == "Lovison4-gB") {
    return two_objective(id, "lovison4_f1", "lovison4_f2", g_add_on_B(),
                         g_add_on_B(), Box{vec2(-10, -5), vec2(5, 5)});
  }
  if (id == "LRS1-gB") {
    return two_objective(id, "lrs1_f1", "lrs1_f2", g_add_on_B(), g_add_on_B(),
                         box2(-50, 50));
  }
  if (id == "SP1-gA") {
    return two_objective(id, "sp1_f1", "sp1_f2", g_add_on_A(), g_add_on_A(),
                         box2(-1, 5));
  }
  if (id == "SSFY1-gB") {
    return two_objective(id, "ssfy1_f1", "ssfy1_f2", g_add_on_B(),
                         g_add_on_B(), box2(-50, 50));
  }
  if (id == "VU1-gA") {
    return two_objective(id, "vu1_f1", "vu1_f2", g_add_on_A(), g_add_on_A(),
                         box2(-3, 3));
  }
  if (id == "VU2-gB") {
    return two_objective(id, "vu2_f1", "vu2_f2", g_add_on_B(), g_add_on_B(),
                         box2(-3, 3));
  }
  if (id == "MOP7-L1") {
    MOProblem p;
    p.name = id;
    p.m = 3;
    p.n = 2;
    p.objectives.push_back(
        {smooth_family("mop7_f1"), NonsmoothTerm::weighted_l1(0.5)});
    p.objectives.push_back(
        {smooth_family("mop7_f2"), NonsmoothTerm::weighted_l1(1.0)});
    p.objectives.push_back(
        {smooth_family("mop7_f3"), NonsmoothTerm::weighted_l1(1.5)});
    p.box = box2(-4, 4);
    p.validate();
    return p;
  }
  if (id == "MOLS1") {
    MOLSInstance inst = generate_mols(3, 3, 10, kMols1Seed, {0.30, 1.06, 1.84});
    return mols_problem(inst, id, Box{-Vector::Ones(3), Vector::Ones(3)});
  }
  throw std::invalid_argument("unknown problem id '" + id + "'");
}

std::vector<Vector> sample_starts(const Box& box, int count,
                                  std::uint64_t seed) {
  if (!box.valid()) throw std::invalid_argument("invalid sampling box");
  if (count < 0) throw std::invalid_argument("count must be >= 0");
  SplitMix64 rng(seed);
  std::vector<Vector> out;
  out.reserve(static_cast<size_t>(count));
  const long n = box.lb.size();
  for (int s = 0; s < count; ++s) {
    Vector x(n);
    for (long i = 0; i < n; ++i) {
      x[i] = box.lb[i] + rng.next_double() * (box.ub[i] - box.lb[i]);
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<std::size_t> nondominated_filter(const std::vector<Vector>& points) {
  const std::size_t n = points.size();
  if (n == 0) return {};
  const long m = points[0].size();
  for (const Vector& p : points) {
    if (p.size() != m) throw std::invalid_argument("objective sizes differ");
  }
  auto dominates = [m](const Vector& a, const Vector& b) {
    bool strict = false;
    for (long i = 0; i < m; ++i) {
      if (a[i] > b[i]) return false;
      if (a[i] < b[i]) strict = true;
    }
    return strict;
  };
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < n && !dominated; ++j) {
      if (j != i && dominates(points[j], points[i])) dominated = true;
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

ParetoArchive make_archive(std::vector<ArchiveEntry> entries, double dedup_tol) {
  std::vector<Vector> fs;
  fs.reserve(entries.size());
  for (const auto& e : entries) fs.push_back(e.F);
  const std::vector<std::size_t> keep = nondominated_filter(fs);

  ParetoArchive arch;
  for (std::size_t idx : keep) {
    bool duplicate = false;
    for (const auto& have : arch.entries) {
      if ((have.F - entries[idx].F).cwiseAbs().maxCoeff() <= dedup_tol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) arch.entries.push_back(std::move(entries[idx]));
  }
  return arch;
}

MultistartResult multistart_run(const MOProblem& problem,
                                const std::string& solver_id,
                                const std::vector<Vector>& starts,
                                const SolverConfig& trust_config,
                                const MOPGConfig& mopg_config, int jobs) {
  if (solver_id != "MOTRPG" && solver_id != "MOPG") {
    throw std::invalid_argument("unknown solver id '" + solver_id + "'");
  }
  if (jobs < 1) jobs = 1;

  struct Slot {
    bool ok = false;
    bool has_run = false;
    SolverRun run;
    std::string error;
  };
  std::vector<Slot> slots(starts.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= starts.size()) return;
      try {
        slots[i].run = (solver_id == "MOTRPG")
                           ? solve(problem, starts[i], trust_config)
                           : solve_mopg(problem, starts[i], mopg_config);
        slots[i].ok = true;
        slots[i].has_run = true;
      } catch (const std::exception& ex) {
        slots[i].error = ex.what();
      }
    }
  };

  if (jobs == 1 || starts.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int nthreads = std::min<std::size_t>(jobs, starts.size());
    pool.reserve(static_cast<size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  MultistartResult result;
  std::vector<ArchiveEntry> terminal;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].ok) {
      ArchiveEntry e;
      e.x = slots[i].run.x_final;
      e.F = slots[i].run.F_final;
      e.solver_id = solver_id;
      e.start_index = static_cast<int>(i);
      terminal.push_back(std::move(e));
      result.runs.push_back(std::move(slots[i].run));
      result.run_start_index.push_back(static_cast<int>(i));
    } else {
      result.failures.push_back({static_cast<int>(i), slots[i].error});
    }
  }
  result.archive = make_archive(std::move(terminal));
  return result;
}

}  // namespace motrpg
