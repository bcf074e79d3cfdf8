#ifndef MOTRPG_BENCH_HPP
#define MOTRPG_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "motrpg/mopg.hpp"
#include "motrpg/problem.hpp"
#include "motrpg/trust_region.hpp"
#include "motrpg/types.hpp"

namespace motrpg {

/// One row of the shipped problem catalog.
struct TestProblemSpec {
  std::string id;
  int m = 0;
  int n = 0;
  std::string smooth_family;
  std::string nonsmooth_family;
  Box box;
};

/// A generated l1-regularized multi-objective least-squares instance:
/// f_j = 1/2 ||A_j x - b_j||^2 with A_j entries uniform in [0,5] and b_j
/// entries uniform in [0,10], g_j = (nu_j/2) ||x||_1.
struct MOLSInstance {
  int m = 0;
  int n = 0;
  int rows = 0;
  std::uint64_t seed = 0;
  std::vector<Matrix> A;
  std::vector<Vector> b;
  std::vector<double> nu;
};

/// Draw order: for j = 0..m-1, the 'rows x n' entries of A_j row-major, then
/// the 'rows' entries of b_j, all from one SplitMix64 stream seeded with
/// 'seed'.
MOLSInstance generate_mols(int m, int n, int rows, std::uint64_t seed,
                           std::vector<double> nu);

MOProblem mols_problem(const MOLSInstance& inst, const std::string& name,
                       const Box& box);

/// Shipped catalog. Every entry is convex with analytic gradients; exact
/// formulas are listed in the README problem table.
const std::vector<TestProblemSpec>& catalog();

/// Instantiates a catalog problem by id; throws std::invalid_argument for
/// unknown ids.
MOProblem instantiate(const std::string& id);

/// Smooth-family registry used by the catalog and by problem deserialization.
bool is_known_smooth_family(const std::string& family);
SmoothTerm smooth_family(const std::string& family);

/// 'count' points uniform per coordinate in the box, drawn coordinate-major
/// from one SplitMix64 stream. Deterministic given the seed.
std::vector<Vector> sample_starts(const Box& box, int count, std::uint64_t seed);

/// Indices of the points not dominated by any other point (F(y) <= F(x) with
/// F(y) != F(x)); order-preserving.
std::vector<std::size_t> nondominated_filter(const std::vector<Vector>& points);

struct ArchiveEntry {
  Vector x;
  Vector F;
  std::string solver_id;
  int start_index = 0;
};

/// Terminal points of a multi-start batch with the dominance filter applied
/// and near-duplicates (max-norm distance <= 1e-6 in objective space)
/// collapsed.
struct ParetoArchive {
  std::vector<ArchiveEntry> entries;
};

struct StartFailure {
  int start_index = 0;
  std::string message;
};

struct MultistartResult {
  ParetoArchive archive;
  std::vector<SolverRun> runs;       // one per successful start, start order
  std::vector<int> run_start_index;  // start index of each run
  std::vector<StartFailure> failures;
};

/// Runs the named solver ("MOTRPG" or "MOPG") from every start, in parallel
/// over 'jobs' threads, and archives the nondominated terminal points.
/// Individual start failures are recorded, never abort the batch.
MultistartResult multistart_run(const MOProblem& problem,
                                const std::string& solver_id,
                                const std::vector<Vector>& starts,
                                const SolverConfig& trust_config,
                                const MOPGConfig& mopg_config, int jobs = 1);

/// Archive construction from terminal points directly (filter + dedup).
ParetoArchive make_archive(std::vector<ArchiveEntry> entries,
                           double dedup_tol = 1e-6);

}  // namespace motrpg

#endif  // MOTRPG_BENCH_HPP
