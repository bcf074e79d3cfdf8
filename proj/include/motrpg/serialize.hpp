#ifndef MOTRPG_SERIALIZE_HPP
#define MOTRPG_SERIALIZE_HPP

#include <string>

#include "json.hpp"
#include "motrpg/bench.hpp"
#include "motrpg/metrics.hpp"
#include "motrpg/mopg.hpp"
#include "motrpg/problem.hpp"
#include "motrpg/trust_region.hpp"

namespace motrpg {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

/// Problem schema: {schema_version, name, m, n, objectives: [{smooth, nonsmooth}],
/// box: {lb, ub}}. Least-squares data embeds as row-major arrays; analytic
/// closed forms serialize by registry family name.
json problem_to_json(const MOProblem& problem);
MOProblem problem_from_json(const json& j);

json counters_to_json(const EvalCounters& c);

json config_to_json(const SolverConfig& c);
SolverConfig solver_config_from_json(const json& j);

json config_to_json(const MOPGConfig& c);
MOPGConfig mopg_config_from_json(const json& j);

/// Full-trajectory run record.
json run_to_json(const SolverRun& run);

/// Compact per-iterate table: k, F..., delta, norm_d, rho, accepted.
std::string run_to_csv(const SolverRun& run);

json archive_to_json(const MOProblem& problem, const std::string& solver_id,
                     const MultistartResult& result);

/// One row per retained point: solver, start, x..., F...
std::string archive_to_csv(const ParetoArchive& archive, int n, int m);

json mols_to_json(const MOLSInstance& inst);
MOLSInstance mols_from_json(const json& j);

std::string format_double(double v);  // %.17g, deterministic

}  // namespace motrpg

#endif  // MOTRPG_SERIALIZE_HPP
