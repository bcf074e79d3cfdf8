// Command-line driver: single solves, multi-start Pareto front generation,
// solver comparison metrics, and performance-profile emission. All outputs
// are deterministic for a fixed seed and embed the resolved configuration.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "motrpg/bench.hpp"
#include "motrpg/metrics.hpp"
#include "motrpg/mopg.hpp"
#include "motrpg/rng.hpp"
#include "motrpg/serialize.hpp"
#include "motrpg/subproblem.hpp"
#include "motrpg/trust_region.hpp"

namespace fs = std::filesystem;
using motrpg::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitMaxIters = 2;
constexpr int kExitSolverError = 3;

struct CommonOptions {
  std::string out_dir;
  std::uint64_t seed = 12345;
  int jobs = 1;
  std::vector<std::string> problems;
  std::vector<std::string> solvers = {"MOTRPG", "MOPG"};
  int starts = 100;
  // solver overrides
  std::optional<double> sigma0, sigma1, sigma2, sigma3, eps, delta_min;
  std::optional<int> max_iters;
  std::optional<double> ell0, growth;
};

std::string default_out_dir() {
  if (const char* env = std::getenv("MOTRPG_OUT")) return env;
  return ".";
}

motrpg::SolverConfig make_trust_config(const CommonOptions& o) {
  motrpg::SolverConfig c;
  if (o.sigma0) c.sigma0 = *o.sigma0;
  if (o.sigma1) c.sigma1 = *o.sigma1;
  if (o.sigma2) c.sigma2 = *o.sigma2;
  if (o.sigma3) c.sigma3 = *o.sigma3;
  if (o.eps) c.eps = *o.eps;
  if (o.delta_min) c.delta_min = *o.delta_min;
  if (o.max_iters) c.max_outer_iters = *o.max_iters;
  return c;
}

motrpg::MOPGConfig make_mopg_config(const CommonOptions& o) {
  motrpg::MOPGConfig c;
  if (o.eps) c.eps = *o.eps;
  if (o.max_iters) c.max_iters = *o.max_iters;
  if (o.ell0) c.ell0 = *o.ell0;
  if (o.growth) c.growth = *o.growth;
  return c;
}

motrpg::MOProblem load_problem(const std::string& id_or_path) {
  if (id_or_path.size() > 5 &&
      id_or_path.substr(id_or_path.size() - 5) == ".json") {
    std::ifstream in(id_or_path);
    if (!in) throw std::invalid_argument("cannot open '" + id_or_path + "'");
    json j;
    in >> j;
    return motrpg::problem_from_json(j);
  }
  return motrpg::instantiate(id_or_path);
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

// resolved experiment configuration embedded in every output file
json resolved_config(const CommonOptions& o) {
  json j;
  j["seed"] = o.seed;
  j["starts"] = o.starts;
  j["jobs"] = o.jobs;
  j["problems"] = o.problems;
  j["solvers"] = o.solvers;
  j["motrpg"] = motrpg::config_to_json(make_trust_config(o));
  j["mopg"] = motrpg::config_to_json(make_mopg_config(o));
  return j;
}

std::string csv_config_line(const json& cfg) {
  return "# config: " + cfg.dump() + "\n";
}

int cmd_list_problems() {
  std::cout << "id              m  n  smooth      nonsmooth\n";
  for (const auto& row : motrpg::catalog()) {
    std::printf("%-15s %d  %d  %-11s %s\n", row.id.c_str(), row.m, row.n,
                row.smooth_family.c_str(), row.nonsmooth_family.c_str());
  }
  return kExitOk;
}

int cmd_solve(const CommonOptions& opts, const std::string& problem_id,
              const std::string& x0_csv, bool sample_start,
              const std::string& solver_id, const std::string& dump_path) {
  motrpg::MOProblem problem;
  try {
    problem = load_problem(problem_id);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitBadInput;
  }

  motrpg::Vector x0;
  if (sample_start) {
    if (!problem.box) {
      std::cerr << "error: problem has no sampling box\n";
      return kExitBadInput;
    }
    x0 = motrpg::sample_starts(*problem.box, 1, opts.seed)[0];
  } else if (!x0_csv.empty()) {
    std::vector<double> vals;
    std::string token;
    std::stringstream ss(x0_csv);
    while (std::getline(ss, token, ',')) vals.push_back(std::stod(token));
    if (static_cast<int>(vals.size()) != problem.n) {
      std::cerr << "error: --x0 needs " << problem.n << " coordinates\n";
      return kExitBadInput;
    }
    x0 = Eigen::Map<motrpg::Vector>(vals.data(), static_cast<long>(vals.size()));
  } else {
    std::cerr << "error: give --x0 or --sample\n";
    return kExitBadInput;
  }

  if (!dump_path.empty()) {
    const auto models = motrpg::QuadModelSet::identity(problem.m, problem.n);
    json rows = json::array();
    for (const auto& r : motrpg::epigraph_rows(x0, problem, models, 1.0)) {
      json rj;
      rj["type"] = r.type;
      rj["objective"] = r.objective;
      rj["ad"] = motrpg::vector_to_json(r.ad);
      rj["at"] = r.at;
      rj["c0"] = r.c0;
      if (r.Hd.size() > 0) {
        json h = json::array();
        for (long i = 0; i < r.Hd.rows(); ++i)
          for (long c = 0; c < r.Hd.cols(); ++c) h.push_back(r.Hd(i, c));
        rj["Hd"] = std::move(h);
      }
      if (r.au.size() > 0) rj["au"] = motrpg::vector_to_json(r.au);
      rows.push_back(std::move(rj));
    }
    write_json(dump_path, {{"schema_version", motrpg::kSchemaVersion},
                           {"point", motrpg::vector_to_json(x0)},
                           {"delta", 1.0},
                           {"rows", rows}});
  }

  motrpg::SolverRun run;
  try {
    if (solver_id == "MOPG") {
      run = motrpg::solve_mopg(problem, x0, make_mopg_config(opts));
    } else {
      run = motrpg::solve(problem, x0, make_trust_config(opts));
    }
  } catch (const std::exception& ex) {
    std::cerr << "solver error: " << ex.what() << "\n";
    return kExitSolverError;
  }

  const json cfg = resolved_config(opts);
  json out = motrpg::run_to_json(run);
  out["config"] = cfg;
  const fs::path dir = opts.out_dir;
  const std::string stem = problem.name + "__" + run.solver_id;
  write_json(dir / (stem + ".run.json"), out);
  write_text(dir / (stem + ".trajectory.csv"),
             csv_config_line(cfg) + motrpg::run_to_csv(run));

  std::cout << run.solver_id << " on " << problem.name << ": "
            << motrpg::to_string(run.termination) << " after "
            << run.accepted_steps << " accepted steps; |F| = ["
            << run.F_final.transpose() << "], certificate distance = "
            << run.final_certificate.hull_distance << "\n";

  switch (run.termination) {
    case motrpg::Termination::Converged:
      return kExitOk;
    case motrpg::Termination::MaxIters:
      return kExitMaxIters;
    case motrpg::Termination::InnerLoopExhausted:
      return kExitSolverError;
  }
  return kExitSolverError;
}

json run_summary(const motrpg::SolverRun& run, int start_index) {
  return {{"start", start_index},
          {"termination", motrpg::to_string(run.termination)},
          {"accepted_steps", run.accepted_steps},
          {"counters", motrpg::counters_to_json(run.counters)},
          {"certificate_distance", run.final_certificate.hull_distance},
          {"descent_solves", run.descent_check.solves},
          {"descent_violations", run.descent_check.violations},
          {"x_final", motrpg::vector_to_json(run.x_final)},
          {"F_final", motrpg::vector_to_json(run.F_final)}};
}

int cmd_front(const CommonOptions& opts) {
  const json cfg = resolved_config(opts);
  const fs::path dir = opts.out_dir;
  json manifest;
  manifest["schema_version"] = motrpg::kSchemaVersion;
  manifest["config"] = cfg;
  json problem_list = json::array();

  for (const auto& pid : opts.problems) {
    motrpg::MOProblem problem;
    try {
      problem = load_problem(pid);
    } catch (const std::exception& ex) {
      std::cerr << "error: " << ex.what() << "\n";
      return kExitBadInput;
    }
    if (!problem.box) {
      std::cerr << "error: problem '" << problem.name << "' has no box\n";
      return kExitBadInput;
    }
    const std::uint64_t problem_seed =
        opts.seed ^ motrpg::fnv1a(problem.name.c_str());
    const auto starts =
        motrpg::sample_starts(*problem.box, opts.starts, problem_seed);

    json problem_entry;
    problem_entry["id"] = problem.name;
    problem_entry["seed"] = problem_seed;
    json solver_files = json::object();

    std::vector<std::vector<motrpg::Vector>> solver_fronts;
    for (const auto& solver : opts.solvers) {
      motrpg::MultistartResult result;
      try {
        result = motrpg::multistart_run(problem, solver, starts,
                                        make_trust_config(opts),
                                        make_mopg_config(opts), opts.jobs);
      } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitSolverError;
      }
      for (const auto& failure : result.failures) {
        std::cerr << problem.name << "/" << solver << " start "
                  << failure.start_index << " failed: " << failure.message
                  << "\n";
      }

      json arch = motrpg::archive_to_json(problem, solver, result);
      arch["config"] = cfg;
      json summaries = json::array();
      for (std::size_t i = 0; i < result.runs.size(); ++i) {
        summaries.push_back(
            run_summary(result.runs[i], result.run_start_index[i]));
      }
      arch["runs"] = std::move(summaries);

      const std::string stem = problem.name + "__" + solver;
      write_json(dir / (stem + ".archive.json"), arch);
      write_text(dir / (stem + ".archive.csv"),
                 csv_config_line(cfg) +
                     motrpg::archive_to_csv(result.archive, problem.n,
                                            problem.m));
      solver_files[solver] = stem + ".archive.json";

      std::vector<motrpg::Vector> front;
      for (const auto& e : result.archive.entries) front.push_back(e.F);
      solver_fronts.push_back(std::move(front));
      std::cout << problem.name << "/" << solver << ": "
                << result.archive.entries.size() << " nondominated points, "
                << result.failures.size() << " failed starts\n";
    }

    // merged reference front over all solvers of this problem
    const motrpg::FrontSet fs_all =
        motrpg::FrontSet::build(opts.solvers, solver_fronts);
    json ref = json::array();
    for (const auto& F : fs_all.reference) {
      ref.push_back(motrpg::vector_to_json(F));
    }
    write_json(dir / (problem.name + ".reference.json"),
               {{"schema_version", motrpg::kSchemaVersion},
                {"config", cfg},
                {"problem", problem.name},
                {"reference_front", ref}});

    problem_entry["files"] = std::move(solver_files);
    problem_entry["reference"] = problem.name + ".reference.json";
    problem_list.push_back(std::move(problem_entry));
  }

  manifest["problems"] = std::move(problem_list);
  write_json(dir / "front_manifest.json", manifest);
  return kExitOk;
}

int cmd_compare(const std::string& in_dir, const std::string& out_path) {
  const fs::path dir = in_dir;
  std::ifstream min(dir / "front_manifest.json");
  if (!min) {
    std::cerr << "error: no front_manifest.json in '" << in_dir << "'\n";
    return kExitBadInput;
  }
  json manifest;
  min >> manifest;
  const std::vector<std::string> solvers =
      manifest.at("config").at("solvers").get<std::vector<std::string>>();

  json report;
  report["schema_version"] = motrpg::kSchemaVersion;
  report["config"] = manifest.at("config");
  report["orientations"] = {{"purity", "higher-better"},
                            {"gamma_spread", "lower-better"},
                            {"delta_spread", "lower-better"},
                            {"hypervolume", "higher-better"},
                            {"fun_evals", "lower-better"}};
  json table = json::array();

  for (const auto& pe : manifest.at("problems")) {
    const std::string pid = pe.at("id").get<std::string>();
    std::vector<std::vector<motrpg::Vector>> fronts;
    std::vector<json> archives;
    for (const auto& solver : solvers) {
      std::ifstream ain(dir / pe.at("files").at(solver).get<std::string>());
      json arch;
      ain >> arch;
      std::vector<motrpg::Vector> front;
      for (const auto& e : arch.at("entries")) {
        front.push_back(motrpg::vector_from_json(e.at("F")));
      }
      fronts.push_back(std::move(front));
      archives.push_back(std::move(arch));
    }
    const motrpg::FrontSet fs_all = motrpg::FrontSet::build(solvers, fronts);
    const auto purities = motrpg::purity(fs_all);

    // hypervolume reference: componentwise max over the union plus 10% range
    motrpg::Vector hi, lo;
    bool first = true;
    for (const auto& front : fronts) {
      for (const auto& F : front) {
        if (first) {
          hi = F;
          lo = F;
          first = false;
        } else {
          hi = hi.cwiseMax(F);
          lo = lo.cwiseMin(F);
        }
      }
    }
    motrpg::Vector hv_ref;
    if (!first) {
      motrpg::Vector range = (hi - lo).cwiseMax(1.0);
      hv_ref = hi + 0.1 * range;
    }

    json row;
    row["problem"] = pid;
    json per_solver = json::object();
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      json cell;
      cell["front_size"] = fronts[s].size();
      cell["purity"] = purities[s] ? json(*purities[s]) : json(nullptr);
      try {
        cell["gamma_spread"] = motrpg::gamma_spread(fronts[s]);
      } catch (const std::exception&) {
        cell["gamma_spread"] = nullptr;
      }
      try {
        cell["delta_spread"] = motrpg::delta_spread(fronts[s]);
      } catch (const std::exception&) {
        cell["delta_spread"] = nullptr;
      }
      if (hv_ref.size() > 0 && (hv_ref.size() == 2 || hv_ref.size() == 3)) {
        cell["hypervolume"] = motrpg::hypervolume(fronts[s], hv_ref);
        cell["hypervolume_reference"] = motrpg::vector_to_json(hv_ref);
      } else {
        cell["hypervolume"] = nullptr;
      }
      // summed evaluation cost over all starts
      std::int64_t f = 0, grad = 0;
      for (const auto& rs : archives[s].at("runs")) {
        f += rs.at("counters").at("f_evals").get<std::int64_t>();
        grad += rs.at("counters").at("grad_evals").get<std::int64_t>();
      }
      const int n = static_cast<int>(
          archives[s].at("entries").empty()
              ? 0
              : archives[s].at("entries")[0].at("x").size());
      const auto fc =
          motrpg::fun_evals(f, grad, 0, n, motrpg::SolverClass::GradientBased);
      cell["fun_evals"] = fc.fun;
      cell["f_evals"] = fc.f;
      cell["grad_evals"] = fc.grad;
      per_solver[solvers[s]] = std::move(cell);
    }
    row["solvers"] = std::move(per_solver);
    table.push_back(std::move(row));
  }
  report["table"] = std::move(table);
  write_json(out_path, report);
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

int cmd_profile(const std::string& report_path, const std::string& out_dir) {
  std::ifstream rin(report_path);
  if (!rin) {
    std::cerr << "error: cannot open '" << report_path << "'\n";
    return kExitBadInput;
  }
  json report;
  rin >> report;
  const std::vector<std::string> solvers =
      report.at("config").at("solvers").get<std::vector<std::string>>();

  struct MetricSpec {
    const char* key;
    motrpg::ProfileOrientation orientation;
  };
  const MetricSpec metrics[] = {
      {"purity", motrpg::ProfileOrientation::HigherBetter},
      {"gamma_spread", motrpg::ProfileOrientation::LowerBetter},
      {"delta_spread", motrpg::ProfileOrientation::LowerBetter},
      {"hypervolume", motrpg::ProfileOrientation::HigherBetter},
      {"fun_evals", motrpg::ProfileOrientation::LowerBetter},
  };

  for (const auto& spec : metrics) {
    std::vector<std::vector<std::optional<double>>> costs;
    for (const auto& row : report.at("table")) {
      std::vector<std::optional<double>> prow;
      for (const auto& solver : solvers) {
        const json& cell = row.at("solvers").at(solver).at(spec.key);
        if (cell.is_null()) {
          prow.push_back(std::nullopt);
        } else {
          prow.push_back(cell.get<double>());
        }
      }
      costs.push_back(std::move(prow));
    }
    std::vector<motrpg::ProfileCurve> curves;
    try {
      curves = motrpg::perf_profile(solvers, costs, spec.orientation);
    } catch (const std::exception& ex) {
      std::cerr << "profile '" << spec.key << "' skipped: " << ex.what()
                << "\n";
      continue;
    }

    // merge breakpoints into one table
    std::vector<double> taus = {1.0};
    for (const auto& c : curves) {
      for (const auto& [tau, rho] : c.breakpoints) taus.push_back(tau);
    }
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

    std::string csv = "tau";
    for (const auto& s : solvers) csv += ",rho_" + s;
    csv += "\n";
    for (double tau : taus) {
      csv += motrpg::format_double(tau);
      for (const auto& c : curves) {
        csv += "," + motrpg::format_double(c.value_at(tau));
      }
      csv += "\n";
    }
    const std::string orientation_note =
        spec.orientation == motrpg::ProfileOrientation::LowerBetter
            ? "lower-better"
            : "higher-better";
    write_text(fs::path(out_dir) / ("profile_" + std::string(spec.key) + ".csv"),
               "# orientation: " + orientation_note + "\n" +
                   csv_config_line(report.at("config")) + csv);
  }
  std::cout << "profiles written to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-region proximal gradient solver and benchmark harness "
               "for composite multi-objective problems"};
  app.require_subcommand(1);

  CommonOptions opts;
  opts.out_dir = default_out_dir();

  auto add_common = [&](CLI::App* cmd, bool with_solver_flags) {
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "RNG seed");
    if (with_solver_flags) {
      cmd->add_option("--sigma0", opts.sigma0, "acceptance threshold");
      cmd->add_option("--sigma1", opts.sigma1, "radius expansion factor");
      cmd->add_option("--sigma2", opts.sigma2, "expansion threshold");
      cmd->add_option("--sigma3", opts.sigma3, "shrink factor");
      cmd->add_option("--eps", opts.eps, "stopping threshold on ||d||");
      cmd->add_option("--delta-min", opts.delta_min, "radius floor");
      cmd->add_option("--max-iters", opts.max_iters, "iteration cap");
      cmd->add_option("--ell0", opts.ell0, "MOPG initial curvature");
      cmd->add_option("--growth", opts.growth, "MOPG backtracking factor");
    }
  };

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run one solver from one start");
  std::string problem_id, x0_csv, solver_id = "MOTRPG", dump_path;
  bool sample_start = false;
  solve_cmd->add_option("problem", problem_id, "catalog id or problem JSON path")
      ->required();
  solve_cmd->add_option("--x0", x0_csv, "start point, comma separated");
  solve_cmd->add_flag("--sample", sample_start, "sample the start from the box");
  solve_cmd->add_option("--solver", solver_id, "MOTRPG or MOPG")
      ->check(CLI::IsMember({"MOTRPG", "MOPG"}));
  solve_cmd->add_option("--dump-subproblem", dump_path,
                        "write the epigraph rows of the first subproblem");
  add_common(solve_cmd, true);

  // front
  auto* front_cmd =
      app.add_subcommand("front", "multi-start Pareto front generation");
  front_cmd->add_option("--problems", opts.problems, "catalog ids or JSON paths")
      ->required();
  front_cmd->add_option("--solvers", opts.solvers, "solver subset")
      ->check(CLI::IsMember({"MOTRPG", "MOPG"}));
  front_cmd->add_option("--starts", opts.starts, "start count (default 100)");
  front_cmd->add_option("--jobs", opts.jobs, "parallel starts");
  add_common(front_cmd, true);

  // compare
  auto* compare_cmd =
      app.add_subcommand("compare", "metrics table from front outputs");
  std::string in_dir = ".", report_out;
  compare_cmd->add_option("--in", in_dir, "front output directory")->required();
  compare_cmd->add_option("--report", report_out,
                          "metrics report path (default <in>/metrics.json)");

  // profile
  auto* profile_cmd =
      app.add_subcommand("profile", "performance-profile CSVs from a report");
  std::string report_path, profile_out = ".";
  profile_cmd->add_option("--report", report_path, "metrics report path")
      ->required();
  profile_cmd->add_option("--out", profile_out, "output directory");

  auto* list_cmd = app.add_subcommand("list-problems", "print the catalog");
  (void)list_cmd;

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-problems")) return cmd_list_problems();
    if (app.got_subcommand("solve")) {
      return cmd_solve(opts, problem_id, x0_csv, sample_start, solver_id,
                       dump_path);
    }
    if (app.got_subcommand("front")) return cmd_front(opts);
    if (app.got_subcommand("compare")) {
      if (report_out.empty()) report_out = (fs::path(in_dir) / "metrics.json").string();
      return cmd_compare(in_dir, report_out);
    }
    if (app.got_subcommand("profile")) return cmd_profile(report_path, profile_out);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitSolverError;
  }
  return kExitBadInput;
}
