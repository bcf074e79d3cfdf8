#include "motrpg/serialize.hpp"

#include <cstdio>
#include <stdexcept>

namespace motrpg {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (long i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<long>(j.size()));
  long i = 0;
  for (const auto& e : j) v[i++] = e.get<double>();
  return v;
}

namespace {

json matrix_to_json_row_major(const Matrix& A) {
  json arr = json::array();
  for (long r = 0; r < A.rows(); ++r) {
    for (long c = 0; c < A.cols(); ++c) arr.push_back(A(r, c));
  }
  return arr;
}

Matrix matrix_from_json_row_major(const json& j, long rows, long cols) {
  if (static_cast<long>(j.size()) != rows * cols) {
    throw std::invalid_argument("matrix payload has wrong length");
  }
  Matrix A(rows, cols);
  long i = 0;
  for (const auto& e : j) {
    A(i / cols, i % cols) = e.get<double>();
    ++i;
  }
  return A;
}

json smooth_to_json(const SmoothTerm& s) {
  json j;
  switch (s.kind) {
    case SmoothTerm::Kind::AnalyticClosedForm:
      j["kind"] = "analytic-closed-form";
      j["family"] = s.family;
      break;
    case SmoothTerm::Kind::QuadraticLeastSquares:
      j["kind"] = "quadratic-least-squares";
      j["rows"] = s.A.rows();
      j["A"] = matrix_to_json_row_major(s.A);
      j["b"] = vector_to_json(s.b);
      break;
  }
  j["gradient_mode"] = s.gradient_mode == SmoothTerm::GradientMode::Analytic
                           ? "analytic"
                           : "forward-difference";
  if (s.fd_step > 0) j["fd_step"] = s.fd_step;
  return j;
}

SmoothTerm smooth_from_json(const json& j, int n) {
  SmoothTerm s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "analytic-closed-form") {
    s = smooth_family(j.at("family").get<std::string>());
  } else if (kind == "quadratic-least-squares") {
    const long rows = j.at("rows").get<long>();
    s = SmoothTerm::least_squares(
        matrix_from_json_row_major(j.at("A"), rows, n),
        vector_from_json(j.at("b")));
  } else {
    throw std::invalid_argument("unknown smooth kind '" + kind + "'");
  }
  const std::string mode = j.value("gradient_mode", std::string("analytic"));
  s.gradient_mode = mode == "forward-difference"
                        ? SmoothTerm::GradientMode::ForwardDifference
                        : SmoothTerm::GradientMode::Analytic;
  s.fd_step = j.value("fd_step", 0.0);
  return s;
}

json nonsmooth_to_json(const NonsmoothTerm& g, int n) {
  json j;
  switch (g.kind) {
    case NonsmoothTerm::Kind::Zero:
      j["kind"] = "zero";
      break;
    case NonsmoothTerm::Kind::WeightedL1:
      j["kind"] = "weighted-l1";
      j["nu"] = g.nu;
      break;
    case NonsmoothTerm::Kind::MaxOfQuadratics: {
      j["kind"] = "max-of-quadratics";
      json pieces = json::array();
      for (const auto& p : g.pieces) {
        json pj;
        pj["P"] = matrix_to_json_row_major(p.P);
        pj["q"] = vector_to_json(p.q);
        pj["r"] = p.r;
        pieces.push_back(std::move(pj));
      }
      j["pieces"] = std::move(pieces);
      (void)n;
      break;
    }
  }
  return j;
}

NonsmoothTerm nonsmooth_from_json(const json& j, int n) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return NonsmoothTerm::zero();
  if (kind == "weighted-l1") {
    return NonsmoothTerm::weighted_l1(j.at("nu").get<double>());
  }
  if (kind == "max-of-quadratics") {
    std::vector<QuadPiece> pieces;
    for (const auto& pj : j.at("pieces")) {
      QuadPiece p;
      p.P = matrix_from_json_row_major(pj.at("P"), n, n);
      p.q = vector_from_json(pj.at("q"));
      p.r = pj.at("r").get<double>();
      pieces.push_back(std::move(p));
    }
    return NonsmoothTerm::max_of_quadratics(std::move(pieces));
  }
  throw std::invalid_argument("unknown nonsmooth kind '" + kind + "'");
}

}  // namespace

json problem_to_json(const MOProblem& p) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = p.name;
  j["m"] = p.m;
  j["n"] = p.n;
  json objs = json::array();
  for (const auto& obj : p.objectives) {
    json oj;
    oj["smooth"] = smooth_to_json(obj.smooth);
    oj["nonsmooth"] = nonsmooth_to_json(obj.nonsmooth, p.n);
    objs.push_back(std::move(oj));
  }
  j["objectives"] = std::move(objs);
  if (p.box) {
    j["box"] = {{"lb", vector_to_json(p.box->lb)},
                {"ub", vector_to_json(p.box->ub)}};
  }
  return j;
}

MOProblem problem_from_json(const json& j) {
  MOProblem p;
  p.name = j.at("name").get<std::string>();
  p.m = j.at("m").get<int>();
  p.n = j.at("n").get<int>();
  for (const auto& oj : j.at("objectives")) {
    Objective obj;
    obj.smooth = smooth_from_json(oj.at("smooth"), p.n);
    obj.nonsmooth = nonsmooth_from_json(oj.at("nonsmooth"), p.n);
    p.objectives.push_back(std::move(obj));
  }
  if (j.contains("box")) {
    Box b;
    b.lb = vector_from_json(j.at("box").at("lb"));
    b.ub = vector_from_json(j.at("box").at("ub"));
    p.box = b;
  }
  p.validate();
  return p;
}

json counters_to_json(const EvalCounters& c) {
  return {{"f_evals", c.f_evals},
          {"grad_evals", c.grad_evals},
          {"g_evals", c.g_evals}};
}

json config_to_json(const SolverConfig& c) {
  return {{"solver", "MOTRPG"},
          {"sigma0", c.sigma0},
          {"sigma1", c.sigma1},
          {"sigma2", c.sigma2},
          {"sigma3", c.sigma3},
          {"delta_min", c.delta_min},
          {"eps", c.eps},
          {"max_outer_iters", c.max_outer_iters},
          {"max_inner_shrinks", c.max_inner_shrinks},
          {"sigma_floor", c.sigma_floor},
          {"b_cap", c.b_cap},
          {"inner_tol", c.inner_tol},
          {"initial_b",
           c.initial_b == SolverConfig::InitialB::Identity ? "identity"
                                                           : "scaled-identity"},
          {"initial_b_scale", c.initial_b_scale}};
}

SolverConfig solver_config_from_json(const json& j) {
  SolverConfig c;
  c.sigma0 = j.value("sigma0", c.sigma0);
  c.sigma1 = j.value("sigma1", c.sigma1);
  c.sigma2 = j.value("sigma2", c.sigma2);
  c.sigma3 = j.value("sigma3", c.sigma3);
  c.delta_min = j.value("delta_min", c.delta_min);
  c.eps = j.value("eps", c.eps);
  c.max_outer_iters = j.value("max_outer_iters", c.max_outer_iters);
  c.max_inner_shrinks = j.value("max_inner_shrinks", c.max_inner_shrinks);
  c.sigma_floor = j.value("sigma_floor", c.sigma_floor);
  c.b_cap = j.value("b_cap", c.b_cap);
  c.inner_tol = j.value("inner_tol", c.inner_tol);
  if (j.value("initial_b", std::string("identity")) == "scaled-identity") {
    c.initial_b = SolverConfig::InitialB::ScaledIdentity;
  }
  c.initial_b_scale = j.value("initial_b_scale", c.initial_b_scale);
  return c;
}

json config_to_json(const MOPGConfig& c) {
  return {{"solver", "MOPG"},
          {"ell0", c.ell0},
          {"growth", c.growth},
          {"eps", c.eps},
          {"max_iters", c.max_iters},
          {"max_backtracks", c.max_backtracks},
          {"sigma_floor", c.sigma_floor},
          {"b_cap", c.b_cap},
          {"inner_tol", c.inner_tol}};
}

MOPGConfig mopg_config_from_json(const json& j) {
  MOPGConfig c;
  c.ell0 = j.value("ell0", c.ell0);
  c.growth = j.value("growth", c.growth);
  c.eps = j.value("eps", c.eps);
  c.max_iters = j.value("max_iters", c.max_iters);
  c.max_backtracks = j.value("max_backtracks", c.max_backtracks);
  c.sigma_floor = j.value("sigma_floor", c.sigma_floor);
  c.b_cap = j.value("b_cap", c.b_cap);
  c.inner_tol = j.value("inner_tol", c.inner_tol);
  return c;
}

json run_to_json(const SolverRun& run) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["solver"] = run.solver_id;
  j["problem"] = run.problem_name;
  j["termination"] = to_string(run.termination);
  j["accepted_steps"] = run.accepted_steps;
  j["delta0"] = run.delta0;
  j["counters"] = counters_to_json(run.counters);
  j["x_final"] = vector_to_json(run.x_final);
  j["F_final"] = vector_to_json(run.F_final);
  j["certificate"] = {{"hull_distance", run.final_certificate.hull_distance},
                      {"weights", vector_to_json(run.final_certificate.weights)}};
  j["descent_check"] = {{"solves", run.descent_check.solves},
                        {"violations", run.descent_check.violations},
                        {"worst_margin", run.descent_check.worst_margin}};
  json traj = json::array();
  for (const auto& rec : run.trajectory) {
    json rj;
    rj["k"] = rec.k;
    rj["x"] = vector_to_json(rec.x);
    rj["F"] = vector_to_json(rec.F);
    rj["delta"] = rec.delta_used;
    rj["d"] = vector_to_json(rec.d);
    rj["t"] = rec.t;
    rj["rho"] = rec.rho ? json(*rec.rho) : json(nullptr);
    rj["inner_shrinks"] = rec.inner_shrinks;
    rj["accepted"] = rec.accepted;
    traj.push_back(std::move(rj));
  }
  j["trajectory"] = std::move(traj);
  return j;
}

std::string run_to_csv(const SolverRun& run) {
  std::string out = "k";
  const long m = run.F_final.size();
  for (long i = 1; i <= m; ++i) out += ",F" + std::to_string(i);
  out += ",delta,norm_d,rho,accepted\n";
  for (const auto& rec : run.trajectory) {
    out += std::to_string(rec.k);
    for (long i = 0; i < m; ++i) out += "," + format_double(rec.F[i]);
    out += "," + format_double(rec.delta_used);
    out += "," + format_double(rec.d.norm());
    out += ",";
    if (rec.rho) out += format_double(*rec.rho);
    out += rec.accepted ? ",1\n" : ",0\n";
  }
  return out;
}

json archive_to_json(const MOProblem& problem, const std::string& solver_id,
                     const MultistartResult& result) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["problem"] = problem.name;
  j["solver"] = solver_id;
  json entries = json::array();
  for (const auto& e : result.archive.entries) {
    entries.push_back({{"start", e.start_index},
                       {"x", vector_to_json(e.x)},
                       {"F", vector_to_json(e.F)}});
  }
  j["entries"] = std::move(entries);
  json failures = json::array();
  for (const auto& f : result.failures) {
    failures.push_back({{"start", f.start_index}, {"message", f.message}});
  }
  j["failures"] = std::move(failures);
  return j;
}

std::string archive_to_csv(const ParetoArchive& archive, int n, int m) {
  std::string out = "solver,start";
  for (int i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  for (int i = 1; i <= m; ++i) out += ",F" + std::to_string(i);
  out += "\n";
  for (const auto& e : archive.entries) {
    out += e.solver_id + "," + std::to_string(e.start_index);
    for (long i = 0; i < e.x.size(); ++i) out += "," + format_double(e.x[i]);
    for (long i = 0; i < e.F.size(); ++i) out += "," + format_double(e.F[i]);
    out += "\n";
  }
  return out;
}

json mols_to_json(const MOLSInstance& inst) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["m"] = inst.m;
  j["n"] = inst.n;
  j["rows"] = inst.rows;
  j["seed"] = inst.seed;
  j["nu"] = inst.nu;
  json As = json::array(), bs = json::array();
  for (int i = 0; i < inst.m; ++i) {
    As.push_back(matrix_to_json_row_major(inst.A[static_cast<size_t>(i)]));
    bs.push_back(vector_to_json(inst.b[static_cast<size_t>(i)]));
  }
  j["A"] = std::move(As);
  j["b"] = std::move(bs);
  return j;
}

MOLSInstance mols_from_json(const json& j) {
  MOLSInstance inst;
  inst.m = j.at("m").get<int>();
  inst.n = j.at("n").get<int>();
  inst.rows = j.at("rows").get<int>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.nu = j.at("nu").get<std::vector<double>>();
  for (const auto& aj : j.at("A")) {
    inst.A.push_back(matrix_from_json_row_major(aj, inst.rows, inst.n));
  }
  for (const auto& bj : j.at("b")) inst.b.push_back(vector_from_json(bj));
  return inst;
}

}  // namespace motrpg
