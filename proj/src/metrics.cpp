#include "motrpg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "motrpg/bench.hpp"

namespace motrpg {

FrontSet FrontSet::build(std::vector<std::string> solver_ids,
                         std::vector<std::vector<Vector>> fronts) {
  if (solver_ids.size() != fronts.size()) {
    throw std::invalid_argument("solver id and front counts differ");
  }
  FrontSet fs;
  fs.solver_ids = std::move(solver_ids);
  fs.fronts = std::move(fronts);
  std::vector<Vector> pool;
  for (const auto& front : fs.fronts) {
    pool.insert(pool.end(), front.begin(), front.end());
  }
  for (std::size_t idx : nondominated_filter(pool)) {
    fs.reference.push_back(pool[idx]);
  }
  return fs;
}

std::vector<std::optional<double>> purity(const FrontSet& fronts, double tol) {
  std::vector<std::optional<double>> out;
  for (const auto& front : fronts.fronts) {
    if (front.empty()) {
      out.push_back(std::nullopt);
      continue;
    }
    int hits = 0;
    for (const Vector& p : front) {
      for (const Vector& r : fronts.reference) {
        if ((p - r).cwiseAbs().maxCoeff() <= tol) {
          ++hits;
          break;
        }
      }
    }
    out.push_back(static_cast<double>(hits) / static_cast<double>(front.size()));
  }
  return out;
}

namespace {

std::vector<double> sorted_coordinate(const std::vector<Vector>& front, long j) {
  std::vector<double> c;
  c.reserve(front.size());
  for (const Vector& p : front) c.push_back(p[j]);
  std::sort(c.begin(), c.end());
  return c;
}

}  // namespace

double gamma_spread(const std::vector<Vector>& front) {
  if (front.size() < 2) {
    throw std::invalid_argument("gamma spread needs a front of at least 2 points");
  }
  const long m = front[0].size();
  double gamma = 0;
  for (long j = 0; j < m; ++j) {
    const auto c = sorted_coordinate(front, j);
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      gamma = std::max(gamma, c[i + 1] - c[i]);
    }
  }
  return gamma;
}

double delta_spread(const std::vector<Vector>& front) {
  if (front.size() < 3) {
    throw std::invalid_argument("delta spread needs a front of at least 3 points");
  }
  const long m = front[0].size();
  const std::size_t N = front.size();
  double delta = 0;
  for (long j = 0; j < m; ++j) {
    const auto c = sorted_coordinate(front, j);
    std::vector<double> gaps(N - 1);
    double mean = 0;
    for (std::size_t i = 0; i + 1 < N; ++i) {
      gaps[i] = c[i + 1] - c[i];
      mean += gaps[i];
    }
    mean /= static_cast<double>(N - 1);
    const double d0 = 0, dN = 0;  // no external extreme points supplied
    double dev = 0;
    for (double g : gaps) dev += std::abs(g - mean);
    const double denom = d0 + dN + static_cast<double>(N - 1) * mean;
    const double value = denom > 0 ? (d0 + dN + dev) / denom : 0.0;
    delta = std::max(delta, value);
  }
  return delta;
}

namespace {

// staircase area dominated by 2-D points relative to ref; points must
// strictly dominate ref
double hv2(std::vector<Vector> pts, double ref0, double ref1) {
  if (pts.empty()) return 0;
  // left-to-right sweep over the staircase corners; dominated points add
  // nothing to the union
  std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
    return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
  });
  std::vector<Vector> stair;
  double min1 = std::numeric_limits<double>::infinity();
  for (const Vector& p : pts) {
    if (p[1] < min1) {
      stair.push_back(p);
      min1 = p[1];
    }
  }
  double area = 0;
  for (std::size_t i = 0; i < stair.size(); ++i) {
    const double x_next = (i + 1 < stair.size()) ? stair[i + 1][0] : ref0;
    area += (x_next - stair[i][0]) * (ref1 - stair[i][1]);
  }
  return area;
}

}  // namespace

double hypervolume(const std::vector<Vector>& front, const Vector& reference,
                   int* excluded) {
  const long m = reference.size();
  if (m != 2 && m != 3) {
    throw std::invalid_argument("hypervolume supports 2 or 3 objectives only");
  }
  std::vector<Vector> pts;
  int skipped = 0;
  for (const Vector& p : front) {
    if (p.size() != m) throw std::invalid_argument("objective sizes differ");
    if ((p.array() < reference.array()).all()) {
      pts.push_back(p);
    } else {
      ++skipped;
    }
  }
  if (excluded) *excluded = skipped;
  if (pts.empty()) return 0;

  if (m == 2) return hv2(pts, reference[0], reference[1]);

  // slice along the third objective
  std::sort(pts.begin(), pts.end(),
            [](const Vector& a, const Vector& b) { return a[2] < b[2]; });
  double volume = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double z0 = pts[i][2];
    const double z1 = (i + 1 < pts.size()) ? pts[i + 1][2] : reference[2];
    if (z1 <= z0) continue;
    std::vector<Vector> slab;
    for (std::size_t k = 0; k <= i; ++k) {
      Vector q(2);
      q << pts[k][0], pts[k][1];
      slab.push_back(q);
    }
    volume += (z1 - z0) * hv2(slab, reference[0], reference[1]);
  }
  return volume;
}

double ProfileCurve::value_at(double tau) const {
  double v = 0;
  for (const auto& [bp, rho] : breakpoints) {
    if (bp <= tau) {
      v = rho;
    } else {
      break;
    }
  }
  return v;
}

std::vector<ProfileCurve> perf_profile(
    const std::vector<std::string>& solver_ids,
    const std::vector<std::vector<std::optional<double>>>& costs,
    ProfileOrientation orientation) {
  const std::size_t S = solver_ids.size();
  const std::size_t P = costs.size();
  if (P == 0) throw std::invalid_argument("profile needs at least one problem");
  constexpr double inf = std::numeric_limits<double>::infinity();

  // ratio table
  std::vector<std::vector<double>> ratio(P, std::vector<double>(S, inf));
  for (std::size_t p = 0; p < P; ++p) {
    if (costs[p].size() != S) {
      throw std::invalid_argument("cost row width does not match solver count");
    }
    double best = inf, worst = -inf;
    bool any = false;
    for (const auto& c : costs[p]) {
      if (c && std::isfinite(*c)) {
        best = std::min(best, *c);
        worst = std::max(worst, *c);
        any = true;
      }
    }
    if (!any) {
      throw std::invalid_argument(
          "every problem needs at least one finite cost");
    }
    for (std::size_t s = 0; s < S; ++s) {
      if (!costs[p][s] || !std::isfinite(*costs[p][s])) continue;
      const double v = *costs[p][s];
      if (orientation == ProfileOrientation::LowerBetter) {
        ratio[p][s] = (v == best) ? 1.0 : (best > 0 ? v / best : inf);
      } else {
        ratio[p][s] = (v == worst) ? 1.0 : (v > 0 ? worst / v : inf);
      }
    }
  }

  std::vector<ProfileCurve> curves(S);
  for (std::size_t s = 0; s < S; ++s) {
    curves[s].solver_id = solver_ids[s];
    std::vector<double> rs;
    for (std::size_t p = 0; p < P; ++p) {
      if (std::isfinite(ratio[p][s])) rs.push_back(ratio[p][s]);
    }
    std::sort(rs.begin(), rs.end());
    double count = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      count += 1;
      if (i + 1 < rs.size() && rs[i + 1] == rs[i]) continue;
      curves[s].breakpoints.emplace_back(rs[i],
                                         count / static_cast<double>(P));
    }
    if (curves[s].breakpoints.empty() || curves[s].breakpoints[0].first > 1.0) {
      curves[s].breakpoints.insert(curves[s].breakpoints.begin(), {1.0, 0.0});
      // keep the tau = 1 anchor only when nothing else starts there
      if (curves[s].breakpoints.size() > 1 &&
          curves[s].breakpoints[1].first == 1.0) {
        curves[s].breakpoints.erase(curves[s].breakpoints.begin());
      }
    }
  }
  return curves;
}

FunCount fun_evals(std::int64_t f, std::int64_t grad, std::int64_t hess, int n,
                   SolverClass cls) {
  FunCount out;
  out.f = f;
  out.grad = grad;
  out.hess = hess;
  out.fun = f + static_cast<std::int64_t>(n) * grad;
  if (cls == SolverClass::HessianBased) {
    out.fun += static_cast<std::int64_t>(n) * (n + 1) / 2 * hess;
  }
  return out;
}

FunCount fun_evals(const EvalCounters& counters, int n, SolverClass cls) {
  return fun_evals(counters.f_evals, counters.grad_evals, 0, n, cls);
}

}  // namespace motrpg
