#include "motrpg/hull.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace motrpg {

namespace {

// Minimum-norm point of the affine hull of the selected generators:
// minimize ||P v||^2 subject to 1'v = 1, via the bordered KKT system.
Vector affine_min_norm(const std::vector<Vector>& gens,
                       const std::vector<int>& sel) {
  const int k = static_cast<int>(sel.size());
  Matrix K(k + 1, k + 1);
  K.setZero();
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      K(a, b) = gens[static_cast<size_t>(sel[static_cast<size_t>(a)])]
                    .dot(gens[static_cast<size_t>(sel[static_cast<size_t>(b)])]);
    }
    K(a, k) = 1;
    K(k, a) = 1;
  }
  Vector rhs = Vector::Zero(k + 1);
  rhs[k] = 1;
  Vector sol = K.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

}  // namespace

MinNormPoint min_norm_point(const std::vector<Vector>& generators, double tol) {
  if (generators.empty()) {
    throw std::invalid_argument("min_norm_point needs at least one generator");
  }
  const int K = static_cast<int>(generators.size());
  const long n = generators[0].size();
  for (const Vector& g : generators) {
    if (g.size() != n) throw std::invalid_argument("generator dimensions differ");
    if (!g.allFinite()) throw std::invalid_argument("non-finite generator");
  }

  double scale = 1.0;
  for (const Vector& g : generators) scale = std::max(scale, g.squaredNorm());
  const double eps_opt = tol * scale;

  // corral: selected indices and their convex weights
  int start = 0;
  for (int j = 1; j < K; ++j) {
    if (generators[static_cast<size_t>(j)].squaredNorm() <
        generators[static_cast<size_t>(start)].squaredNorm()) {
      start = j;
    }
  }
  std::vector<int> sel = {start};
  Vector w = Vector::Ones(1);

  Vector p = generators[static_cast<size_t>(start)];
  for (int major = 0; major < 16 * K + 64; ++major) {
    p.setZero();
    for (size_t i = 0; i < sel.size(); ++i) {
      p += w[static_cast<long>(i)] * generators[static_cast<size_t>(sel[i])];
    }

    // most violated optimality condition p'g_j >= p'p
    int jmin = 0;
    double vmin = generators[0].dot(p);
    for (int j = 1; j < K; ++j) {
      const double v = generators[static_cast<size_t>(j)].dot(p);
      if (v < vmin) vmin = v, jmin = j;
    }
    if (vmin > p.squaredNorm() - eps_opt) break;  // optimal
    if (std::find(sel.begin(), sel.end(), jmin) != sel.end()) break;

    sel.push_back(jmin);
    Vector w_ext = Vector::Zero(static_cast<long>(sel.size()));
    w_ext.head(static_cast<long>(sel.size()) - 1) = w;
    w = w_ext;

    // minor cycle: move toward the affine minimizer, dropping generators
    // whose weight hits zero
    for (int minor = 0; minor < 4 * K + 16; ++minor) {
      Vector v = affine_min_norm(generators, sel);
      if ((v.array() > 1e-12).all()) {
        w = v;
        break;
      }
      double step = 1.0;
      for (long i = 0; i < v.size(); ++i) {
        if (v[i] <= 1e-12 && w[i] > v[i]) {
          step = std::min(step, w[i] / (w[i] - v[i]));
        }
      }
      w = w + step * (v - w);
      std::vector<int> keep_sel;
      std::vector<double> keep_w;
      for (long i = 0; i < w.size(); ++i) {
        if (w[i] > 1e-12) {
          keep_sel.push_back(sel[static_cast<size_t>(i)]);
          keep_w.push_back(w[i]);
        }
      }
      if (keep_sel.empty()) {  // numerically degenerate; keep the largest
        long imax = 0;
        w.maxCoeff(&imax);
        keep_sel.push_back(sel[static_cast<size_t>(imax)]);
        keep_w.push_back(1.0);
      }
      sel = keep_sel;
      w = Eigen::Map<Vector>(keep_w.data(), static_cast<long>(keep_w.size()));
      w /= w.sum();
    }
  }

  p.setZero();
  for (size_t i = 0; i < sel.size(); ++i) {
    p += w[static_cast<long>(i)] * generators[static_cast<size_t>(sel[i])];
  }

  MinNormPoint out;
  out.point = p;
  out.distance = p.norm();
  out.weights = Vector::Zero(K);
  for (size_t i = 0; i < sel.size(); ++i) {
    out.weights[sel[i]] = w[static_cast<long>(i)];
  }
  return out;
}

}  // namespace motrpg
