#include "qswitch/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qswitch {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Objective {
  const std::function<double(const Eigen::VectorXd&)>& f;
  const Eigen::VectorXd& lower;
  const Eigen::VectorXd& span;
  int evaluations = 0;

  // s lives in the unit box; NaN objective values become -infinity so the
  // simplex simply retreats from invalid regions.
  double operator()(Eigen::VectorXd& s) {
    for (int i = 0; i < s.size(); ++i) s[i] = std::clamp(s[i], 0.0, 1.0);
    const Eigen::VectorXd x = lower + span.cwiseProduct(s).eval();
    ++evaluations;
    const double v = f(x);
    return std::isnan(v) ? kNegInf : v;
  }
};

}  // namespace

OptimizeResult maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                        const OptimizeOptions& opts) {
  const int d = static_cast<int>(lower.size());
  if (d < 1) throw std::invalid_argument("maximize: need at least one dimension");
  if (upper.size() != d) throw std::invalid_argument("maximize: bound sizes differ");
  for (int i = 0; i < d; ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw std::invalid_argument("maximize: bounds must be finite");
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("maximize: need lower < upper on every axis");
  }
  if (opts.prescan_per_axis < 2)
    throw std::invalid_argument("maximize: prescan_per_axis must be >= 2");
  if (opts.max_evals < 1) throw std::invalid_argument("maximize: max_evals must be >= 1");
  if (!(opts.simplex_tol > 0)) throw std::invalid_argument("maximize: simplex_tol must be > 0");

  const Eigen::VectorXd span = upper - lower;
  Objective obj{f, lower, span};

  // Pre-scan: full tensor grid, row-major (last axis fastest); strict
  // greater-than keeps the earliest of tied maxima, so the seed is
  // deterministic.
  const int m = opts.prescan_per_axis;
  long total = 1;
  for (int i = 0; i < d; ++i) {
    total *= m;
    if (total > 1000000)
      throw std::invalid_argument("maximize: pre-scan grid too large, reduce prescan_per_axis");
  }
  Eigen::VectorXd best_s(d);
  double best_v = kNegInf;
  Eigen::VectorXd s(d);
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int i = d - 1; i >= 0; --i) {
      s[i] = double(rem % m) / double(m - 1);
      rem /= m;
    }
    const double v = obj(s);
    if (v > best_v) {
      best_v = v;
      best_s = s;
    }
  }
  if (best_v == kNegInf)
    throw std::domain_error("maximize: objective returned NaN on the entire pre-scan grid");

  // Simplex seeded one grid cell around the pre-scan winner.
  const double h = 1.0 / double(m - 1);
  std::vector<Eigen::VectorXd> verts(d + 1, best_s);
  std::vector<double> vals(d + 1);
  vals[0] = best_v;
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd v = best_s;
    v[i] += (v[i] + h <= 1.0) ? h : -h;
    vals[i + 1] = obj(v);
    verts[i + 1] = v;
  }

  const int budget = obj.evaluations + opts.max_evals;
  bool converged = false;
  auto order = [&] {
    std::vector<int> idx(d + 1);
    for (int i = 0; i <= d; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] > vals[b]; });
    std::vector<Eigen::VectorXd> nv(d + 1);
    std::vector<double> nf(d + 1);
    for (int i = 0; i <= d; ++i) {
      nv[i] = verts[idx[i]];
      nf[i] = vals[idx[i]];
    }
    verts.swap(nv);
    vals.swap(nf);
  };

  while (obj.evaluations < budget) {
    order();
    double diam = 0;
    for (int i = 1; i <= d; ++i)
      diam = std::max(diam, (verts[i] - verts[0]).cwiseAbs().maxCoeff());
    if (diam <= opts.simplex_tol) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) centroid += verts[i];
    centroid /= double(d);

    Eigen::VectorXd xr = centroid + opts.reflection * (centroid - verts[d]);
    const double fr = obj(xr);
    if (fr > vals[0]) {
      Eigen::VectorXd xe = centroid + opts.expansion * (xr - centroid);
      const double fe = obj(xe);
      if (fe > fr) {
        verts[d] = xe;
        vals[d] = fe;
      } else {
        verts[d] = xr;
        vals[d] = fr;
      }
      continue;
    }
    if (fr > vals[d - 1]) {
      verts[d] = xr;
      vals[d] = fr;
      continue;
    }
    Eigen::VectorXd xc = centroid + opts.contraction * (verts[d] - centroid);
    const double fc = obj(xc);
    if (fc > vals[d]) {
      verts[d] = xc;
      vals[d] = fc;
      continue;
    }
    for (int i = 1; i <= d; ++i) {
      verts[i] = verts[0] + opts.shrink * (verts[i] - verts[0]);
      vals[i] = obj(verts[i]);
      if (obj.evaluations >= budget) break;
    }
  }

  order();
  OptimizeResult out;
  out.argmax = lower + span.cwiseProduct(verts[0]);
  out.value = vals[0];
  out.evaluations = obj.evaluations;
  out.converged = converged;
  return out;
}

}  // namespace qswitch
