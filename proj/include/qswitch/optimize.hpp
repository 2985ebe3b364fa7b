#pragma once

// Derivative-free maximization on an axis-aligned box: a coarse per-axis
// pre-scan seeds a Nelder-Mead simplex run in normalized coordinates.
// Deterministic by construction (no randomness anywhere), so repeated runs
// give bit-identical results.

#include <functional>

#include <Eigen/Dense>

namespace qswitch {

struct OptimizeOptions {
  int prescan_per_axis = 16;     // grid points per axis in the seeding scan
  double simplex_tol = 1e-6;     // simplex diameter in normalized coordinates
  int max_evals = 500;           // Nelder-Mead evaluation budget (post-scan)
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct OptimizeResult {
  Eigen::VectorXd argmax;
  double value = 0;
  int evaluations = 0;   // total objective calls, pre-scan included
  bool converged = false;
};

// Maximize f over the box [lower, upper] (element-wise).  Objective values
// that are NaN are treated as -infinity; if every probed point is NaN the
// optimizer throws std::domain_error.  Points are always clamped to the box.
OptimizeResult maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                        const OptimizeOptions& opts = {});

}  // namespace qswitch
