#pragma once

// Deterministic parameter sweeps over one or two axes.  Evaluation failures
// at individual grid points are recorded per-row (NaN value plus the
// exception message) instead of aborting the whole sweep.

#include <functional>
#include <string>
#include <vector>

namespace qswitch {

struct SweepAxis {
  std::string name;
  double min = 0;
  double max = 0;
  int points = 0;
  bool log_scale = false;

  void validate() const;
  // The grid, inclusive of both endpoints; geometric when log_scale.
  std::vector<double> values() const;
};

struct SweepRow {
  std::vector<double> coords;  // one per axis, row-major order
  double value = 0;            // NaN when the evaluator threw
  std::string method;          // evaluator-reported provenance, e.g. "closed-form"
  std::string reason;          // empty on success, exception message otherwise
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<SweepRow> rows;  // row-major: last axis varies fastest
};

struct SweepEval {
  double value = 0;
  std::string method;
};

// evaluator receives the coordinate tuple for one grid point.  Exceptions
// derived from std::exception become NaN rows with `reason` filled in.
SweepResult run_sweep(const std::vector<SweepAxis>& axes,
                      const std::function<SweepEval(const std::vector<double>&)>& evaluator);

}  // namespace qswitch
