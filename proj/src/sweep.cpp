#include "qswitch/sweep.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qswitch {

void SweepAxis::validate() const {
  if (name.empty()) throw std::invalid_argument("sweep axis needs a parameter name");
  if (points < 2) throw std::invalid_argument("sweep axis needs at least 2 points");
  if (!std::isfinite(min) || !std::isfinite(max))
    throw std::invalid_argument("sweep axis bounds must be finite");
  if (!(min < max)) throw std::invalid_argument("sweep axis needs min < max");
  if (log_scale && !(min > 0))
    throw std::invalid_argument("log-scale sweep axis needs min > 0");
}

std::vector<double> SweepAxis::values() const {
  validate();
  std::vector<double> v(points);
  if (log_scale) {
    const double l0 = std::log(min), l1 = std::log(max);
    for (int i = 0; i < points; ++i)
      v[i] = std::exp(l0 + (l1 - l0) * double(i) / double(points - 1));
  } else {
    for (int i = 0; i < points; ++i)
      v[i] = min + (max - min) * double(i) / double(points - 1);
  }
  v.front() = min;  // pin the endpoints exactly
  v.back() = max;
  return v;
}

SweepResult run_sweep(const std::vector<SweepAxis>& axes,
                      const std::function<SweepEval(const std::vector<double>&)>& evaluator) {
  if (axes.empty() || axes.size() > 2)
    throw std::invalid_argument("run_sweep: supports one or two axes");
  if (!evaluator) throw std::invalid_argument("run_sweep: evaluator must be callable");

  std::vector<std::vector<double>> grids;
  size_t total = 1;
  for (const SweepAxis& a : axes) {
    grids.push_back(a.values());
    total *= grids.back().size();
  }

  SweepResult out;
  out.axes = axes;
  out.rows.reserve(total);
  std::vector<double> coords(axes.size());
  for (size_t flat = 0; flat < total; ++flat) {
    size_t rem = flat;
    for (size_t i = axes.size(); i-- > 0;) {
      coords[i] = grids[i][rem % grids[i].size()];
      rem /= grids[i].size();
    }
    SweepRow row;
    row.coords = coords;
    try {
      const SweepEval ev = evaluator(coords);
      row.value = ev.value;
      row.method = ev.method;
    } catch (const std::exception& e) {
      row.value = std::numeric_limits<double>::quiet_NaN();
      row.reason = e.what();
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace qswitch
