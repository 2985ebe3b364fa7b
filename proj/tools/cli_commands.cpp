#include "cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qswitch/channel.hpp"
#include "qswitch/io.hpp"
#include "qswitch/optimize.hpp"
#include "qswitch/oracle.hpp"
#include "qswitch/sweep.hpp"

namespace qswitch::cli {

using nlohmann::json;

namespace {

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void note(const CliOptions& opts, const std::string& line) {
  if (!opts.quiet) std::fprintf(stderr, "%s\n", line.c_str());
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

// ---------------------------------------------------------------- fom ------

int cmd_fom(const CliOptions& opts) {
  const Config cfg = load_config(opts, "fom");
  StrictObject task(cfg.task, "task");
  if (task.has("type")) task.text("type");
  task.finish();

  struct Entry {
    std::string label;
    FomResult result;
    std::string error;
  };
  std::vector<Entry> entries;
  std::exception_ptr first_error;
  for (const std::string& method : applicable_methods(*cfg.model)) {
    Entry e;
    try {
      e.result = fom_by_method(*cfg.model, method, opts.efficiency);
      e.label = to_string(e.result.method);
    } catch (const std::exception& ex) {
      e.label = method;
      e.error = ex.what();
      if (!first_error) first_error = std::current_exception();
    }
    entries.push_back(std::move(e));
  }
  if (std::all_of(entries.begin(), entries.end(),
                  [](const Entry& e) { return !e.error.empty(); }))
    std::rethrow_exception(first_error);

  if (opts.format == OutputFormat::json_doc) {
    json out;
    out["model"] = cfg.document.at("model");
    out["efficiency"] = opts.efficiency;
    out["results"] = json::array();
    for (const Entry& e : entries) {
      json r;
      r["method"] = e.label;
      if (e.error.empty()) {
        r["value"] = e.result.value;
        if (std::isfinite(e.result.validity_ratio))
          r["validity_ratio"] = e.result.validity_ratio;
      } else {
        r["error"] = e.error;
      }
      out["results"].push_back(std::move(r));
    }
    emit(opts, dump_json(out));
    return 0;
  }
  if (opts.format == OutputFormat::csv) {
    CsvWriter w;
    w.header({"method", "value", "validity_ratio", "error"});
    for (const Entry& e : entries)
      w.row({e.label, e.error.empty() ? format_double(e.result.value) : "nan",
             e.error.empty() && std::isfinite(e.result.validity_ratio)
                 ? format_double(e.result.validity_ratio)
                 : "",
             e.error});
    emit(opts, w.buffer);
    return 0;
  }

  std::string text = "model: " + model_summary(*cfg.model) + "\n";
  if (opts.efficiency != 1.0)
    text += "efficiency: " + format_double(opts.efficiency) + "\n";
  for (const Entry& e : entries) {
    text += e.label;
    text.append(e.label.size() < 16 ? 16 - e.label.size() : 1, ' ');
    if (!e.error.empty()) {
      text += "error: " + e.error + "\n";
      continue;
    }
    text += format_double(e.result.value);
    if (std::isfinite(e.result.validity_ratio))
      text += "  (validity ratio " + format_double(e.result.validity_ratio) + ")";
    text += "\n";
  }
  emit(opts, text);
  return 0;
}

// -------------------------------------------------------------- sweep ------

int cmd_sweep(const CliOptions& opts) {
  const Config cfg = load_config(opts, "sweep");
  StrictObject task(cfg.task, "task");
  if (task.has("type")) task.text("type");
  const std::string objective = task.text_or("objective", "closed");
  const json& axes_json = task.raw("axes");
  task.finish();

  if (!axes_json.is_array() || axes_json.empty() || axes_json.size() > 2)
    throw std::invalid_argument("task.axes must be an array of 1 or 2 axis objects");

  std::vector<SweepAxis> axes;
  for (size_t i = 0; i < axes_json.size(); ++i) {
    StrictObject a(axes_json[i], "task.axes[" + std::to_string(i) + "]");
    SweepAxis axis;
    axis.name = a.text("name");
    axis.min = a.number("min");
    axis.max = a.number("max");
    axis.points = a.integer("points");
    const std::string scale = a.text_or("scale", "linear");
    if (scale == "log")
      axis.log_scale = true;
    else if (scale != "linear")
      throw std::invalid_argument("axis scale must be \"linear\" or \"log\"");
    a.finish();
    axis.validate();
    axes.push_back(std::move(axis));
  }

  // Fail fast on axis names and objective applicability before the grid runs.
  {
    ModelVariant probe = *cfg.model;
    for (const SweepAxis& a : axes) set_param(probe, a.name, a.min);
    const auto methods = applicable_methods(*cfg.model);
    if (std::find(methods.begin(), methods.end(), objective) == methods.end())
      throw std::invalid_argument("objective \"" + objective +
                                  "\" does not apply to the " +
                                  std::string(model_name(*cfg.model)) + " model");
  }

  const SweepResult result = run_sweep(axes, [&](const std::vector<double>& coords) {
    ModelVariant m = *cfg.model;
    for (size_t i = 0; i < axes.size(); ++i) set_param(m, axes[i].name, coords[i]);
    const FomResult r = fom_by_method(m, objective, opts.efficiency);
    return SweepEval{r.value, to_string(r.method)};
  });

  if (opts.format == OutputFormat::json_doc) {
    json out;
    out["model"] = cfg.document.at("model");
    out["objective"] = objective;
    out["axes"] = json::array();
    for (const SweepAxis& a : axes) out["axes"].push_back(a.name);
    out["rows"] = json::array();
    for (const SweepRow& row : result.rows) {
      json r;
      r["coords"] = row.coords;
      r["value"] = finite_or_null(row.value);
      r["method"] = row.method;
      r["reason"] = row.reason;
      out["rows"].push_back(std::move(r));
    }
    emit(opts, dump_json(out));
    return 0;
  }

  CsvWriter w;
  std::vector<std::string> head;
  for (const SweepAxis& a : axes) head.push_back(a.name);
  head.insert(head.end(), {"value", "method", "reason"});
  w.header(head);
  for (const SweepRow& row : result.rows) {
    std::vector<std::string> fields;
    for (double c : row.coords) fields.push_back(format_double(c));
    fields.push_back(format_double(row.value));
    fields.push_back(row.method);
    fields.push_back(row.reason);
    w.row(fields);
  }
  emit(opts, w.buffer);
  return 0;
}

// ----------------------------------------------------------- optimize ------

int cmd_optimize(const CliOptions& opts) {
  const Config cfg = load_config(opts, "optimize");
  StrictObject task(cfg.task, "task");
  if (task.has("type")) task.text("type");
  const std::string objective = task.text_or("objective", "closed");
  const json& free_json = task.raw("free");
  OptimizeOptions oo;
  oo.prescan_per_axis = task.integer_or("prescan_per_axis", oo.prescan_per_axis);
  oo.simplex_tol = task.number_or("simplex_tol", oo.simplex_tol);
  oo.max_evals = task.integer_or("max_evals", oo.max_evals);
  task.finish();

  if (!free_json.is_array() || free_json.empty())
    throw std::invalid_argument("task.free must be a non-empty array of {name, min, max}");
  std::vector<std::string> names;
  Eigen::VectorXd lower(free_json.size()), upper(free_json.size());
  for (size_t i = 0; i < free_json.size(); ++i) {
    StrictObject fo(free_json[i], "task.free[" + std::to_string(i) + "]");
    names.push_back(fo.text("name"));
    lower[static_cast<int>(i)] = fo.number("min");
    upper[static_cast<int>(i)] = fo.number("max");
    fo.finish();
  }
  {
    ModelVariant probe = *cfg.model;
    for (size_t i = 0; i < names.size(); ++i)
      set_param(probe, names[i], lower[static_cast<int>(i)]);
    const auto methods = applicable_methods(*cfg.model);
    if (std::find(methods.begin(), methods.end(), objective) == methods.end())
      throw std::invalid_argument("objective \"" + objective +
                                  "\" does not apply to the " +
                                  std::string(model_name(*cfg.model)) + " model");
  }

  const OptimizeResult res = maximize(
      [&](const Eigen::VectorXd& x) {
        ModelVariant m = *cfg.model;
        for (size_t i = 0; i < names.size(); ++i)
          set_param(m, names[i], x[static_cast<int>(i)]);
        try {
          return fom_by_method(m, objective, opts.efficiency).value;
        } catch (const std::exception&) {
          return std::numeric_limits<double>::quiet_NaN();
        }
      },
      lower, upper, oo);

  if (opts.format == OutputFormat::json_doc) {
    json out;
    out["model"] = cfg.document.at("model");
    out["objective"] = objective;
    out["argmax"] = json::object();
    for (size_t i = 0; i < names.size(); ++i)
      out["argmax"][names[i]] = res.argmax[static_cast<int>(i)];
    out["value"] = res.value;
    out["evaluations"] = res.evaluations;
    out["converged"] = res.converged;
    emit(opts, dump_json(out));
    return 0;
  }
  if (opts.format == OutputFormat::csv) {
    CsvWriter w;
    std::vector<std::string> head = names;
    head.insert(head.end(), {"value", "evaluations", "converged"});
    w.header(head);
    std::vector<std::string> fields;
    for (size_t i = 0; i < names.size(); ++i)
      fields.push_back(format_double(res.argmax[static_cast<int>(i)]));
    fields.push_back(format_double(res.value));
    fields.push_back(std::to_string(res.evaluations));
    fields.push_back(res.converged ? "true" : "false");
    w.row(fields);
    emit(opts, w.buffer);
    return 0;
  }

  std::string text = "model: " + model_summary(*cfg.model) + "\n";
  text += "objective: " + objective + "\n";
  text += "argmax:";
  for (size_t i = 0; i < names.size(); ++i)
    text += " " + names[i] + "=" + format_double(res.argmax[static_cast<int>(i)]);
  text += "\nvalue: " + format_double(res.value) + "\n";
  text += "evaluations: " + std::to_string(res.evaluations) + "\n";
  text += std::string("converged: ") + (res.converged ? "yes" : "no") + "\n";
  emit(opts, text);
  return 0;
}

// ------------------------------------------------------------ profile ------

int cmd_profile(const CliOptions& opts) {
  const Config cfg = load_config(opts, "profile");
  StrictObject task(cfg.task, "task");
  if (task.has("type")) task.text("type");
  const std::string kind = task.text_or("kind", "output_u");
  const bool has_grid = task.has("t_max") || task.has("points");
  double t_max = 0;
  int points = 0;
  if (has_grid) {
    t_max = task.number("t_max");
    points = task.integer("points");
    if (!(t_max > 0)) throw std::invalid_argument("task.t_max must be positive");
    if (points < 2) throw std::invalid_argument("task.points must be at least 2");
  }
  task.finish();
  if (kind != "output_u" && kind != "input_w")
    throw std::invalid_argument("task.kind must be \"output_u\" or \"input_w\"");

  const ComplexMatrix K = drift_matrix(*cfg.model);
  TemporalProfile prof;
  if (kind == "output_u") {
    if (has_grid) {
      std::vector<double> grid(points);
      for (int i = 0; i < points; ++i) grid[i] = t_max * double(i) / double(points - 1);
      prof = output_profile(K, grid);
    } else {
      prof = output_profile(K);
    }
  } else {
    if (has_grid) {
      std::vector<double> grid(points);
      for (int i = 0; i < points; ++i)
        grid[i] = -t_max + t_max * double(i) / double(points - 1);
      prof = input_profile(K, grid);
    } else {
      prof = input_profile(K);
    }
  }

  const char* kind_label = prof.kind == ProfileKind::output_u ? "output-u" : "input-w";
  if (opts.format == OutputFormat::json_doc) {
    json out;
    out["model"] = cfg.document.at("model");
    out["kind"] = kind_label;
    out["norm_error"] = prof.norm_error;
    out["t"] = prof.times;
    json re = json::array(), im = json::array();
    for (const auto& a : prof.amplitudes) {
      re.push_back(a.real());
      im.push_back(a.imag());
    }
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    emit(opts, dump_json(out));
    return 0;
  }

  CsvWriter w;
  w.buffer += "# model=" + std::string(model_name(*cfg.model)) + " kind=" + kind_label +
              " norm_error=" + format_double(prof.norm_error) + "\n";
  w.header({"t", "re", "im"});
  for (size_t i = 0; i < prof.times.size(); ++i)
    w.row({format_double(prof.times[i]), format_double(prof.amplitudes[i].real()),
           format_double(prof.amplitudes[i].imag())});
  emit(opts, w.buffer);
  return 0;
}

// ------------------------------------------------------------ channel ------

int cmd_channel(const CliOptions& opts) {
  const Config cfg = load_config(opts, "channel", /*model_required=*/false);
  StrictObject task(cfg.task, "task");
  if (task.has("type")) task.text("type");

  double f;
  if (task.has("transmissivity")) {
    f = task.number("transmissivity");
  } else if (cfg.model) {
    // Chained mode: the model's figure of merit is the transmissivity of the
    // effective pure-loss channel on the fed state.
    f = fom_by_method(*cfg.model, "closed", opts.efficiency).value;
  } else {
    throw std::invalid_argument(
        "channel task needs \"transmissivity\" or a model block to derive it from");
  }

  const bool has_state = task.has("state");
  const bool has_squeezing = task.has("squeezing");
  if (has_state == has_squeezing)
    throw std::invalid_argument("channel task needs exactly one of \"state\" or \"squeezing\"");

  if (has_state) {
    StrictObject st(task.raw("state"), "task.state");
    task.finish();
    const std::string skind = st.text("kind");
    const int n_max = st.integer_or("n_max", 30);
    FockDensityMatrix rho_in;
    if (skind == "fock") {
      rho_in = FockDensityMatrix::fock(st.integer("n"), n_max);
    } else if (skind == "coherent") {
      const std::complex<double> alpha(st.number("alpha_re"), st.number_or("alpha_im", 0.0));
      rho_in = FockDensityMatrix::coherent(alpha, n_max);
    } else {
      throw std::invalid_argument("task.state.kind must be \"fock\" or \"coherent\"");
    }
    st.finish();
    rho_in.validate();
    const FockDensityMatrix rho_out = apply_loss_channel(rho_in, f);

    if (opts.format == OutputFormat::csv) {
      CsvWriter w;
      w.header({"n", "p_in", "p_out"});
      for (int n = 0; n < rho_in.dim(); ++n)
        w.row({std::to_string(n), format_double(rho_in.entries(n, n).real()),
               format_double(rho_out.entries(n, n).real())});
      emit(opts, w.buffer);
      return 0;
    }
    if (opts.format == OutputFormat::human) {
      std::string text;
      text += "transmissivity: " + format_double(f) + "\n";
      text += "dim: " + std::to_string(rho_out.dim()) + "\n";
      text += "mean photon in:  " + format_double(mean_photon(rho_in)) + "\n";
      text += "mean photon out: " + format_double(mean_photon(rho_out)) + "\n";
      text += "wigner probe in:  " + format_double(wigner_negativity_probe(rho_in)) + "\n";
      text += "wigner probe out: " + format_double(wigner_negativity_probe(rho_out)) + "\n";
      text += "trace deficit: " + format_double(rho_out.trace_deficit) + "\n";
      emit(opts, text);
      return 0;
    }
    json out;
    if (cfg.model) out["model"] = cfg.document.at("model");
    out["transmissivity"] = f;
    out["dim"] = rho_out.dim();
    out["mean_photon_in"] = mean_photon(rho_in);
    out["mean_photon_out"] = mean_photon(rho_out);
    out["wigner_probe_in"] = wigner_negativity_probe(rho_in);
    out["wigner_probe_out"] = wigner_negativity_probe(rho_out);
    out["trace_deficit"] = rho_out.trace_deficit;
    json re = json::array(), im = json::array();
    for (int r = 0; r < rho_out.dim(); ++r) {
      json rr = json::array(), ri = json::array();
      for (int c = 0; c < rho_out.dim(); ++c) {
        rr.push_back(rho_out.entries(r, c).real());
        ri.push_back(rho_out.entries(r, c).imag());
      }
      re.push_back(std::move(rr));
      im.push_back(std::move(ri));
    }
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    emit(opts, dump_json(out));
    return 0;
  }

  StrictObject sq(task.raw("squeezing"), "task.squeezing");
  task.finish();
  const double theta = sq.number_or("theta", 0.0);
  std::vector<double> s_values;
  if (sq.has("s_in")) {
    const json& arr = sq.raw("s_in");
    if (!arr.is_array() || arr.empty())
      throw std::invalid_argument("task.squeezing.s_in must be a non-empty array of dB values");
    for (const json& v : arr) {
      if (!v.is_number())
        throw std::invalid_argument("task.squeezing.s_in entries must be numbers");
      s_values.push_back(v.get<double>());
    }
  } else {
    const double s_min = sq.number("s_min");
    const double s_max = sq.number("s_max");
    const int points = sq.integer("points");
    if (points < 2) throw std::invalid_argument("task.squeezing.points must be at least 2");
    if (!(s_min < s_max))
      throw std::invalid_argument("task.squeezing needs s_min < s_max");
    for (int i = 0; i < points; ++i)
      s_values.push_back(s_min + (s_max - s_min) * double(i) / double(points - 1));
  }
  sq.finish();

  std::vector<SqueezingBudget> budgets;
  for (double s : s_values) budgets.push_back(squeezing_out(s, f, theta));

  if (opts.format == OutputFormat::json_doc) {
    json out;
    if (cfg.model) out["model"] = cfg.document.at("model");
    out["transmissivity"] = f;
    out["budgets"] = json::array();
    for (const SqueezingBudget& b : budgets) {
      json r;
      r["s_in"] = b.s_in;
      r["s_out"] = b.s_out;
      r["s_max"] = finite_or_null(b.s_max);
      r["s_max_unbounded"] = b.s_max_unbounded;
      r["theta"] = b.theta;
      out["budgets"].push_back(std::move(r));
    }
    emit(opts, dump_json(out));
    return 0;
  }

  CsvWriter w;
  w.header({"s_in", "f", "s_out", "s_max"});
  for (const SqueezingBudget& b : budgets)
    w.row({format_double(b.s_in), format_double(b.f), format_double(b.s_out),
           format_double(b.s_max)});
  emit(opts, w.buffer);
  return 0;
}

// ------------------------------------------------------------- oracle ------

int cmd_oracle(const CliOptions& opts) {
  const Config cfg = load_config(opts, "oracle");
  const auto* params = std::get_if<TwoModeParams>(&*cfg.model);
  if (!params)
    throw std::invalid_argument("the oracle supports only the two_mode model family");

  StrictObject task(cfg.task, "task");
  if (task.has("type")) task.text("type");
  const double tolerance = task.number_or("tolerance", 2e-3);
  ReferenceSpec spec = reference_spec(*params);
  if (task.has("n_modes")) spec.disc.n_modes = task.integer("n_modes");
  if (task.has("bandwidth")) spec.disc.bandwidth = task.number("bandwidth");
  // Derived quantities follow the (possibly overridden) discretization unless
  // pinned explicitly.
  spec.dt = task.has("dt") ? task.number("dt") : 0.05 / spec.disc.bandwidth;
  if (task.has("t_final")) {
    spec.t_final = task.number("t_final");
  } else {
    double min_rate = std::numeric_limits<double>::infinity();
    for (double r : {params->kappa, params->gamma, params->gamma_ext})
      if (r > 0) min_rate = std::min(min_rate, r);
    spec.t_final = std::min(20.0 / min_rate, 0.85 * spec.disc.recurrence_time());
  }
  const std::string traj_path = task.text_or("trajectory_csv", "");
  task.finish();

  note(opts, "oracle: simulating " + std::to_string(spec.disc.n_modes) +
                 " modes per band to t_final=" + format_double(spec.t_final));
  const OracleReport rep = verify_fom(*params, spec, tolerance);
  const double diff = std::abs(rep.p_waveguide - rep.predicted_fom);

  auto trajectory_csv = [&]() {
    CsvWriter w;
    w.header({"t", "cavity_pop", "scatterer_pop", "p_waveguide", "p_cavity_loss",
              "p_scatterer_loss", "norm"});
    for (const TrajectorySample& s : rep.trajectory.samples)
      w.row({format_double(s.t), format_double(s.cavity_pop),
             format_double(s.scatterer_pop), format_double(s.p_waveguide),
             format_double(s.p_cavity_loss), format_double(s.p_scatterer_loss),
             format_double(s.norm)});
    return w.buffer;
  };
  if (!traj_path.empty()) {
    CliOptions to = opts;
    to.output = traj_path;
    emit(to, trajectory_csv());
  }

  const char* verdict = rep.fom_match ? "PASS" : "FAIL";
  if (opts.format == OutputFormat::csv) {
    emit(opts, trajectory_csv());
    note(opts, std::string("oracle: ") + verdict + " |p_waveguide - predicted| = " +
                   format_double(diff) + " (tolerance " + format_double(tolerance) + ")");
  } else if (opts.format == OutputFormat::json_doc) {
    json out;
    out["model"] = cfg.document.at("model");
    out["p_waveguide"] = rep.p_waveguide;
    out["predicted_fom"] = rep.predicted_fom;
    out["difference"] = diff;
    out["tolerance"] = tolerance;
    out["overlap"] = rep.overlap;
    out["norm_drift"] = rep.norm_drift;
    out["n_modes"] = spec.disc.n_modes;
    out["bandwidth"] = spec.disc.bandwidth;
    out["dt"] = spec.dt;
    out["t_final"] = rep.trajectory.t_final;
    out["pass"] = rep.fom_match;
    emit(opts, dump_json(out));
  } else {
    std::string text = "model: " + model_summary(*cfg.model) + "\n";
    text += "p_waveguide    " + format_double(rep.p_waveguide) + "\n";
    text += "predicted fom  " + format_double(rep.predicted_fom) + "\n";
    text += "difference     " + format_double(diff) + " (tolerance " +
            format_double(tolerance) + ")\n";
    text += "mode overlap   " + format_double(rep.overlap) + "\n";
    text += "norm drift     " + format_double(rep.norm_drift) + "\n";
    text += "discretization n_modes=" + std::to_string(spec.disc.n_modes) +
            " bandwidth=" + format_double(spec.disc.bandwidth) +
            " dt=" + format_double(spec.dt) +
            " t_final=" + format_double(rep.trajectory.t_final) + "\n";
    text += std::string("verdict        ") + verdict + "\n";
    emit(opts, text);
  }
  return rep.fom_match ? 0 : 4;
}

}  // namespace qswitch::cli
