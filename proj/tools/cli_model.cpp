#include "cli_model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "qswitch/io.hpp"

namespace qswitch::cli {

using nlohmann::json;

StrictObject::StrictObject(const json& j, std::string context)
    : j_(j), context_(std::move(context)) {
  if (!j_.is_object())
    throw std::invalid_argument(context_ + " must be a JSON object");
}

const json& StrictObject::fetch(const std::string& key) {
  auto it = j_.find(key);
  if (it == j_.end())
    throw std::invalid_argument(context_ + ": missing required key \"" + key + "\"");
  seen_.push_back(key);
  return *it;
}

bool StrictObject::has(const std::string& key) const { return j_.contains(key); }

double StrictObject::number(const std::string& key) {
  const json& v = fetch(key);
  if (!v.is_number())
    throw std::invalid_argument(context_ + ": key \"" + key + "\" must be a number");
  return v.get<double>();
}

double StrictObject::number_or(const std::string& key, double fallback) {
  return has(key) ? number(key) : fallback;
}

int StrictObject::integer(const std::string& key) {
  const json& v = fetch(key);
  if (!v.is_number_integer())
    throw std::invalid_argument(context_ + ": key \"" + key + "\" must be an integer");
  return v.get<int>();
}

int StrictObject::integer_or(const std::string& key, int fallback) {
  return has(key) ? integer(key) : fallback;
}

std::string StrictObject::text(const std::string& key) {
  const json& v = fetch(key);
  if (!v.is_string())
    throw std::invalid_argument(context_ + ": key \"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::string StrictObject::text_or(const std::string& key, const std::string& fallback) {
  return has(key) ? text(key) : fallback;
}

bool StrictObject::flag_or(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const json& v = fetch(key);
  if (!v.is_boolean())
    throw std::invalid_argument(context_ + ": key \"" + key + "\" must be a boolean");
  return v.get<bool>();
}

const json& StrictObject::raw(const std::string& key) { return fetch(key); }

void StrictObject::finish() const {
  for (auto it = j_.begin(); it != j_.end(); ++it)
    if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
      throw std::invalid_argument(context_ + ": unknown key \"" + it.key() + "\"");
}

ModelVariant parse_model(const json& j) {
  StrictObject o(j, "model");
  const std::string type = o.text("type");
  ModelVariant out;
  if (type == "two_mode") {
    TwoModeParams p;
    p.g = o.number("g");
    p.kappa = o.number("kappa");
    p.gamma = o.number("gamma");
    p.gamma_ext = o.number_or("gamma_ext", 0.0);
    out = p;
  } else if (type == "three_mode") {
    ThreeModeParams p;
    p.lambda = o.number("lambda");
    p.lambda_p = o.number("lambda_p");
    p.n = o.number("n");
    p.kappa = o.number("kappa");
    p.eta = o.number("eta");
    p.eta_ext = o.number_or("eta_ext", 0.0);
    p.Gamma = o.number("Gamma");
    out = p;
  } else if (type == "dispersive") {
    DispersiveParams p;
    p.lambda = o.number("lambda");
    p.Delta = o.number("Delta");
    p.n = o.number("n");
    p.Gamma = o.number("Gamma");
    p.kappa = o.number("kappa");
    p.eta = o.number("eta");
    p.eta_ext = o.number_or("eta_ext", 0.0);
    p.nbar = o.number_or("nbar", 10.0);
    out = p;
  } else if (type == "qubit") {
    QubitParams p;
    p.g = o.number("g");
    p.kappa = o.number("kappa");
    p.gamma = o.number("gamma");
    p.gamma_ext = o.number_or("gamma_ext", 0.0);
    p.nbar = o.number_or("nbar", 1.0);
    p.fast_emission_threshold = o.number_or("fast_emission_threshold", 10.0);
    out = p;
  } else {
    throw std::invalid_argument(
        "model: unknown type \"" + type +
        "\" (expected two_mode, three_mode, dispersive, or qubit)");
  }
  o.finish();
  std::visit([](const auto& p) { p.validate(); }, out);
  return out;
}

const char* model_name(const ModelVariant& m) {
  switch (m.index()) {
    case 0: return "two-mode";
    case 1: return "three-mode";
    case 2: return "dispersive";
    case 3: return "qubit";
  }
  return "unknown";
}

namespace {

void append_field(std::string& s, const char* name, double v) {
  if (!s.empty()) s += ", ";
  s += name;
  s += "=";
  s += format_double(v);
}

}  // namespace

std::string model_summary(const ModelVariant& m) {
  std::string fields;
  if (const auto* p = std::get_if<TwoModeParams>(&m)) {
    append_field(fields, "g", p->g);
    append_field(fields, "kappa", p->kappa);
    append_field(fields, "gamma", p->gamma);
    append_field(fields, "gamma_ext", p->gamma_ext);
  } else if (const auto* p = std::get_if<ThreeModeParams>(&m)) {
    append_field(fields, "lambda", p->lambda);
    append_field(fields, "lambda_p", p->lambda_p);
    append_field(fields, "n", p->n);
    append_field(fields, "kappa", p->kappa);
    append_field(fields, "eta", p->eta);
    append_field(fields, "eta_ext", p->eta_ext);
    append_field(fields, "Gamma", p->Gamma);
  } else if (const auto* p = std::get_if<DispersiveParams>(&m)) {
    append_field(fields, "lambda", p->lambda);
    append_field(fields, "Delta", p->Delta);
    append_field(fields, "n", p->n);
    append_field(fields, "Gamma", p->Gamma);
    append_field(fields, "kappa", p->kappa);
    append_field(fields, "eta", p->eta);
    append_field(fields, "eta_ext", p->eta_ext);
    append_field(fields, "nbar", p->nbar);
  } else if (const auto* p = std::get_if<QubitParams>(&m)) {
    append_field(fields, "g", p->g);
    append_field(fields, "kappa", p->kappa);
    append_field(fields, "gamma", p->gamma);
    append_field(fields, "gamma_ext", p->gamma_ext);
    append_field(fields, "nbar", p->nbar);
  }
  return std::string(model_name(m)) + " (" + fields + ")";
}

void set_param(ModelVariant& m, const std::string& name, double value) {
  auto fail = [&]() -> double& {
    throw std::invalid_argument("model \"" + std::string(model_name(m)) +
                                "\" has no parameter named \"" + name + "\"");
  };
  auto& ref = std::visit(
      [&](auto& p) -> double& {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TwoModeParams>) {
          if (name == "g") return p.g;
          if (name == "kappa") return p.kappa;
          if (name == "gamma") return p.gamma;
          if (name == "gamma_ext") return p.gamma_ext;
        } else if constexpr (std::is_same_v<T, ThreeModeParams>) {
          if (name == "lambda") return p.lambda;
          if (name == "lambda_p") return p.lambda_p;
          if (name == "n") return p.n;
          if (name == "kappa") return p.kappa;
          if (name == "eta") return p.eta;
          if (name == "eta_ext") return p.eta_ext;
          if (name == "Gamma") return p.Gamma;
        } else if constexpr (std::is_same_v<T, DispersiveParams>) {
          if (name == "lambda") return p.lambda;
          if (name == "Delta") return p.Delta;
          if (name == "n") return p.n;
          if (name == "Gamma") return p.Gamma;
          if (name == "kappa") return p.kappa;
          if (name == "eta") return p.eta;
          if (name == "eta_ext") return p.eta_ext;
          if (name == "nbar") return p.nbar;
        } else if constexpr (std::is_same_v<T, QubitParams>) {
          if (name == "g") return p.g;
          if (name == "kappa") return p.kappa;
          if (name == "gamma") return p.gamma;
          if (name == "gamma_ext") return p.gamma_ext;
          if (name == "nbar") return p.nbar;
        }
        return fail();
      },
      m);
  ref = value;
}

ComplexMatrix drift_matrix(const ModelVariant& m) {
  if (const auto* p = std::get_if<TwoModeParams>(&m)) return build_M(*p);
  if (const auto* p = std::get_if<ThreeModeParams>(&m)) return build_Mprime(*p);
  if (const auto* p = std::get_if<DispersiveParams>(&m)) return build_Mdoubleprime(*p);
  throw std::invalid_argument("the qubit model has no linear drift matrix");
}

double emit_rate(const ModelVariant& m) {
  if (const auto* p = std::get_if<TwoModeParams>(&m)) return p->gamma;
  if (const auto* p = std::get_if<ThreeModeParams>(&m)) return p->eta_tot();
  if (const auto* p = std::get_if<DispersiveParams>(&m)) return p->gamma_tot();
  throw std::invalid_argument("the qubit model has no drift-matrix emission rate");
}

FomResult fom_by_method(const ModelVariant& m, const std::string& method, double efficiency) {
  std::visit([](const auto& p) { p.validate(); }, m);
  if (method == "numeric")
    return fom_numeric(drift_matrix(m), emit_rate(m), efficiency, model_name(m));
  if (method == "closed") {
    if (const auto* p = std::get_if<TwoModeParams>(&m)) return fom_closed_two_mode(*p, efficiency);
    if (const auto* p = std::get_if<ThreeModeParams>(&m))
      return fom_closed_three_mode(*p, efficiency);
    if (const auto* p = std::get_if<DispersiveParams>(&m))
      return fom_closed_dispersive(*p, efficiency);
    return fom_qubit(std::get<QubitParams>(m), efficiency);
  }
  if (method == "perturbative") {
    if (const auto* p = std::get_if<ThreeModeParams>(&m))
      return fom_perturbative_three_mode(*p, efficiency);
    if (const auto* p = std::get_if<DispersiveParams>(&m))
      return fom_perturbative_dispersive(*p, efficiency);
    throw std::invalid_argument(std::string("model \"") + model_name(m) +
                                "\" has no perturbative figure of merit");
  }
  throw std::invalid_argument("unknown method \"" + method +
                              "\" (expected numeric, closed, or perturbative)");
}

std::vector<std::string> applicable_methods(const ModelVariant& m) {
  if (std::holds_alternative<QubitParams>(m)) return {"closed"};
  if (std::holds_alternative<TwoModeParams>(m)) return {"numeric", "closed"};
  return {"numeric", "closed", "perturbative"};
}

}  // namespace qswitch::cli
