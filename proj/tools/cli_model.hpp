#pragma once

// Bridge between JSON model configs and the qswitch parameter structs: strict
// parsing (unknown keys rejected), named-parameter mutation for sweeps, and
// figure-of-merit dispatch over the model families.

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qswitch/fom.hpp"
#include "qswitch/linalg.hpp"
#include "qswitch/models.hpp"

namespace qswitch::cli {

using ModelVariant =
    std::variant<TwoModeParams, ThreeModeParams, DispersiveParams, QubitParams>;

// Strict-object view: every accessed key is recorded, finish() rejects the
// rest, so typos in physics parameters fail loudly instead of silently using
// defaults.
class StrictObject {
 public:
  StrictObject(const nlohmann::json& j, std::string context);

  double number(const std::string& key);
  double number_or(const std::string& key, double fallback);
  int integer(const std::string& key);
  int integer_or(const std::string& key, int fallback);
  std::string text(const std::string& key);
  std::string text_or(const std::string& key, const std::string& fallback);
  bool flag_or(const std::string& key, bool fallback);
  bool has(const std::string& key) const;
  // Marks the key as consumed and returns it (object/array/any type).
  const nlohmann::json& raw(const std::string& key);
  void finish() const;

 private:
  const nlohmann::json& j_;
  std::string context_;
  std::vector<std::string> seen_;
  const nlohmann::json& fetch(const std::string& key);
};

// {"type": "two_mode"|"three_mode"|"dispersive"|"qubit", ...params};
// validates the resulting parameter set.
ModelVariant parse_model(const nlohmann::json& j);

const char* model_name(const ModelVariant& m);

// Human-readable one-line parameter summary, deterministic field order.
std::string model_summary(const ModelVariant& m);

// Set a physics parameter by its JSON field name; throws std::invalid_argument
// when the model has no such parameter.  Does not re-validate (sweeps validate
// per evaluation).
void set_param(ModelVariant& m, const std::string& name, double value);

// Figure of merit by one named method: "numeric" | "closed" | "perturbative".
// Throws std::invalid_argument when the method does not apply to the family
// (numeric/perturbative for qubit, perturbative for two_mode).
FomResult fom_by_method(const ModelVariant& m, const std::string& method, double efficiency);

// Every method applicable to the family, in order numeric, closed,
// perturbative (qubit: its adiabatic closed form only).
std::vector<std::string> applicable_methods(const ModelVariant& m);

// Drift matrix of the family; throws std::invalid_argument for qubit (the
// adiabatic model has no linear drift matrix).
ComplexMatrix drift_matrix(const ModelVariant& m);

// Emission rate matching the drift matrix' figure-of-merit convention.
double emit_rate(const ModelVariant& m);

}  // namespace qswitch::cli
