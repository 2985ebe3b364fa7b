#pragma once

// Shared CLI state: parsed global flags plus the loaded JSON config document.

#include <optional>
#include <string>

#include <json.hpp>

#include "cli_model.hpp"

namespace qswitch::cli {

enum class OutputFormat { automatic, human, csv, json_doc };

struct CliOptions {
  std::string config_path;
  std::string output = "-";       // "-" = stdout
  OutputFormat format = OutputFormat::automatic;
  double efficiency = 1.0;        // external coupling efficiency multiplier
  long seed = 0;                  // reserved for randomized utilities
  bool quiet = false;
};

OutputFormat parse_format(const std::string& name);

struct Config {
  nlohmann::json document;
  std::optional<ModelVariant> model;  // absent when the config has no "model"
  nlohmann::json task;                // the "task" object (may be empty object)
  std::string task_type;              // "" when no task block present
};

// Loads and validates the top-level structure {"model": ..., "task": ...};
// `expected_task` is the subcommand name the task type must match (a missing
// task block is allowed and treated as matching).
Config load_config(const CliOptions& opts, const std::string& expected_task,
                   bool model_required = true);

// Writes `text` to opts.output ("-" = stdout).
void emit(const CliOptions& opts, const std::string& text);

}  // namespace qswitch::cli
