#include "cli_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qswitch::cli {

using nlohmann::json;

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json_doc;
  if (name == "human") return OutputFormat::human;
  throw std::invalid_argument("unknown --format \"" + name + "\" (expected csv or json)");
}

Config load_config(const CliOptions& opts, const std::string& expected_task,
                   bool model_required) {
  if (opts.config_path.empty())
    throw std::invalid_argument("missing --config <path>");
  std::ifstream in(opts.config_path);
  if (!in)
    throw std::invalid_argument("cannot read config file: " + opts.config_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object())
    throw std::invalid_argument("config root must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "model" && it.key() != "task")
      throw std::invalid_argument("config: unknown top-level key \"" + it.key() +
                                  "\" (expected model, task)");

  Config cfg;
  cfg.document = doc;
  if (doc.contains("model")) cfg.model = parse_model(doc.at("model"));
  if (model_required && !cfg.model)
    throw std::invalid_argument("config needs a \"model\" block for this command");

  if (doc.contains("task")) {
    cfg.task = doc.at("task");
    if (!cfg.task.is_object())
      throw std::invalid_argument("config: \"task\" must be a JSON object");
    if (cfg.task.contains("type")) {
      if (!cfg.task.at("type").is_string())
        throw std::invalid_argument("config: task type must be a string");
      cfg.task_type = cfg.task.at("type").get<std::string>();
      if (cfg.task_type != expected_task)
        throw std::invalid_argument("config task type \"" + cfg.task_type +
                                    "\" does not match subcommand \"" + expected_task + "\"");
    }
  } else {
    cfg.task = json::object();
  }

  if (!(opts.efficiency >= 0 && opts.efficiency <= 1))
    throw std::invalid_argument("--efficiency must lie in [0, 1]");
  return cfg;
}

void emit(const CliOptions& opts, const std::string& text) {
  if (opts.output == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + opts.output);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::invalid_argument("failed writing output file: " + opts.output);
}

}  // namespace qswitch::cli
