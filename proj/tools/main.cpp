#include <cstdio>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_commands.hpp"

namespace {

void add_common(CLI::App* sub, qswitch::cli::CliOptions& opts, std::string& format_name) {
  sub->add_option("--config", opts.config_path, "JSON config file")->required();
  sub->add_option("--output", opts.output, "output destination, or - for stdout");
  sub->add_option("--format", format_name, "output format: csv or json");
  sub->add_option("--efficiency", opts.efficiency,
                  "external coupling efficiency multiplier in [0, 1]");
  sub->add_option("--seed", opts.seed, "reserved for randomized utilities");
  sub->add_flag("--quiet", opts.quiet, "suppress informational notes on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"figure-of-merit toolkit for coherently opened high-Q resonators"};
  app.require_subcommand(1);

  qswitch::cli::CliOptions opts;
  std::string format_name;

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const qswitch::cli::CliOptions&);
  };
  const Sub subs[] = {
      {"fom", "evaluate the figure of merit by every applicable method",
       qswitch::cli::cmd_fom},
      {"sweep", "evaluate the figure of merit on a 1-D or 2-D parameter grid",
       qswitch::cli::cmd_sweep},
      {"optimize", "maximize the figure of merit over bounded free parameters",
       qswitch::cli::cmd_optimize},
      {"profile", "emit the optimal output (or feeding input) temporal mode",
       qswitch::cli::cmd_profile},
      {"channel", "apply the effective pure-loss channel or squeezing budget",
       qswitch::cli::cmd_channel},
      {"oracle", "verify the figure of merit against a discretized-bath simulation",
       qswitch::cli::cmd_oracle},
  };
  for (const Sub& s : subs) add_common(app.add_subcommand(s.name, s.help), opts, format_name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (!format_name.empty()) opts.format = qswitch::cli::parse_format(format_name);
    for (const Sub& s : subs)
      if (app.get_subcommand(s.name)->parsed()) return s.run(opts);
    std::fprintf(stderr, "error: no subcommand selected\n");
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
