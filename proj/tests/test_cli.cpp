// End-to-end tests that drive the installed binary through its public
// command-line surface: JSON configs in, CSV/JSON/human text out, and the
// documented exit-code contract (0 ok, 2 usage/config, 3 numeric domain,
// 4 oracle mismatch).

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include "qswitch/channel.hpp"
#include "qswitch/fom.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("qswitch_cli_tests_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string unique_path(const std::string& stem, const std::string& ext) {
  static int counter = 0;
  return (scratch_dir() / (stem + "_" + std::to_string(counter++) + ext)).string();
}

std::string write_text(const std::string& stem, const std::string& text) {
  const std::string path = unique_path(stem, ".json");
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(out.good());
  return path;
}

std::string write_config(const std::string& stem, const json& doc) {
  return write_text(stem, doc.dump(2) + "\n");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::string& args) {
  const std::string out_path = unique_path("stdout", ".txt");
  const std::string err_path = unique_path("stderr", ".txt");
  const std::string cmd = std::string(QSWITCH_CLI_PATH) + " " + args + " > " +
                          out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  CliRun r;
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

json two_mode_model(double g, double kappa, double gamma, double gamma_ext = 0.0) {
  return json{{"type", "two_mode"},
              {"g", g},
              {"kappa", kappa},
              {"gamma", gamma},
              {"gamma_ext", gamma_ext}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("fom human output reports every applicable method") {
  const std::string cfg = write_config(
      "fom_human",
      json{{"model", two_mode_model(1.0, 0.2, 2.0)}, {"task", {{"type", "fom"}}}});
  const CliRun r = run_cli("fom --config " + cfg);
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.out, "model: two-mode"));
  CHECK(contains(r.out, "g=1"));

  const double expect =
      qswitch::fom_closed_two_mode({1.0, 0.2, 2.0, 0.0}).value;
  bool saw_numeric = false, saw_closed = false;
  for (const std::string& line : lines_of(r.out)) {
    std::istringstream ss(line);
    std::string label;
    double value = 0;
    if ((ss >> label >> value)) {
      if (label == "numeric-gram") {
        saw_numeric = true;
        CHECK(value == doctest::Approx(expect).epsilon(1e-9));
      } else if (label == "closed-form") {
        saw_closed = true;
        CHECK(value == doctest::Approx(expect).epsilon(1e-13));
      }
    }
  }
  CHECK(saw_numeric);
  CHECK(saw_closed);
}

TEST_CASE("fom csv and json agree with the library closed form") {
  const std::string cfg = write_config(
      "fom_formats",
      json{{"model", two_mode_model(1.0, 0.2, 2.0)}, {"task", {{"type", "fom"}}}});
  const double expect =
      qswitch::fom_closed_two_mode({1.0, 0.2, 2.0, 0.0}).value;

  const CliRun csv = run_cli("fom --format csv --config " + cfg);
  REQUIRE(csv.exit_code == 0);
  const auto lines = lines_of(csv.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "method,value,validity_ratio,error");
  bool found = false;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto fields = csv_fields(lines[i]);
    REQUIRE(fields.size() == 4);
    if (fields[0] == "closed-form") {
      found = true;
      CHECK(std::stod(fields[1]) == doctest::Approx(expect).epsilon(1e-14));
      CHECK(fields[3].empty());
    }
  }
  CHECK(found);

  const CliRun js = run_cli("fom --format json --config " + cfg);
  REQUIRE(js.exit_code == 0);
  const json doc = json::parse(js.out);
  CHECK(doc.at("model").at("type") == "two_mode");
  CHECK(doc.at("efficiency").get<double>() == 1.0);
  REQUIRE(doc.at("results").is_array());
  REQUIRE(doc.at("results").size() == 2);
  bool json_closed = false;
  for (const json& entry : doc.at("results")) {
    if (entry.at("method") == "closed-form") {
      json_closed = true;
      CHECK(entry.at("value").get<double>() ==
            doctest::Approx(expect).epsilon(1e-14));
    }
  }
  CHECK(json_closed);
}

TEST_CASE("fom json lists all three methods for the three-mode family") {
  const json model{{"type", "three_mode"}, {"lambda", 1.0}, {"lambda_p", 1.5},
                   {"n", 100.0},           {"kappa", 0.25}, {"eta", 40.0},
                   {"Gamma", 0.015}};
  const std::string cfg = write_config("fom_three", json{{"model", model}});
  const CliRun r = run_cli("fom --format json --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc.at("results").size() == 3);

  qswitch::ThreeModeParams p;
  p.lambda = 1.0;
  p.lambda_p = 1.5;
  p.n = 100.0;
  p.kappa = 0.25;
  p.eta = 40.0;
  p.Gamma = 0.015;
  const double closed = qswitch::fom_closed_three_mode(p).value;
  bool saw[3] = {false, false, false};
  for (const json& entry : doc.at("results")) {
    const std::string method = entry.at("method").get<std::string>();
    if (method == "numeric-gram") {
      saw[0] = true;
      CHECK(entry.at("value").get<double>() ==
            doctest::Approx(closed).epsilon(1e-9));
    } else if (method == "closed-form") {
      saw[1] = true;
      CHECK(entry.at("value").get<double>() ==
            doctest::Approx(closed).epsilon(1e-14));
    } else if (method == "perturbative") {
      saw[2] = true;
      CHECK(entry.at("value").get<double>() > 0.9);
      CHECK(entry.contains("validity_ratio"));
    }
  }
  CHECK(saw[0]);
  CHECK(saw[1]);
  CHECK(saw[2]);
}

TEST_CASE("fom efficiency flag scales the result and is range checked") {
  const std::string cfg = write_config(
      "fom_eff", json{{"model", two_mode_model(1.0, 0.2, 2.0)}});
  const double expect =
      0.5 * qswitch::fom_closed_two_mode({1.0, 0.2, 2.0, 0.0}).value;

  const CliRun ok = run_cli("fom --format csv --efficiency 0.5 --config " + cfg);
  REQUIRE(ok.exit_code == 0);
  const auto lines = lines_of(ok.out);
  REQUIRE(lines.size() == 3);
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto fields = csv_fields(lines[i]);
    if (fields[0] == "closed-form")
      CHECK(std::stod(fields[1]) == doctest::Approx(expect).epsilon(1e-14));
  }

  const CliRun bad = run_cli("fom --efficiency 1.5 --config " + cfg);
  CHECK(bad.exit_code == 2);
  CHECK(contains(bad.err, "error:"));
  CHECK(contains(bad.err, "--efficiency"));
}

TEST_CASE("config and usage failures exit with code 2") {
  const json good_model = two_mode_model(1.0, 0.2, 2.0);

  SUBCASE("config file is not valid JSON") {
    const std::string cfg = write_text("broken", "{ this is not json\n");
    const CliRun r = run_cli("fom --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "error:"));
    CHECK(contains(r.err, "not valid JSON"));
  }
  SUBCASE("unknown top-level key") {
    const std::string cfg =
        write_config("topkey", json{{"model", good_model}, {"bogus", 1}});
    const CliRun r = run_cli("fom --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "unknown top-level key"));
  }
  SUBCASE("unknown model key") {
    json model = good_model;
    model["zeta"] = 3.0;
    const std::string cfg = write_config("modelkey", json{{"model", model}});
    const CliRun r = run_cli("fom --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "unknown key \"zeta\""));
  }
  SUBCASE("missing required model key") {
    json model = good_model;
    model.erase("gamma");
    const std::string cfg = write_config("missing", json{{"model", model}});
    const CliRun r = run_cli("fom --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "missing required key \"gamma\""));
  }
  SUBCASE("unknown model type") {
    const std::string cfg =
        write_config("badtype", json{{"model", {{"type", "tetramode"}}}});
    const CliRun r = run_cli("fom --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "unknown type"));
  }
  SUBCASE("task type does not match the subcommand") {
    const std::string cfg = write_config(
        "mismatch", json{{"model", good_model}, {"task", {{"type", "sweep"}}}});
    const CliRun r = run_cli("fom --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "does not match subcommand"));
  }
  SUBCASE("config path does not exist") {
    const CliRun r = run_cli("fom --config /nonexistent/q.json");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "cannot read config file"));
  }
  SUBCASE("missing --config flag") {
    const CliRun r = run_cli("fom");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "error:"));
  }
  SUBCASE("unknown --format value") {
    const std::string cfg = write_config("fmt", json{{"model", good_model}});
    const CliRun r = run_cli("fom --format yaml --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "unknown --format"));
  }
  SUBCASE("unknown subcommand") {
    const CliRun r = run_cli("frobnicate");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "error:"));
  }
  SUBCASE("model parameters fail validation") {
    const std::string cfg =
        write_config("negg", json{{"model", two_mode_model(1.0, -0.2, 2.0)}});
    const CliRun r = run_cli("fom --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "kappa"));
  }
}

TEST_CASE("sweep csv rows match direct closed-form evaluation") {
  const json task{{"type", "sweep"},
                  {"axes", json::array({json{{"name", "kappa"},
                                             {"min", 0.2},
                                             {"max", 0.4},
                                             {"points", 2}}})}};
  const std::string cfg = write_config(
      "sweep_csv", json{{"model", two_mode_model(1.0, 1.0, 2.0)}, {"task", task}});
  const CliRun r = run_cli("sweep --format csv --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "kappa,value,method,reason");
  const double want[2] = {qswitch::fom_closed_two_mode({1.0, 0.2, 2.0, 0.0}).value,
                          qswitch::fom_closed_two_mode({1.0, 0.4, 2.0, 0.0}).value};
  const double coord[2] = {0.2, 0.4};
  for (int i = 0; i < 2; ++i) {
    const auto fields = csv_fields(lines[size_t(i) + 1]);
    REQUIRE(fields.size() == 4);
    CHECK(std::stod(fields[0]) == doctest::Approx(coord[i]).epsilon(1e-15));
    CHECK(std::stod(fields[1]) == doctest::Approx(want[i]).epsilon(1e-14));
    CHECK(fields[2] == "closed-form");
    CHECK(fields[3].empty());
  }
}

TEST_CASE("sweep json marks infeasible rows with a reason") {
  const json task{{"type", "sweep"},
                  {"axes", json::array({json{{"name", "gamma"},
                                             {"min", 0.0},
                                             {"max", 2.0},
                                             {"points", 2}}})}};
  const std::string cfg = write_config(
      "sweep_nan", json{{"model", two_mode_model(1.0, 0.0, 1.0)}, {"task", task}});
  const CliRun r = run_cli("sweep --format json --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc.at("rows").size() == 2);
  const json& row0 = doc.at("rows")[0];
  CHECK(row0.at("value").is_null());
  CHECK(contains(row0.at("reason").get<std::string>(), "gamma_tot"));
  const json& row1 = doc.at("rows")[1];
  CHECK(row1.at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(row1.at("reason").get<std::string>().empty());
}

TEST_CASE("sweep outputs are byte-identical across runs") {
  const json task{{"type", "sweep"},
                  {"axes", json::array({json{{"name", "kappa"},
                                             {"min", 0.05},
                                             {"max", 5.0},
                                             {"points", 17},
                                             {"scale", "log"}}})}};
  const std::string cfg = write_config(
      "sweep_det", json{{"model", two_mode_model(1.3, 1.0, 0.7)}, {"task", task}});
  const std::string f1 = unique_path("sweep_a", ".csv");
  const std::string f2 = unique_path("sweep_b", ".csv");
  const CliRun r1 = run_cli("sweep --format csv --output " + f1 + " --config " + cfg);
  const CliRun r2 = run_cli("sweep --format csv --output " + f2 + " --config " + cfg);
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  const std::string s1 = slurp(f1);
  const std::string s2 = slurp(f2);
  REQUIRE(!s1.empty());
  CHECK(s1 == s2);
  CHECK(lines_of(s1).size() == 18);
  CHECK(lines_of(s1)[0] == "kappa,value,method,reason");
}

TEST_CASE("optimize walks to the monotone optimum over kappa") {
  const json task{{"type", "optimize"},
                  {"free", json::array({json{{"name", "kappa"},
                                             {"min", 0.05},
                                             {"max", 2.0}}})}};
  const std::string cfg = write_config(
      "opt_kappa", json{{"model", two_mode_model(1.0, 1.0, 2.0)}, {"task", task}});
  const CliRun r = run_cli("optimize --format csv --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "kappa,value,evaluations,converged");
  const auto fields = csv_fields(lines[1]);
  REQUIRE(fields.size() == 4);
  const double argmax = std::stod(fields[0]);
  const double value = std::stod(fields[1]);
  CHECK(std::abs(argmax - 0.05) < 1e-5);
  CHECK(value ==
        doctest::Approx(qswitch::fom_closed_two_mode({1.0, argmax, 2.0, 0.0}).value)
            .epsilon(1e-12));
  CHECK(std::stoi(fields[2]) >= 16);
  CHECK(fields[3] == "true");
}

TEST_CASE("profile csv carries grid metadata and the temporal mode") {
  const json model = two_mode_model(1.0, 0.0, 4.0);  // critically damped

  const json out_task{{"type", "profile"},
                      {"kind", "output_u"},
                      {"t_max", 14.0},
                      {"points", 400}};
  const std::string out_cfg =
      write_config("prof_u", json{{"model", model}, {"task", out_task}});
  const CliRun u = run_cli("profile --format csv --config " + out_cfg);
  REQUIRE(u.exit_code == 0);
  const auto ulines = lines_of(u.out);
  REQUIRE(ulines.size() == 402);
  CHECK(contains(ulines[0], "# model=two-mode kind=output-u norm_error="));
  CHECK(ulines[1] == "t,re,im");
  const double norm_error =
      std::stod(ulines[0].substr(ulines[0].find("norm_error=") + 11));
  CHECK(std::abs(norm_error) < 1e-3);

  const auto first = csv_fields(ulines[2]);
  CHECK(std::stod(first[0]) == 0.0);
  CHECK(std::abs(std::stod(first[1])) < 1e-12);
  CHECK(std::abs(std::stod(first[2])) < 1e-12);

  double peak = 0.0, peak_t = -1.0;
  for (size_t i = 2; i < ulines.size(); ++i) {
    const auto f = csv_fields(ulines[i]);
    REQUIRE(f.size() == 3);
    const double mag = std::hypot(std::stod(f[1]), std::stod(f[2]));
    if (mag > peak) {
      peak = mag;
      peak_t = std::stod(f[0]);
    }
  }
  // |u(t)| = 2 t e^{-t} for this family: maximum 2/e just after t = 1 on
  // this grid.
  CHECK(peak == doctest::Approx(0.7356).epsilon(2e-3));
  CHECK(peak_t > 0.9);
  CHECK(peak_t < 1.1);

  const json in_task{{"type", "profile"},
                     {"kind", "input_w"},
                     {"t_max", 14.0},
                     {"points", 400}};
  const std::string in_cfg =
      write_config("prof_w", json{{"model", model}, {"task", in_task}});
  const CliRun w = run_cli("profile --format csv --config " + in_cfg);
  REQUIRE(w.exit_code == 0);
  const auto wlines = lines_of(w.out);
  REQUIRE(wlines.size() == 402);
  CHECK(contains(wlines[0], "kind=input-w"));
  CHECK(std::stod(csv_fields(wlines[2])[0]) == doctest::Approx(-14.0));
  CHECK(std::stod(csv_fields(wlines.back())[0]) == 0.0);
  double wpeak = 0.0, wpeak_t = 1.0;
  for (size_t i = 2; i < wlines.size(); ++i) {
    const auto f = csv_fields(wlines[i]);
    const double mag = std::hypot(std::stod(f[1]), std::stod(f[2]));
    if (mag > wpeak) {
      wpeak = mag;
      wpeak_t = std::stod(f[0]);
    }
  }
  // The feeding input is the time reverse of the emitted mode.
  CHECK(wpeak == doctest::Approx(peak).epsilon(1e-10));
  CHECK(wpeak_t > -1.1);
  CHECK(wpeak_t < -0.9);
}

TEST_CASE("profile rejects a grid that truncates the mode") {
  const json task{{"type", "profile"},
                  {"kind", "output_u"},
                  {"t_max", 1.0},
                  {"points", 50}};
  const std::string cfg = write_config(
      "prof_trunc", json{{"model", two_mode_model(1.0, 0.0, 4.0)}, {"task", task}});
  const CliRun r = run_cli("profile --format csv --config " + cfg);
  CHECK(r.exit_code == 3);
  CHECK(contains(r.err, "error:"));
}

TEST_CASE("channel state csv lists the photon distributions") {
  const json task{{"type", "channel"},
                  {"transmissivity", 0.4},
                  {"state", {{"kind", "fock"}, {"n", 1}, {"n_max", 4}}}};
  const std::string cfg = write_config("chan_fock", json{{"task", task}});
  const CliRun r = run_cli("channel --format csv --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "n,p_in,p_out");
  const auto row0 = csv_fields(lines[1]);
  const auto row1 = csv_fields(lines[2]);
  CHECK(row0[0] == "0");
  CHECK(std::stod(row0[1]) == 0.0);
  CHECK(std::stod(row0[2]) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(std::stod(row1[1]) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::stod(row1[2]) == doctest::Approx(0.4).epsilon(1e-14));
  for (size_t i = 3; i < lines.size(); ++i)
    CHECK(std::stod(csv_fields(lines[i])[2]) == 0.0);
}

TEST_CASE("channel json reports the lossy coherent-state moments") {
  const json task{
      {"type", "channel"},
      {"transmissivity", 0.36},
      {"state", {{"kind", "coherent"}, {"alpha_re", 1.5}, {"n_max", 25}}}};
  const std::string cfg = write_config("chan_coh", json{{"task", task}});
  const CliRun r = run_cli("channel --format json --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("dim").get<int>() == 26);
  CHECK(doc.at("transmissivity").get<double>() == doctest::Approx(0.36));
  CHECK(doc.at("mean_photon_in").get<double>() ==
        doctest::Approx(2.25).epsilon(1e-10));
  CHECK(doc.at("mean_photon_out").get<double>() ==
        doctest::Approx(0.81).epsilon(1e-8));
  CHECK(doc.at("trace_deficit").get<double>() < 1e-10);
  REQUIRE(doc.at("re").is_array());
  REQUIRE(doc.at("re").size() == 26);
}

TEST_CASE("channel chained mode derives transmissivity from the model") {
  const json task{{"type", "channel"},
                  {"squeezing", {{"s_in", json::array({3.0})}}}};
  const std::string cfg = write_config(
      "chan_chain", json{{"model", two_mode_model(1.0, 0.2, 2.0)}, {"task", task}});
  const CliRun r = run_cli("channel --format csv --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "s_in,f,s_out,s_max");
  const auto fields = csv_fields(lines[1]);
  REQUIRE(fields.size() == 4);
  const double f = qswitch::fom_closed_two_mode({1.0, 0.2, 2.0, 0.0}).value;
  const qswitch::SqueezingBudget want = qswitch::squeezing_out(3.0, f);
  CHECK(std::stod(fields[0]) == doctest::Approx(3.0));
  CHECK(std::stod(fields[1]) == doctest::Approx(f).epsilon(1e-14));
  CHECK(std::stod(fields[2]) == doctest::Approx(want.s_out).epsilon(1e-14));
  CHECK(std::stod(fields[3]) == doctest::Approx(want.s_max).epsilon(1e-14));
}

TEST_CASE("channel squeezing grid is monotone in the input level") {
  const json task{{"type", "channel"},
                  {"transmissivity", 0.8},
                  {"squeezing", {{"s_min", 0.0}, {"s_max", 20.0}, {"points", 9}}}};
  const std::string cfg = write_config("chan_grid", json{{"task", task}});
  const CliRun r = run_cli("channel --format csv --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 10);
  const double ceiling = qswitch::squeezing_out(60.0, 0.8).s_max;
  double prev = -1.0;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto fields = csv_fields(lines[i]);
    const double s_out = std::stod(fields[2]);
    CHECK(s_out > prev);
    CHECK(s_out < ceiling);
    CHECK(std::stod(fields[3]) == doctest::Approx(ceiling).epsilon(1e-12));
    prev = s_out;
  }
}

TEST_CASE("channel config errors exit with code 2") {
  SUBCASE("state and squeezing together") {
    const json task{{"type", "channel"},
                    {"transmissivity", 0.5},
                    {"state", {{"kind", "fock"}, {"n", 0}}},
                    {"squeezing", {{"s_in", json::array({1.0})}}}};
    const std::string cfg = write_config("chan_both", json{{"task", task}});
    const CliRun r = run_cli("channel --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "exactly one"));
  }
  SUBCASE("no transmissivity and no model") {
    const json task{{"type", "channel"},
                    {"state", {{"kind", "fock"}, {"n", 0}}}};
    const std::string cfg = write_config("chan_nof", json{{"task", task}});
    const CliRun r = run_cli("channel --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "transmissivity"));
  }
  SUBCASE("unknown state kind") {
    const json task{{"type", "channel"},
                    {"transmissivity", 0.5},
                    {"state", {{"kind", "thermal"}, {"n", 1}}}};
    const std::string cfg = write_config("chan_kind", json{{"task", task}});
    const CliRun r = run_cli("channel --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "fock"));
  }
  SUBCASE("transmissivity out of range") {
    const json task{{"type", "channel"},
                    {"transmissivity", 1.5},
                    {"state", {{"kind", "fock"}, {"n", 1}}}};
    const std::string cfg = write_config("chan_f", json{{"task", task}});
    const CliRun r = run_cli("channel --config " + cfg);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "error:"));
  }
}

TEST_CASE("oracle verifies the closed-form prediction end to end") {
  const json task{{"type", "oracle"},
                  {"n_modes", 400},
                  {"bandwidth", 60.0},
                  {"tolerance", 0.02},
                  {"trajectory_csv", unique_path("traj", ".csv")}};
  const std::string cfg = write_config(
      "oracle_ok", json{{"model", two_mode_model(1.0, 0.2, 2.0)}, {"task", task}});
  const CliRun r = run_cli("oracle --format json --config " + cfg);
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.err, "oracle: simulating"));
  const json doc = json::parse(r.out);
  const double expect =
      qswitch::fom_closed_two_mode({1.0, 0.2, 2.0, 0.0}).value;
  CHECK(doc.at("pass").get<bool>());
  CHECK(doc.at("predicted_fom").get<double>() ==
        doctest::Approx(expect).epsilon(1e-9));
  CHECK(std::abs(doc.at("p_waveguide").get<double>() - expect) < 0.02);
  CHECK(doc.at("difference").get<double>() < 0.02);
  CHECK(doc.at("overlap").get<double>() > 0.99);
  CHECK(doc.at("norm_drift").get<double>() < 1e-5);
  CHECK(doc.at("n_modes").get<int>() == 400);
  CHECK(doc.at("dt").get<double>() == doctest::Approx(0.05 / 60.0));

  const std::string traj =
      slurp(task.at("trajectory_csv").get<std::string>());
  const auto tlines = lines_of(traj);
  REQUIRE(tlines.size() > 10);
  CHECK(tlines[0] ==
        "t,cavity_pop,scatterer_pop,p_waveguide,p_cavity_loss,p_scatterer_loss,norm");
  const auto last = csv_fields(tlines.back());
  REQUIRE(last.size() == 7);
  CHECK(std::stod(last[3]) == doctest::Approx(expect).epsilon(0.03));
  CHECK(std::stod(last[6]) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("oracle failure and validation paths use distinct exit codes") {
  const json model = two_mode_model(1.0, 0.2, 2.0);

  // An impossible tolerance: the run finishes but the comparison fails.
  const json tight{{"type", "oracle"},
                   {"n_modes", 200},
                   {"bandwidth", 40.0},
                   {"tolerance", 1e-9}};
  const std::string tight_cfg =
      write_config("oracle_tight", json{{"model", model}, {"task", tight}});
  const CliRun r4 = run_cli("oracle --config " + tight_cfg);
  CHECK(r4.exit_code == 4);
  CHECK(contains(r4.out, "FAIL"));

  // A window reaching the discrete-bath recurrence is a domain error.
  const json late{{"type", "oracle"},
                  {"n_modes", 200},
                  {"bandwidth", 50.0},
                  {"t_final", 30.0}};
  const std::string late_cfg =
      write_config("oracle_late", json{{"model", model}, {"task", late}});
  const CliRun r3 = run_cli("oracle --quiet --config " + late_cfg);
  CHECK(r3.exit_code == 3);
  CHECK(contains(r3.err, "error:"));
  CHECK(contains(r3.err, "recurrence"));
  CHECK(!contains(r3.err, "oracle: simulating"));

  // Too coarse a step for the chosen bandwidth.
  const json coarse{{"type", "oracle"},
                    {"n_modes", 400},
                    {"bandwidth", 60.0},
                    {"dt", 0.01}};
  const std::string coarse_cfg =
      write_config("oracle_coarse", json{{"model", model}, {"task", coarse}});
  const CliRun r2 = run_cli("oracle --config " + coarse_cfg);
  CHECK(r2.exit_code == 2);
  CHECK(contains(r2.err, "error:"));

  // Only the two-mode family maps onto the discretized bath.
  const json qubit_model{{"type", "qubit"}, {"g", 1.0}, {"kappa", 0.2}, {"gamma", 2.0}};
  const std::string wrong_cfg =
      write_config("oracle_wrong", json{{"model", qubit_model}, {"task", json{{"type", "oracle"}}}});
  const CliRun rw = run_cli("oracle --config " + wrong_cfg);
  CHECK(rw.exit_code == 2);
  CHECK(contains(rw.err, "two_mode"));
}

}  // TEST_SUITE
