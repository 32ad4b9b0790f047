#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>

#include "bfholes/errors.hpp"
#include "bfholes/experiment.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<int> m;
  std::vector<double> r;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

const std::map<std::string, std::string> kSubcommands = {
    {"sample", "sample"},       {"hole", "hole_ladder"}, {"crowding", "crowding_ladder"},
    {"growth", "growth_stats"}, {"bounds", "bounds_table"}, {"audit", "audits"},
    {"omega-verify", "omega_verify"}, {"fit", "fit"}};

int report_error(const std::string& type, const std::string& message, const std::vector<std::string>& keys = {},
                 const std::string& path = {}) {
  nlohmann::ordered_json j;
  j["error"] = type;
  j["message"] = message;
  if (!keys.empty()) j["keys"] = keys;
  if (!path.empty()) j["path"] = path;
  std::cerr << j.dump() << "\n";
  if (type == "config_error") return 2;
  if (type == "resource_cap_exceeded") return 3;
  if (type == "io_error") return 4;
  if (type == "insufficient_data") return 5;
  return 1;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw bfholes::IoError("cannot open config file", path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification lab for real random Bargmann-Fock functions"};
  app.require_subcommand(1);
  Overrides ov;
  std::map<CLI::App*, std::string> experiment_of;
  for (const auto& [name, experiment] : kSubcommands) {
    CLI::App* sub = app.add_subcommand(name, "run the " + experiment + " experiment");
    sub->add_option("--config", ov.config, "JSON config path");
    sub->add_option("--m", ov.m, "dimension");
    sub->add_option("--r", ov.r, "radii (replaces r_values)")->expected(1, -1);
    sub->add_option("--trials", ov.trials, "trials or samples per radius");
    sub->add_option("--seed", ov.seed, "master seed");
    sub->add_option("--out", ov.out, "output path");
    sub->add_option("--format", ov.format, "csv or json");
    experiment_of[sub] = experiment;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage_error", e.what());
  }

  try {
    const std::string experiment = experiment_of.at(app.get_subcommands().front());
    nlohmann::json cfg = nlohmann::json::object();
    if (!ov.config.empty()) {
      try {
        cfg = nlohmann::json::parse(read_file(ov.config));
      } catch (const nlohmann::json::parse_error& e) {
        throw bfholes::ConfigError(std::string("config is not valid JSON: ") + e.what(), {});
      }
      if (!cfg.is_object()) throw bfholes::ConfigError("config must be a JSON object", {});
      if (cfg.contains("experiment") && cfg["experiment"] != experiment) {
        throw bfholes::ConfigError("config experiment does not match the subcommand", {"experiment"});
      }
    }
    cfg["experiment"] = experiment;
    if (ov.m) cfg["m"] = *ov.m;
    if (!ov.r.empty()) cfg["r_values"] = ov.r;
    if (ov.trials) cfg["trials"] = *ov.trials;
    if (ov.seed) cfg["master_seed"] = *ov.seed;
    if (ov.out) cfg["out"] = *ov.out;
    if (ov.format) cfg["format"] = *ov.format;
    const bfholes::ExperimentConfig config = bfholes::parse_config(cfg.dump());
    const auto res = bfholes::run_experiment(config);
    if (config.out.empty()) {
      const auto fmt = bfholes::format_from_string(config.format);
      std::cout << (fmt == bfholes::Format::csv ? bfholes::to_csv(res.table) : bfholes::to_json(res.table));
    }
    return 0;
  } catch (const bfholes::ConfigError& e) {
    return report_error("config_error", e.what(), e.keys());
  } catch (const bfholes::ResourceCapExceeded& e) {
    return report_error("resource_cap_exceeded", e.what());
  } catch (const bfholes::IoError& e) {
    return report_error("io_error", e.what(), {}, e.path());
  } catch (const bfholes::InsufficientData& e) {
    return report_error("insufficient_data", e.what());
  } catch (const bfholes::InvalidArgument& e) {
    return report_error("invalid_argument", e.what());
  } catch (const std::exception& e) {
    return report_error("error", e.what());
  }
}
