// Configuration-driven experiment runner for the QWZ nonequilibrium
// steady-state simulator. See README.md for the config schema.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qwz/runner.hpp"
#include "qwz/version.hpp"

namespace {

using json = nlohmann::ordered_json;

json diagnostics_json(const std::vector<qwz::Diagnostic>& diagnostics) {
  json arr = json::array();
  for (const auto& d : diagnostics) arr.push_back({{"field", d.field}, {"message", d.message}});
  return arr;
}

void print_error(const std::string& type, const std::string& message,
                 const json& diagnostics = json::array()) {
  json out;
  out["error"] = {{"type", type}, {"message", message}, {"diagnostics", diagnostics}};
  std::cout << out.dump(2) << std::endl;
}

enum Verbosity { kQuiet, kNormal, kVerbose };

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"QWZ lattice NESS simulator"};
  app.set_version_flag("--version", std::string(qwz::kVersion));

  std::string config_path;
  std::string output_dir;
  int workers = 0;
  std::string verbosity_name = "normal";

  app.add_option("-c,--config", config_path, "path to the JSON run config")->required();
  app.add_option("-o,--output-dir", output_dir, "override output.directory");
  app.add_option("-w,--workers", workers, "sweep worker count (0 = auto)");
  app.add_option("-v,--verbosity", verbosity_name, "quiet | normal | verbose")
      ->check(CLI::IsMember({"quiet", "normal", "verbose"}));

  auto* run_cmd = app.add_subcommand("run", "validate and execute the experiment");
  auto* validate_cmd = app.add_subcommand("validate", "report config violations, run nothing");
  run_cmd->fallthrough();
  validate_cmd->fallthrough();
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  const Verbosity verbosity = verbosity_name == "quiet"    ? kQuiet
                              : verbosity_name == "verbose" ? kVerbose
                                                            : kNormal;

  qwz::RunConfig config;
  try {
    config = qwz::load_config(config_path);
  } catch (const qwz::ConfigError& e) {
    print_error("config", e.what());
    return 2;
  }
  if (!output_dir.empty()) config.output.directory = output_dir;

  const auto diagnostics = qwz::validate_config(config);

  if (validate_cmd->parsed()) {
    json out;
    out["diagnostics"] = diagnostics_json(diagnostics);
    std::cout << out.dump(2) << std::endl;
    return diagnostics.empty() ? 0 : 2;
  }

  if (run_cmd->parsed()) {
    if (!diagnostics.empty()) {
      print_error("validation", "config has " + std::to_string(diagnostics.size()) +
                                    " violation(s)",
                  diagnostics_json(diagnostics));
      return 2;
    }
    try {
      const qwz::RunManifest manifest = qwz::run(config, workers);
      if (verbosity != kQuiet) {
        std::cout << "wrote " << manifest.files.size() << " file(s) to "
                  << config.output.directory << "\n";
        if (verbosity == kVerbose)
          for (const auto& [key, value] : manifest.metrics)
            std::cout << "  " << key << " = " << value << "\n";
      }
      return 0;
    } catch (const qwz::IntegrationError& e) {
      print_error("numerical", e.what());
      return 3;
    } catch (const qwz::NumericalError& e) {
      print_error("numerical", e.what());
      return 3;
    } catch (const qwz::ConfigError& e) {
      print_error("config", e.what());
      return 2;
    } catch (const std::exception& e) {
      print_error("internal", e.what());
      return 1;
    }
  }
  return 0;
}
