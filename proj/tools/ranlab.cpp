// ranlab command line: run experiments from a JSON config, validate
// configs, report the version. Exit codes: 0 ok, 2 config error, 3
// runtime failure.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ranlab/config.hpp"
#include "ranlab/experiments.hpp"
#include "ranlab/version.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int cmd_run(const std::string& config_path,
            const std::vector<std::string>& overrides, int jobs) {
  ranlab::ValidatedConfig validated;
  try {
    auto user = ranlab::load_config_file(config_path);
    for (const auto& kv : overrides) {
      ranlab::apply_override(user, kv);
    }
    validated = ranlab::validate_config(user);
    if (const char* env = std::getenv("RANLAB_OUTPUT_DIR")) {
      if (*env != '\0') validated.config["output_dir"] = std::string(env);
    }
  } catch (const ranlab::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  }
  try {
    auto res = ranlab::run_experiment(validated.config, jobs);
    std::printf("wrote %zu files to %s\n", res.output_files.size(),
                validated.config.at("output_dir").get<std::string>().c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return kExitRuntime;
  }
}

int cmd_validate(const std::string& config_path) {
  try {
    auto user = ranlab::load_config_file(config_path);
    auto validated = ranlab::validate_config(user);
    std::printf("OK\n");
    if (!validated.defaulted.empty()) {
      std::printf("defaulted fields:\n");
      for (const auto& path : validated.defaulted) {
        std::printf("  %s = %s\n", path.c_str(),
                    ranlab::value_at_path(validated.config, path).c_str());
      }
    }
    return 0;
  } catch (const ranlab::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ranlab - deterministic multi-cell radio network laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "run an experiment from a config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--set", overrides,
                  "override a config value, dotted.path=value (repeatable)");
  run->add_option("--jobs", jobs, "worker pool size")->check(CLI::Range(1, 256));

  auto* validate =
      app.add_subcommand("validate", "check a config without running");
  validate->add_option("config", config_path, "JSON config file")->required();

  auto* version = app.add_subcommand("version", "print version");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, overrides, jobs);
  if (validate->parsed()) return cmd_validate(config_path);
  if (version->parsed()) {
    std::printf("ranlab %s\n", ranlab::kVersion);
    return 0;
  }
  return 0;
}
