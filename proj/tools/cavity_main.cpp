// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: cavity solve <config.json> [options].
// Log verbosity comes from CAVITY_LOG_LEVEL (trace, debug, info, warn, error, off).

#include <cstdlib>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "cavity/run.hpp"

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void configure_logging()
{
  const char *env = std::getenv("CAVITY_LOG_LEVEL");
  spdlog::set_level(spdlog::level::info);
  if (env != nullptr) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honour that when asked for literally.
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("CAVITY_LOG_LEVEL={} not recognised, using info", env);
    }
  }
}

}  // namespace

int main(int argc, char **argv)
{
  configure_logging();

  CLI::App app{"Adaptive finite element DtN solver for scattering by open cavities"};
  app.require_subcommand(1);
  CLI::App *solve = app.add_subcommand("solve", "Run the sweep described by a JSON config");

  std::string config_path;
  std::string mode;
  int max_dof = 0;
  std::string out_dir = ".";
  int threads = 1;
  solve->add_option("config", config_path, "Run configuration (JSON)")->required();
  solve->add_option("--mode", mode, "Refinement mode")
    ->check(CLI::IsMember({"adaptive", "uniform"}));
  solve->add_option("--max-dof", max_dof, "Stop refining at this many unknowns")
    ->check(CLI::PositiveNumber);
  solve->add_option("--out", out_dir, "Output directory");
  solve->add_option("--threads", threads, "Sweep points solved in parallel")
    ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  cavity::RunOptions options;
  options.threads = threads;
  options.out_dir = out_dir;
  if (!mode.empty()) {
    options.mode =
      mode == "uniform" ? cavity::RefinementMode::Uniform : cavity::RefinementMode::Adaptive;
  }
  if (max_dof > 0) {
    options.max_dof = max_dof;
  }
  options.log = [](cavity::LogLevel level, const std::string &msg) {
    switch (level) {
      case cavity::LogLevel::Debug:
        spdlog::debug("{}", msg);
        break;
      case cavity::LogLevel::Info:
        spdlog::info("{}", msg);
        break;
      case cavity::LogLevel::Warn:
        spdlog::warn("{}", msg);
        break;
    }
  };

  try {
    const cavity::RunConfig config = cavity::load_config(config_path);
    spdlog::info("{}: {} sweep point(s), {}", config_path, config.sweep.values.size(),
                 cavity::to_string(config.pol));
    const cavity::RunReport report = cavity::run(config, options);
    if (report.failed > 0) {
      bool numerical = false;
      for (const auto &p : report.points) {
        numerical = numerical || p.numerical_failure;
      }
      spdlog::error("{} of {} sweep point(s) failed", report.failed, report.points.size());
      return numerical ? kExitNumerical : kExitConfig;
    }
    return kExitOk;
  } catch (const cavity::ConfigError &e) {
    spdlog::error("configuration error: {}", e.what());
    return kExitConfig;
  } catch (const cavity::NumericalError &e) {
    spdlog::error("numerical failure: {}", e.what());
    return kExitNumerical;
  } catch (const std::exception &e) {
    spdlog::error("{}", e.what());
    return kExitNumerical;
  }
}
