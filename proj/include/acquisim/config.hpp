#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acquisim/simulation.hpp"

namespace acquisim {

// A parsed experiment description: dataset source, the strategies to run,
// and the shared simulation settings. `sim.strategy` is a placeholder; the
// runner overwrites it per strategy.
struct ExperimentConfig {
  std::string dataset_path;  // empty: generate synthetic data instead

  std::size_t synthetic_n = 2000;
  std::size_t synthetic_d = 20;
  std::size_t synthetic_groups = 4;
  double synthetic_noise_sd = 0.5;
  std::optional<std::uint64_t> synthetic_seed;  // default derives from sim.seed

  std::vector<StrategyKind> strategies;
  SimulationConfig sim;
  std::size_t bootstrap_b = 1000;
  std::string out_dir = "results";
};

// Flat key-value format: `key = value` lines, `#` comments, and one
// `[strategy]` section header per strategy to run. All keys are global and
// must appear before the first section header. Every key has a default, so
// a minimal config is a dataset line plus one strategy section. ConfigError
// messages carry `path:line:` anchors.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& path_for_messages);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace acquisim
