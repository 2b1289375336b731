#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "acquisim/config.hpp"

namespace acquisim {

struct GenerateArgs {
  std::size_t n = 4595;
  std::size_t d = 850;
  std::size_t groups = 5;
  double noise_sd = 0.5;
  std::uint64_t seed = 0;
  std::string out_path;
};

struct RunArgs {
  std::string config_path;
  std::string out_dir_override;  // empty: use the config's out dir
  std::size_t jobs = 0;          // 0: machine parallelism
  std::optional<std::uint64_t> seed_override;
};

// Writes a synthetic dataset CSV and logs its shape and group sizes.
void cmd_generate(const GenerateArgs& args, std::ostream& log);

// Runs every configured strategy and writes runs.csv, groups.csv, and
// aggregates.csv into the output directory.
void cmd_run(const RunArgs& args, std::ostream& log);

// Prints per-strategy final-budget means and the budget at which each
// strategy first reaches 95% of its final mean rank correlation.
void cmd_report(const std::string& runs_path, std::ostream& out);

// 2 for configuration and input-validation failures, 1 otherwise.
int exit_code_for(const std::exception& error);

}  // namespace acquisim
