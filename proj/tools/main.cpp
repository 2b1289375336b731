#include <exception>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "acquisim/cli.hpp"

namespace {

int guarded(const char* command, const std::function<void()>& body,
            bool config_exit_codes) {
  try {
    body();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return config_exit_codes ? acquisim::exit_code_for(e) : 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label-acquisition simulation harness"};
  app.require_subcommand(1);

  acquisim::GenerateArgs gen;
  CLI::App* generate =
      app.add_subcommand("generate", "Write a synthetic dataset CSV");
  generate->add_option("--n", gen.n, "Number of points");
  generate->add_option("--d", gen.d, "Feature dimensionality");
  generate->add_option("--groups", gen.groups, "Number of groups");
  generate->add_option("--noise-sd", gen.noise_sd,
                       "Noise sd on log consumption");
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--out", gen.out_path, "Output CSV path")->required();

  acquisim::RunArgs run;
  std::uint64_t run_seed = 0;
  CLI::App* run_cmd =
      app.add_subcommand("run", "Run the configured experiment");
  run_cmd->add_option("--config", run.config_path, "Experiment config file")
      ->required();
  run_cmd->add_option("--out", run.out_dir_override,
                      "Output directory (overrides the config)");
  run_cmd->add_option("--jobs", run.jobs,
                      "Worker threads (default: machine parallelism)");
  CLI::Option* seed_opt =
      run_cmd->add_option("--seed", run_seed, "Master seed (overrides the config)");

  std::string runs_path;
  CLI::App* report =
      app.add_subcommand("report", "Summarize a runs.csv table");
  report->add_option("runs", runs_path, "Path to runs.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (generate->parsed()) {
    return guarded("generate", [&] { acquisim::cmd_generate(gen, std::cout); },
                   true);
  }
  if (run_cmd->parsed()) {
    if (seed_opt->count() > 0) run.seed_override = run_seed;
    return guarded("run", [&] { acquisim::cmd_run(run, std::cout); }, true);
  }
  return guarded("report", [&] { acquisim::cmd_report(runs_path, std::cout); },
                 false);
}
