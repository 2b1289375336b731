#include "acquisim/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <ostream>
#include <thread>

#include "acquisim/errors.hpp"
#include "acquisim/io.hpp"
#include "acquisim/text.hpp"

namespace acquisim {

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error) != nullptr ||
      dynamic_cast<const ParseError*>(&error) != nullptr ||
      dynamic_cast<const ValidationError*>(&error) != nullptr) {
    return 2;
  }
  return 1;
}

void cmd_generate(const GenerateArgs& args, std::ostream& log) {
  if (args.out_path.empty()) throw ConfigError("--out path is required");
  const Dataset dataset = generate_synthetic(args.n, args.d, args.groups,
                                             args.noise_sd, args.seed);
  write_csv(dataset, args.out_path);

  std::vector<std::size_t> sizes(dataset.groups.size(), 0);
  for (const Point& p : dataset.points) {
    ++sizes[static_cast<std::size_t>(p.group)];
  }
  log << "wrote " << args.out_path << ": n=" << dataset.size()
      << " d=" << dataset.dimensionality << "\n";
  for (const GroupId& g : dataset.groups) {
    log << "  " << g.label << ": "
        << sizes[static_cast<std::size_t>(g.index)] << " points\n";
  }
}

void cmd_run(const RunArgs& args, std::ostream& log) {
  ExperimentConfig cfg = parse_config_file(args.config_path);
  if (args.seed_override) cfg.sim.seed = *args.seed_override;
  if (!args.out_dir_override.empty()) cfg.out_dir = args.out_dir_override;

  std::size_t jobs = args.jobs;
  if (jobs == 0) {
    jobs = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }

  const Dataset dataset =
      cfg.dataset_path.empty()
          ? generate_synthetic(
                cfg.synthetic_n, cfg.synthetic_d, cfg.synthetic_groups,
                cfg.synthetic_noise_sd,
                cfg.synthetic_seed.value_or(
                    derive_seed(cfg.sim.seed, {kSyntheticStream})))
          : load_csv(cfg.dataset_path);

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + cfg.out_dir + "': " +
                  ec.message());
  }

  std::vector<RunRecord> records;
  for (const StrategyKind strategy : cfg.strategies) {
    SimulationConfig sim = cfg.sim;
    sim.strategy = strategy;
    std::vector<RunRecord> chunk = run_experiment(dataset, sim, jobs);
    log << strategy_name(strategy) << ": " << chunk.size() << " records over "
        << sim.repetitions << " repetitions\n";
    for (RunRecord& r : chunk) records.push_back(std::move(r));
  }

  const std::vector<AggregateRecord> aggregates = aggregate(
      records, cfg.bootstrap_b, derive_seed(cfg.sim.seed, {kBootstrapStream}));

  const std::filesystem::path out(cfg.out_dir);
  write_runs_csv(records, (out / "runs.csv").string());
  write_groups_csv(records, (out / "groups.csv").string());
  write_aggregates_csv(aggregates, (out / "aggregates.csv").string());
  log << "wrote " << (out / "runs.csv").string() << ", "
      << (out / "groups.csv").string() << ", "
      << (out / "aggregates.csv").string() << "\n";
}

namespace {

std::string describe(const std::optional<double>& mean) {
  return mean ? format_double(*mean) : std::string("missing");
}

}  // namespace

void cmd_report(const std::string& runs_path, std::ostream& out) {
  const std::vector<RunRecord> records = read_runs_csv(runs_path);
  if (records.empty()) {
    throw ParseError(runs_path + ": no run records");
  }

  // strategy -> budget -> per-metric running sums over non-missing reps
  struct Cell {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::map<int, std::map<std::size_t, std::array<Cell, kMetricNames.size()>>>
      table;
  for (const RunRecord& r : records) {
    auto& cells = table[static_cast<int>(r.strategy)][r.budget];
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      if (const std::optional<double> v = panel_metric(r.metrics, m)) {
        cells[m].sum += *v;
        ++cells[m].n;
      }
    }
  }

  for (const auto& [strategy, by_budget] : table) {
    const std::size_t final_budget = by_budget.rbegin()->first;
    const auto& final_cells = by_budget.rbegin()->second;
    out << "strategy " << strategy_name(static_cast<StrategyKind>(strategy))
        << " (final budget " << final_budget << ")\n";
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      const Cell& c = final_cells[m];
      const std::optional<double> mean =
          c.n > 0 ? std::optional<double>(c.sum / static_cast<double>(c.n))
                  : std::nullopt;
      out << "  " << kMetricNames[m] << ": " << describe(mean) << "\n";
    }

    // curve compression: smallest budget whose mean rank correlation is
    // already 95% of the final one
    const Cell& final_spearman = final_cells[0];
    if (final_spearman.n > 0) {
      const double target =
          0.95 * (final_spearman.sum / static_cast<double>(final_spearman.n));
      std::optional<std::size_t> reached;
      for (const auto& [budget, cells] : by_budget) {
        if (cells[0].n == 0) continue;
        const double mean = cells[0].sum / static_cast<double>(cells[0].n);
        if (mean >= target) {
          reached = budget;
          break;
        }
      }
      if (reached) {
        out << "  95% of final spearman (" << format_double(target)
            << ") first reached at budget " << *reached << "\n";
      }
    }
    out << "\n";
  }
}

}  // namespace acquisim
