#include "acquisim/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "acquisim/errors.hpp"
#include "acquisim/text.hpp"

namespace acquisim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void fail(const std::string& path, std::size_t line,
                       const std::string& message) {
  throw ConfigError(path + ":" + std::to_string(line) + ": " + message);
}

class Parser {
 public:
  Parser(const std::string& text, std::string path)
      : text_(text), path_(std::move(path)) {}

  ExperimentConfig run() {
    std::istringstream in(text_);
    std::string raw;
    std::size_t line = 0;
    bool in_sections = false;
    while (std::getline(in, raw)) {
      ++line;
      std::string_view s = strip_carriage_return(raw);
      const std::size_t hash = s.find('#');
      if (hash != std::string_view::npos) s = s.substr(0, hash);
      s = trim(s);
      if (s.empty()) continue;

      if (s.front() == '[') {
        if (s.back() != ']') fail(path_, line, "unterminated section header");
        const std::string name(trim(s.substr(1, s.size() - 2)));
        StrategyKind kind;
        try {
          kind = strategy_from_string(name);
        } catch (const ConfigError& e) {
          fail(path_, line, e.what());
        }
        if (std::find(cfg_.strategies.begin(), cfg_.strategies.end(), kind) !=
            cfg_.strategies.end()) {
          fail(path_, line, "strategy '" + name + "' listed twice");
        }
        cfg_.strategies.push_back(kind);
        in_sections = true;
        continue;
      }

      const std::size_t eq = s.find('=');
      if (eq == std::string_view::npos) {
        fail(path_, line, "expected 'key = value' or '[strategy]'");
      }
      if (in_sections) {
        fail(path_, line,
             "keys must appear before the first strategy section");
      }
      const std::string key(trim(s.substr(0, eq)));
      const std::string value(trim(s.substr(eq + 1)));
      if (key.empty()) fail(path_, line, "empty key");
      if (!seen_.emplace(key, line).second) {
        fail(path_, line, "duplicate key '" + key + "'");
      }
      apply(key, value, line);
    }

    finish();
    return cfg_;
  }

 private:
  std::uint64_t parse_u64(const std::string& value, std::size_t line,
                          const std::string& key) {
    const std::optional<std::int64_t> v = try_parse_int(value);
    if (!v || *v < 0) fail(path_, line, "'" + key + "' needs a nonnegative integer");
    return static_cast<std::uint64_t>(*v);
  }

  std::size_t parse_count(const std::string& value, std::size_t line,
                          const std::string& key, std::int64_t minimum) {
    const std::optional<std::int64_t> v = try_parse_int(value);
    if (!v || *v < minimum) {
      fail(path_, line,
           "'" + key + "' needs an integer >= " + std::to_string(minimum));
    }
    return static_cast<std::size_t>(*v);
  }

  double parse_real(const std::string& value, std::size_t line,
                    const std::string& key) {
    const std::optional<double> v = try_parse_double(value);
    if (!v) fail(path_, line, "'" + key + "' needs a number");
    return *v;
  }

  bool parse_flag(const std::string& value, std::size_t line,
                  const std::string& key) {
    if (value == "true") return true;
    if (value == "false") return false;
    fail(path_, line, "'" + key + "' needs true or false");
  }

  void apply(const std::string& key, const std::string& value,
             std::size_t line) {
    SimulationConfig& sim = cfg_.sim;
    if (key == "dataset") {
      if (value.empty()) fail(path_, line, "'dataset' needs a path");
      cfg_.dataset_path = value;
    } else if (key == "synthetic_n") {
      cfg_.synthetic_n = parse_count(value, line, key, 1);
    } else if (key == "synthetic_d") {
      cfg_.synthetic_d = parse_count(value, line, key, 1);
    } else if (key == "synthetic_groups") {
      cfg_.synthetic_groups = parse_count(value, line, key, 1);
    } else if (key == "synthetic_noise_sd") {
      const double v = parse_real(value, line, key);
      if (v < 0.0) fail(path_, line, "'synthetic_noise_sd' must be >= 0");
      cfg_.synthetic_noise_sd = v;
    } else if (key == "synthetic_seed") {
      cfg_.synthetic_seed = parse_u64(value, line, key);
    } else if (key == "repetitions") {
      sim.repetitions = parse_count(value, line, key, 1);
    } else if (key == "schedule_points") {
      sim.schedule.num_points = parse_count(value, line, key, 2);
    } else if (key == "schedule_min") {
      sim.schedule.min_size = parse_count(value, line, key, 2);
    } else if (key == "split_fraction") {
      const double v = parse_real(value, line, key);
      if (v <= 0.0 || v >= 1.0) {
        fail(path_, line, "'split_fraction' must lie strictly between 0 and 1");
      }
      sim.split_fraction = v;
    } else if (key == "resplit_per_rep") {
      sim.resplit_per_rep = parse_flag(value, line, key);
    } else if (key == "seed") {
      sim.seed = parse_u64(value, line, key);
    } else if (key == "threshold") {
      const double v = parse_real(value, line, key);
      if (v <= 0.0) fail(path_, line, "'threshold' must be > 0");
      sim.threshold.value = v;
    } else if (key == "trees") {
      sim.forest.num_trees = static_cast<int>(parse_count(value, line, key, 2));
    } else if (key == "max_depth") {
      sim.forest.max_depth = static_cast<int>(parse_count(value, line, key, 1));
    } else if (key == "min_leaf") {
      sim.forest.min_leaf = static_cast<int>(parse_count(value, line, key, 1));
    } else if (key == "min_train_size") {
      sim.forest.min_train_size =
          static_cast<int>(parse_count(value, line, key, 2));
    } else if (key == "logistic_l2") {
      const double v = parse_real(value, line, key);
      if (v < 0.0) fail(path_, line, "'logistic_l2' must be >= 0");
      sim.logistic.l2 = v;
    } else if (key == "logistic_step") {
      const double v = parse_real(value, line, key);
      if (v <= 0.0) fail(path_, line, "'logistic_step' must be > 0");
      sim.logistic.step = v;
    } else if (key == "logistic_max_iters") {
      sim.logistic.max_iters = parse_count(value, line, key, 1);
    } else if (key == "logistic_grad_tol") {
      const double v = parse_real(value, line, key);
      if (v <= 0.0) fail(path_, line, "'logistic_grad_tol' must be > 0");
      sim.logistic.grad_tol = v;
    } else if (key == "pca_k") {
      sim.pca_k = parse_count(value, line, key, 1);
    } else if (key == "cv_grid") {
      std::vector<int> grid;
      for (std::string_view cell : split_csv_line(value)) {
        const std::optional<std::int64_t> v = try_parse_int(trim(cell));
        if (!v || *v < 1) {
          fail(path_, line, "'cv_grid' needs comma-separated integers >= 1");
        }
        grid.push_back(static_cast<int>(*v));
      }
      if (grid.empty()) fail(path_, line, "'cv_grid' must not be empty");
      sim.cv_grid = std::move(grid);
    } else if (key == "cv_folds") {
      sim.cv_folds = parse_count(value, line, key, 2);
    } else if (key == "bootstrap_b") {
      cfg_.bootstrap_b = parse_count(value, line, key, 100);
    } else if (key == "out") {
      if (value.empty()) fail(path_, line, "'out' needs a directory path");
      cfg_.out_dir = value;
    } else {
      fail(path_, line, "unknown key '" + key + "'");
    }
  }

  void finish() {
    if (cfg_.strategies.empty()) {
      throw ConfigError(path_ +
                        ": no strategy sections; add at least one of "
                        "[uniform] [qbc] [margin] [accuracy] [mse] [disparity]");
    }
    if (!cfg_.dataset_path.empty()) {
      for (const char* key :
           {"synthetic_n", "synthetic_d", "synthetic_groups",
            "synthetic_noise_sd", "synthetic_seed"}) {
        const auto it = seen_.find(key);
        if (it != seen_.end()) {
          fail(path_, it->second,
               std::string("'") + key + "' conflicts with 'dataset'");
        }
      }
    }
  }

  const std::string& text_;
  std::string path_;
  ExperimentConfig cfg_;
  std::map<std::string, std::size_t> seen_;  // key -> defining line
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& path_for_messages) {
  return Parser(text, path_for_messages).run();
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

}  // namespace acquisim
