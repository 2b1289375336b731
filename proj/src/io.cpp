#include "acquisim/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "acquisim/errors.hpp"
#include "acquisim/text.hpp"

namespace acquisim {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: one newline byte
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::string cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

std::string anchored(const std::string& path, std::size_t line,
                     const std::string& message) {
  return path + ":" + std::to_string(line) + ": " + message;
}

std::string runs_header() {
  std::string header = "strategy,rep,budget,digest";
  for (const char* name : kMetricNames) {
    header += ',';
    header += name;
  }
  return header;
}

// Reads non-empty lines, verifies the header, and hands each data line with
// its 1-based line number to `row`.
template <typename RowFn>
void read_table(const std::string& path, const std::string& expected_header,
                RowFn row) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  std::size_t line_number = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = strip_carriage_return(line);
    if (text.empty()) continue;
    if (!saw_header) {
      if (text != expected_header) {
        throw ParseError(anchored(path, line_number,
                                  "expected header '" + expected_header + "'"));
      }
      saw_header = true;
      continue;
    }
    row(text, line_number);
  }
  if (!saw_header) {
    throw ParseError(path + ": empty file (missing header)");
  }
}

double require_double(std::string_view text, const std::string& path,
                      std::size_t line, const char* what) {
  const std::optional<double> v = try_parse_double(text);
  if (!v) {
    throw ParseError(anchored(path, line,
                              std::string("cannot parse ") + what + " '" +
                                  std::string(text) + "'"));
  }
  return *v;
}

std::int64_t require_int(std::string_view text, const std::string& path,
                         std::size_t line, const char* what) {
  const std::optional<std::int64_t> v = try_parse_int(text);
  if (!v || *v < 0) {
    throw ParseError(anchored(path, line,
                              std::string("cannot parse ") + what + " '" +
                                  std::string(text) + "'"));
  }
  return *v;
}

std::optional<double> optional_double(std::string_view text,
                                      const std::string& path,
                                      std::size_t line, const char* what) {
  if (text.empty()) return std::nullopt;
  return require_double(text, path, line, what);
}

}  // namespace

std::string format_digest(std::uint64_t digest) {
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[digest & 0xF];
    digest >>= 4;
  }
  return out;
}

void write_runs_csv(const std::vector<RunRecord>& records,
                    const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << runs_header() << '\n';
  for (const RunRecord& r : records) {
    out << strategy_name(r.strategy) << ',' << r.repetition << ',' << r.budget
        << ',' << format_digest(r.digest);
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      out << ',' << cell(panel_metric(r.metrics, m));
    }
    out << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_groups_csv(const std::vector<RunRecord>& records,
                      const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "strategy,rep,budget,group_index,group,n,tp,tn,fp,fn,accuracy,mse,dp\n";
  for (const RunRecord& r : records) {
    const std::string prefix = strategy_name(r.strategy) + "," +
                               std::to_string(r.repetition) + "," +
                               std::to_string(r.budget) + ",";
    for (const GroupEntry& e : r.metrics.groups.entries) {
      out << prefix << e.group << ',' << e.label << ',' << e.n << ','
          << e.counts.tp << ',' << e.counts.tn << ',' << e.counts.fp << ','
          << e.counts.fn << ',' << format_double(e.accuracy) << ','
          << format_double(e.mse) << ',' << format_double(e.dp) << '\n';
    }
    for (int g : r.metrics.groups.missing_groups) {
      out << prefix << g << ",,0,,,,,,,\n";
    }
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_aggregates_csv(const std::vector<AggregateRecord>& aggregates,
                          const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << "strategy,budget,metric,mean,ci_low,ci_high,n_missing\n";
  for (const AggregateRecord& a : aggregates) {
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      const MetricCi& ci = a.metrics[m];
      out << strategy_name(a.strategy) << ',' << a.budget << ','
          << kMetricNames[m] << ',' << cell(ci.mean) << ',' << cell(ci.ci_low)
          << ',' << cell(ci.ci_high) << ',' << ci.n_missing << '\n';
    }
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<RunRecord> read_runs_csv(const std::string& path) {
  std::vector<RunRecord> records;
  read_table(path, runs_header(), [&](std::string_view text, std::size_t line) {
    const std::vector<std::string_view> cells = split_csv_line(text);
    if (cells.size() != 4 + kMetricNames.size()) {
      throw ParseError(anchored(path, line, "wrong column count"));
    }
    RunRecord r;
    try {
      r.strategy = strategy_from_string(std::string(cells[0]));
    } catch (const ConfigError& e) {
      throw ParseError(anchored(path, line, e.what()));
    }
    r.repetition =
        static_cast<std::size_t>(require_int(cells[1], path, line, "rep"));
    r.budget =
        static_cast<std::size_t>(require_int(cells[2], path, line, "budget"));
    std::uint64_t digest = 0;
    const auto [ptr, ec] = std::from_chars(
        cells[3].data(), cells[3].data() + cells[3].size(), digest, 16);
    if (ec != std::errc() || ptr != cells[3].data() + cells[3].size() ||
        cells[3].size() != 16) {
      throw ParseError(anchored(path, line, "bad digest cell"));
    }
    r.digest = digest;
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      set_panel_metric(r.metrics, m,
                       optional_double(cells[4 + m], path, line, kMetricNames[m]));
    }
    records.push_back(std::move(r));
  });
  return records;
}

void attach_groups_csv(std::vector<RunRecord>& records,
                       const std::string& path) {
  std::map<std::tuple<int, std::size_t, std::size_t>, RunRecord*> by_key;
  for (RunRecord& r : records) {
    by_key[{static_cast<int>(r.strategy), r.repetition, r.budget}] = &r;
  }
  read_table(
      path, "strategy,rep,budget,group_index,group,n,tp,tn,fp,fn,accuracy,mse,dp",
      [&](std::string_view text, std::size_t line) {
        const std::vector<std::string_view> cells = split_csv_line(text);
        if (cells.size() != 13) {
          throw ParseError(anchored(path, line, "wrong column count"));
        }
        StrategyKind kind;
        try {
          kind = strategy_from_string(std::string(cells[0]));
        } catch (const ConfigError& e) {
          throw ParseError(anchored(path, line, e.what()));
        }
        const auto rep =
            static_cast<std::size_t>(require_int(cells[1], path, line, "rep"));
        const auto budget = static_cast<std::size_t>(
            require_int(cells[2], path, line, "budget"));
        const auto it = by_key.find({static_cast<int>(kind), rep, budget});
        if (it == by_key.end()) {
          throw ParseError(anchored(path, line, "row matches no run record"));
        }
        const auto group_index = static_cast<int>(
            require_int(cells[3], path, line, "group index"));
        const auto n = require_int(cells[5], path, line, "group size");
        if (n == 0) {
          it->second->metrics.groups.missing_groups.push_back(group_index);
          return;
        }
        GroupEntry e;
        e.group = group_index;
        e.label = std::string(cells[4]);
        e.n = n;
        e.counts.tp = require_int(cells[6], path, line, "tp");
        e.counts.tn = require_int(cells[7], path, line, "tn");
        e.counts.fp = require_int(cells[8], path, line, "fp");
        e.counts.fn = require_int(cells[9], path, line, "fn");
        e.accuracy = require_double(cells[10], path, line, "accuracy");
        e.mse = require_double(cells[11], path, line, "mse");
        e.dp = require_double(cells[12], path, line, "dp");
        it->second->metrics.groups.entries.push_back(std::move(e));
      });
}

std::vector<AggregateRecord> read_aggregates_csv(const std::string& path) {
  // (strategy, budget) -> slot; metric rows can arrive in any order
  std::map<std::pair<int, std::size_t>, AggregateRecord> slots;
  read_table(
      path, "strategy,budget,metric,mean,ci_low,ci_high,n_missing",
      [&](std::string_view text, std::size_t line) {
        const std::vector<std::string_view> cells = split_csv_line(text);
        if (cells.size() != 7) {
          throw ParseError(anchored(path, line, "wrong column count"));
        }
        StrategyKind kind;
        try {
          kind = strategy_from_string(std::string(cells[0]));
        } catch (const ConfigError& e) {
          throw ParseError(anchored(path, line, e.what()));
        }
        const auto budget = static_cast<std::size_t>(
            require_int(cells[1], path, line, "budget"));
        std::size_t metric_index = kMetricNames.size();
        for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
          if (cells[2] == kMetricNames[m]) {
            metric_index = m;
            break;
          }
        }
        if (metric_index == kMetricNames.size()) {
          throw ParseError(anchored(path, line, "unknown metric name"));
        }
        AggregateRecord& slot = slots[{static_cast<int>(kind), budget}];
        slot.strategy = kind;
        slot.budget = budget;
        MetricCi& ci = slot.metrics[metric_index];
        ci.mean = optional_double(cells[3], path, line, "mean");
        ci.ci_low = optional_double(cells[4], path, line, "ci_low");
        ci.ci_high = optional_double(cells[5], path, line, "ci_high");
        ci.n_missing = static_cast<std::size_t>(
            require_int(cells[6], path, line, "n_missing"));
      });
  std::vector<AggregateRecord> out;
  out.reserve(slots.size());
  for (auto& [key, slot] : slots) out.push_back(std::move(slot));
  return out;
}

}  // namespace acquisim
