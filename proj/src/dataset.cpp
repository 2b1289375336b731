#include "acquisim/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "acquisim/errors.hpp"
#include "acquisim/rng.hpp"
#include "acquisim/text.hpp"

namespace acquisim {

void validate_dataset(const Dataset& dataset) {
  std::unordered_set<std::int64_t> seen;
  seen.reserve(dataset.points.size());
  for (const Point& p : dataset.points) {
    if (!seen.insert(p.id).second) {
      throw ValidationError("duplicate point id " + std::to_string(p.id));
    }
    if (!(p.consumption > 0.0)) {
      throw ValidationError("non-positive consumption for id " +
                            std::to_string(p.id));
    }
    if (p.features.size() != dataset.dimensionality) {
      throw ValidationError("feature width mismatch for id " +
                            std::to_string(p.id));
    }
    if (p.group < 0 || static_cast<std::size_t>(p.group) >= dataset.groups.size()) {
      throw ValidationError("unknown group index for id " + std::to_string(p.id));
    }
  }
  for (std::size_t i = 0; i < dataset.groups.size(); ++i) {
    if (dataset.groups[i].index != static_cast<int>(i)) {
      throw ValidationError("group list indices out of order");
    }
  }
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ":1: empty file");
  const auto header = split_csv_line(strip_carriage_return(line));
  if (header.size() < 4 || header[0] != "id" || header[1] != "group" ||
      header[2] != "consumption") {
    throw ParseError(path + ":1: header must be id,group,consumption,<features...>");
  }
  const std::size_t d = header.size() - 3;

  Dataset dataset;
  dataset.dimensionality = d;
  std::unordered_map<std::string, int> group_index;
  std::unordered_set<std::int64_t> seen_ids;
  std::size_t line_no = 1;

  while (std::getline(in, line)) {
    ++line_no;
    const auto stripped = strip_carriage_return(line);
    if (stripped.empty()) continue;
    const auto cells = split_csv_line(stripped);
    const std::string where = path + ":" + std::to_string(line_no) + ": ";
    if (cells.size() != d + 3) {
      throw ParseError(where + "expected " + std::to_string(d + 3) +
                       " cells, found " + std::to_string(cells.size()));
    }

    Point p;
    const auto id = try_parse_int(cells[0]);
    if (!id) throw ParseError(where + "missing or malformed id");
    p.id = *id;
    if (!seen_ids.insert(p.id).second) {
      throw ParseError(where + "duplicate id " + std::to_string(p.id));
    }

    const std::string label(cells[1]);
    if (label.empty()) throw ParseError(where + "empty group label");
    auto [it, inserted] =
        group_index.try_emplace(label, static_cast<int>(dataset.groups.size()));
    if (inserted) {
      dataset.groups.push_back(GroupId{label, it->second});
    }
    p.group = it->second;

    const auto consumption = try_parse_double(cells[2]);
    if (!consumption) throw ParseError(where + "malformed consumption");
    if (!(*consumption > 0.0)) {
      throw ValidationError(where + "consumption must be positive, got " +
                            std::string(cells[2]));
    }
    p.consumption = *consumption;

    p.features.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
      const auto f = try_parse_double(cells[3 + j]);
      if (!f) {
        throw ParseError(where + "malformed feature in column " +
                         std::string(header[3 + j]));
      }
      p.features.push_back(*f);
    }
    dataset.points.push_back(std::move(p));
  }
  return dataset;
}

void write_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);

  out << "id,group,consumption";
  for (std::size_t j = 0; j < dataset.dimensionality; ++j) out << ",f" << j;
  out << "\n";

  for (const Point& p : dataset.points) {
    out << p.id << ',' << dataset.groups[p.group].label << ','
        << format_double(p.consumption);
    for (double f : p.features) out << ',' << format_double(f);
    out << "\n";
  }
  if (!out) throw IoError("write failed for " + path);
}

Dataset generate_synthetic(std::size_t n, std::size_t d, std::size_t n_groups,
                           double noise_sd, std::uint64_t seed) {
  if (n_groups < 1 || n < n_groups) {
    throw ConfigError("generate_synthetic requires n >= n_groups >= 1");
  }
  if (d < 1) throw ConfigError("generate_synthetic requires d >= 1");
  if (noise_sd < 0.0) throw ConfigError("noise_sd must be nonnegative");

  // Generator shape: per-feature group mean shifts of sd 0.5, unit-variance
  // feature noise, log-linear consumption with coefficients scaled by
  // 1/sqrt(d) so the signal variance stays O(1) in any dimension.
  constexpr double kShiftSd = 0.5;
  constexpr double kOffsetSd = 0.3;
  const double base_log = std::log(2.0);
  const double coef_scale = 1.0 / std::sqrt(static_cast<double>(d));

  Rng rng(derive_seed(seed, {0x5D47u}));
  std::vector<std::vector<double>> group_means(n_groups, std::vector<double>(d));
  for (auto& row : group_means) {
    for (double& m : row) m = kShiftSd * rng.normal();
  }
  std::vector<double> coefs(d);
  for (double& c : coefs) c = coef_scale * rng.normal();
  std::vector<double> offsets(n_groups);
  for (double& o : offsets) o = kOffsetSd * rng.normal();

  std::vector<Point> raw;
  raw.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point p;
    p.id = static_cast<std::int64_t>(i);
    p.group = static_cast<int>(rng.uniform_index(n_groups));
    p.features.resize(d);
    double linear = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      p.features[j] = group_means[p.group][j] + rng.normal();
      linear += coefs[j] * p.features[j];
    }
    const double log_c =
        base_log + linear + offsets[p.group] + noise_sd * rng.normal();
    p.consumption = std::exp(log_c);
    raw.push_back(std::move(p));
  }

  // Re-index groups by first appearance so the dataset matches what a CSV
  // round-trip reconstructs. Labels keep the generator's group identity.
  Dataset dataset;
  dataset.dimensionality = d;
  std::vector<int> remap(n_groups, -1);
  for (Point& p : raw) {
    if (remap[p.group] < 0) {
      remap[p.group] = static_cast<int>(dataset.groups.size());
      dataset.groups.push_back(
          GroupId{"region_" + std::to_string(p.group), remap[p.group]});
    }
    p.group = remap[p.group];
  }
  dataset.points = std::move(raw);
  return dataset;
}

SplitSpec split(const Dataset& dataset, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("split fraction must be in (0, 1)");
  }
  std::vector<std::int64_t> ids;
  ids.reserve(dataset.size());
  for (const Point& p : dataset.points) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end());

  Rng rng(derive_seed(seed, {0x59177u}));
  rng.shuffle(ids);

  const auto pool_size = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(ids.size())));

  SplitSpec spec;
  spec.seed = seed;
  spec.pool_ids.assign(ids.begin(), ids.begin() + pool_size);
  spec.holdout_ids.assign(ids.begin() + pool_size, ids.end());
  std::sort(spec.pool_ids.begin(), spec.pool_ids.end());
  std::sort(spec.holdout_ids.begin(), spec.holdout_ids.end());
  return spec;
}

PointRefs select_points(const Dataset& dataset,
                        const std::vector<std::int64_t>& ids) {
  std::unordered_map<std::int64_t, const Point*> by_id;
  by_id.reserve(dataset.points.size());
  for (const Point& p : dataset.points) by_id.emplace(p.id, &p);

  std::vector<std::int64_t> sorted = ids;
  std::sort(sorted.begin(), sorted.end());

  PointRefs refs;
  refs.reserve(sorted.size());
  for (std::int64_t id : sorted) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw ValidationError("id " + std::to_string(id) + " not in dataset");
    }
    refs.push_back(it->second);
  }
  return refs;
}

}  // namespace acquisim
