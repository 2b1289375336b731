#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace acquisim {

/// One demographic group (e.g. an administrative region). `index` is the
/// group's position in Dataset::groups.
struct GroupId {
  std::string label;
  int index = 0;

  bool operator==(const GroupId&) const = default;
};

/// One household record. `group` indexes into Dataset::groups.
struct Point {
  std::int64_t id = 0;
  int group = 0;
  std::vector<double> features;
  double consumption = 0.0;  // daily per-capita consumption, USD/day, > 0

  bool operator==(const Point&) const = default;
};

/// Immutable collection of points sharing one feature dimensionality.
/// Groups are listed in order of first appearance in `points`, which makes
/// CSV round-trips exact.
struct Dataset {
  std::vector<Point> points;
  std::size_t dimensionality = 0;
  std::vector<GroupId> groups;

  std::size_t size() const { return points.size(); }

  bool operator==(const Dataset&) const = default;
};

/// Disjoint, jointly exhaustive partition into a label pool and a holdout
/// validation set. Both id lists are sorted ascending.
struct SplitSpec {
  std::vector<std::int64_t> pool_ids;
  std::vector<std::int64_t> holdout_ids;
  std::uint64_t seed = 0;
};

/// Consumption line used to binarize the regression target. "Poor" means
/// consumption strictly below the line.
struct PovertyThreshold {
  double value = 1.90;
};

/// Borrowed, non-owning view of dataset points.
using PointRefs = std::vector<const Point*>;

inline bool is_poor(double consumption, PovertyThreshold threshold) {
  return consumption < threshold.value;
}

/// Throws ValidationError if any dataset invariant is broken (duplicate ids,
/// non-positive consumption, ragged features, group index out of range).
void validate_dataset(const Dataset& dataset);

/// Reads a dataset from a CSV file with header `id,group,consumption,f0,...`.
/// Groups are indexed by first appearance. Throws ParseError on malformed
/// input and ValidationError on invariant violations; messages carry the
/// offending line number.
Dataset load_csv(const std::string& path);

/// Writes the dataset in the schema load_csv reads. load_csv(write_csv(d))
/// reproduces d exactly.
void write_csv(const Dataset& dataset, const std::string& path);

/// Deterministic synthetic dataset: features are group-shifted Gaussians and
/// consumption is exp(linear term + group offset + Gaussian noise), so the
/// target is positive and log-consumption is linear in the features.
Dataset generate_synthetic(std::size_t n, std::size_t d, std::size_t n_groups,
                           double noise_sd, std::uint64_t seed);

/// Uniform-at-random pool/holdout partition with |pool| = round(fraction * N).
SplitSpec split(const Dataset& dataset, double fraction, std::uint64_t seed);

/// Resolves ids to points in canonical (ascending id) order. Unknown ids
/// throw ValidationError.
PointRefs select_points(const Dataset& dataset,
                        const std::vector<std::int64_t>& ids);

}  // namespace acquisim
