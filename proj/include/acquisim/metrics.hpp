#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acquisim/dataset.hpp"

namespace acquisim {

/// Binary confusion counts. The positive class is "poor" (consumption below
/// the poverty line).
struct ConfusionCounts {
  long tp = 0;
  long tn = 0;
  long fp = 0;
  long fn = 0;

  long total() const { return tp + tn + fp + fn; }

  bool operator==(const ConfusionCounts&) const = default;
};

/// Per-group evaluation entry. dp = (fp - fn) / n, the group's predicted-poor
/// share minus its truly-poor share.
struct GroupEntry {
  int group = 0;
  std::string label;
  long n = 0;
  ConfusionCounts counts;
  double accuracy = 0.0;
  double mse = 0.0;  // log-consumption space
  double dp = 0.0;

  bool operator==(const GroupEntry&) const = default;
};

/// Group panel over the holdout set. Declared groups with no holdout member
/// are omitted from `entries` and listed in `missing_groups`.
struct GroupMetrics {
  std::vector<GroupEntry> entries;
  std::vector<int> missing_groups;

  bool operator==(const GroupMetrics&) const = default;
};

/// Full metric panel for one evaluation. Metrics that are undefined on the
/// given data (single-class holdout, zero denominators, failed training) are
/// missing (nullopt), never coerced to zero.
struct MetricsRecord {
  std::optional<double> spearman;
  std::optional<double> mse;
  std::optional<double> auroc;
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> min_group_accuracy;
  std::optional<double> max_group_mse;
  std::optional<double> add;
  GroupMetrics groups;

  bool operator==(const MetricsRecord&) const = default;
};

/// Panel metric names in canonical column order. These exact strings name the
/// metric columns of every output file.
inline constexpr std::array<const char*, 9> kMetricNames = {
    "spearman", "mse",    "auroc",
    "accuracy", "precision", "recall",
    "min_group_accuracy", "max_group_mse", "add"};

std::optional<double> panel_metric(const MetricsRecord& record,
                                   std::size_t metric_index);
void set_panel_metric(MetricsRecord& record, std::size_t metric_index,
                      std::optional<double> value);

struct ClassificationMetrics {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
};

struct FairnessSummaries {
  std::optional<double> min_group_accuracy;
  std::optional<double> max_group_mse;
  std::optional<double> add;  // sum over groups of |dp|
};

/// Spearman rank correlation: Pearson correlation of average ranks, ties
/// receiving the mean of their rank span. Missing when either side is
/// constant or shorter than 2. Throws ShapeError on length mismatch.
std::optional<double> spearman_rho(const std::vector<double>& truth,
                                   const std::vector<double>& preds);

/// Mean squared residual. Missing on empty input.
std::optional<double> mse(const std::vector<double>& truth,
                          const std::vector<double>& preds);

/// Probability that a random positive outranks a random negative; ties count
/// one half (Mann-Whitney). Missing unless both classes are present.
std::optional<double> auroc(const std::vector<bool>& truth_labels,
                            const std::vector<double>& scores);

/// accuracy = (tp+tn)/total, precision = tp/(tp+fp), recall = tp/(tp+fn).
/// Ratios with zero denominator are missing.
ClassificationMetrics classification_metrics(const ConfusionCounts& counts);

/// Per-group confusion counts, accuracy, MSE (log space) and demographic
/// parity over binarized predictions. `preds_log` are log-consumption
/// predictions aligned with `holdout`; binarization happens at
/// log(threshold).
GroupMetrics group_metrics(const PointRefs& holdout,
                           const std::vector<double>& preds_log,
                           PovertyThreshold threshold,
                           const std::vector<GroupId>& declared_groups);

/// min over group accuracies, max over group MSEs, and the absolute
/// demographic deviance ADD = sum |dp_g|. Missing when no group is present.
FairnessSummaries fairness_summaries(const GroupMetrics& gm);

/// Runs the whole panel once: regression metrics on log-consumption,
/// classification metrics after thresholding, group panel and fairness
/// summaries. AUROC scores each point by -predicted log-consumption so that
/// lower predicted consumption means a higher poverty score.
MetricsRecord evaluate_panel(const PointRefs& holdout,
                             const std::vector<double>& preds_log,
                             PovertyThreshold threshold,
                             const std::vector<GroupId>& declared_groups);

}  // namespace acquisim
