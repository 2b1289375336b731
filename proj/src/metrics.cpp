#include "acquisim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acquisim/errors.hpp"

namespace acquisim {

std::optional<double> panel_metric(const MetricsRecord& record,
                                   std::size_t metric_index) {
  switch (metric_index) {
    case 0: return record.spearman;
    case 1: return record.mse;
    case 2: return record.auroc;
    case 3: return record.accuracy;
    case 4: return record.precision;
    case 5: return record.recall;
    case 6: return record.min_group_accuracy;
    case 7: return record.max_group_mse;
    case 8: return record.add;
    default: throw ConfigError("metric index out of range");
  }
}

void set_panel_metric(MetricsRecord& record, std::size_t metric_index,
                      std::optional<double> value) {
  switch (metric_index) {
    case 0: record.spearman = value; break;
    case 1: record.mse = value; break;
    case 2: record.auroc = value; break;
    case 3: record.accuracy = value; break;
    case 4: record.precision = value; break;
    case 5: record.recall = value; break;
    case 6: record.min_group_accuracy = value; break;
    case 7: record.max_group_mse = value; break;
    case 8: record.add = value; break;
    default: throw ConfigError("metric index out of range");
  }
}

namespace {

// Average ranks (1-based); ties receive the mean of their rank span.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> pearson(const std::vector<double>& x,
                              const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::optional<double> spearman_rho(const std::vector<double>& truth,
                                   const std::vector<double>& preds) {
  if (truth.size() != preds.size()) {
    throw ShapeError("spearman_rho inputs differ in length");
  }
  if (truth.size() < 2) return std::nullopt;
  return pearson(average_ranks(truth), average_ranks(preds));
}

std::optional<double> mse(const std::vector<double>& truth,
                          const std::vector<double>& preds) {
  if (truth.size() != preds.size()) {
    throw ShapeError("mse inputs differ in length");
  }
  if (truth.empty()) return std::nullopt;
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double r = truth[i] - preds[i];
    sum += r * r;
  }
  return sum / static_cast<double>(truth.size());
}

std::optional<double> auroc(const std::vector<bool>& truth_labels,
                            const std::vector<double>& scores) {
  if (truth_labels.size() != scores.size()) {
    throw ShapeError("auroc inputs differ in length");
  }
  std::size_t n_pos = 0;
  for (bool label : truth_labels) n_pos += label ? 1 : 0;
  const std::size_t n_neg = truth_labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;

  // Mann-Whitney via the positive-class rank sum; average ranks give ties
  // the one-half convention.
  const std::vector<double> ranks = average_ranks(scores);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (truth_labels[i]) rank_sum += ranks[i];
  }
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum - np * (np + 1.0) * 0.5;
  return u / (np * static_cast<double>(n_neg));
}

ClassificationMetrics classification_metrics(const ConfusionCounts& counts) {
  ClassificationMetrics out;
  const long total = counts.total();
  if (total > 0) {
    out.accuracy =
        static_cast<double>(counts.tp + counts.tn) / static_cast<double>(total);
  }
  if (counts.tp + counts.fp > 0) {
    out.precision = static_cast<double>(counts.tp) /
                    static_cast<double>(counts.tp + counts.fp);
  }
  if (counts.tp + counts.fn > 0) {
    out.recall = static_cast<double>(counts.tp) /
                 static_cast<double>(counts.tp + counts.fn);
  }
  return out;
}

GroupMetrics group_metrics(const PointRefs& holdout,
                           const std::vector<double>& preds_log,
                           PovertyThreshold threshold,
                           const std::vector<GroupId>& declared_groups) {
  if (holdout.size() != preds_log.size()) {
    throw ShapeError("group_metrics inputs differ in length");
  }
  const double log_threshold = std::log(threshold.value);

  std::vector<ConfusionCounts> counts(declared_groups.size());
  std::vector<double> sq_err(declared_groups.size(), 0.0);
  std::vector<long> sizes(declared_groups.size(), 0);

  for (std::size_t i = 0; i < holdout.size(); ++i) {
    const Point& p = *holdout[i];
    const auto g = static_cast<std::size_t>(p.group);
    if (g >= declared_groups.size()) {
      throw ValidationError("point group not among declared groups");
    }
    const bool truly_poor = is_poor(p.consumption, threshold);
    const bool predicted_poor = preds_log[i] < log_threshold;
    if (truly_poor && predicted_poor) ++counts[g].tp;
    if (!truly_poor && !predicted_poor) ++counts[g].tn;
    if (!truly_poor && predicted_poor) ++counts[g].fp;
    if (truly_poor && !predicted_poor) ++counts[g].fn;
    const double r = std::log(p.consumption) - preds_log[i];
    sq_err[g] += r * r;
    ++sizes[g];
  }

  GroupMetrics gm;
  for (std::size_t g = 0; g < declared_groups.size(); ++g) {
    if (sizes[g] == 0) {
      gm.missing_groups.push_back(static_cast<int>(g));
      continue;
    }
    GroupEntry entry;
    entry.group = static_cast<int>(g);
    entry.label = declared_groups[g].label;
    entry.n = sizes[g];
    entry.counts = counts[g];
    const double n = static_cast<double>(sizes[g]);
    entry.accuracy = static_cast<double>(counts[g].tp + counts[g].tn) / n;
    entry.mse = sq_err[g] / n;
    entry.dp = static_cast<double>(counts[g].fp - counts[g].fn) / n;
    gm.entries.push_back(std::move(entry));
  }
  return gm;
}

FairnessSummaries fairness_summaries(const GroupMetrics& gm) {
  FairnessSummaries out;
  if (gm.entries.empty()) return out;
  double min_acc = gm.entries[0].accuracy;
  double max_mse = gm.entries[0].mse;
  double add = 0.0;
  for (const GroupEntry& e : gm.entries) {
    min_acc = std::min(min_acc, e.accuracy);
    max_mse = std::max(max_mse, e.mse);
    add += std::abs(e.dp);
  }
  out.min_group_accuracy = min_acc;
  out.max_group_mse = max_mse;
  out.add = add;
  return out;
}

MetricsRecord evaluate_panel(const PointRefs& holdout,
                             const std::vector<double>& preds_log,
                             PovertyThreshold threshold,
                             const std::vector<GroupId>& declared_groups) {
  if (holdout.size() != preds_log.size()) {
    throw ShapeError("evaluate_panel inputs differ in length");
  }
  MetricsRecord record;
  if (holdout.empty()) return record;

  std::vector<double> truth_log(holdout.size());
  std::vector<bool> truly_poor(holdout.size());
  std::vector<double> poverty_scores(holdout.size());
  for (std::size_t i = 0; i < holdout.size(); ++i) {
    truth_log[i] = std::log(holdout[i]->consumption);
    truly_poor[i] = is_poor(holdout[i]->consumption, threshold);
    poverty_scores[i] = -preds_log[i];
  }

  record.spearman = spearman_rho(truth_log, preds_log);
  record.mse = mse(truth_log, preds_log);
  record.auroc = auroc(truly_poor, poverty_scores);

  record.groups = group_metrics(holdout, preds_log, threshold, declared_groups);
  ConfusionCounts global;
  for (const GroupEntry& e : record.groups.entries) {
    global.tp += e.counts.tp;
    global.tn += e.counts.tn;
    global.fp += e.counts.fp;
    global.fn += e.counts.fn;
  }
  const ClassificationMetrics cls = classification_metrics(global);
  record.accuracy = cls.accuracy;
  record.precision = cls.precision;
  record.recall = cls.recall;

  const FairnessSummaries fair = fairness_summaries(record.groups);
  record.min_group_accuracy = fair.min_group_accuracy;
  record.max_group_mse = fair.max_group_mse;
  record.add = fair.add;
  return record;
}

}  // namespace acquisim
