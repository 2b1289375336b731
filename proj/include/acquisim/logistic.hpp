#pragma once

#include <cstddef>
#include <vector>

#include "acquisim/dataset.hpp"

namespace acquisim {

struct LogisticConfig {
  double l2 = 1e-4;
  double step = 0.1;
  std::size_t max_iters = 500;
  double grad_tol = 1e-6;
};

// Binary classifier over standardized features. Zero-variance features are
// dropped before fitting; `kept` maps model coordinates back to raw ones.
struct LogisticModel {
  std::vector<std::size_t> kept;
  std::vector<double> means;   // per kept feature
  std::vector<double> scales;  // per kept feature, > 0
  std::vector<double> weights; // per kept feature
  double bias = 0.0;
  std::size_t dimensionality = 0;  // raw feature count
  std::size_t iterations = 0;
  double final_loss = 0.0;

  double predict_proba(const std::vector<double>& features) const;
};

// Mean cross-entropy plus (l2/2)*||w||^2; `x` rows are already standardized.
double logistic_loss(const std::vector<std::vector<double>>& x,
                     const std::vector<bool>& y,
                     const std::vector<double>& weights, double bias,
                     double l2);

// Gradient of logistic_loss; last entry is the bias derivative.
std::vector<double> logistic_gradient(const std::vector<std::vector<double>>& x,
                                      const std::vector<bool>& y,
                                      const std::vector<double>& weights,
                                      double bias, double l2);

// Fits on points in ascending-id order; labels are poverty indicators at
// `threshold`. Throws DegenerateLabels when only one class is present and
// TrainingError when the loss ever increases between iterations.
LogisticModel fit_logistic(const PointRefs& points, PovertyThreshold threshold,
                           const LogisticConfig& config = {});

std::vector<double> predict_proba(const LogisticModel& model,
                                  const PointRefs& points);

}  // namespace acquisim
