#include "acquisim/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "acquisim/errors.hpp"

namespace acquisim {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow for large |t|.
double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double raw_score(const LogisticModel& model,
                 const std::vector<double>& features) {
  double z = model.bias;
  for (std::size_t j = 0; j < model.kept.size(); ++j) {
    const double standardized =
        (features[model.kept[j]] - model.means[j]) / model.scales[j];
    z += model.weights[j] * standardized;
  }
  return z;
}

}  // namespace

double LogisticModel::predict_proba(const std::vector<double>& features) const {
  if (features.size() != dimensionality) {
    throw ShapeError("feature width does not match classifier");
  }
  return sigmoid(raw_score(*this, features));
}

double logistic_loss(const std::vector<std::vector<double>>& x,
                     const std::vector<bool>& y,
                     const std::vector<double>& weights, double bias,
                     double l2) {
  if (x.size() != y.size()) throw ShapeError("logistic_loss inputs differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double z = bias;
    for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[i][j];
    // softplus(-z) = -log(sigmoid(z)), softplus(z) = -log(1 - sigmoid(z))
    sum += y[i] ? softplus(-z) : softplus(z);
  }
  double penalty = 0.0;
  for (double w : weights) penalty += w * w;
  return sum / static_cast<double>(x.size()) + 0.5 * l2 * penalty;
}

std::vector<double> logistic_gradient(const std::vector<std::vector<double>>& x,
                                      const std::vector<bool>& y,
                                      const std::vector<double>& weights,
                                      double bias, double l2) {
  if (x.size() != y.size()) throw ShapeError("logistic_gradient inputs differ");
  std::vector<double> grad(weights.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double z = bias;
    for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[i][j];
    const double residual = sigmoid(z) - (y[i] ? 1.0 : 0.0);
    for (std::size_t j = 0; j < weights.size(); ++j) {
      grad[j] += residual * x[i][j];
    }
    grad[weights.size()] += residual;
  }
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (double& g : grad) g *= inv_n;
  for (std::size_t j = 0; j < weights.size(); ++j) grad[j] += l2 * weights[j];
  return grad;
}

LogisticModel fit_logistic(const PointRefs& points, PovertyThreshold threshold,
                           const LogisticConfig& config) {
  if (points.size() < 2) {
    throw TrainingError("classifier needs at least 2 points");
  }

  PointRefs ordered = points;
  std::sort(ordered.begin(), ordered.end(),
            [](const Point* a, const Point* b) { return a->id < b->id; });

  const std::size_t n = ordered.size();
  const std::size_t d = ordered[0]->features.size();

  std::vector<bool> y(n);
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = is_poor(ordered[i]->consumption, threshold);
    n_pos += y[i] ? 1 : 0;
  }
  if (n_pos == 0 || n_pos == n) {
    throw DegenerateLabels("training labels contain a single class");
  }

  LogisticModel model;
  model.dimensionality = d;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += ordered[i]->features[j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dv = ordered[i]->features[j] - mean;
      var += dv * dv;
    }
    var /= static_cast<double>(n);
    if (var > 0.0) {
      model.kept.push_back(j);
      model.means.push_back(mean);
      model.scales.push_back(std::sqrt(var));
    }
  }

  const std::size_t k = model.kept.size();
  std::vector<std::vector<double>> x(n, std::vector<double>(k));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      x[i][j] = (ordered[i]->features[model.kept[j]] - model.means[j]) /
                model.scales[j];
    }
  }

  model.weights.assign(k, 0.0);
  model.bias = 0.0;
  double loss = logistic_loss(x, y, model.weights, model.bias, config.l2);

  for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
    const std::vector<double> grad =
        logistic_gradient(x, y, model.weights, model.bias, config.l2);
    double norm_sq = 0.0;
    for (double g : grad) norm_sq += g * g;
    if (std::sqrt(norm_sq) < config.grad_tol) break;

    for (std::size_t j = 0; j < k; ++j) {
      model.weights[j] -= config.step * grad[j];
    }
    model.bias -= config.step * grad[k];
    ++model.iterations;

    const double next = logistic_loss(x, y, model.weights, model.bias, config.l2);
    if (next > loss + 1e-12 * (1.0 + std::abs(loss))) {
      throw TrainingError("classifier loss increased between gradient steps");
    }
    loss = next;
  }
  model.final_loss = loss;
  return model;
}

std::vector<double> predict_proba(const LogisticModel& model,
                                  const PointRefs& points) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = model.predict_proba(points[i]->features);
  }
  return out;
}

}  // namespace acquisim
