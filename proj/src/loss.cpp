#include "skewboost/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skewboost/errors.hpp"

namespace skewboost {

namespace {

void require_label(int label) {
  if (label != 0 && label != 1) {
    throw InvalidInputError("label must be 0 or 1, got " +
                            std::to_string(label));
  }
}

void require_probability(double y_hat) {
  // NaN fails both comparisons, so it is rejected here too.
  if (!(y_hat > 0.0 && y_hat < 1.0)) {
    throw InvalidInputError("probability must lie strictly inside (0, 1)");
  }
}

}  // namespace

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::Plain:
      return "plain";
    case LossKind::Weighted:
      return "weighted";
    case LossKind::Focal:
      return "focal";
  }
  throw InvalidInputError("unknown loss kind");
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "plain") return LossKind::Plain;
  if (name == "weighted") return LossKind::Weighted;
  if (name == "focal") return LossKind::Focal;
  throw InvalidInputError("unknown loss '" + name + "'");
}

LossParams LossParams::plain() { return {LossKind::Plain, 1.0, 0.0}; }

LossParams LossParams::weighted(double alpha) {
  return {LossKind::Weighted, alpha, 0.0};
}

LossParams LossParams::focal(double gamma) {
  return {LossKind::Focal, 1.0, gamma};
}

void LossParams::validate() const {
  if (kind == LossKind::Weighted && !(std::isfinite(alpha) && alpha > 0.0)) {
    throw InvalidInputError("weighted loss needs a finite alpha > 0");
  }
  if (kind == LossKind::Focal && !(std::isfinite(gamma) && gamma >= 0.0)) {
    throw InvalidInputError("focal loss needs a finite gamma >= 0");
  }
}

double sigmoid(double z) {
  if (!std::isfinite(z)) {
    throw InvalidInputError("raw score must be finite");
  }
  double p = 1.0 / (1.0 + std::exp(-z));
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

EtaTerms eta_terms(int label, double y_hat) {
  require_label(label);
  require_probability(y_hat);
  EtaTerms t;
  t.eta1 = y_hat * (1.0 - y_hat);
  // Each remaining term reduces to a single subtraction (or a copy) once the
  // label is fixed; evaluating the branch keeps full precision near the
  // clamp boundaries where the literal sums would cancel.
  if (label == 1) {
    t.eta2 = 1.0 - y_hat;
    t.eta3 = y_hat;
    t.eta4 = y_hat;
  } else {
    t.eta2 = y_hat;
    t.eta3 = y_hat - 1.0;
    t.eta4 = 1.0 - y_hat;
  }
  t.eta5 = t.eta2;
  return t;
}

double plain_loss_value(int label, double y_hat) {
  require_label(label);
  require_probability(y_hat);
  return label == 1 ? -std::log(y_hat) : -std::log(1.0 - y_hat);
}

GradHess plain_grad_hess(int label, double y_hat) {
  require_label(label);
  require_probability(y_hat);
  return {y_hat - static_cast<double>(label), y_hat * (1.0 - y_hat)};
}

double weighted_loss_value(int label, double y_hat, double alpha) {
  require_label(label);
  require_probability(y_hat);
  double nll = label == 1 ? -std::log(y_hat) : -std::log(1.0 - y_hat);
  double weight = label == 1 ? alpha : 1.0;  // alpha^y
  return weight * nll;
}

GradHess weighted_grad_hess(int label, double y_hat, double alpha) {
  require_label(label);
  require_probability(y_hat);
  double weight = label == 1 ? alpha : 1.0;  // alpha^y
  return {weight * (y_hat - static_cast<double>(label)),
          weight * (y_hat * (1.0 - y_hat))};
}

double focal_loss_value(int label, double y_hat, double gamma) {
  EtaTerms t = eta_terms(label, y_hat);
  return -std::pow(t.eta2, gamma) * std::log(t.eta4);
}

GradHess focal_grad_hess(int label, double y_hat, double gamma) {
  EtaTerms t = eta_terms(label, y_hat);
  double sign = label == 1 ? -1.0 : 1.0;  // (-1)^y
  double pow_e2_g = std::pow(t.eta2, gamma);
  double log_e4 = std::log(t.eta4);

  double grad = gamma * t.eta3 * pow_e2_g * log_e4 +
                sign * std::pow(t.eta5, gamma + 1.0);

  double pow_e2_gm1 = std::pow(t.eta2, gamma - 1.0);
  double bracket = (pow_e2_g + gamma * sign * t.eta3 * pow_e2_gm1) * log_e4 -
                   sign * t.eta3 * pow_e2_g / t.eta4;
  double hess =
      t.eta1 * (gamma * bracket + (gamma + 1.0) * std::pow(t.eta5, gamma));
  return {grad, hess};
}

double loss_value(int label, double y_hat, const LossParams& params) {
  switch (params.kind) {
    case LossKind::Plain:
      return plain_loss_value(label, y_hat);
    case LossKind::Weighted:
      return weighted_loss_value(label, y_hat, params.alpha);
    case LossKind::Focal:
      return focal_loss_value(label, y_hat, params.gamma);
  }
  throw InvalidInputError("unknown loss kind");
}

GradHess grad_hess(int label, double y_hat, const LossParams& params) {
  switch (params.kind) {
    case LossKind::Plain:
      return plain_grad_hess(label, y_hat);
    case LossKind::Weighted:
      return weighted_grad_hess(label, y_hat, params.alpha);
    case LossKind::Focal:
      return focal_grad_hess(label, y_hat, params.gamma);
  }
  throw InvalidInputError("unknown loss kind");
}

std::vector<GradHess> batch_grad_hess(std::span<const int> labels,
                                      std::span<const double> raw_scores,
                                      const LossParams& params) {
  if (labels.size() != raw_scores.size()) {
    throw DimensionError("labels and raw scores differ in length");
  }
  params.validate();
  std::vector<GradHess> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = grad_hess(labels[i], sigmoid(raw_scores[i]), params);
  }
  return out;
}

double mean_loss(std::span<const int> labels,
                 std::span<const double> raw_scores,
                 const LossParams& params) {
  if (labels.size() != raw_scores.size()) {
    throw DimensionError("labels and raw scores differ in length");
  }
  if (labels.empty()) {
    throw InvalidInputError("mean loss of an empty batch is undefined");
  }
  params.validate();
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sum += loss_value(labels[i], sigmoid(raw_scores[i]), params);
  }
  return sum / static_cast<double>(labels.size());
}

}  // namespace skewboost
