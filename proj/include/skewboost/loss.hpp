#ifndef SKEWBOOST_LOSS_HPP
#define SKEWBOOST_LOSS_HPP

#include <span>
#include <string>
#include <vector>

namespace skewboost {

// Probabilities are clamped to [kProbabilityClamp, 1 - kProbabilityClamp]
// so every log and division below stays finite.
inline constexpr double kProbabilityClamp = 1e-15;

enum class LossKind { Plain, Weighted, Focal };

std::string to_string(LossKind kind);
// Accepts "plain", "weighted", "focal"; throws InvalidInputError otherwise.
LossKind loss_kind_from_string(const std::string& name);

// Per-instance loss selection. alpha scales the positive-label term of the
// weighted cross-entropy; gamma is the focusing exponent of the focal loss.
struct LossParams {
  LossKind kind = LossKind::Plain;
  double alpha = 1.0;
  double gamma = 0.0;

  static LossParams plain();
  static LossParams weighted(double alpha);
  static LossParams focal(double gamma);

  void validate() const;
};

// First and second derivative of the per-instance loss with respect to the
// raw score z.
struct GradHess {
  double grad = 0.0;
  double hess = 0.0;
};

// Short-hand terms of the focal derivatives. eta2 and eta5 always hold the
// same value.
struct EtaTerms {
  double eta1;  // y_hat * (1 - y_hat)
  double eta2;  // y + (-1)^y * y_hat
  double eta3;  // y_hat + y - 1
  double eta4;  // 1 - y - (-1)^y * y_hat
  double eta5;  // == eta2
};

// 1 / (1 + exp(-z)), clamped. Throws InvalidInputError on non-finite z.
double sigmoid(double z);

EtaTerms eta_terms(int label, double y_hat);

double plain_loss_value(int label, double y_hat);
GradHess plain_grad_hess(int label, double y_hat);

double weighted_loss_value(int label, double y_hat, double alpha);
GradHess weighted_grad_hess(int label, double y_hat, double alpha);

double focal_loss_value(int label, double y_hat, double gamma);
GradHess focal_grad_hess(int label, double y_hat, double gamma);

// Dispatch on params.kind.
double loss_value(int label, double y_hat, const LossParams& params);
GradHess grad_hess(int label, double y_hat, const LossParams& params);

// Element i equals grad_hess(labels[i], sigmoid(raw_scores[i]), params).
std::vector<GradHess> batch_grad_hess(std::span<const int> labels,
                                      std::span<const double> raw_scores,
                                      const LossParams& params);

// Mean of loss_value over all instances at the given raw scores.
double mean_loss(std::span<const int> labels,
                 std::span<const double> raw_scores,
                 const LossParams& params);

}  // namespace skewboost

#endif  // SKEWBOOST_LOSS_HPP
