#include "skewboost/metrics.hpp"

#include <cmath>

#include "skewboost/errors.hpp"

namespace skewboost {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
  tp += other.tp;
  fp += other.fp;
  tn += other.tn;
  fn += other.fn;
  return *this;
}

MetricMode metric_mode_from_string(const std::string& name) {
  if (name == "accuracy") return MetricMode::Accuracy;
  if (name == "precision") return MetricMode::Precision;
  if (name == "recall") return MetricMode::Recall;
  if (name == "f1") return MetricMode::F1;
  if (name == "mcc") return MetricMode::Mcc;
  throw InvalidInputError("unknown metric '" + name + "'");
}

std::string to_string(MetricMode mode) {
  switch (mode) {
    case MetricMode::Accuracy:
      return "accuracy";
    case MetricMode::Precision:
      return "precision";
    case MetricMode::Recall:
      return "recall";
    case MetricMode::F1:
      return "f1";
    case MetricMode::Mcc:
      return "mcc";
  }
  throw InvalidInputError("unknown metric mode");
}

ConfusionCounts confusion_from_predictions(
    std::span<const int> true_labels, std::span<const double> raw_scores) {
  if (true_labels.size() != raw_scores.size()) {
    throw DimensionError("labels and raw scores differ in length");
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    int truth = true_labels[i];
    if (truth != 0 && truth != 1) {
      throw InvalidInputError("label at index " + std::to_string(i) +
                              " must be 0 or 1");
    }
    int predicted = raw_scores[i] > 0.0 ? 1 : 0;
    if (truth == 1) {
      (predicted == 1 ? counts.tp : counts.fn) += 1;
    } else {
      (predicted == 1 ? counts.fp : counts.tn) += 1;
    }
  }
  return counts;
}

std::int64_t correct_eval(ConfusionField field,
                          std::span<const int> true_labels,
                          std::span<const double> raw_scores) {
  ConfusionCounts counts = confusion_from_predictions(true_labels, raw_scores);
  switch (field) {
    case ConfusionField::TP:
      return counts.tp;
    case ConfusionField::FP:
      return counts.fp;
    case ConfusionField::TN:
      return counts.tn;
    case ConfusionField::FN:
      return counts.fn;
  }
  throw InvalidInputError("unknown confusion field");
}

double score(MetricMode mode, const ConfusionCounts& counts) {
  if (counts.tp < 0 || counts.fp < 0 || counts.tn < 0 || counts.fn < 0) {
    throw InvalidInputError("confusion counts must be nonnegative");
  }
  if (counts.total() == 0) {
    throw UndefinedMetricError("metric undefined on zero evaluated instances");
  }
  double tp = static_cast<double>(counts.tp);
  double fp = static_cast<double>(counts.fp);
  double tn = static_cast<double>(counts.tn);
  double fn = static_cast<double>(counts.fn);
  switch (mode) {
    case MetricMode::Accuracy:
      return (tp + tn) / static_cast<double>(counts.total());
    case MetricMode::Precision:
      return tp + fp == 0.0 ? 0.0 : tp / (tp + fp);
    case MetricMode::Recall:
      return tp + fn == 0.0 ? 0.0 : tp / (tp + fn);
    case MetricMode::F1: {
      double precision = score(MetricMode::Precision, counts);
      double recall = score(MetricMode::Recall, counts);
      double denom = precision + recall;
      return denom == 0.0 ? 0.0 : 2.0 * precision * recall / denom;
    }
    case MetricMode::Mcc: {
      double product = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
      if (product == 0.0) {
        return 0.0;
      }
      return (tp * tn - fp * fn) / std::sqrt(product);
    }
  }
  throw InvalidInputError("unknown metric mode");
}

MetricScores all_scores(const ConfusionCounts& counts) {
  return {score(MetricMode::Accuracy, counts),
          score(MetricMode::Precision, counts),
          score(MetricMode::Recall, counts),
          score(MetricMode::F1, counts),
          score(MetricMode::Mcc, counts)};
}

}  // namespace skewboost
