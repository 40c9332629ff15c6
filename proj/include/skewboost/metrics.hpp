#ifndef SKEWBOOST_METRICS_HPP
#define SKEWBOOST_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>

namespace skewboost {

// Counts from disjoint instance sets add componentwise.
struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }

  ConfusionCounts& operator+=(const ConfusionCounts& other);
  friend ConfusionCounts operator+(ConfusionCounts lhs, const ConfusionCounts& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

enum class MetricMode { Accuracy, Precision, Recall, F1, Mcc };
enum class ConfusionField { TP, FP, TN, FN };

MetricMode metric_mode_from_string(const std::string& name);
std::string to_string(MetricMode mode);

// Classifies each instance as positive iff raw score > 0 (label 1 is the
// positive class) and tallies the four confusion components.
ConfusionCounts confusion_from_predictions(std::span<const int> true_labels,
                                           std::span<const double> raw_scores);

// Single component of confusion_from_predictions; the four calls together
// reconstruct the full counts.
std::int64_t correct_eval(ConfusionField field, std::span<const int> true_labels,
                          std::span<const double> raw_scores);

// Precision/recall/F1 with a zero denominator score 0; MCC with a zero
// factor under the root scores 0. Throws UndefinedMetricError when the
// counts cover no instances.
double score(MetricMode mode, const ConfusionCounts& counts);

struct MetricScores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
};

MetricScores all_scores(const ConfusionCounts& counts);

}  // namespace skewboost

#endif  // SKEWBOOST_METRICS_HPP
