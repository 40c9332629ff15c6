#ifndef SKEWBOOST_MODEL_SELECTION_HPP
#define SKEWBOOST_MODEL_SELECTION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "skewboost/booster.hpp"
#include "skewboost/dataset.hpp"
#include "skewboost/metrics.hpp"

namespace skewboost {

struct SplitPlan {
  enum class Kind { KFold, LeaveOneOut, LeaveOneGroupOut };

  Kind kind = Kind::KFold;
  int k = 5;
  std::uint64_t shuffle_seed = 0;

  static SplitPlan kfold(int k, std::uint64_t shuffle_seed = 0);
  static SplitPlan leave_one_out();
  static SplitPlan leave_one_group_out();
};

struct IndexSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Test sets are disjoint and cover all instances exactly once. KFold
// shuffles deterministically by the plan's seed and gives the first
// (m mod k) folds one extra instance; leave-one-group-out emits one fold
// per distinct group id in order of first appearance.
std::vector<IndexSplit> make_splits(const Dataset& data, const SplitPlan& plan);

struct CvReport {
  std::vector<ConfusionCounts> fold_counts;
  ConfusionCounts pooled;                 // componentwise sum of fold counts
  MetricScores scores;                    // computed from pooled counts
  std::optional<double> candidate_value;  // alpha or gamma under grid search
};

// Trains one model per fold (fold seed = config.seed + fold index),
// evaluates each test side per record, and pools the confusion counts.
CvReport cross_validate(const Dataset& data, const TrainConfig& config,
                        const SplitPlan& plan);

struct SearchGrid {
  std::vector<double> alpha_candidates;
  std::vector<double> gamma_candidates;
  TrainConfig base_config;
};

struct GridSearchResult {
  LossParams best_params;
  std::size_t best_index = 0;
  std::vector<CvReport> candidate_reports;  // one per candidate, in grid order
};

// Cross-validates every candidate of the list matching the base config's
// loss kind and returns the candidate maximizing the pooled selection
// metric; ties go to the earliest candidate.
GridSearchResult grid_search(const Dataset& data, const SearchGrid& grid,
                             const SplitPlan& plan, MetricMode selection_metric);

}  // namespace skewboost

#endif  // SKEWBOOST_MODEL_SELECTION_HPP
