#include "skewboost/model_selection.hpp"

#include <random>
#include <string>
#include <unordered_map>
#include <utility>

#include "skewboost/errors.hpp"

namespace skewboost {

namespace {

// Fisher-Yates with an explicit draw rule so the shuffled order is pinned
// across standard-library implementations.
void shuffle_indices(std::vector<std::size_t>& indices, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i + 1 < indices.size(); ++i) {
    std::size_t j = i + static_cast<std::size_t>(
                            rng() % static_cast<std::uint64_t>(
                                        indices.size() - i));
    std::swap(indices[i], indices[j]);
  }
}

std::vector<IndexSplit> kfold_splits(std::size_t count, int k,
                                     std::uint64_t seed) {
  if (k < 1) {
    throw InvalidPlanError("k-fold needs k >= 1, got " + std::to_string(k));
  }
  if (static_cast<std::size_t>(k) > count) {
    throw InvalidPlanError("k-fold with k = " + std::to_string(k) +
                           " exceeds the " + std::to_string(count) +
                           " available instances");
  }
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  shuffle_indices(order, seed);

  std::vector<IndexSplit> splits(static_cast<std::size_t>(k));
  std::size_t base = count / static_cast<std::size_t>(k);
  std::size_t extra = count % static_cast<std::size_t>(k);  // first folds get one more
  std::size_t begin = 0;
  for (std::size_t fold = 0; fold < splits.size(); ++fold) {
    std::size_t size = base + (fold < extra ? 1 : 0);
    std::size_t end = begin + size;
    for (std::size_t i = 0; i < count; ++i) {
      auto& side = (i >= begin && i < end) ? splits[fold].test
                                           : splits[fold].train;
      side.push_back(order[i]);
    }
    begin = end;
  }
  return splits;
}

std::vector<IndexSplit> leave_one_out_splits(std::size_t count) {
  std::vector<IndexSplit> splits(count);
  for (std::size_t held = 0; held < count; ++held) {
    splits[held].test.push_back(held);
    for (std::size_t i = 0; i < count; ++i) {
      if (i != held) splits[held].train.push_back(i);
    }
  }
  return splits;
}

std::vector<IndexSplit> leave_one_group_out_splits(const Dataset& data) {
  if (!data.has_groups()) {
    throw InvalidPlanError("leave-one-group-out needs group ids");
  }
  std::vector<std::string> group_order;  // first-appearance order
  std::unordered_map<std::string, std::size_t> group_to_fold;
  for (const std::string& group : data.group_ids) {
    if (group_to_fold.emplace(group, group_order.size()).second) {
      group_order.push_back(group);
    }
  }
  std::vector<IndexSplit> splits(group_order.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::size_t held = group_to_fold.at(data.group_ids[i]);
    for (std::size_t fold = 0; fold < splits.size(); ++fold) {
      (fold == held ? splits[fold].test : splits[fold].train).push_back(i);
    }
  }
  return splits;
}

}  // namespace

SplitPlan SplitPlan::kfold(int k, std::uint64_t shuffle_seed) {
  return {Kind::KFold, k, shuffle_seed};
}

SplitPlan SplitPlan::leave_one_out() { return {Kind::LeaveOneOut, 0, 0}; }

SplitPlan SplitPlan::leave_one_group_out() {
  return {Kind::LeaveOneGroupOut, 0, 0};
}

std::vector<IndexSplit> make_splits(const Dataset& data,
                                    const SplitPlan& plan) {
  if (data.size() == 0) {
    throw InvalidPlanError("cannot split an empty dataset");
  }
  switch (plan.kind) {
    case SplitPlan::Kind::KFold:
      return kfold_splits(data.size(), plan.k, plan.shuffle_seed);
    case SplitPlan::Kind::LeaveOneOut:
      return leave_one_out_splits(data.size());
    case SplitPlan::Kind::LeaveOneGroupOut:
      return leave_one_group_out_splits(data);
  }
  throw InvalidPlanError("unknown split plan kind");
}

CvReport cross_validate(const Dataset& data, const TrainConfig& config,
                        const SplitPlan& plan) {
  config.validate();
  data.validate();
  std::vector<IndexSplit> splits = make_splits(data, plan);

  CvReport report;
  report.fold_counts.reserve(splits.size());
  for (std::size_t fold = 0; fold < splits.size(); ++fold) {
    const IndexSplit& split = splits[fold];
    if (split.train.empty()) {
      throw InvalidPlanError("fold " + std::to_string(fold) +
                             " has an empty train side");
    }
    TrainConfig fold_config = config;
    fold_config.seed = config.seed + static_cast<std::int64_t>(fold);
    Dataset train_part = subset(data, split.train);
    Dataset test_part = subset(data, split.test);
    BoostedModel model = train(train_part, fold_config);
    std::vector<double> raw = predict_raw(model, test_part.features);
    ConfusionCounts counts =
        confusion_from_predictions(test_part.labels, raw);
    report.fold_counts.push_back(counts);
    report.pooled += counts;
  }
  report.scores = all_scores(report.pooled);
  return report;
}

GridSearchResult grid_search(const Dataset& data, const SearchGrid& grid,
                             const SplitPlan& plan,
                             MetricMode selection_metric) {
  grid.base_config.validate();
  const std::vector<double>* candidates = nullptr;
  switch (grid.base_config.loss.kind) {
    case LossKind::Weighted:
      candidates = &grid.alpha_candidates;
      break;
    case LossKind::Focal:
      candidates = &grid.gamma_candidates;
      break;
    case LossKind::Plain:
      throw InvalidInputError(
          "the plain loss has no tunable parameter to search");
  }
  if (candidates == nullptr || candidates->empty()) {
    throw InvalidInputError("the search grid has no candidates");
  }

  GridSearchResult result;
  result.candidate_reports.reserve(candidates->size());
  double best_score = 0.0;
  bool have_best = false;
  for (std::size_t i = 0; i < candidates->size(); ++i) {
    double value = (*candidates)[i];
    TrainConfig config = grid.base_config;
    if (config.loss.kind == LossKind::Weighted) {
      config.loss.alpha = value;
    } else {
      config.loss.gamma = value;
    }
    CvReport report = cross_validate(data, config, plan);
    report.candidate_value = value;
    double candidate_score = score(selection_metric, report.pooled);
    if (!have_best || candidate_score > best_score) {
      have_best = true;
      best_score = candidate_score;
      result.best_index = i;
      result.best_params = config.loss;
    }
    result.candidate_reports.push_back(std::move(report));
  }
  return result;
}

}  // namespace skewboost
