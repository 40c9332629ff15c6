#include "skewboost/cli.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skewboost/booster.hpp"
#include "skewboost/csv.hpp"
#include "skewboost/dataset.hpp"
#include "skewboost/errors.hpp"
#include "skewboost/metrics.hpp"
#include "skewboost/model_selection.hpp"

namespace skewboost {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Shortest representation that parses back to the same bits.
std::string format_double(double value) {
  std::array<char, 32> buffer;
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(),
                                 value);
  return std::string(buffer.data(), ptr);
}

std::string format_fixed4(double value) {
  std::array<char, 64> buffer;
  int written = std::snprintf(buffer.data(), buffer.size(), "%.4f", value);
  return std::string(buffer.data(), static_cast<std::size_t>(written));
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// Flags shared by every data-consuming subcommand.
struct DataFlags {
  std::string data_path;
  std::string label_column;
  std::string group_column;

  void attach(CLI::App* sub) {
    sub->add_option("--data", data_path, "CSV dataset path")->required();
    sub->add_option("--label", label_column, "name of the 0/1 label column")
        ->required();
    sub->add_option("--group", group_column,
                    "name of the group-id column (for leave-one-group-out)");
  }

  Dataset load() const {
    CsvSchema schema;
    schema.label_column = label_column;
    if (!group_column.empty()) {
      schema.group_column = group_column;
    }
    return load_csv(data_path, schema);
  }
};

// Hyperparameters and loss selection for commands that train models.
struct TrainFlags {
  std::string loss_name = "plain";
  std::optional<double> alpha;
  std::optional<double> gamma;
  int rounds = 10;
  double learning_rate = 0.3;
  int depth = 6;
  double reg_lambda = 1.0;
  double min_split_gain = 0.0;
  double min_child_hessian = 1.0;
  double base_score = 0.0;
  std::int64_t seed = 0;

  void attach(CLI::App* sub, bool single_loss_value) {
    sub->add_option("--loss", loss_name, "loss kind: plain, weighted, focal")
        ->required();
    if (single_loss_value) {
      sub->add_option("--alpha", alpha,
                      "imbalance weight (required by --loss weighted)");
      sub->add_option("--gamma", gamma,
                      "focusing exponent (required by --loss focal)");
    }
    sub->add_option("--rounds", rounds, "boosting rounds")->capture_default_str();
    sub->add_option("--lr", learning_rate, "shrinkage on leaf weights")->capture_default_str();
    sub->add_option("--depth", depth, "maximum tree depth")->capture_default_str();
    sub->add_option("--lambda", reg_lambda, "L2 penalty on leaf weights")->capture_default_str();
    sub->add_option("--min-split-gain", min_split_gain,
                    "minimum gain to keep a split")->capture_default_str();
    sub->add_option("--min-child-hessian", min_child_hessian,
                    "minimum summed hessian per child")->capture_default_str();
    sub->add_option("--base-score", base_score, "initial raw logit")->capture_default_str();
    sub->add_option("--seed", seed, "random seed")->capture_default_str();
  }

  // Omitting the parameter the chosen loss needs is a hard error, as is
  // supplying one the loss cannot use.
  LossParams resolve_loss() const {
    LossKind kind = loss_kind_from_string(loss_name);
    switch (kind) {
      case LossKind::Plain:
        if (alpha) {
          throw InvalidInputError("--alpha is only used by the weighted loss");
        }
        if (gamma) {
          throw InvalidInputError("--gamma is only used by the focal loss");
        }
        return LossParams::plain();
      case LossKind::Weighted:
        if (!alpha) {
          throw InvalidInputError("the weighted loss requires --alpha");
        }
        if (gamma) {
          throw InvalidInputError("--gamma is only used by the focal loss");
        }
        return LossParams::weighted(*alpha);
      case LossKind::Focal:
        if (!gamma) {
          throw InvalidInputError("the focal loss requires --gamma");
        }
        if (alpha) {
          throw InvalidInputError("--alpha is only used by the weighted loss");
        }
        return LossParams::focal(*gamma);
    }
    throw InvalidInputError("unknown loss kind");
  }

  TrainConfig config(LossParams loss) const {
    TrainConfig config;
    config.num_rounds = rounds;
    config.learning_rate = learning_rate;
    config.max_depth = depth;
    config.reg_lambda = reg_lambda;
    config.min_split_gain = min_split_gain;
    config.min_child_hessian = min_child_hessian;
    config.base_score = base_score;
    config.loss = loss;
    config.seed = seed;
    config.validate();
    return config;
  }
};

SplitPlan parse_cv_spec(const std::string& spec, std::uint64_t shuffle_seed) {
  if (spec == "loo") {
    return SplitPlan::leave_one_out();
  }
  if (spec == "logo") {
    return SplitPlan::leave_one_group_out();
  }
  constexpr const char* kPrefix = "kfold:";
  if (spec.rfind(kPrefix, 0) == 0) {
    std::string_view digits = std::string_view(spec).substr(6);
    int k = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && k >= 1) {
      return SplitPlan::kfold(k, shuffle_seed);
    }
  }
  throw InvalidInputError("bad --cv value '" + spec +
                          "' (expected kfold:K, loo, or logo)");
}

json loss_json(const LossParams& loss) {
  return {{"kind", to_string(loss.kind)},
          {"alpha", loss.alpha},
          {"gamma", loss.gamma}};
}

json config_json(const TrainConfig& config) {
  return {{"base_score", config.base_score},
          {"learning_rate", config.learning_rate},
          {"loss", loss_json(config.loss)},
          {"max_depth", config.max_depth},
          {"min_child_hessian", config.min_child_hessian},
          {"min_split_gain", config.min_split_gain},
          {"num_rounds", config.num_rounds},
          {"reg_lambda", config.reg_lambda},
          {"seed", config.seed}};
}

json confusion_json(const ConfusionCounts& counts) {
  return {{"tp", counts.tp},
          {"fp", counts.fp},
          {"tn", counts.tn},
          {"fn", counts.fn}};
}

json scores_json(const MetricScores& scores) {
  return {{"accuracy", scores.accuracy},
          {"precision", scores.precision},
          {"recall", scores.recall},
          {"f1", scores.f1},
          {"mcc", scores.mcc}};
}

json report_skeleton(const std::string& command,
                     const std::vector<std::string>& args, std::int64_t seed,
                     Clock::time_point start) {
  json doc;
  doc["command"] = command;
  doc["argv"] = args;
  doc["seed"] = seed;
  doc["wall_clock_ms"] = elapsed_ms(start);
  return doc;
}

void write_report(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) {
    throw FileError("cannot open '" + path + "' for writing");
  }
  out << doc.dump(2) << '\n';
  if (!out.good()) {
    throw FileError("failed while writing '" + path + "'");
  }
}

void print_metrics_block(std::ostream& out, const ConfusionCounts& counts,
                         const MetricScores& scores) {
  out << "confusion: tp=" << counts.tp << " fp=" << counts.fp
      << " tn=" << counts.tn << " fn=" << counts.fn << '\n';
  out << "accuracy:  " << format_fixed4(scores.accuracy) << '\n';
  out << "precision: " << format_fixed4(scores.precision) << '\n';
  out << "recall:    " << format_fixed4(scores.recall) << '\n';
  out << "f1:        " << format_fixed4(scores.f1) << '\n';
  out << "mcc:       " << format_fixed4(scores.mcc) << '\n';
}

void write_lines(const std::string& out_path, std::ostream& fallback,
                 const std::vector<std::string>& lines) {
  if (out_path.empty()) {
    for (const std::string& line : lines) {
      fallback << line << '\n';
    }
    return;
  }
  std::ofstream file(out_path);
  if (!file) {
    throw FileError("cannot open '" + out_path + "' for writing");
  }
  for (const std::string& line : lines) {
    file << line << '\n';
  }
  if (!file.good()) {
    throw FileError("failed while writing '" + out_path + "'");
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"gradient-boosted trees for imbalanced binary classification"};
  app.require_subcommand(1);

  // train
  CLI::App* train_sub =
      app.add_subcommand("train", "fit a model and write it to --out");
  DataFlags train_data;
  TrainFlags train_flags;
  std::string train_out;
  train_data.attach(train_sub);
  train_flags.attach(train_sub, true);
  train_sub->add_option("--out", train_out, "model file to write")->required();

  // predict
  CLI::App* predict_sub =
      app.add_subcommand("predict", "score a dataset with a trained model");
  DataFlags predict_data;
  std::string predict_model;
  std::string predict_mode = "raw";
  std::string predict_out;
  predict_data.attach(predict_sub);
  predict_sub->add_option("--model", predict_model, "model file")->required();
  predict_sub
      ->add_option("--output-mode,--mode", predict_mode,
                   "raw, sigmoid, determine, or onehot")->capture_default_str()
      ->check(CLI::IsMember({"raw", "sigmoid", "determine", "onehot"}));
  predict_sub->add_option("--out", predict_out,
                          "write predictions here instead of stdout");

  // evaluate
  CLI::App* evaluate_sub = app.add_subcommand(
      "evaluate", "score a labelled dataset and report all metrics");
  DataFlags evaluate_data;
  std::string evaluate_model;
  std::string evaluate_report;
  evaluate_data.attach(evaluate_sub);
  evaluate_sub->add_option("--model", evaluate_model, "model file")
      ->required();
  evaluate_sub->add_option("--report", evaluate_report,
                           "write the JSON run report here");

  // cv
  CLI::App* cv_sub =
      app.add_subcommand("cv", "cross-validate a configuration");
  DataFlags cv_data;
  TrainFlags cv_flags;
  std::string cv_spec = "kfold:5";
  std::string cv_report;
  cv_data.attach(cv_sub);
  cv_flags.attach(cv_sub, true);
  cv_sub->add_option("--cv", cv_spec, "kfold:K, loo, or logo")->capture_default_str();
  cv_sub->add_option("--report", cv_report, "write the JSON run report here");

  // grid
  CLI::App* grid_sub = app.add_subcommand(
      "grid", "grid-search alpha or gamma by cross-validation");
  DataFlags grid_data;
  TrainFlags grid_flags;
  std::vector<double> grid_alphas;
  std::vector<double> grid_gammas;
  std::string grid_spec = "kfold:5";
  std::string grid_metric = "accuracy";
  std::string grid_report;
  std::string grid_out;
  grid_data.attach(grid_sub);
  grid_flags.attach(grid_sub, false);
  grid_sub->add_option("--alphas", grid_alphas,
                       "candidate alphas for --loss weighted")
      ->delimiter(',');
  grid_sub->add_option("--gammas", grid_gammas,
                       "candidate gammas for --loss focal")
      ->delimiter(',');
  grid_sub->add_option("--cv", grid_spec, "kfold:K, loo, or logo")->capture_default_str();
  grid_sub->add_option("--metric", grid_metric,
                       "selection metric on pooled counts")->capture_default_str();
  grid_sub->add_option("--report", grid_report,
                       "write the JSON run report here");
  grid_sub->add_option("--out", grid_out,
                       "refit on all data with the best params and write "
                       "the model here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    Clock::time_point start = Clock::now();
    if (*train_sub) {
      TrainConfig config = train_flags.config(train_flags.resolve_loss());
      Dataset data = train_data.load();
      BoostedModel model = train(data, config);
      save_model(model, train_out);
      out << "wrote model with " << model.trees.size() << " trees to "
          << train_out << '\n';
    } else if (*predict_sub) {
      BoostedModel model = load_model(predict_model);
      Dataset data = predict_data.load();
      std::vector<std::string> lines;
      if (predict_mode == "raw" || predict_mode == "sigmoid") {
        std::vector<double> values = predict_mode == "raw"
                                         ? predict_raw(model, data.features)
                                         : predict_sigmoid(model, data.features);
        for (double value : values) {
          lines.push_back(format_double(value));
        }
      } else if (predict_mode == "determine") {
        for (int label : predict_determine(model, data.features)) {
          lines.push_back(std::to_string(label));
        }
      } else {
        Matrix onehot = predict_two_classes(model, data.features);
        for (std::size_t r = 0; r < onehot.rows(); ++r) {
          lines.push_back(std::to_string(static_cast<int>(onehot.at(r, 0))) +
                          "," +
                          std::to_string(static_cast<int>(onehot.at(r, 1))));
        }
      }
      write_lines(predict_out, out, lines);
    } else if (*evaluate_sub) {
      BoostedModel model = load_model(evaluate_model);
      Dataset data = evaluate_data.load();
      std::vector<double> raw = predict_raw(model, data.features);
      ConfusionCounts counts = confusion_from_predictions(data.labels, raw);
      MetricScores scores = all_scores(counts);
      print_metrics_block(out, counts, scores);
      if (!evaluate_report.empty()) {
        json doc = report_skeleton("evaluate", args, 0, start);
        doc["config"] = {{"data", evaluate_data.data_path},
                         {"group", evaluate_data.group_column},
                         {"label", evaluate_data.label_column},
                         {"model", evaluate_model},
                         {"model_loss", loss_json(model.loss_params)}};
        doc["results"] = {{"confusion", confusion_json(counts)},
                          {"scores", scores_json(scores)}};
        write_report(evaluate_report, doc);
      }
    } else if (*cv_sub) {
      TrainConfig config = cv_flags.config(cv_flags.resolve_loss());
      SplitPlan plan = parse_cv_spec(
          cv_spec, static_cast<std::uint64_t>(cv_flags.seed));
      if (plan.kind == SplitPlan::Kind::LeaveOneGroupOut &&
          cv_data.group_column.empty()) {
        throw InvalidInputError("--cv logo requires --group");
      }
      Dataset data = cv_data.load();
      CvReport report = cross_validate(data, config, plan);
      out << "folds: " << report.fold_counts.size() << '\n';
      print_metrics_block(out, report.pooled, report.scores);
      if (!cv_report.empty()) {
        json folds = json::array();
        for (const ConfusionCounts& fold : report.fold_counts) {
          folds.push_back(confusion_json(fold));
        }
        json doc = report_skeleton("cv", args, config.seed, start);
        doc["config"] = config_json(config);
        doc["config"]["cv"] = cv_spec;
        doc["config"]["data"] = cv_data.data_path;
        doc["config"]["group"] = cv_data.group_column;
        doc["config"]["label"] = cv_data.label_column;
        doc["results"] = {{"folds", std::move(folds)},
                          {"pooled", confusion_json(report.pooled)},
                          {"scores", scores_json(report.scores)}};
        write_report(cv_report, doc);
      }
    } else if (*grid_sub) {
      LossKind kind = loss_kind_from_string(grid_flags.loss_name);
      if (kind == LossKind::Weighted && grid_alphas.empty()) {
        throw InvalidInputError("--loss weighted needs --alphas to search");
      }
      if (kind == LossKind::Focal && grid_gammas.empty()) {
        throw InvalidInputError("--loss focal needs --gammas to search");
      }
      if (kind == LossKind::Weighted && !grid_gammas.empty()) {
        throw InvalidInputError("--gammas is only used by the focal loss");
      }
      if (kind == LossKind::Focal && !grid_alphas.empty()) {
        throw InvalidInputError("--alphas is only used by the weighted loss");
      }
      SearchGrid grid;
      grid.alpha_candidates = grid_alphas;
      grid.gamma_candidates = grid_gammas;
      LossParams base_loss;
      base_loss.kind = kind;
      grid.base_config = grid_flags.config(base_loss);
      SplitPlan plan = parse_cv_spec(
          grid_spec, static_cast<std::uint64_t>(grid_flags.seed));
      if (plan.kind == SplitPlan::Kind::LeaveOneGroupOut &&
          grid_data.group_column.empty()) {
        throw InvalidInputError("--cv logo requires --group");
      }
      MetricMode metric = metric_mode_from_string(grid_metric);
      Dataset data = grid_data.load();
      GridSearchResult result = grid_search(data, grid, plan, metric);

      const char* value_name =
          kind == LossKind::Weighted ? "alpha" : "gamma";
      for (const CvReport& report : result.candidate_reports) {
        out << value_name << "=" << format_double(*report.candidate_value)
            << " " << grid_metric << "="
            << format_fixed4(score(metric, report.pooled)) << '\n';
      }
      double best_value = kind == LossKind::Weighted
                              ? result.best_params.alpha
                              : result.best_params.gamma;
      out << "best: " << value_name << "=" << format_double(best_value)
          << " (" << grid_metric << "="
          << format_fixed4(score(
                 metric, result.candidate_reports[result.best_index].pooled))
          << ")\n";

      if (!grid_out.empty()) {
        TrainConfig best_config = grid.base_config;
        best_config.loss = result.best_params;
        BoostedModel model = train(data, best_config);
        save_model(model, grid_out);
        out << "wrote refit model to " << grid_out << '\n';
      }
      if (!grid_report.empty()) {
        json candidates = json::array();
        for (const CvReport& report : result.candidate_reports) {
          json folds = json::array();
          for (const ConfusionCounts& fold : report.fold_counts) {
            folds.push_back(confusion_json(fold));
          }
          candidates.push_back({{"value", *report.candidate_value},
                                {"folds", std::move(folds)},
                                {"pooled", confusion_json(report.pooled)},
                                {"scores", scores_json(report.scores)}});
        }
        json doc = report_skeleton("grid", args, grid.base_config.seed, start);
        doc["config"] = config_json(grid.base_config);
        doc["config"]["cv"] = grid_spec;
        doc["config"]["data"] = grid_data.data_path;
        doc["config"]["group"] = grid_data.group_column;
        doc["config"]["label"] = grid_data.label_column;
        doc["config"]["metric"] = grid_metric;
        doc["config"]["alphas"] = grid_alphas;
        doc["config"]["gammas"] = grid_gammas;
        doc["results"] = {{"best", {{"index", result.best_index},
                                    {"loss", loss_json(result.best_params)}}},
                          {"candidates", std::move(candidates)}};
        write_report(grid_report, doc);
      }
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace skewboost
