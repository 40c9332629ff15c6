#include <doctest.h>
#include <json.hpp>

#include <skewboost/booster.hpp>
#include <skewboost/cli.hpp>
#include <skewboost/csv.hpp>
#include <skewboost/metrics.hpp>
#include <skewboost/model_selection.hpp>

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace skewboost;

namespace {

struct CommandResult {
  int code = 0;
  std::string out;
  std::string err;
};

CommandResult run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CommandResult result;
  result.code = run_command(args, out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

// Scratch file in the system temp directory, removed on scope exit.
struct Scratch {
  std::filesystem::path path;

  explicit Scratch(const std::string& name)
      : path(std::filesystem::temp_directory_path() /
             ("skewboost_cli_" + name)) {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
  Scratch(const std::string& name, const std::string& content)
      : Scratch(name) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~Scratch() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }

  std::string str() const { return path.string(); }

  std::string read() const {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
};

const std::string kTinyCsv = "x,label\n0,1\n1,0\n";
const std::string kSeparatedCsv = "x,label\n0,0\n1,0\n10,1\n11,1\n";

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    lines.push_back(line);
  }
  return lines;
}

// Tiny one-split model: train 1 round at full learning rate.
CommandResult train_tiny(const std::string& data_path,
                         const std::string& model_path) {
  return run({"train", "--data", data_path, "--label", "label", "--loss",
              "plain", "--rounds", "1", "--lr", "1", "--lambda", "0",
              "--min-child-hessian", "0", "--depth", "1", "--out",
              model_path});
}

}  // namespace

TEST_CASE("train writes a model and reports the tree count") {
  Scratch data("train_data.csv", kTinyCsv);
  Scratch model("train_model.json");

  CommandResult result = train_tiny(data.str(), model.str());
  CHECK(result.code == 0);
  CHECK(result.err.empty());
  CHECK(result.out.find("wrote model with 1 trees") != std::string::npos);
  CHECK(result.out.find(model.str()) != std::string::npos);

  BoostedModel loaded = load_model(model.path);
  CHECK(loaded.trees.size() == 1);
  CHECK(loaded.feature_count == 1);
}

TEST_CASE("predict emits one line per instance in every mode") {
  Scratch data("predict_data.csv", kTinyCsv);
  Scratch model("predict_model.json");
  REQUIRE(train_tiny(data.str(), model.str()).code == 0);

  CommandResult raw = run({"predict", "--data", data.str(), "--label",
                           "label", "--model", model.str(), "--output-mode",
                           "raw"});
  CHECK(raw.code == 0);
  CHECK(split_lines(raw.out) == std::vector<std::string>{"2", "-2"});

  // --mode is an alias for --output-mode.
  CommandResult determine =
      run({"predict", "--data", data.str(), "--label", "label", "--model",
           model.str(), "--mode", "determine"});
  CHECK(determine.code == 0);
  CHECK(determine.out == "1\n0\n");

  CommandResult sigmoid = run({"predict", "--data", data.str(), "--label",
                               "label", "--model", model.str(), "--mode",
                               "sigmoid"});
  CHECK(sigmoid.code == 0);
  std::vector<std::string> lines = split_lines(sigmoid.out);
  REQUIRE(lines.size() == 2);
  BoostedModel loaded = load_model(model.path);
  Dataset dataset = load_csv(data.path, {"label", std::nullopt});
  std::vector<double> expected = predict_sigmoid(loaded, dataset.features);
  CHECK(std::stod(lines[0]) == expected[0]);  // shortest form parses back
  CHECK(std::stod(lines[1]) == expected[1]);

  CommandResult onehot = run({"predict", "--data", data.str(), "--label",
                              "label", "--model", model.str(), "--mode",
                              "onehot"});
  CHECK(onehot.code == 0);
  CHECK(onehot.out == "0,1\n1,0\n");

  // Default mode is raw.
  CommandResult defaulted = run({"predict", "--data", data.str(), "--label",
                                 "label", "--model", model.str()});
  CHECK(defaulted.out == raw.out);
}

TEST_CASE("predict honors --out and keeps stdout quiet") {
  Scratch data("predict_out_data.csv", kTinyCsv);
  Scratch model("predict_out_model.json");
  Scratch out_file("predictions.txt");
  REQUIRE(train_tiny(data.str(), model.str()).code == 0);

  CommandResult result =
      run({"predict", "--data", data.str(), "--label", "label", "--model",
           model.str(), "--mode", "determine", "--out", out_file.str()});
  CHECK(result.code == 0);
  CHECK(result.out.empty());
  CHECK(out_file.read() == "1\n0\n");
}

TEST_CASE("predict rejects unknown output modes") {
  Scratch data("predict_mode_data.csv", kTinyCsv);
  Scratch model("predict_mode_model.json");
  REQUIRE(train_tiny(data.str(), model.str()).code == 0);

  CommandResult result = run({"predict", "--data", data.str(), "--label",
                              "label", "--model", model.str(), "--mode",
                              "probability"});
  CHECK(result.code != 0);
}

TEST_CASE("loss parameter flags are cross-checked") {
  Scratch data("loss_flags_data.csv", kTinyCsv);
  Scratch model("loss_flags_model.json");

  CommandResult missing_alpha =
      run({"train", "--data", data.str(), "--label", "label", "--loss",
           "weighted", "--out", model.str()});
  CHECK(missing_alpha.code == 1);
  CHECK(missing_alpha.err.find("requires --alpha") != std::string::npos);

  CommandResult missing_gamma =
      run({"train", "--data", data.str(), "--label", "label", "--loss",
           "focal", "--out", model.str()});
  CHECK(missing_gamma.code == 1);
  CHECK(missing_gamma.err.find("requires --gamma") != std::string::npos);

  CommandResult stray_gamma =
      run({"train", "--data", data.str(), "--label", "label", "--loss",
           "plain", "--gamma", "2", "--out", model.str()});
  CHECK(stray_gamma.code == 1);
  CHECK(stray_gamma.err.find("only used by the focal loss") !=
        std::string::npos);

  CommandResult stray_alpha =
      run({"train", "--data", data.str(), "--label", "label", "--loss",
           "focal", "--gamma", "2", "--alpha", "3", "--out", model.str()});
  CHECK(stray_alpha.code == 1);
  CHECK(stray_alpha.err.find("only used by the weighted loss") !=
        std::string::npos);

  CommandResult bad_kind =
      run({"train", "--data", data.str(), "--label", "label", "--loss",
           "hinge", "--out", model.str()});
  CHECK(bad_kind.code == 1);
  CHECK(bad_kind.err.find("hinge") != std::string::npos);
}

TEST_CASE("evaluate prints the metrics table and writes a report") {
  Scratch data("eval_data.csv", kTinyCsv);
  Scratch model("eval_model.json");
  Scratch report("eval_report.json");
  REQUIRE(train_tiny(data.str(), model.str()).code == 0);

  CommandResult result =
      run({"evaluate", "--data", data.str(), "--label", "label", "--model",
           model.str(), "--report", report.str()});
  CHECK(result.code == 0);
  CHECK(result.out.find("confusion: tp=1 fp=0 tn=1 fn=0") !=
        std::string::npos);
  CHECK(result.out.find("accuracy:  1.0000") != std::string::npos);
  CHECK(result.out.find("mcc:       1.0000") != std::string::npos);

  nlohmann::json doc = nlohmann::json::parse(report.read());
  CHECK(doc.at("command") == "evaluate");
  CHECK(doc.at("argv").is_array());
  CHECK(doc.at("argv").at(0) == "evaluate");
  CHECK(doc.at("wall_clock_ms").get<double>() >= 0.0);
  CHECK(doc.at("config").at("model_loss").at("kind") == "plain");
  CHECK(doc.at("results").at("confusion").at("tp") == 1);
  CHECK(doc.at("results").at("scores").at("accuracy") == 1.0);
}

TEST_CASE("evaluate reports are byte-stable apart from the clock") {
  Scratch data("stable_data.csv", kSeparatedCsv);
  Scratch model("stable_model.json");
  Scratch report("stable_report.json");
  REQUIRE(train_tiny(data.str(), model.str()).code == 0);

  std::vector<std::string> command{"evaluate", "--data",  data.str(),
                                   "--label",  "label",   "--model",
                                   model.str(), "--report", report.str()};
  REQUIRE(run(command).code == 0);
  std::string first = report.read();
  REQUIRE(run(command).code == 0);
  std::string second = report.read();

  nlohmann::json a = nlohmann::json::parse(first);
  nlohmann::json b = nlohmann::json::parse(second);
  a.erase("wall_clock_ms");
  b.erase("wall_clock_ms");
  CHECK(a.dump() == b.dump());
  CHECK(second.back() == '\n');
}

TEST_CASE("cv reports per-fold and pooled results") {
  Scratch data("cv_data.csv", kSeparatedCsv);
  Scratch report("cv_report.json");

  CommandResult result =
      run({"cv", "--data", data.str(), "--label", "label", "--loss", "plain",
           "--cv", "loo", "--rounds", "10", "--lr", "0.3", "--lambda", "1",
           "--min-child-hessian", "0", "--report", report.str()});
  CHECK(result.code == 0);
  CHECK(result.out.find("folds: 4") != std::string::npos);
  CHECK(result.out.find("accuracy:  1.0000") != std::string::npos);

  nlohmann::json doc = nlohmann::json::parse(report.read());
  CHECK(doc.at("command") == "cv");
  CHECK(doc.at("config").at("cv") == "loo");
  CHECK(doc.at("config").at("loss").at("kind") == "plain");
  REQUIRE(doc.at("results").at("folds").size() == 4);
  CHECK(doc.at("results").at("pooled").at("tp") == 2);
  CHECK(doc.at("results").at("pooled").at("tn") == 2);
  CHECK(doc.at("results").at("scores").at("accuracy") == 1.0);
}

TEST_CASE("cv with logo requires a group column") {
  Scratch data("logo_data.csv", kSeparatedCsv);
  CommandResult result = run({"cv", "--data", data.str(), "--label", "label",
                              "--loss", "plain", "--cv", "logo"});
  CHECK(result.code == 1);
  CHECK(result.err.find("requires --group") != std::string::npos);
}

TEST_CASE("cv with logo splits by the group column") {
  Scratch data("logo_groups.csv",
               "x,label,site\n0,0,a\n1,0,a\n10,1,b\n11,1,b\n");
  CommandResult result =
      run({"cv", "--data", data.str(), "--label", "label", "--group", "site",
           "--loss", "plain", "--cv", "logo", "--rounds", "5"});
  CHECK(result.code == 0);
  CHECK(result.out.find("folds: 2") != std::string::npos);
}

TEST_CASE("bad --cv values are rejected") {
  Scratch data("bad_cv_data.csv", kSeparatedCsv);
  for (const std::string spec : {"kfold:0", "kfold:x", "threefold", ""}) {
    CommandResult result = run({"cv", "--data", data.str(), "--label",
                                "label", "--loss", "plain", "--cv", spec});
    CHECK(result.code == 1);
    CHECK(result.err.find("bad --cv value") != std::string::npos);
  }
}

TEST_CASE("grid searches the alpha candidates and refits the best") {
  Scratch data("grid_data.csv", kSeparatedCsv);
  Scratch report("grid_report.json");
  Scratch model("grid_model.json");

  CommandResult result =
      run({"grid", "--data", data.str(), "--label", "label", "--loss",
           "weighted", "--alphas", "0.5,1,2", "--cv", "kfold:2", "--rounds",
           "5", "--min-child-hessian", "0", "--metric", "accuracy",
           "--report", report.str(), "--out", model.str()});
  CHECK(result.code == 0);

  std::vector<std::string> lines = split_lines(result.out);
  REQUIRE(lines.size() >= 5);  // three candidates, best, refit notice
  CHECK(lines[0].rfind("alpha=0.5 accuracy=", 0) == 0);
  CHECK(lines[1].rfind("alpha=1 accuracy=", 0) == 0);
  CHECK(lines[2].rfind("alpha=2 accuracy=", 0) == 0);
  CHECK(lines[3].rfind("best: alpha=", 0) == 0);
  CHECK(lines[4].find("wrote refit model to") != std::string::npos);

  nlohmann::json doc = nlohmann::json::parse(report.read());
  CHECK(doc.at("command") == "grid");
  CHECK(doc.at("config").at("metric") == "accuracy");
  REQUIRE(doc.at("results").at("candidates").size() == 3);
  CHECK(doc.at("results").at("candidates").at(0).at("value") == 0.5);
  CHECK(doc.at("results").at("candidates").at(1).at("value") == 1.0);
  CHECK(doc.at("results").at("candidates").at(2).at("value") == 2.0);
  std::size_t best_index =
      doc.at("results").at("best").at("index").get<std::size_t>();
  CHECK(best_index < 3);
  CHECK(doc.at("results").at("best").at("loss").at("kind") == "weighted");

  // The refit model trains on every row with the winning parameters.
  BoostedModel refit = load_model(model.path);
  CHECK(refit.loss_params.kind == LossKind::Weighted);
  CHECK(refit.trees.size() == 5);
}

TEST_CASE("grid results match the library run for run") {
  Scratch data("grid_parity.csv", kSeparatedCsv);
  Scratch report("grid_parity_report.json");

  CommandResult result =
      run({"grid", "--data", data.str(), "--label", "label", "--loss",
           "weighted", "--alphas", "1,2", "--cv", "kfold:2", "--rounds", "4",
           "--min-child-hessian", "0", "--report", report.str()});
  REQUIRE(result.code == 0);

  // Rebuild the identical search through the library API.
  Dataset dataset = load_csv(data.path, {"label", std::nullopt});
  SearchGrid grid;
  grid.alpha_candidates = {1.0, 2.0};
  grid.base_config.num_rounds = 4;
  grid.base_config.min_child_hessian = 0.0;
  grid.base_config.loss = LossParams::weighted(1.0);
  GridSearchResult expected = grid_search(
      dataset, grid, SplitPlan::kfold(2, 0), MetricMode::Accuracy);

  nlohmann::json doc = nlohmann::json::parse(report.read());
  const auto& candidates = doc.at("results").at("candidates");
  REQUIRE(candidates.size() == expected.candidate_reports.size());
  for (std::size_t i = 0; i < expected.candidate_reports.size(); ++i) {
    const ConfusionCounts& pooled = expected.candidate_reports[i].pooled;
    CHECK(candidates.at(i).at("pooled").at("tp") == pooled.tp);
    CHECK(candidates.at(i).at("pooled").at("fp") == pooled.fp);
    CHECK(candidates.at(i).at("pooled").at("tn") == pooled.tn);
    CHECK(candidates.at(i).at("pooled").at("fn") == pooled.fn);
    CHECK(candidates.at(i).at("scores").at("accuracy").get<double>() ==
          expected.candidate_reports[i].scores.accuracy);
  }
  CHECK(doc.at("results").at("best").at("index").get<std::size_t>() ==
        expected.best_index);
}

TEST_CASE("grid flag combinations are validated per loss kind") {
  Scratch data("grid_flags.csv", kSeparatedCsv);

  CommandResult no_alphas =
      run({"grid", "--data", data.str(), "--label", "label", "--loss",
           "weighted"});
  CHECK(no_alphas.code == 1);
  CHECK(no_alphas.err.find("needs --alphas") != std::string::npos);

  CommandResult no_gammas = run(
      {"grid", "--data", data.str(), "--label", "label", "--loss", "focal"});
  CHECK(no_gammas.code == 1);
  CHECK(no_gammas.err.find("needs --gammas") != std::string::npos);

  CommandResult crossed =
      run({"grid", "--data", data.str(), "--label", "label", "--loss",
           "focal", "--gammas", "1,2", "--alphas", "3"});
  CHECK(crossed.code == 1);
  CHECK(crossed.err.find("--alphas is only used by the weighted loss") !=
        std::string::npos);

  CommandResult plain_grid = run(
      {"grid", "--data", data.str(), "--label", "label", "--loss", "plain"});
  CHECK(plain_grid.code == 1);
  CHECK(plain_grid.err.find("plain") != std::string::npos);
}

TEST_CASE("grid over gammas drives the focal loss") {
  Scratch data("grid_gamma.csv", kSeparatedCsv);
  CommandResult result =
      run({"grid", "--data", data.str(), "--label", "label", "--loss",
           "focal", "--gammas", "0,2", "--cv", "kfold:2", "--rounds", "4",
           "--min-child-hessian", "0"});
  CHECK(result.code == 0);
  std::vector<std::string> lines = split_lines(result.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].rfind("gamma=0 accuracy=", 0) == 0);
  CHECK(lines[1].rfind("gamma=2 accuracy=", 0) == 0);
  CHECK(lines[2].rfind("best: gamma=", 0) == 0);
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run({}).code != 0);
  CHECK(run({"frobnicate"}).code != 0);
  CHECK(run({"train", "--bogus-flag"}).code != 0);
  CHECK(run({"train"}).code != 0);  // missing required flags
}

TEST_CASE("--help succeeds and lists the subcommands") {
  CommandResult result = run({"--help"});
  CHECK(result.code == 0);
  for (const char* name : {"train", "predict", "evaluate", "cv", "grid"}) {
    CHECK(result.out.find(name) != std::string::npos);
  }
}

TEST_CASE("missing input files produce a clean error") {
  Scratch model("missing_model.json");
  CommandResult result =
      run({"train", "--data", "/nonexistent/dir/data.csv", "--label", "label",
           "--loss", "plain", "--out", model.str()});
  CHECK(result.code == 1);
  CHECK(result.err.find("cannot open") != std::string::npos);

  Scratch data("missing_model_data.csv", kTinyCsv);
  CommandResult predict_result =
      run({"predict", "--data", data.str(), "--label", "label", "--model",
           "/nonexistent/model.json"});
  CHECK(predict_result.code == 1);
  CHECK(predict_result.err.find("error:") != std::string::npos);
}

TEST_CASE("evaluate rejects a model/data feature mismatch") {
  Scratch narrow("mismatch_narrow.csv", kTinyCsv);
  Scratch wide("mismatch_wide.csv", "x,y,label\n0,0,1\n1,1,0\n");
  Scratch model("mismatch_model.json");
  REQUIRE(train_tiny(narrow.str(), model.str()).code == 0);

  CommandResult result = run({"evaluate", "--data", wide.str(), "--label",
                              "label", "--model", model.str()});
  CHECK(result.code == 1);
}
