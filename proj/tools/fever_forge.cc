// fever_forge: command-line driver for the retrieval and verification
// pipeline. Every subcommand accepts the same configuration flags; values
// given on the command line override the JSON config file.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fever/common/errors.h"
#include "fever/corpus/corpus.h"
#include "fever/metrics/metrics.h"
#include "fever/pipeline/config.h"
#include "fever/pipeline/pipeline.h"
#include "fever/sentretrieval/ranking.h"
#include "fever/verification/verifier.h"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> sampling;
  std::optional<double> threshold;
  std::optional<int> k_docs;
  std::optional<int> epochs;
  std::optional<int> workers;
  std::optional<std::string> output_dir;
};

void add_config_flags(CLI::App *cmd, Overrides &o) {
  cmd->add_option("--config", o.config_path, "JSON pipeline config");
  cmd->add_option("--seed", o.seed, "top-level random seed");
  cmd->add_option("--mode", o.mode, "retrieval loss: pointwise|ranknet|hinge");
  cmd->add_option("--sampling", o.sampling, "negative sampling: random|hnm");
  cmd->add_option("--threshold", o.threshold, "sentence score threshold");
  cmd->add_option("--k-docs", o.k_docs, "documents retrieved per claim");
  cmd->add_option("--epochs", o.epochs, "epochs for the training stage");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option("--output-dir", o.output_dir, "artifact directory");
}

// `stage` names the stage being run so --epochs reaches the right trainer.
fever::PipelineConfig resolve(const Overrides &o, const std::string &stage) {
  fever::PipelineConfig cfg = o.config_path.empty()
                                  ? fever::default_config()
                                  : fever::load_config(o.config_path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.mode) {
    const auto mode = fever::parse_retrieval_loss(*o.mode);
    if (!mode) throw fever::InvalidArgument("unknown mode '" + *o.mode + "'");
    cfg.mode = *mode;
  }
  if (o.sampling) {
    const auto s = fever::parse_sampling(*o.sampling);
    if (!s) {
      throw fever::InvalidArgument("unknown sampling '" + *o.sampling + "'");
    }
    cfg.sampling = *s;
  }
  if (o.threshold) cfg.threshold = *o.threshold;
  if (o.k_docs) cfg.k_docs = *o.k_docs;
  if (o.workers) cfg.workers = *o.workers;
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  if (o.epochs) {
    if (stage == "train-verify") {
      cfg.verifier_epochs = *o.epochs;
    } else if (stage == "train-sentence") {
      cfg.retriever_epochs = *o.epochs;
    } else {
      cfg.retriever_epochs = *o.epochs;
      cfg.verifier_epochs = *o.epochs;
    }
  }
  cfg.validate();
  return cfg;
}

std::vector<double> default_thresholds(
    const std::vector<fever::RetrievalPrediction> &retrieval) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto &p : retrieval) {
    for (const auto &s : p.evidence) {
      lo = std::min(lo, s.score);
      hi = std::max(hi, s.score);
    }
  }
  std::vector<double> out{-std::numeric_limits<double>::infinity()};
  if (!std::isfinite(lo)) return out;
  constexpr int kSteps = 20;
  for (int i = 0; i <= kSteps; ++i) {
    out.push_back(lo + (hi - lo) * i / kSteps);
  }
  return out;
}

void print_warnings(const fever::EvalReport &report) {
  for (const auto &w : report.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Evidence retrieval and claim verification pipeline"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string run_stage;
  std::vector<CLI::App *> stage_cmds;
  for (const auto &name : fever::stage_names()) {
    auto *cmd = app.add_subcommand(name, "run the " + name + " stage");
    add_config_flags(cmd, overrides);
    stage_cmds.push_back(cmd);
  }
  auto *run = app.add_subcommand("run", "run every stage in order");
  add_config_flags(run, overrides);
  run->add_option("--stage", run_stage, "run a single stage only")
      ->check(CLI::IsMember(fever::stage_names()));

  std::string gold_path, pred_path, json_out;
  auto *score_cmd = stage_cmds.back();
  score_cmd->add_option("gold", gold_path, "gold claims JSONL");
  score_cmd->add_option("pred", pred_path, "predictions JSONL");
  score_cmd->add_option("--json", json_out, "write the report as JSON");

  std::string pr_gold, pr_retrieval, pr_out;
  std::vector<double> pr_thresholds;
  auto *pr = app.add_subcommand("pr-curve", "precision/recall over thresholds");
  pr->add_option("gold", pr_gold, "gold claims JSONL")->required();
  pr->add_option("retrieval", pr_retrieval, "retrieval JSONL")->required();
  pr->add_option("--out", pr_out, "CSV output (default stdout)");
  pr->add_option("--thresholds", pr_thresholds, "explicit thresholds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (pr->parsed()) {
      std::vector<std::string> warnings;
      const auto gold = fever::load_claims(pr_gold, &warnings);
      const auto retrieval = fever::load_retrieval_predictions(pr_retrieval);
      if (pr_thresholds.empty()) pr_thresholds = default_thresholds(retrieval);
      const auto curve = fever::pr_curve(gold, retrieval, pr_thresholds);
      if (pr_out.empty()) {
        fever::write_pr_csv(curve, std::cout);
      } else {
        std::ofstream out(pr_out);
        if (!out) throw std::runtime_error("cannot write " + pr_out);
        fever::write_pr_csv(curve, out);
      }
      return 0;
    }

    if (score_cmd->parsed() && !gold_path.empty()) {
      if (pred_path.empty()) {
        throw fever::InvalidArgument("score needs both gold and pred paths");
      }
      std::vector<std::string> warnings;
      const auto gold = fever::load_claims(gold_path, &warnings);
      for (const auto &w : warnings) std::cerr << "warning: " << w << '\n';
      const auto preds = fever::load_final_predictions(pred_path);
      const auto report = fever::fever_score(gold, preds);
      print_warnings(report);
      std::cout << fever::format_report(report);
      const auto j = fever::report_to_json(report).dump(2);
      if (json_out.empty()) {
        std::cout << j << '\n';
      } else {
        std::ofstream out(json_out);
        if (!out) throw std::runtime_error("cannot write " + json_out);
        out << j << '\n';
      }
      return 0;
    }

    for (std::size_t i = 0; i < stage_cmds.size(); ++i) {
      if (!stage_cmds[i]->parsed()) continue;
      const auto &name = fever::stage_names()[i];
      fever::Pipeline pipeline(resolve(overrides, name), std::cerr);
      if (name == "score") {
        print_warnings(pipeline.score());
      } else {
        pipeline.run_stage(name);
      }
      return 0;
    }

    fever::Pipeline pipeline(resolve(overrides, run_stage), std::cerr);
    if (!run_stage.empty()) {
      pipeline.run_stage(run_stage);
    } else {
      print_warnings(pipeline.run_all());
    }
    return 0;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
