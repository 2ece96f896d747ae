#include "fever/pipeline/pipeline.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "fever/common/errors.h"
#include "fever/corpus/corpus.h"
#include "fever/docretrieval/title_index.h"
#include "fever/encoder/params.h"
#include "fever/sentretrieval/candidates.h"
#include "fever/sentretrieval/ranking.h"
#include "fever/sentretrieval/trainer.h"
#include "fever/tokenizer/tokenizer.h"
#include "fever/verification/verifier.h"

namespace fever {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char *kIndex = "index.jsonl";
constexpr const char *kVocab = "vocab.txt";
constexpr const char *kRetriever = "retriever.ckpt";
constexpr const char *kRetrieverLog = "retriever_log.csv";
constexpr const char *kRetrieval = "retrieval.jsonl";
constexpr const char *kRetrievalTrain = "retrieval_train.jsonl";
constexpr const char *kVerifier = "verifier.ckpt";
constexpr const char *kVerifierLog = "verifier_log.csv";
constexpr const char *kPredictions = "predictions.jsonl";
constexpr const char *kReportJson = "report.json";
constexpr const char *kReportText = "report.txt";

enum StageIndex {
  kStageIndex = 0,
  kStageTrainSentence,
  kStageRetrieve,
  kStageTrainVerify,
  kStagePredict,
  kStageScore
};

std::ofstream open_output(const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_log(const std::string &path, const TrainLog &log) {
  auto out = open_output(path);
  out << "step,loss\n";
  for (std::size_t i = 0; i < log.step_losses.size(); ++i) {
    out << i << ',' << json(log.step_losses[i]).dump() << '\n';
  }
}

std::vector<Claim> read_claims_checked(const std::string &path,
                                       std::ostream &log) {
  std::vector<std::string> warnings;
  auto claims = load_claims(path, &warnings);
  for (const auto &w : warnings) log << "warning: " << w << '\n';
  return claims;
}

std::vector<std::vector<std::string>> docs_for(const TitleIndex &index,
                                               std::span<const Claim> claims,
                                               int k) {
  std::vector<std::vector<std::string>> out;
  out.reserve(claims.size());
  for (const auto &c : claims) out.push_back(retrieve_docs(index, c.text, k));
  return out;
}

class StageTimer {
 public:
  StageTimer(std::ostream &log, std::string name)
      : log_(log), name_(std::move(name)),
        start_(std::chrono::steady_clock::now()) {
    log_ << "[" << name_ << "] start\n";
  }
  ~StageTimer() {
    const auto secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start_)
                          .count();
    log_ << "[" << name_ << "] done in " << secs << " s\n";
  }

 private:
  std::ostream &log_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

const std::vector<std::string> &stage_names() {
  static const std::vector<std::string> kNames = {
      "build-index", "train-sentence", "retrieve",
      "train-verify", "predict",       "score"};
  return kNames;
}

Pipeline::Pipeline(PipelineConfig config, std::ostream &log)
    : config_(std::move(config)), log_(log) {
  config_.validate();
}

std::string Pipeline::require(const std::string &artifact) const {
  if (!fs::exists(artifact)) throw MissingArtifact(artifact);
  return artifact;
}

std::string Pipeline::retrieval_train_artifact() const {
  return config_.artifact(config_.separate_eval() ? kRetrievalTrain
                                                  : kRetrieval);
}

void Pipeline::write_config() const {
  fs::create_directories(config_.output_dir);
  auto out = open_output(config_.artifact("config.json"));
  out << config_to_json(config_).dump(2) << '\n';
}

void Pipeline::build_index() {
  StageTimer timer(log_, "build-index");
  const Corpus corpus = load_wiki(require(config_.wiki_path()));
  const auto claims = read_claims_checked(require(config_.claims_path()), log_);
  write_config();

  const TitleIndex index = TitleIndex::build(corpus);
  index.save(config_.artifact(kIndex));

  std::vector<std::string> texts;
  for (const auto &[id, page] : corpus.pages()) {
    for (const auto &s : page.sentences) {
      if (!s.text.empty()) texts.push_back(prepend_title(id, s.text));
    }
  }
  for (const auto &c : claims) texts.push_back(c.text);
  const Vocabulary vocab = Vocabulary::build(texts, config_.vocab_size);
  vocab.save(config_.artifact(kVocab));
  log_ << "indexed " << index.num_docs() << " pages, vocabulary "
       << vocab.size() << '\n';
}

void Pipeline::train_sentence() {
  StageTimer timer(log_, "train-sentence");
  const Corpus corpus = load_wiki(require(config_.wiki_path()));
  auto claims = read_claims_checked(require(config_.claims_path()), log_);
  const TitleIndex index = TitleIndex::load(require(config_.artifact(kIndex)));
  const Vocabulary vocab = Vocabulary::load(require(config_.artifact(kVocab)));
  if (const auto n = mark_unresolved_evidence(corpus, claims)) {
    log_ << "warning: " << n << " claims reference evidence outside the dump\n";
  }

  RetrieverTrainConfig cfg;
  cfg.loss = config_.mode;
  cfg.sampling = config_.sampling;
  cfg.encoder = config_.encoder;
  cfg.adam.learning_rate = config_.retriever_lr;
  cfg.epochs = config_.retriever_epochs;
  cfg.seed = config_.stage_seed(kStageTrainSentence);
  cfg.workers = config_.workers;

  const auto docs = docs_for(index, claims, config_.k_docs);
  const auto result = train_retriever(corpus, claims, docs, vocab, cfg);
  json meta = {{"role", "retriever"},
               {"mode", std::string(retrieval_loss_name(config_.mode))},
               {"sampling", std::string(sampling_name(config_.sampling))},
               {"epochs", result.log.epochs}};
  save_checkpoint(config_.artifact(kRetriever), result.params, meta);
  write_log(config_.artifact(kRetrieverLog), result.log);
  log_ << "retriever: " << result.log.step_losses.size() << " steps, "
       << result.log.epochs << " epochs, final loss "
       << (result.log.step_losses.empty() ? 0.0 : result.log.step_losses.back())
       << '\n';
}

void Pipeline::retrieve() {
  StageTimer timer(log_, "retrieve");
  const Corpus corpus = load_wiki(require(config_.wiki_path()));
  const TitleIndex index = TitleIndex::load(require(config_.artifact(kIndex)));
  const Vocabulary vocab = Vocabulary::load(require(config_.artifact(kVocab)));
  const Checkpoint ck = load_checkpoint(require(config_.artifact(kRetriever)));

  auto run_on = [&](const std::string &claims_path, const std::string &out) {
    const auto claims = read_claims_checked(require(claims_path), log_);
    std::vector<RetrievalPrediction> preds;
    for (const auto &claim : claims) {
      const auto docs = retrieve_docs(index, claim.text, config_.k_docs);
      auto candidates = gen_candidates(corpus, claim, docs);
      const auto output =
          rank_and_select(ck.params, vocab, claim, std::move(candidates),
                          config_.threshold, config_.workers);
      preds.push_back({claim.id, output.top5});
    }
    auto file = open_output(out);
    write_retrieval_predictions(preds, file);
  };
  run_on(config_.eval_claims_path(), config_.artifact(kRetrieval));
  if (config_.separate_eval()) {
    run_on(config_.claims_path(), config_.artifact(kRetrievalTrain));
  }
}

void Pipeline::train_verify() {
  StageTimer timer(log_, "train-verify");
  const Corpus corpus = load_wiki(require(config_.wiki_path()));
  const auto claims = read_claims_checked(require(config_.claims_path()), log_);
  const Vocabulary vocab = Vocabulary::load(require(config_.artifact(kVocab)));
  const auto retrieval =
      load_retrieval_predictions(require(retrieval_train_artifact()));

  const auto dataset = build_verify_dataset(corpus, claims, retrieval, vocab,
                                            config_.encoder.max_len);
  VerifierTrainConfig cfg;
  cfg.encoder = config_.encoder;
  cfg.encoder.vocab_size = vocab.size();
  cfg.adam.learning_rate = config_.verifier_lr;
  cfg.epochs = config_.verifier_epochs;
  cfg.seed = config_.stage_seed(kStageTrainVerify);
  cfg.workers = config_.workers;
  const auto result = train_verifier(dataset, cfg);
  save_checkpoint(config_.artifact(kVerifier), result.params,
                  {{"role", "verifier"}, {"epochs", cfg.epochs}});
  write_log(config_.artifact(kVerifierLog), result.log);
  log_ << "verifier: " << dataset.size() << " pairs, "
       << result.log.step_losses.size() << " steps\n";
}

void Pipeline::predict() {
  StageTimer timer(log_, "predict");
  const Corpus corpus = load_wiki(require(config_.wiki_path()));
  const auto claims =
      read_claims_checked(require(config_.eval_claims_path()), log_);
  const Vocabulary vocab = Vocabulary::load(require(config_.artifact(kVocab)));
  const auto retrieval =
      load_retrieval_predictions(require(config_.artifact(kRetrieval)));
  const Checkpoint ck = load_checkpoint(require(config_.artifact(kVerifier)));
  const auto preds = predict_claims(ck.params, vocab, corpus, claims,
                                    retrieval, config_.workers);
  auto out = open_output(config_.artifact(kPredictions));
  write_final_predictions(preds, out);
}

EvalReport Pipeline::score() {
  StageTimer timer(log_, "score");
  const auto claims =
      read_claims_checked(require(config_.eval_claims_path()), log_);
  const auto preds =
      load_final_predictions(require(config_.artifact(kPredictions)));
  const EvalReport report = fever_score(claims, preds);
  {
    auto out = open_output(config_.artifact(kReportJson));
    out << report_to_json(report).dump(2) << '\n';
  }
  auto text = open_output(config_.artifact(kReportText));
  text << format_report(report);
  log_ << format_report(report);
  return report;
}

void Pipeline::run_stage(std::string_view name) {
  if (name == "build-index") return build_index();
  if (name == "train-sentence") return train_sentence();
  if (name == "retrieve") return retrieve();
  if (name == "train-verify") return train_verify();
  if (name == "predict") return predict();
  if (name == "score") {
    score();
    return;
  }
  throw InvalidArgument("unknown stage '" + std::string(name) + "'");
}

EvalReport Pipeline::run_all() {
  build_index();
  train_sentence();
  retrieve();
  train_verify();
  predict();
  return score();
}

}  // namespace fever
