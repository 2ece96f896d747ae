#include "fever/pipeline/config.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "fever/common/errors.h"

namespace fever {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string resolve(const std::string &root, const std::string &path) {
  if (path.empty() || fs::path(path).is_absolute() || root.empty()) return path;
  return (fs::path(root) / path).lexically_normal().string();
}

std::string env_data_root() {
  const char *v = std::getenv("FEVER_FORGE_DATA");
  return v ? std::string(v) : std::string();
}

}  // namespace

std::string PipelineConfig::wiki_path() const { return resolve(data_root, wiki); }
std::string PipelineConfig::claims_path() const {
  return resolve(data_root, claims);
}
std::string PipelineConfig::eval_claims_path() const {
  return separate_eval() ? resolve(data_root, eval_claims) : claims_path();
}
bool PipelineConfig::separate_eval() const {
  return !eval_claims.empty() && resolve(data_root, eval_claims) != claims_path();
}
std::string PipelineConfig::artifact(const std::string &name) const {
  return (fs::path(output_dir) / name).string();
}

void PipelineConfig::validate() const {
  if (k_docs < 1) throw InvalidArgument("k_docs must be at least 1");
  if (workers < 1) throw InvalidArgument("workers must be at least 1");
  if (retriever_epochs && *retriever_epochs < 1) {
    throw InvalidArgument("retriever_epochs must be at least 1");
  }
  if (verifier_epochs < 1) throw InvalidArgument("verifier_epochs must be >= 1");
  if (vocab_size < 4) throw InvalidArgument("vocab_size must be at least 4");
  if (!(retriever_lr > 0.0) || !(verifier_lr > 0.0)) {
    throw InvalidArgument("learning rates must be positive");
  }
  if (output_dir.empty()) throw InvalidArgument("output_dir is empty");
  EncoderConfig probe = encoder;
  probe.vocab_size = std::max(probe.vocab_size, 4);
  probe.num_classes = 2;
  probe.validate();
  if (probe.max_len < 8) throw InvalidArgument("encoder max_len must be >= 8");
}

PipelineConfig config_from_json(const json &j, PipelineConfig cfg) {
  static const std::set<std::string> kKeys = {
      "data_root", "wiki", "claims", "eval_claims", "output_dir", "mode",
      "sampling", "k_docs", "threshold", "seed", "retriever_epochs",
      "verifier_epochs", "workers", "vocab_size", "retriever_lr",
      "verifier_lr", "encoder"};
  for (const auto &[key, value] : j.items()) {
    if (!kKeys.contains(key)) throw InvalidArgument("unknown config key '" +
                                                    key + "'");
  }
  try {
    cfg.data_root = j.value("data_root", cfg.data_root);
    cfg.wiki = j.value("wiki", cfg.wiki);
    cfg.claims = j.value("claims", cfg.claims);
    cfg.eval_claims = j.value("eval_claims", cfg.eval_claims);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    if (j.contains("mode")) {
      const auto name = j.at("mode").get<std::string>();
      auto mode = parse_retrieval_loss(name);
      if (!mode) throw InvalidArgument("unknown mode '" + name + "'");
      cfg.mode = *mode;
    }
    if (j.contains("sampling")) {
      const auto name = j.at("sampling").get<std::string>();
      auto s = parse_sampling(name);
      if (!s) throw InvalidArgument("unknown sampling '" + name + "'");
      cfg.sampling = *s;
    }
    cfg.k_docs = j.value("k_docs", cfg.k_docs);
    if (j.contains("threshold")) {
      cfg.threshold = j.at("threshold").is_null()
                          ? std::nullopt
                          : std::optional<double>(j.at("threshold").get<double>());
    }
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("retriever_epochs")) {
      cfg.retriever_epochs =
          j.at("retriever_epochs").is_null()
              ? std::nullopt
              : std::optional<int>(j.at("retriever_epochs").get<int>());
    }
    cfg.verifier_epochs = j.value("verifier_epochs", cfg.verifier_epochs);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.vocab_size = j.value("vocab_size", cfg.vocab_size);
    cfg.retriever_lr = j.value("retriever_lr", cfg.retriever_lr);
    cfg.verifier_lr = j.value("verifier_lr", cfg.verifier_lr);
    if (j.contains("encoder")) {
      json merged = cfg.encoder;
      merged.update(j.at("encoder"));
      cfg.encoder = merged.get<EncoderConfig>();
    }
  } catch (const json::exception &e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

json config_to_json(const PipelineConfig &cfg) {
  return json{
      {"data_root", cfg.data_root},
      {"wiki", cfg.wiki},
      {"claims", cfg.claims},
      {"eval_claims", cfg.eval_claims},
      {"output_dir", cfg.output_dir},
      {"mode", std::string(retrieval_loss_name(cfg.mode))},
      {"sampling", std::string(sampling_name(cfg.sampling))},
      {"k_docs", cfg.k_docs},
      {"threshold", cfg.threshold ? json(*cfg.threshold) : json(nullptr)},
      {"seed", cfg.seed},
      {"retriever_epochs",
       cfg.retriever_epochs ? json(*cfg.retriever_epochs) : json(nullptr)},
      {"verifier_epochs", cfg.verifier_epochs},
      {"workers", cfg.workers},
      {"vocab_size", cfg.vocab_size},
      {"retriever_lr", cfg.retriever_lr},
      {"verifier_lr", cfg.verifier_lr},
      {"encoder", cfg.encoder}};
}

PipelineConfig default_config() {
  PipelineConfig cfg;
  cfg.data_root = env_data_root();
  return cfg;
}

PipelineConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw InvalidArgument("config " + path + ": " + e.what());
  }
  const fs::path dir = fs::absolute(path).parent_path();
  PipelineConfig cfg = config_from_json(j, default_config());
  if (j.contains("data_root")) {
    cfg.data_root = resolve(dir.string(), cfg.data_root);
  } else if (cfg.data_root.empty()) {
    cfg.data_root = dir.string();
  }
  return cfg;
}

}  // namespace fever
