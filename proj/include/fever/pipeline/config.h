#ifndef FEVER_PIPELINE_CONFIG_H_
#define FEVER_PIPELINE_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>

#include "fever/encoder/config.h"
#include "fever/sentretrieval/trainer.h"
#include "json.hpp"

namespace fever {

struct PipelineConfig {
  // Inputs are resolved against data_root when relative.
  std::string data_root;
  std::string wiki = "wiki.jsonl";
  std::string claims = "claims.jsonl";
  std::string eval_claims;  // empty: evaluate on `claims`
  std::string output_dir = "fever_out";

  RetrievalLoss mode = RetrievalLoss::kPointwise;
  Sampling sampling = Sampling::kRandom;
  int k_docs = 7;
  std::optional<double> threshold;
  std::uint64_t seed = 0;
  std::optional<int> retriever_epochs;
  int verifier_epochs = 2;
  int workers = 1;
  int vocab_size = 8000;
  double retriever_lr = 1e-3;
  double verifier_lr = 1e-3;
  EncoderConfig encoder;  // vocab_size/num_classes/seed set per stage

  std::string wiki_path() const;
  std::string claims_path() const;
  std::string eval_claims_path() const;
  bool separate_eval() const;
  std::string artifact(const std::string &name) const;

  // Seed for pipeline stage `index` (0 = build-index).
  std::uint64_t stage_seed(int index) const {
    return seed + static_cast<std::uint64_t>(index);
  }

  // Throws InvalidArgument on closed-enum or range violations.
  void validate() const;
};

// Reads keys present in `j` on top of `base`. Unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json &j,
                                PipelineConfig base = {});
nlohmann::json config_to_json(const PipelineConfig &cfg);

// Loads a JSON config file. A relative data_root is taken relative to the
// file's directory; without one, FEVER_FORGE_DATA and then the file's
// directory are used.
PipelineConfig load_config(const std::string &path);

// Defaults with data_root from FEVER_FORGE_DATA (or the working directory).
PipelineConfig default_config();

}  // namespace fever

#endif  // FEVER_PIPELINE_CONFIG_H_
