#ifndef FEVER_PIPELINE_PIPELINE_H_
#define FEVER_PIPELINE_PIPELINE_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fever/metrics/metrics.h"
#include "fever/pipeline/config.h"

namespace fever {

// Stage order of a full run. Each stage reads the artifacts of earlier
// stages from the output directory, so any stage can be rerun on its own.
const std::vector<std::string> &stage_names();

class Pipeline {
 public:
  Pipeline(PipelineConfig config, std::ostream &log);

  // Writes index.jsonl and vocab.txt.
  void build_index();
  // Writes retriever.ckpt and retriever_log.csv.
  void train_sentence();
  // Writes retrieval.jsonl (evaluation claims) and, when training and
  // evaluation claims differ, retrieval_train.jsonl.
  void retrieve();
  // Writes verifier.ckpt and verifier_log.csv.
  void train_verify();
  // Writes predictions.jsonl.
  void predict();
  // Writes report.json and report.txt.
  EvalReport score();

  void run_stage(std::string_view name);
  // Every stage in order; returns the final report.
  EvalReport run_all();

  const PipelineConfig &config() const { return config_; }

 private:
  std::string require(const std::string &artifact) const;
  std::string retrieval_train_artifact() const;
  void write_config() const;

  PipelineConfig config_;
  std::ostream &log_;
};

}  // namespace fever

#endif  // FEVER_PIPELINE_PIPELINE_H_
