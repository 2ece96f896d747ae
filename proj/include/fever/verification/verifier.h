#ifndef FEVER_VERIFICATION_VERIFIER_H_
#define FEVER_VERIFICATION_VERIFIER_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fever/corpus/corpus.h"
#include "fever/encoder/adam.h"
#include "fever/encoder/model.h"
#include "fever/sentretrieval/ranking.h"
#include "fever/sentretrieval/trainer.h"
#include "fever/tokenizer/tokenizer.h"

namespace fever {

// Class index order is also the argmax tie order.
enum class Verdict { kSupported = 0, kRefuted = 1, kNotEnoughInfo = 2 };

inline constexpr int kNumVerdicts = 3;

Label verdict_label(Verdict v);
Verdict verdict_from_label(Label label);  // kUnknown -> kNotEnoughInfo

// SUPPORTED if any element is SUPPORTED, otherwise REFUTED if any element
// is REFUTED, otherwise NOT ENOUGH INFO (also for an empty list).
Verdict aggregate_verdict(std::span<const Verdict> verdicts);

// Unencoded training pair: one of a claim's retrieved sentences.
struct VerifyPair {
  std::int64_t claim_id = 0;
  std::string page_id;
  int sentence_index = 0;
  Verdict target = Verdict::kNotEnoughInfo;

  bool operator==(const VerifyPair &) const = default;
};

// Pairs every retrieved sentence of a claim with the claim. The target is
// the claim's label when the claim is SUPPORTED/REFUTED and the sentence
// is in one of its gold groups, NOT ENOUGH INFO otherwise. Claims without
// a retrieval prediction or with an UNKNOWN label contribute nothing.
std::vector<VerifyPair> build_verify_pairs(
    std::span<const Claim> claims,
    std::span<const RetrievalPrediction> retrieval);

struct VerifyExample {
  EncodedPair input;
  Verdict target = Verdict::kNotEnoughInfo;
};

// Encodes (title-prepended sentence, claim). Pairs whose sentence is not in
// the corpus are dropped.
std::vector<VerifyExample> build_verify_dataset(
    const Corpus &corpus, std::span<const Claim> claims,
    std::span<const RetrievalPrediction> retrieval, const Vocabulary &vocab,
    int max_len);

struct VerifierTrainConfig {
  EncoderConfig encoder;  // num_classes forced to 3
  AdamConfig adam;
  int epochs = 2;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct VerifierTrainResult {
  ModelParams params;
  TrainLog log;
};

// Three-way cross entropy over shuffled mini-batches. Throws
// InvalidArgument on an empty dataset.
VerifierTrainResult train_verifier(std::span<const VerifyExample> dataset,
                                   const VerifierTrainConfig &cfg);

struct PairVerdict {
  Verdict verdict = Verdict::kNotEnoughInfo;
  std::array<double, kNumVerdicts> probs{};
};

// Argmax of the softmax; ties resolve SUPPORTED, then REFUTED, then NEI.
Verdict argmax_verdict(std::span<const double> probs);

PairVerdict classify_pair(const ModelParams &params, const Vocabulary &vocab,
                          std::string_view evidence_text,
                          std::string_view claim_text);

std::vector<PairVerdict> classify_batch(const ModelParams &params,
                                        std::span<const EncodedPair> inputs,
                                        int workers = 1);

struct FinalPrediction {
  std::int64_t claim_id = 0;
  Label label = Label::kNotEnoughInfo;
  std::vector<EvidenceCoord> evidence;

  bool operator==(const FinalPrediction &) const = default;
};

// Classifies each retrieved sentence against its claim and aggregates.
// Every claim gets a prediction; claims without retrieval output get NEI.
std::vector<FinalPrediction> predict_claims(
    const ModelParams &params, const Vocabulary &vocab, const Corpus &corpus,
    std::span<const Claim> claims,
    std::span<const RetrievalPrediction> retrieval, int workers = 1);

// {"id", "predicted_label", "predicted_evidence": [[page, index], ...]}
void write_final_predictions(std::span<const FinalPrediction> preds,
                             std::ostream &out);
std::vector<FinalPrediction> read_final_predictions(std::istream &in);
std::vector<FinalPrediction> load_final_predictions(const std::string &path);

}  // namespace fever

#endif  // FEVER_VERIFICATION_VERIFIER_H_
