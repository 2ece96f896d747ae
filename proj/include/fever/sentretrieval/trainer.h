#ifndef FEVER_SENTRETRIEVAL_TRAINER_H_
#define FEVER_SENTRETRIEVAL_TRAINER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fever/corpus/corpus.h"
#include "fever/encoder/adam.h"
#include "fever/encoder/model.h"
#include "fever/tokenizer/tokenizer.h"

namespace fever {

enum class RetrievalLoss { kPointwise, kRankNet, kHinge };
enum class Sampling { kRandom, kHnm };

std::string_view retrieval_loss_name(RetrievalLoss loss);
std::optional<RetrievalLoss> parse_retrieval_loss(std::string_view name);
std::string_view sampling_name(Sampling sampling);
std::optional<Sampling> parse_sampling(std::string_view name);

inline bool is_pairwise(RetrievalLoss loss) {
  return loss != RetrievalLoss::kPointwise;
}

struct RetrieverTrainConfig {
  RetrievalLoss loss = RetrievalLoss::kPointwise;
  Sampling sampling = Sampling::kRandom;
  // vocab_size and num_classes are filled in by the trainer.
  EncoderConfig encoder;
  AdamConfig adam;
  // Unset: one epoch, three for pairwise training with mining.
  std::optional<int> epochs;
  std::size_t positives_per_batch = 16;
  std::size_t negatives_per_batch = 16;
  std::size_t negative_pool = 64;  // pointwise mining
  std::size_t pairs_per_batch = 32;
  std::size_t pair_pool = 128;     // pairwise mining
  std::uint64_t seed = 0;
  int workers = 1;

  int resolved_epochs() const;
};

struct TrainLog {
  std::vector<double> step_losses;
  int epochs = 0;
};

struct RetrieverTrainResult {
  ModelParams params;
  TrainLog log;
};

// Trains from encoded positives and negatives. Pointwise batches hold up to
// 16 positives (cycled, so every batch of an epoch is full when enough
// positives exist) and 16 negatives, random or mined from a pool of 64.
// Pairwise batches hold 32 (positive, negative) pairs; with mining each
// positive meets pair_pool / pairs_per_batch random negatives and the 32
// hardest pairs are kept. Throws InvalidArgument without positives or
// negatives.
RetrieverTrainResult train_retriever(std::span<const EncodedPair> positives,
                                     std::span<const EncodedPair> negatives,
                                     const RetrieverTrainConfig &cfg);

struct RetrievalTrainingSet {
  std::vector<EncodedPair> positives;
  std::vector<EncodedPair> negatives;
};

// Candidates of every labelled claim over its retrieved documents, encoded
// as (title-prepended sentence, claim).
RetrievalTrainingSet build_retrieval_training_set(
    const Corpus &corpus, std::span<const Claim> claims,
    std::span<const std::vector<std::string>> docs_per_claim,
    const Vocabulary &vocab, int max_len);

RetrieverTrainResult train_retriever(
    const Corpus &corpus, std::span<const Claim> claims,
    std::span<const std::vector<std::string>> docs_per_claim,
    const Vocabulary &vocab, const RetrieverTrainConfig &cfg);

}  // namespace fever

#endif  // FEVER_SENTRETRIEVAL_TRAINER_H_
