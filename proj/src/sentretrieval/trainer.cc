#include "fever/sentretrieval/trainer.h"

#include <algorithm>
#include <numeric>

#include "fever/common/errors.h"
#include "fever/common/random.h"
#include "fever/sentretrieval/candidates.h"
#include "fever/sentretrieval/losses.h"
#include "fever/sentretrieval/sampling.h"

namespace fever {

std::string_view retrieval_loss_name(RetrievalLoss loss) {
  switch (loss) {
    case RetrievalLoss::kPointwise: return "pointwise";
    case RetrievalLoss::kRankNet: return "ranknet";
    case RetrievalLoss::kHinge: return "hinge";
  }
  return "pointwise";
}

std::optional<RetrievalLoss> parse_retrieval_loss(std::string_view name) {
  if (name == "pointwise") return RetrievalLoss::kPointwise;
  if (name == "ranknet") return RetrievalLoss::kRankNet;
  if (name == "hinge") return RetrievalLoss::kHinge;
  return std::nullopt;
}

std::string_view sampling_name(Sampling sampling) {
  return sampling == Sampling::kHnm ? "hnm" : "random";
}

std::optional<Sampling> parse_sampling(std::string_view name) {
  if (name == "random") return Sampling::kRandom;
  if (name == "hnm") return Sampling::kHnm;
  return std::nullopt;
}

int RetrieverTrainConfig::resolved_epochs() const {
  if (epochs) return *epochs;
  return is_pairwise(loss) && sampling == Sampling::kHnm ? 3 : 1;
}

namespace {

LossKind loss_kind(RetrievalLoss loss) {
  switch (loss) {
    case RetrievalLoss::kPointwise: return LossKind::kCrossEntropy;
    case RetrievalLoss::kRankNet: return LossKind::kRankNet;
    case RetrievalLoss::kHinge: return LossKind::kHinge;
  }
  return LossKind::kCrossEntropy;
}

template <typename T>
std::vector<T> gather(std::span<const T> items,
                      std::span<const std::size_t> idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(items[i]);
  return out;
}

}  // namespace

RetrieverTrainResult train_retriever(std::span<const EncodedPair> positives,
                                     std::span<const EncodedPair> negatives,
                                     const RetrieverTrainConfig &cfg) {
  if (positives.empty()) {
    throw InvalidArgument("train_retriever: no positive candidates");
  }
  if (negatives.empty()) {
    throw InvalidArgument("train_retriever: no negative candidates");
  }
  const bool pairwise = is_pairwise(cfg.loss);
  const bool mining = cfg.sampling == Sampling::kHnm;
  EncoderConfig enc = cfg.encoder;
  enc.num_classes = pairwise ? 1 : 2;
  enc.seed = cfg.seed;

  RetrieverTrainResult result;
  result.params = init_params(enc);
  ModelParams &params = result.params;
  OptState opt = init_opt_state(params, cfg.adam);
  Rng rng(cfg.seed + 1);
  const LossKind kind = loss_kind(cfg.loss);

  const std::size_t per_batch =
      pairwise ? cfg.pairs_per_batch : cfg.positives_per_batch;
  const std::size_t num_pos = positives.size();
  const std::size_t batches = (num_pos + per_batch - 1) / per_batch;
  const std::size_t pos_in_batch = std::min(per_batch, num_pos);
  const int epochs = cfg.resolved_epochs();
  result.log.epochs = epochs;

  std::vector<std::size_t> order(num_pos);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t step = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t b = 0; b < batches; ++b) {
      std::vector<std::size_t> pos_idx(pos_in_batch);
      for (std::size_t i = 0; i < pos_in_batch; ++i) {
        pos_idx[i] = order[(b * per_batch + i) % num_pos];
      }
      const auto pos = gather(positives, std::span<const std::size_t>(pos_idx));

      std::vector<EncodedPair> inputs;
      LossTarget target;
      target.kind = kind;
      if (!pairwise) {
        const std::size_t draw =
            mining ? cfg.negative_pool : cfg.negatives_per_batch;
        const auto neg_idx =
            sample_random_negatives(negatives.size(), rng, draw);
        const auto pool =
            gather(negatives, std::span<const std::size_t>(neg_idx));
        PointwiseBatch batch;
        if (mining) {
          batch = hnm_select_pointwise(params, pos, pool,
                                       cfg.negatives_per_batch, cfg.workers)
                      .batch;
        } else {
          batch.inputs = pos;
          batch.targets.assign(pos.size(), kEvidenceClass);
          for (const auto &n : pool) {
            batch.inputs.push_back(n);
            batch.targets.push_back(kNonEvidenceClass);
          }
        }
        inputs = std::move(batch.inputs);
        target.classes = std::move(batch.targets);
      } else {
        const std::size_t per_pos =
            mining ? std::max<std::size_t>(1, cfg.pair_pool / per_batch) : 1;
        const auto neg_idx =
            sample_random_negatives(negatives.size(), rng, per_pos * pos.size());
        std::vector<std::pair<EncodedPair, EncodedPair>> pool;
        for (std::size_t j = 0; j < neg_idx.size(); ++j) {
          pool.emplace_back(pos[(j / per_pos) % pos.size()],
                            negatives[neg_idx[j]]);
        }
        PairBatch batch;
        if (mining) {
          batch = hnm_select_pairwise(params, kind, pool, per_batch,
                                      cfg.workers)
                      .batch;
        } else {
          for (auto &[p, n] : pool) {
            const int base = static_cast<int>(batch.inputs.size());
            batch.inputs.push_back(std::move(p));
            batch.inputs.push_back(std::move(n));
            batch.pairs.emplace_back(base, base + 1);
          }
        }
        inputs = std::move(batch.inputs);
        target.pairs = std::move(batch.pairs);
      }

      ForwardOptions fwd;
      fwd.train_mode = true;
      fwd.step = step++;
      fwd.workers = cfg.workers;
      const auto result_fwd = forward(params, inputs, fwd);
      auto lg = loss_and_grads(params, result_fwd.cache, result_fwd.logits,
                               target, cfg.workers);
      adam_step(params, lg.grads, opt);
      result.log.step_losses.push_back(lg.loss);
    }
  }
  return result;
}

RetrievalTrainingSet build_retrieval_training_set(
    const Corpus &corpus, std::span<const Claim> claims,
    std::span<const std::vector<std::string>> docs_per_claim,
    const Vocabulary &vocab, int max_len) {
  if (claims.size() != docs_per_claim.size()) {
    throw InvalidArgument("one document list per claim required");
  }
  RetrievalTrainingSet set;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    const Claim &claim = claims[i];
    if (claim.label == Label::kUnknown) continue;
    for (const auto &c : gen_candidates(corpus, claim, docs_per_claim[i])) {
      auto encoded = encode_pair(vocab, c.text, claim.text, max_len);
      if (c.is_evidence.value_or(false)) {
        set.positives.push_back(std::move(encoded));
      } else {
        set.negatives.push_back(std::move(encoded));
      }
    }
  }
  return set;
}

RetrieverTrainResult train_retriever(
    const Corpus &corpus, std::span<const Claim> claims,
    std::span<const std::vector<std::string>> docs_per_claim,
    const Vocabulary &vocab, const RetrieverTrainConfig &cfg) {
  EncoderConfig enc = cfg.encoder;
  enc.vocab_size = vocab.size();
  RetrieverTrainConfig resolved = cfg;
  resolved.encoder = enc;
  const auto set = build_retrieval_training_set(corpus, claims, docs_per_claim,
                                                vocab, enc.max_len);
  return train_retriever(set.positives, set.negatives, resolved);
}

}  // namespace fever
