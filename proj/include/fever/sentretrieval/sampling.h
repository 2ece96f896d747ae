#ifndef FEVER_SENTRETRIEVAL_SAMPLING_H_
#define FEVER_SENTRETRIEVAL_SAMPLING_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fever/common/random.h"
#include "fever/encoder/model.h"
#include "fever/tokenizer/tokenizer.h"

namespace fever {

struct PointwiseBatch {
  std::vector<EncodedPair> inputs;
  std::vector<int> targets;  // kEvidenceClass / kNonEvidenceClass
};

// Row 2i is the positive and row 2i+1 the negative of pair i.
struct PairBatch {
  std::vector<EncodedPair> inputs;
  std::vector<std::pair<int, int>> pairs;
};

// `count` distinct indices drawn uniformly from [0, pool_size), or all of
// them (in random order) when the pool is smaller.
std::vector<std::size_t> sample_random_negatives(std::size_t pool_size,
                                                 Rng &rng, std::size_t count);

// Indices of the `count` largest losses, largest first; equal losses keep
// input order.
std::vector<std::size_t> select_hardest(std::span<const double> losses,
                                        std::size_t count);

struct PointwiseSelection {
  PointwiseBatch batch;
  std::vector<std::size_t> chosen;  // indices into the negative pool
};

// Scores the negative pool with frozen params (no dropout, no gradient)
// and returns the positives followed by the `keep` negatives whose
// non-evidence cross entropy is highest.
PointwiseSelection hnm_select_pointwise(const ModelParams &params,
                                        std::span<const EncodedPair> positives,
                                        std::span<const EncodedPair> pool,
                                        std::size_t keep = 16, int workers = 1);

struct PairSelection {
  PairBatch batch;
  std::vector<std::size_t> chosen;  // indices into the pair pool
};

// Scores every (positive, negative) pair with frozen params and keeps the
// `keep` pairs with the highest pair loss.
PairSelection hnm_select_pairwise(
    const ModelParams &params, LossKind kind,
    std::span<const std::pair<EncodedPair, EncodedPair>> pool,
    std::size_t keep = 32, int workers = 1);

}  // namespace fever

#endif  // FEVER_SENTRETRIEVAL_SAMPLING_H_
