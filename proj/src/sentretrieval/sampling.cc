#include "fever/sentretrieval/sampling.h"

#include <algorithm>
#include <numeric>

#include "fever/common/errors.h"
#include "fever/sentretrieval/losses.h"

namespace fever {

std::vector<std::size_t> sample_random_negatives(std::size_t pool_size,
                                                 Rng &rng,
                                                 std::size_t count) {
  std::vector<std::size_t> idx(pool_size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t take = std::min(count, pool_size);
  // Partial Fisher-Yates: the first `take` slots are the sample.
  for (std::size_t i = 0; i < take; ++i) {
    std::swap(idx[i], idx[i + rng.index(pool_size - i)]);
  }
  idx.resize(take);
  return idx;
}

std::vector<std::size_t> select_hardest(std::span<const double> losses,
                                        std::size_t count) {
  std::vector<std::size_t> order(losses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return losses[a] > losses[b];
                   });
  order.resize(std::min(count, order.size()));
  return order;
}

PointwiseSelection hnm_select_pointwise(const ModelParams &params,
                                        std::span<const EncodedPair> positives,
                                        std::span<const EncodedPair> pool,
                                        std::size_t keep, int workers) {
  if (params.config.num_classes != 2) {
    throw InvalidArgument("pointwise mining needs the two-way head");
  }
  const Matrix logits = infer(params, pool, workers);
  const std::vector<int> targets(pool.size(), kNonEvidenceClass);
  const auto losses = cross_entropy_per_row(logits, targets);

  PointwiseSelection out;
  out.chosen = select_hardest(losses, keep);
  for (const auto &p : positives) {
    out.batch.inputs.push_back(p);
    out.batch.targets.push_back(kEvidenceClass);
  }
  for (std::size_t i : out.chosen) {
    out.batch.inputs.push_back(pool[i]);
    out.batch.targets.push_back(kNonEvidenceClass);
  }
  return out;
}

PairSelection hnm_select_pairwise(
    const ModelParams &params, LossKind kind,
    std::span<const std::pair<EncodedPair, EncodedPair>> pool,
    std::size_t keep, int workers) {
  std::vector<EncodedPair> flat;
  flat.reserve(2 * pool.size());
  std::vector<std::pair<int, int>> rows;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    flat.push_back(pool[i].first);
    flat.push_back(pool[i].second);
    rows.emplace_back(static_cast<int>(2 * i), static_cast<int>(2 * i + 1));
  }
  const Matrix logits = infer(params, flat, workers);
  const auto losses = pair_loss_per_pair(kind, logits, rows);

  PairSelection out;
  out.chosen = select_hardest(losses, keep);
  for (std::size_t i : out.chosen) {
    const int base = static_cast<int>(out.batch.inputs.size());
    out.batch.inputs.push_back(pool[i].first);
    out.batch.inputs.push_back(pool[i].second);
    out.batch.pairs.emplace_back(base, base + 1);
  }
  return out;
}

}  // namespace fever
