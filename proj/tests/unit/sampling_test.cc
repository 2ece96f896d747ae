#include <algorithm>
#include <set>

#include "doctest.h"
#include "fever/common/errors.h"
#include "fever/sentretrieval/losses.h"
#include "fever/sentretrieval/sampling.h"
#include "support/fixtures.h"
#include "support/oracles.h"

using namespace fever;
using namespace fever::testing;

TEST_CASE("random negatives: clamp, determinism, distinctness") {
  Rng a(5);
  const auto all = sample_random_negatives(10, a, 16);
  CHECK(all.size() == 10);
  CHECK(std::set<std::size_t>(all.begin(), all.end()).size() == 10);

  Rng b(9), c(9);
  const auto x = sample_random_negatives(64, b, 16);
  CHECK(x == sample_random_negatives(64, c, 16));
  CHECK(std::set<std::size_t>(x.begin(), x.end()).size() == 16);
  for (auto i : x) CHECK(i < 64);
}

TEST_CASE("select_hardest matches the rank-counting oracle") {
  const std::vector<double> losses = {.9, .1, .8, .8, .3, .95, .1, .8};
  CHECK(select_hardest(losses, 4) == oracle_top_by_rank(losses, 4));
  CHECK(select_hardest(losses, 4) ==
        std::vector<std::size_t>{5, 0, 2, 3});
  const std::vector<double> flat(40, 0.5);
  const auto first = select_hardest(flat, 16);
  for (std::size_t i = 0; i < 16; ++i) CHECK(first[i] == i);
  CHECK(select_hardest(losses, 100).size() == losses.size());
}

TEST_CASE("pointwise mining keeps the hardest negatives") {
  const EncoderConfig cfg = tiny_config(2, 3);
  const ModelParams p = random_params(cfg, 3, 0.4);
  Rng rng(12);
  const auto positives = random_pairs(rng, cfg, 16);
  auto pool = random_pairs(rng, cfg, 64);
  pool[10] = pool[40];  // exact tie
  const auto sel = hnm_select_pointwise(p, positives, pool);
  CHECK(sel.chosen == oracle_hnm_pointwise(p, pool, 16));
  REQUIRE(sel.batch.inputs.size() == 32);
  CHECK(std::count(sel.batch.targets.begin(), sel.batch.targets.end(),
                   kEvidenceClass) == 16);
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(sel.batch.inputs[16 + i] == pool[sel.chosen[i]]);
  }
  CHECK(hnm_select_pointwise(p, positives, pool).chosen == sel.chosen);
}

TEST_CASE("pointwise mining on an all-equal pool keeps input order") {
  const EncoderConfig cfg = tiny_config(2, 3);
  const ModelParams p = random_params(cfg, 3, 0.4);
  Rng rng(2);
  const auto positives = random_pairs(rng, cfg, 2);
  const std::vector<EncodedPair> pool(64, random_pair(rng, cfg));
  const auto sel = hnm_select_pointwise(p, positives, pool);
  for (std::size_t i = 0; i < 16; ++i) CHECK(sel.chosen[i] == i);
}

TEST_CASE("pairwise mining matches the oracle for both losses") {
  const EncoderConfig cfg = tiny_config(1, 5);
  const ModelParams p = random_params(cfg, 5, 0.4);
  Rng rng(21);
  std::vector<std::pair<EncodedPair, EncodedPair>> pool;
  for (int i = 0; i < 128; ++i) {
    pool.emplace_back(random_pair(rng, cfg), random_pair(rng, cfg));
  }
  for (auto kind : {LossKind::kRankNet, LossKind::kHinge}) {
    const auto sel = hnm_select_pairwise(p, kind, pool);
    CHECK(sel.chosen == oracle_hnm_pairwise(p, kind, pool, 32));
    REQUIRE(sel.batch.pairs.size() == 32);
    CHECK(sel.batch.inputs[2 * 5] == pool[sel.chosen[5]].first);
    CHECK(sel.batch.inputs[2 * 5 + 1] == pool[sel.chosen[5]].second);
    CHECK(hnm_select_pairwise(p, kind, pool).chosen == sel.chosen);
  }
}

TEST_CASE("pointwise mining needs the two-way head") {
  const EncoderConfig cfg = tiny_config(1, 5);
  const ModelParams p = init_params(cfg);
  Rng rng(2);
  const auto pool = random_pairs(rng, cfg, 4);
  CHECK_THROWS_AS(hnm_select_pointwise(p, pool, pool), InvalidArgument);
}
