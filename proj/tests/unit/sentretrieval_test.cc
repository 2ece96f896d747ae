#include <sstream>

#include "doctest.h"
#include "fever/common/errors.h"
#include "fever/sentretrieval/candidates.h"
#include "fever/sentretrieval/losses.h"
#include "fever/sentretrieval/ranking.h"
#include "fever/sentretrieval/trainer.h"
#include "support/fixtures.h"

using namespace fever;

namespace {

Corpus five_sentence_corpus() {
  Corpus c;
  c.add_page({"P", {{0, "zero"}, {1, "one"}, {2, "two"}, {3, "three"},
                    {4, "four"}, {5, ""}}});
  c.add_page({"Q", {{0, "other"}}});
  return c;
}

std::vector<Candidate> scored(std::vector<double> scores) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    Candidate c;
    c.page_id = "P";
    c.sentence_index = static_cast<int>(i);
    c.score = scores[i];
    out.push_back(c);
  }
  return out;
}

// Positives repeat the claim's marker word; negatives carry none.
struct MarkerData {
  Vocabulary vocab;
  std::vector<EncodedPair> positives, negatives;
};

MarkerData marker_data(int max_len) {
  const std::vector<std::string> markers = {"alpha", "beta", "gamma",
                                            "delta", "omega", "kappa"};
  const std::vector<std::string> filler = {"the", "city", "has", "a",
                                           "river", "and", "hills"};
  std::vector<std::string> texts;
  for (const auto &m : markers) texts.push_back(m);
  for (const auto &f : filler) texts.push_back(f);
  MarkerData d{Vocabulary::build(texts, 64), {}, {}};
  Rng rng(17);
  for (int i = 0; i < 96; ++i) {
    const std::string &m = markers[rng.index(markers.size())];
    const std::string &other = filler[rng.index(filler.size())];
    std::string body;
    for (int w = 0; w < 3; ++w) body += filler[rng.index(filler.size())] + " ";
    const std::string claim = "the " + m + " city";
    d.positives.push_back(encode_pair(d.vocab, body + m, claim, max_len));
    d.negatives.push_back(encode_pair(d.vocab, body + other, claim, max_len));
  }
  return d;
}

EncoderConfig small_encoder() {
  EncoderConfig cfg;
  cfg.num_layers = 1;
  cfg.hidden_dim = 16;
  cfg.num_heads = 2;
  cfg.ffn_dim = 32;
  cfg.max_len = 16;
  cfg.dropout_rate = 0.0;
  return cfg;
}

double mean_score(const ModelParams &p, std::span<const EncodedPair> xs) {
  const Matrix logits = infer(p, xs);
  Matrix s = logits;
  if (logits.cols() == 2) s = softmax_rows(logits);
  double total = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) total += row_score(s, i);
  return total / static_cast<double>(s.rows());
}

}  // namespace

TEST_CASE("gen_candidates marks gold sentences and skips empty ones") {
  const Corpus corpus = five_sentence_corpus();
  Claim claim = fever::testing::make_claim(1, Label::kSupported,
                                           {{{"P", 3}}});
  const std::vector<std::string> docs = {"P"};
  const auto cands = gen_candidates(corpus, claim, docs);
  REQUIRE(cands.size() == 5);
  int positives = 0;
  for (const auto &c : cands) positives += c.is_evidence.value() ? 1 : 0;
  CHECK(positives == 1);
  CHECK(cands[3].is_evidence.value());
  CHECK(cands[3].text == "P . three");

  const std::vector<std::string> other = {"Q", "Missing"};
  const auto neg = gen_candidates(corpus, claim, other);
  REQUIRE(neg.size() == 1);
  CHECK_FALSE(neg[0].is_evidence.value());

  claim.label = Label::kUnknown;
  CHECK_FALSE(gen_candidates(corpus, claim, docs)[0].is_evidence.has_value());
}

TEST_CASE("select_top keeps the five best") {
  const auto out = select_top(1, scored({.9, .8, .7, .6, .5, .4, .3}),
                              std::nullopt);
  REQUIRE(out.top5.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(out.top5[i].sentence_index == i);
  CHECK(out.ranked.size() == 7);

  const auto cut = select_top(1, scored({.9, .8, .7, .6, .5, .4, .3}), 0.65);
  CHECK(cut.top5.size() == 3);
  const auto cut2 = select_top(1, scored({.9, .8, .7, .66, .5}), 0.65);
  CHECK(cut2.top5.size() == 4);

  CHECK(select_top(1, {}, 0.1).top5.empty());
  CHECK(select_top(1, scored({.5, .5, .9}), std::nullopt).top5[1].sentence_index == 0);

  auto unscored = scored({.1});
  unscored[0].score.reset();
  CHECK_THROWS_AS(select_top(1, unscored, std::nullopt), InvalidArgument);
}

TEST_CASE("apply_threshold equals rethresholding the full ranking") {
  const auto cands = scored({.91, .15, .77, .42, .42, .66, .05, .88});
  const auto full = select_top(1, cands, std::nullopt);
  for (double t : {-1.0, 0.1, 0.42, 0.5, 0.8, 0.95}) {
    CHECK(apply_threshold(full.top5, t) == select_top(1, cands, t).top5);
  }
}

TEST_CASE("retrieval predictions round-trip") {
  std::vector<RetrievalPrediction> preds = {
      {3, {{"A_-LRB-b-RRB-", 2, 0.75}, {"C", 0, -1.5e-7}}}, {4, {}}};
  std::stringstream ss;
  write_retrieval_predictions(preds, ss);
  CHECK(read_retrieval_predictions(ss) == preds);
}

TEST_CASE("training separates a marker corpus in every mode") {
  const auto data = marker_data(16);
  for (auto loss : {RetrievalLoss::kPointwise, RetrievalLoss::kRankNet,
                    RetrievalLoss::kHinge}) {
    for (auto sampling : {Sampling::kRandom, Sampling::kHnm}) {
      RetrieverTrainConfig cfg;
      cfg.loss = loss;
      cfg.sampling = sampling;
      cfg.encoder = small_encoder();
      cfg.encoder.vocab_size = data.vocab.size();
      cfg.epochs = 6;
      cfg.seed = 4;
      cfg.adam.learning_rate = 3e-3;
      const auto r = train_retriever(data.positives, data.negatives, cfg);
      INFO(retrieval_loss_name(loss) << "/" << sampling_name(sampling));
      CHECK(r.log.epochs == 6);
      CHECK(mean_score(r.params, data.positives) >
            mean_score(r.params, data.negatives));
      CHECK(r.params.config.num_classes == (is_pairwise(loss) ? 1 : 2));
    }
  }
}

TEST_CASE("training lowers the loss on a fixed batch and is reproducible") {
  const auto data = marker_data(16);
  RetrieverTrainConfig cfg;
  cfg.encoder = small_encoder();
  cfg.encoder.vocab_size = data.vocab.size();
  cfg.epochs = 4;
  cfg.seed = 9;
  cfg.adam.learning_rate = 3e-3;
  const auto a = train_retriever(data.positives, data.negatives, cfg);
  const auto b = train_retriever(data.positives, data.negatives, cfg);
  CHECK(a.log.step_losses == b.log.step_losses);

  std::vector<EncodedPair> eval(data.positives.begin(),
                                data.positives.begin() + 16);
  eval.insert(eval.end(), data.negatives.begin(), data.negatives.begin() + 16);
  std::vector<int> targets(16, kEvidenceClass);
  targets.resize(32, kNonEvidenceClass);
  EncoderConfig init_cfg = a.params.config;
  const ModelParams start = init_params(init_cfg);
  const double before = pointwise_loss(softmax_rows(infer(start, eval)), targets);
  const double after =
      pointwise_loss(softmax_rows(infer(a.params, eval)), targets);
  CHECK(after <= before);
}

TEST_CASE("epoch defaults") {
  RetrieverTrainConfig cfg;
  CHECK(cfg.resolved_epochs() == 1);
  cfg.loss = RetrievalLoss::kHinge;
  CHECK(cfg.resolved_epochs() == 1);
  cfg.sampling = Sampling::kHnm;
  CHECK(cfg.resolved_epochs() == 3);
  cfg.epochs = 5;
  CHECK(cfg.resolved_epochs() == 5);
  CHECK(parse_retrieval_loss("ranknet") == RetrievalLoss::kRankNet);
  CHECK_FALSE(parse_sampling("greedy").has_value());
}

TEST_CASE("training without negatives is rejected") {
  const auto data = marker_data(16);
  RetrieverTrainConfig cfg;
  cfg.encoder = small_encoder();
  cfg.encoder.vocab_size = data.vocab.size();
  CHECK_THROWS_AS(train_retriever(data.positives, {}, cfg), InvalidArgument);
}
