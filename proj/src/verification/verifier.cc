#include "fever/verification/verifier.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include "fever/common/errors.h"
#include "fever/common/random.h"
#include "json.hpp"

namespace fever {

using json = nlohmann::json;

Label verdict_label(Verdict v) {
  switch (v) {
    case Verdict::kSupported: return Label::kSupported;
    case Verdict::kRefuted: return Label::kRefuted;
    case Verdict::kNotEnoughInfo: return Label::kNotEnoughInfo;
  }
  return Label::kNotEnoughInfo;
}

Verdict verdict_from_label(Label label) {
  switch (label) {
    case Label::kSupported: return Verdict::kSupported;
    case Label::kRefuted: return Verdict::kRefuted;
    default: return Verdict::kNotEnoughInfo;
  }
}

Verdict aggregate_verdict(std::span<const Verdict> verdicts) {
  auto has = [&](Verdict v) {
    return std::find(verdicts.begin(), verdicts.end(), v) != verdicts.end();
  };
  if (has(Verdict::kSupported)) return Verdict::kSupported;
  if (has(Verdict::kRefuted)) return Verdict::kRefuted;
  return Verdict::kNotEnoughInfo;
}

std::vector<VerifyPair> build_verify_pairs(
    std::span<const Claim> claims,
    std::span<const RetrievalPrediction> retrieval) {
  std::map<std::int64_t, const RetrievalPrediction *> by_id;
  for (const auto &r : retrieval) by_id[r.claim_id] = &r;

  std::vector<VerifyPair> out;
  for (const auto &claim : claims) {
    if (claim.label == Label::kUnknown) continue;
    auto it = by_id.find(claim.id);
    if (it == by_id.end()) continue;
    std::set<EvidenceCoord> gold;
    for (const auto &g : claim.evidence_groups) gold.insert(g.begin(), g.end());
    for (const auto &s : it->second->evidence) {
      VerifyPair p{claim.id, s.page_id, s.sentence_index,
                   Verdict::kNotEnoughInfo};
      if (is_verifiable(claim.label) &&
          gold.contains({s.page_id, s.sentence_index})) {
        p.target = verdict_from_label(claim.label);
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<VerifyExample> build_verify_dataset(
    const Corpus &corpus, std::span<const Claim> claims,
    std::span<const RetrievalPrediction> retrieval, const Vocabulary &vocab,
    int max_len) {
  std::map<std::int64_t, const Claim *> claim_by_id;
  for (const auto &c : claims) claim_by_id[c.id] = &c;
  std::vector<VerifyExample> out;
  for (const auto &p : build_verify_pairs(claims, retrieval)) {
    const Sentence *s = corpus.find_sentence(p.page_id, p.sentence_index);
    if (!s) continue;
    out.push_back({encode_pair(vocab, prepend_title(p.page_id, s->text),
                               claim_by_id.at(p.claim_id)->text, max_len),
                   p.target});
  }
  return out;
}

VerifierTrainResult train_verifier(std::span<const VerifyExample> dataset,
                                   const VerifierTrainConfig &cfg) {
  if (dataset.empty()) throw InvalidArgument("train_verifier: empty dataset");
  if (cfg.batch_size == 0) throw InvalidArgument("batch_size must be positive");
  EncoderConfig enc = cfg.encoder;
  enc.num_classes = kNumVerdicts;
  enc.seed = cfg.seed;

  VerifierTrainResult result;
  result.params = init_params(enc);
  OptState opt = init_opt_state(result.params, cfg.adam);
  Rng rng(cfg.seed + 1);
  result.log.epochs = cfg.epochs;

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      std::vector<EncodedPair> inputs;
      LossTarget target;
      for (std::size_t i = begin; i < end; ++i) {
        inputs.push_back(dataset[order[i]].input);
        target.classes.push_back(static_cast<int>(dataset[order[i]].target));
      }
      ForwardOptions fwd;
      fwd.train_mode = true;
      fwd.step = step++;
      fwd.workers = cfg.workers;
      const auto res = forward(result.params, inputs, fwd);
      auto lg = loss_and_grads(result.params, res.cache, res.logits, target,
                               cfg.workers);
      adam_step(result.params, lg.grads, opt);
      result.log.step_losses.push_back(lg.loss);
    }
  }
  return result;
}

Verdict argmax_verdict(std::span<const double> probs) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(probs.size()); ++c) {
    if (probs[static_cast<std::size_t>(c)] >
        probs[static_cast<std::size_t>(best)]) {
      best = c;
    }
  }
  return static_cast<Verdict>(best);
}

std::vector<PairVerdict> classify_batch(const ModelParams &params,
                                        std::span<const EncodedPair> inputs,
                                        int workers) {
  if (params.config.num_classes != kNumVerdicts) {
    throw InvalidArgument("verifier checkpoint must have three classes");
  }
  const Matrix probs = softmax_rows(infer(params, inputs, workers));
  std::vector<PairVerdict> out(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (int c = 0; c < kNumVerdicts; ++c) {
      out[i].probs[static_cast<std::size_t>(c)] =
          probs(static_cast<Eigen::Index>(i), c);
    }
    out[i].verdict = argmax_verdict(out[i].probs);
  }
  return out;
}

PairVerdict classify_pair(const ModelParams &params, const Vocabulary &vocab,
                          std::string_view evidence_text,
                          std::string_view claim_text) {
  const EncodedPair input =
      encode_pair(vocab, evidence_text, claim_text, params.config.max_len);
  return classify_batch(params, std::span<const EncodedPair>(&input, 1))[0];
}

std::vector<FinalPrediction> predict_claims(
    const ModelParams &params, const Vocabulary &vocab, const Corpus &corpus,
    std::span<const Claim> claims,
    std::span<const RetrievalPrediction> retrieval, int workers) {
  std::map<std::int64_t, const RetrievalPrediction *> by_id;
  for (const auto &r : retrieval) by_id[r.claim_id] = &r;

  // Encode every (sentence, claim) pair first so inference runs as one
  // batch across workers.
  std::vector<EncodedPair> inputs;
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // claim -> inputs
  std::vector<FinalPrediction> out;
  for (const auto &claim : claims) {
    FinalPrediction pred;
    pred.claim_id = claim.id;
    const std::size_t begin = inputs.size();
    auto it = by_id.find(claim.id);
    if (it != by_id.end()) {
      for (const auto &s : it->second->evidence) {
        pred.evidence.push_back({s.page_id, s.sentence_index});
        const Sentence *sent = corpus.find_sentence(s.page_id, s.sentence_index);
        if (!sent) continue;
        inputs.push_back(encode_pair(vocab, prepend_title(s.page_id, sent->text),
                                     claim.text, params.config.max_len));
      }
    }
    spans.emplace_back(begin, inputs.size());
    out.push_back(std::move(pred));
  }
  const auto verdicts = classify_batch(params, inputs, workers);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<Verdict> per_sentence;
    for (std::size_t j = spans[i].first; j < spans[i].second; ++j) {
      per_sentence.push_back(verdicts[j].verdict);
    }
    out[i].label = verdict_label(aggregate_verdict(per_sentence));
  }
  return out;
}

void write_final_predictions(std::span<const FinalPrediction> preds,
                             std::ostream &out) {
  for (const auto &p : preds) {
    json evidence = json::array();
    for (const auto &e : p.evidence) {
      evidence.push_back({e.page_id, e.sentence_index});
    }
    out << json{{"id", p.claim_id},
                {"predicted_label", std::string(label_to_fever(p.label))},
                {"predicted_evidence", evidence}}
               .dump()
        << '\n';
  }
}

std::vector<FinalPrediction> read_final_predictions(std::istream &in) {
  std::vector<FinalPrediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json obj = json::parse(line);
      FinalPrediction p;
      p.claim_id = obj.at("id").get<std::int64_t>();
      const auto text = obj.at("predicted_label").get<std::string>();
      auto label = label_from_fever(text);
      if (!label) throw ParseError(line_no, "unknown label '" + text + "'");
      p.label = *label;
      for (const auto &e : obj.value("predicted_evidence", json::array())) {
        p.evidence.push_back({e.at(0).get<std::string>(), e.at(1).get<int>()});
      }
      out.push_back(std::move(p));
    } catch (const json::exception &e) {
      throw ParseError(line_no, std::string("bad prediction: ") + e.what());
    }
  }
  return out;
}

std::vector<FinalPrediction> load_final_predictions(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path);
  return read_final_predictions(in);
}

}  // namespace fever
