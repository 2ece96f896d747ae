#include "fever/sentretrieval/ranking.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "fever/common/errors.h"
#include "fever/encoder/model.h"
#include "fever/sentretrieval/losses.h"
#include "json.hpp"

namespace fever {

using json = nlohmann::json;

std::vector<double> score_candidates(const ModelParams &params,
                                     const Vocabulary &vocab,
                                     std::string_view claim_text,
                                     std::span<const Candidate> candidates,
                                     int workers) {
  std::vector<EncodedPair> inputs;
  inputs.reserve(candidates.size());
  for (const auto &c : candidates) {
    inputs.push_back(
        encode_pair(vocab, c.text, claim_text, params.config.max_len));
  }
  const Matrix logits = infer(params, inputs, workers);
  std::vector<double> scores(candidates.size());
  if (params.config.num_classes == 1) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      scores[i] = logits(static_cast<Eigen::Index>(i), 0);
    }
  } else {
    const Matrix probs = softmax_rows(logits);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      scores[i] = probs(static_cast<Eigen::Index>(i), kEvidenceClass);
    }
  }
  return scores;
}

RetrievalOutput select_top(std::int64_t claim_id,
                           std::span<const Candidate> candidates,
                           std::optional<double> threshold) {
  RetrievalOutput out;
  out.claim_id = claim_id;
  out.threshold = threshold;
  for (const auto &c : candidates) {
    if (!c.score) throw InvalidArgument("select_top: candidate without score");
    out.ranked.push_back({c.page_id, c.sentence_index, *c.score});
  }
  std::sort(out.ranked.begin(), out.ranked.end(),
            [](const ScoredSentence &a, const ScoredSentence &b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.page_id != b.page_id) return a.page_id < b.page_id;
              return a.sentence_index < b.sentence_index;
            });
  for (const auto &s : out.ranked) {
    if (out.top5.size() == kEvidenceSlots) break;
    if (threshold && s.score < *threshold) break;
    out.top5.push_back(s);
  }
  return out;
}

RetrievalOutput rank_and_select(const ModelParams &params,
                                const Vocabulary &vocab, const Claim &claim,
                                std::vector<Candidate> candidates,
                                std::optional<double> threshold,
                                int workers) {
  const auto scores =
      score_candidates(params, vocab, claim.text, candidates, workers);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].score = scores[i];
  }
  return select_top(claim.id, candidates, threshold);
}

std::vector<ScoredSentence> apply_threshold(
    std::span<const ScoredSentence> top, std::optional<double> threshold) {
  std::vector<ScoredSentence> out;
  for (const auto &s : top) {
    if (out.size() == kEvidenceSlots) break;
    if (threshold && s.score < *threshold) continue;
    out.push_back(s);
  }
  return out;
}

void write_retrieval_predictions(std::span<const RetrievalPrediction> preds,
                                 std::ostream &out) {
  for (const auto &p : preds) {
    json evidence = json::array();
    json scores = json::array();
    for (const auto &s : p.evidence) {
      evidence.push_back({s.page_id, s.sentence_index});
      scores.push_back(s.score);
    }
    out << json{{"id", p.claim_id},
                {"predicted_evidence", evidence},
                {"scores", scores}}
               .dump()
        << '\n';
  }
}

std::vector<RetrievalPrediction> read_retrieval_predictions(std::istream &in) {
  std::vector<RetrievalPrediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json obj = json::parse(line);
      RetrievalPrediction p;
      p.claim_id = obj.at("id").get<std::int64_t>();
      const auto &ev = obj.at("predicted_evidence");
      const json scores = obj.value("scores", json::array());
      if (!scores.empty() && scores.size() != ev.size()) {
        throw ParseError(line_no, "scores and predicted_evidence differ in "
                                  "length");
      }
      for (std::size_t i = 0; i < ev.size(); ++i) {
        ScoredSentence s;
        s.page_id = ev[i].at(0).get<std::string>();
        s.sentence_index = ev[i].at(1).get<int>();
        s.score = scores.empty() ? 0.0 : scores[i].get<double>();
        p.evidence.push_back(std::move(s));
      }
      out.push_back(std::move(p));
    } catch (const json::exception &e) {
      throw ParseError(line_no, std::string("bad retrieval prediction: ") +
                                    e.what());
    }
  }
  return out;
}

std::vector<RetrievalPrediction> load_retrieval_predictions(
    const std::string &path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path);
  return read_retrieval_predictions(in);
}

}  // namespace fever
