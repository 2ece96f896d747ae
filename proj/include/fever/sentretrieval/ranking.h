#ifndef FEVER_SENTRETRIEVAL_RANKING_H_
#define FEVER_SENTRETRIEVAL_RANKING_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fever/corpus/corpus.h"
#include "fever/encoder/params.h"
#include "fever/tokenizer/tokenizer.h"

namespace fever {

inline constexpr std::size_t kEvidenceSlots = 5;

struct ScoredSentence {
  std::string page_id;
  int sentence_index = 0;
  double score = 0.0;

  bool operator==(const ScoredSentence &) const = default;
};

struct RetrievalOutput {
  std::int64_t claim_id = 0;
  std::vector<ScoredSentence> ranked;  // every candidate, best first
  std::vector<ScoredSentence> top5;    // after threshold and truncation
  std::optional<double> threshold;
};

// Ranking score per candidate: the evidence-class probability for a
// two-way head, the raw output for the scalar pairwise head.
std::vector<double> score_candidates(const ModelParams &params,
                                     const Vocabulary &vocab,
                                     std::string_view claim_text,
                                     std::span<const Candidate> candidates,
                                     int workers = 1);

// Sorts scored candidates (score descending, then page_id and sentence
// index), drops those below the threshold and keeps at most five. Throws
// InvalidArgument if a candidate has no score.
RetrievalOutput select_top(std::int64_t claim_id,
                           std::span<const Candidate> candidates,
                           std::optional<double> threshold);

RetrievalOutput rank_and_select(const ModelParams &params,
                                const Vocabulary &vocab, const Claim &claim,
                                std::vector<Candidate> candidates,
                                std::optional<double> threshold,
                                int workers = 1);

// Applies a threshold to an already ranked top-5 list. Because the list is
// sorted, filtering then truncating equals truncating then filtering.
std::vector<ScoredSentence> apply_threshold(
    std::span<const ScoredSentence> top, std::optional<double> threshold);

// {"id": ..., "predicted_evidence": [[page, index], ...], "scores": [...]}
struct RetrievalPrediction {
  std::int64_t claim_id = 0;
  std::vector<ScoredSentence> evidence;

  bool operator==(const RetrievalPrediction &) const = default;
};

void write_retrieval_predictions(std::span<const RetrievalPrediction> preds,
                                 std::ostream &out);
std::vector<RetrievalPrediction> read_retrieval_predictions(std::istream &in);
std::vector<RetrievalPrediction> load_retrieval_predictions(
    const std::string &path);

}  // namespace fever

#endif  // FEVER_SENTRETRIEVAL_RANKING_H_
