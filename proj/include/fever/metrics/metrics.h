#ifndef FEVER_METRICS_METRICS_H_
#define FEVER_METRICS_METRICS_H_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fever/corpus/corpus.h"
#include "fever/sentretrieval/ranking.h"
#include "fever/verification/verifier.h"
#include "json.hpp"

namespace fever {

struct EvalReport {
  double recall_at5 = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double label_accuracy = 0.0;
  double fever_score = 0.0;
  bool precision_defined = false;  // some verifiable claim had predictions
  std::size_t total_claims = 0;        // labelled gold claims
  std::size_t verifiable_claims = 0;   // SUPPORTED or REFUTED
  std::size_t precision_claims = 0;    // verifiable with >= 1 prediction
  // confusion[gold][predicted], rows/cols SUPPORTED, REFUTED, NEI.
  std::array<std::array<std::size_t, 3>, 3> confusion{};
  std::vector<std::string> warnings;
};

// Retrieval predictions seen as final predictions with an NEI label.
std::vector<FinalPrediction> as_final_predictions(
    std::span<const RetrievalPrediction> retrieval);

// Fraction of verifiable claims for which some complete gold group is
// contained in the first five predicted sentences. Throws InvalidArgument
// on prediction ids absent from gold, duplicate ids, or gold claims with
// no prediction while other predictions exist.
double strict_recall_at5(std::span<const Claim> gold,
                         std::span<const FinalPrediction> predictions);

// Macro average, over verifiable claims with at least one prediction, of
// the share of (first five) predicted sentences found in any gold group.
// Returns 0 when no claim qualifies.
double evidence_precision(std::span<const Claim> gold,
                          std::span<const FinalPrediction> predictions);

// Recall, precision, F1, label accuracy and FEVER score in one pass. A
// claim earns FEVER credit iff its label is right and, unless the gold
// label is NEI, some complete gold group lies within the first five
// predicted sentences. Longer evidence lists are truncated with a warning.
EvalReport fever_score(std::span<const Claim> gold,
                       std::span<const FinalPrediction> predictions);

nlohmann::json report_to_json(const EvalReport &report);
// Percentages with two decimals.
std::string format_report(const EvalReport &report);

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  bool precision_defined = false;
  std::size_t retained = 0;  // sentences kept across all claims
};

// One point per threshold, sorted ascending by threshold. Each threshold
// filters the scored top-5 lists exactly as rank_and_select would.
std::vector<PrPoint> pr_curve(std::span<const Claim> gold,
                              std::span<const RetrievalPrediction> retrieval,
                              std::span<const double> thresholds);

void write_pr_csv(std::span<const PrPoint> curve, std::ostream &out);

}  // namespace fever

#endif  // FEVER_METRICS_METRICS_H_
