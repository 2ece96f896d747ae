#include "fever/metrics/metrics.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

#include "fever/common/errors.h"

namespace fever {

using json = nlohmann::json;

namespace {

struct Aligned {
  const Claim *gold;
  const FinalPrediction *pred;  // null when missing
};

// Pairs gold claims with predictions and validates the id sets.
std::vector<Aligned> align(std::span<const Claim> gold,
                           std::span<const FinalPrediction> predictions,
                           std::vector<std::string> *warnings) {
  std::map<std::int64_t, const Claim *> gold_by_id;
  for (const auto &c : gold) gold_by_id[c.id] = &c;
  std::map<std::int64_t, const FinalPrediction *> pred_by_id;
  for (const auto &p : predictions) {
    if (!gold_by_id.contains(p.claim_id)) {
      throw InvalidArgument("prediction for unknown claim id " +
                            std::to_string(p.claim_id));
    }
    if (!pred_by_id.emplace(p.claim_id, &p).second) {
      throw InvalidArgument("duplicate prediction for claim id " +
                            std::to_string(p.claim_id));
    }
  }
  if (predictions.empty() && warnings && !gold.empty()) {
    warnings->push_back("no predictions; every claim is scored as missed");
  }
  std::vector<Aligned> out;
  for (const auto &c : gold) {
    auto it = pred_by_id.find(c.id);
    if (it == pred_by_id.end() && !predictions.empty()) {
      throw InvalidArgument("no prediction for claim id " +
                            std::to_string(c.id));
    }
    if (c.label == Label::kUnknown) {
      if (warnings) {
        warnings->push_back("claim " + std::to_string(c.id) +
                            " has no gold label and is not scored");
      }
      continue;
    }
    out.push_back({&c, it == pred_by_id.end() ? nullptr : it->second});
  }
  return out;
}

std::set<EvidenceCoord> first_five(const FinalPrediction *pred,
                                   std::vector<std::string> *warnings) {
  std::set<EvidenceCoord> out;
  if (!pred) return out;
  if (pred->evidence.size() > kEvidenceSlots && warnings) {
    warnings->push_back("claim " + std::to_string(pred->claim_id) + " has " +
                        std::to_string(pred->evidence.size()) +
                        " predicted sentences; only the first 5 count");
  }
  const std::size_t n = std::min(kEvidenceSlots, pred->evidence.size());
  out.insert(pred->evidence.begin(), pred->evidence.begin() + n);
  return out;
}

bool covers_group(const Claim &claim, const std::set<EvidenceCoord> &pred) {
  for (const auto &group : claim.evidence_groups) {
    if (std::includes(pred.begin(), pred.end(), group.begin(), group.end())) {
      return true;
    }
  }
  return false;
}

// (correct, predicted) counts of the first five predictions.
std::pair<std::size_t, std::size_t> precision_counts(
    const Claim &claim, const FinalPrediction *pred) {
  if (!pred) return {0, 0};
  std::set<EvidenceCoord> gold;
  for (const auto &g : claim.evidence_groups) gold.insert(g.begin(), g.end());
  const std::size_t n = std::min(kEvidenceSlots, pred->evidence.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (gold.contains(pred->evidence[i])) ++correct;
  }
  return {correct, n};
}

double ratio(double num, std::size_t den) {
  return den == 0 ? 0.0 : num / static_cast<double>(den);
}

int verdict_index(Label label) {
  return static_cast<int>(verdict_from_label(label));
}

}  // namespace

std::vector<FinalPrediction> as_final_predictions(
    std::span<const RetrievalPrediction> retrieval) {
  std::vector<FinalPrediction> out;
  for (const auto &r : retrieval) {
    FinalPrediction p;
    p.claim_id = r.claim_id;
    for (const auto &s : r.evidence) {
      p.evidence.push_back({s.page_id, s.sentence_index});
    }
    out.push_back(std::move(p));
  }
  return out;
}

double strict_recall_at5(std::span<const Claim> gold,
                         std::span<const FinalPrediction> predictions) {
  return fever_score(gold, predictions).recall_at5;
}

double evidence_precision(std::span<const Claim> gold,
                          std::span<const FinalPrediction> predictions) {
  return fever_score(gold, predictions).precision;
}

EvalReport fever_score(std::span<const Claim> gold,
                       std::span<const FinalPrediction> predictions) {
  EvalReport r;
  const auto aligned = align(gold, predictions, &r.warnings);
  std::size_t hits = 0;
  std::size_t label_correct = 0;
  std::size_t fever_correct = 0;
  double precision_sum = 0.0;
  for (const auto &[claim, pred] : aligned) {
    ++r.total_claims;
    const auto evidence = first_five(pred, &r.warnings);
    const bool covered = covers_group(*claim, evidence);
    const bool label_ok = pred && pred->label == claim->label;
    if (pred) {
      ++r.confusion[static_cast<std::size_t>(verdict_index(claim->label))]
                   [static_cast<std::size_t>(verdict_index(pred->label))];
    }
    if (label_ok) ++label_correct;
    if (label_ok && (claim->label == Label::kNotEnoughInfo || covered)) {
      ++fever_correct;
    }
    if (!is_verifiable(claim->label)) continue;
    ++r.verifiable_claims;
    if (covered) ++hits;
    const auto [correct, predicted] = precision_counts(*claim, pred);
    if (predicted > 0) {
      ++r.precision_claims;
      precision_sum +=
          static_cast<double>(correct) / static_cast<double>(predicted);
    }
  }
  r.recall_at5 = ratio(static_cast<double>(hits), r.verifiable_claims);
  r.precision_defined = r.precision_claims > 0;
  r.precision = ratio(precision_sum, r.precision_claims);
  r.f1 = r.precision + r.recall_at5 > 0.0
             ? 2.0 * r.precision * r.recall_at5 / (r.precision + r.recall_at5)
             : 0.0;
  r.label_accuracy = ratio(static_cast<double>(label_correct), r.total_claims);
  r.fever_score = ratio(static_cast<double>(fever_correct), r.total_claims);
  return r;
}

json report_to_json(const EvalReport &r) {
  json confusion = json::object();
  const char *names[] = {"SUPPORTS", "REFUTES", "NOT ENOUGH INFO"};
  for (std::size_t g = 0; g < 3; ++g) {
    json row = json::object();
    for (std::size_t p = 0; p < 3; ++p) row[names[p]] = r.confusion[g][p];
    confusion[names[g]] = row;
  }
  return json{{"recall_at5", r.recall_at5},
              {"precision", r.precision},
              {"precision_defined", r.precision_defined},
              {"f1", r.f1},
              {"label_accuracy", r.label_accuracy},
              {"fever_score", r.fever_score},
              {"total_claims", r.total_claims},
              {"verifiable_claims", r.verifiable_claims},
              {"precision_claims", r.precision_claims},
              {"confusion", confusion},
              {"warnings", r.warnings}};
}

std::string format_report(const EvalReport &r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "claims            %zu (%zu verifiable)\n"
                "precision (%%)     %.2f%s\n"
                "recall@5 (%%)      %.2f\n"
                "F1 (%%)            %.2f\n"
                "label accuracy (%%) %.2f\n"
                "FEVER score (%%)   %.2f\n",
                r.total_claims, r.verifiable_claims, 100.0 * r.precision,
                r.precision_defined ? "" : " (undefined)",
                100.0 * r.recall_at5, 100.0 * r.f1, 100.0 * r.label_accuracy,
                100.0 * r.fever_score);
  return buf;
}

std::vector<PrPoint> pr_curve(std::span<const Claim> gold,
                              std::span<const RetrievalPrediction> retrieval,
                              std::span<const double> thresholds) {
  std::vector<double> sorted(thresholds.begin(), thresholds.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<PrPoint> curve;
  for (double t : sorted) {
    std::vector<RetrievalPrediction> filtered;
    PrPoint point;
    point.threshold = t;
    for (const auto &r : retrieval) {
      RetrievalPrediction f{r.claim_id, apply_threshold(r.evidence, t)};
      point.retained += f.evidence.size();
      filtered.push_back(std::move(f));
    }
    const auto report = fever_score(gold, as_final_predictions(filtered));
    point.precision = report.precision;
    point.precision_defined = report.precision_defined;
    point.recall = report.recall_at5;
    curve.push_back(point);
  }
  return curve;
}

void write_pr_csv(std::span<const PrPoint> curve, std::ostream &out) {
  out << "threshold,precision,recall\n";
  char buf[128];
  for (const auto &p : curve) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6f,%.6f\n", p.threshold,
                  p.precision, p.recall);
    out << buf;
  }
}

}  // namespace fever
