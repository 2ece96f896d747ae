#ifndef FEVER_SENTRETRIEVAL_LOSSES_H_
#define FEVER_SENTRETRIEVAL_LOSSES_H_

#include <span>
#include <utility>
#include <vector>

#include "fever/encoder/model.h"

namespace fever {

// Class layout of the two-way retrieval head.
inline constexpr int kNonEvidenceClass = 0;
inline constexpr int kEvidenceClass = 1;

// Probabilities are clamped at this floor before taking the log.
inline constexpr double kProbFloor = 1e-12;

// log(1 + e^x) without overflow.
double softplus(double x);

// Mean over rows of -log p[target].
double pointwise_loss(const Matrix &probs, std::span<const int> targets);

// -log(e^d / (1 + e^d)) with d = o_pos - o_neg, i.e. softplus(-d).
double ranknet_loss(double o_pos, double o_neg);

// max(0, 1 - (o_pos - o_neg)).
double hinge_loss(double o_pos, double o_neg);

double pair_loss(LossKind kind, double o_pos, double o_neg);

// Ranking score of a row: the last logit. With the scalar head this is the
// raw output; with the two-way head it is the evidence logit.
inline double row_score(const Matrix &logits, Eigen::Index row) {
  return logits(row, logits.cols() - 1);
}

// Per-row cross entropy (no averaging) computed from logits.
std::vector<double> cross_entropy_per_row(const Matrix &logits,
                                          std::span<const int> targets);

// Per-pair loss (no averaging).
std::vector<double> pair_loss_per_pair(
    LossKind kind, const Matrix &logits,
    std::span<const std::pair<int, int>> pairs);

struct HeadLoss {
  double loss = 0.0;
  Matrix dlogits;
};

// Batch-mean loss and its gradient with respect to the logits.
HeadLoss cross_entropy_head(const Matrix &logits, std::span<const int> targets);
HeadLoss pairwise_head(LossKind kind, const Matrix &logits,
                       std::span<const std::pair<int, int>> pairs);

}  // namespace fever

#endif  // FEVER_SENTRETRIEVAL_LOSSES_H_
