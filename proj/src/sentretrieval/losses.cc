#include "fever/sentretrieval/losses.h"

#include <algorithm>
#include <cmath>

#include "fever/common/errors.h"

namespace fever {

double softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double pointwise_loss(const Matrix &probs, std::span<const int> targets) {
  if (static_cast<std::size_t>(probs.rows()) != targets.size()) {
    throw InvalidArgument("pointwise_loss: one target per row required");
  }
  if (targets.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double p = probs(static_cast<Eigen::Index>(i), targets[i]);
    total += -std::log(std::max(p, kProbFloor));
  }
  return total / static_cast<double>(targets.size());
}

double ranknet_loss(double o_pos, double o_neg) {
  return softplus(-(o_pos - o_neg));
}

double hinge_loss(double o_pos, double o_neg) {
  return std::max(0.0, 1.0 - (o_pos - o_neg));
}

double pair_loss(LossKind kind, double o_pos, double o_neg) {
  switch (kind) {
    case LossKind::kRankNet: return ranknet_loss(o_pos, o_neg);
    case LossKind::kHinge: return hinge_loss(o_pos, o_neg);
    case LossKind::kCrossEntropy: break;
  }
  throw InvalidArgument("pair_loss: cross entropy is not a pair loss");
}

std::vector<double> cross_entropy_per_row(const Matrix &logits,
                                          std::span<const int> targets) {
  if (static_cast<std::size_t>(logits.rows()) != targets.size()) {
    throw InvalidArgument("cross entropy: one target per row required");
  }
  const Matrix probs = softmax_rows(logits);
  std::vector<double> out(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= logits.cols()) {
      throw InvalidArgument("cross entropy: target class out of range");
    }
    out[i] = -std::log(
        std::max(probs(static_cast<Eigen::Index>(i), targets[i]), kProbFloor));
  }
  return out;
}

std::vector<double> pair_loss_per_pair(
    LossKind kind, const Matrix &logits,
    std::span<const std::pair<int, int>> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto &[pos, neg] : pairs) {
    if (pos < 0 || neg < 0 || pos >= logits.rows() || neg >= logits.rows()) {
      throw InvalidArgument("pair loss: row index out of range");
    }
    out.push_back(pair_loss(kind, row_score(logits, pos),
                            row_score(logits, neg)));
  }
  return out;
}

HeadLoss cross_entropy_head(const Matrix &logits,
                            std::span<const int> targets) {
  HeadLoss out;
  const auto losses = cross_entropy_per_row(logits, targets);
  out.dlogits = Matrix::Zero(logits.rows(), logits.cols());
  if (targets.empty()) return out;
  const double n = static_cast<double>(targets.size());
  for (double l : losses) out.loss += l;
  out.loss /= n;
  out.dlogits = softmax_rows(logits) / n;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    out.dlogits(static_cast<Eigen::Index>(i), targets[i]) -= 1.0 / n;
  }
  return out;
}

HeadLoss pairwise_head(LossKind kind, const Matrix &logits,
                       std::span<const std::pair<int, int>> pairs) {
  HeadLoss out;
  out.dlogits = Matrix::Zero(logits.rows(), logits.cols());
  const auto losses = pair_loss_per_pair(kind, logits, pairs);
  if (pairs.empty()) return out;
  const double n = static_cast<double>(pairs.size());
  const Eigen::Index col = logits.cols() - 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.loss += losses[i];
    const auto [pos, neg] = pairs[i];
    const double margin = logits(pos, col) - logits(neg, col);
    // dL/d(margin); the hinge kink takes the zero subgradient.
    double dmargin = 0.0;
    if (kind == LossKind::kRankNet) {
      dmargin = -1.0 / (1.0 + std::exp(margin));
    } else if (1.0 - margin > 0.0) {
      dmargin = -1.0;
    }
    out.dlogits(pos, col) += dmargin / n;
    out.dlogits(neg, col) -= dmargin / n;
  }
  out.loss /= n;
  return out;
}

}  // namespace fever
