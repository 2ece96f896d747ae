#ifndef FEVER_ENCODER_MODEL_H_
#define FEVER_ENCODER_MODEL_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fever/encoder/params.h"
#include "fever/tokenizer/tokenizer.h"

namespace fever {

struct ForwardOptions {
  // Enables dropout. Masks come from a counter-based generator keyed by
  // (config.seed, step, batch position, site), so a forward pass is
  // reproducible for a given step.
  bool train_mode = false;
  std::uint64_t step = 0;
  int workers = 1;
};

// Activations of one encoder layer for one sample (T = unpadded length).
struct LayerCache {
  Matrix input;                // T x H
  Matrix q, k, v;              // T x H
  std::vector<Matrix> probs;   // per head, T x T attention weights
  Matrix context;              // T x H
  Matrix attn_dropout;         // T x H keep-scale, empty when inactive
  Matrix ln1_xhat;             // T x H, normalized before scale/offset
  Eigen::VectorXd ln1_inv_std;
  Matrix ln1_out;              // T x H
  Matrix ffn_pre;              // T x F
  Matrix ffn_act;              // T x F
  Matrix ffn_dropout;          // T x H
  Matrix ln2_xhat;
  Eigen::VectorXd ln2_inv_std;
};

struct SampleCache {
  std::vector<int> token_ids;    // first T positions
  std::vector<int> segment_ids;
  Matrix emb_xhat;
  Eigen::VectorXd emb_inv_std;
  Matrix emb_dropout;
  std::vector<LayerCache> layers;
  Matrix cls_dropout;  // 1 x H
  Matrix cls_input;    // 1 x H, classifier input after dropout
};

struct ForwardCache {
  EncoderConfig config;
  bool train_mode = false;
  std::vector<SampleCache> samples;
};

struct ForwardResult {
  Matrix logits;  // batch x num_classes
  ForwardCache cache;
};

// Post-norm transformer encoder with a linear head on position 0. Padded
// positions (mask 0) never receive attention weight. Throws NumericError
// naming the layer where a non-finite value first appears.
ForwardResult forward(const ModelParams &params,
                      std::span<const EncodedPair> batch,
                      const ForwardOptions &options = {});

// Inference-only forward; keeps no activations.
Matrix infer(const ModelParams &params, std::span<const EncodedPair> batch,
             int workers = 1);

// Gradients of sum_i <dlogits_i, logits_i> with respect to every parameter.
// Per-sample contributions are reduced in fixed groups of eight in batch
// order so the result does not depend on the worker count.
ModelParams backward(const ModelParams &params, const ForwardCache &cache,
                     const Matrix &dlogits, int workers = 1);

enum class LossKind { kCrossEntropy, kRankNet, kHinge };

struct LossTarget {
  LossKind kind = LossKind::kCrossEntropy;
  std::vector<int> classes;                  // cross entropy, one per row
  std::vector<std::pair<int, int>> pairs;    // (positive row, negative row)
};

struct LossAndGrads {
  double loss = 0.0;
  ModelParams grads;
};

// Batch-mean loss of the requested head plus parameter gradients. Throws
// InvalidArgument when cache, logits and target disagree in shape.
LossAndGrads loss_and_grads(const ModelParams &params,
                            const ForwardCache &cache, const Matrix &logits,
                            const LossTarget &target, int workers = 1);

// Row-wise softmax.
Matrix softmax_rows(const Matrix &logits);

}  // namespace fever

#endif  // FEVER_ENCODER_MODEL_H_
