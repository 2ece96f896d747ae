#ifndef FEVER_ENCODER_PARAMS_H_
#define FEVER_ENCODER_PARAMS_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fever/encoder/config.h"
#include "json.hpp"

namespace fever {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct LayerParams {
  Matrix wq, bq, wk, bk, wv, bv, wo, bo;  // H x H weights, 1 x H biases
  Matrix ln1_gamma, ln1_beta;
  Matrix w1, b1;  // H x F, 1 x F
  Matrix w2, b2;  // F x H, 1 x H
  Matrix ln2_gamma, ln2_beta;
};

// Every trainable tensor of the encoder and its classification head. Also
// used as the container for gradients and optimizer moments.
struct ModelParams {
  EncoderConfig config;
  Matrix token_emb;     // V x H
  Matrix segment_emb;   // 2 x H
  Matrix position_emb;  // max_len x H
  Matrix emb_ln_gamma, emb_ln_beta;
  std::vector<LayerParams> layers;
  Matrix cls_w;  // H x C
  Matrix cls_b;  // 1 x C

  // Visits tensors in a fixed order with stable names such as
  // "layer1.attn.wq". fn(const std::string &name, Matrix &tensor).
  template <typename Fn>
  void for_each(Fn &&fn) {
    visit(*this, fn);
  }
  template <typename Fn>
  void for_each(Fn &&fn) const {
    visit(*this, fn);
  }

  std::size_t num_scalars() const;
  bool all_finite() const;

 private:
  template <typename Self, typename Fn>
  static void visit(Self &self, Fn &fn) {
    fn(std::string("embeddings.token"), self.token_emb);
    fn(std::string("embeddings.segment"), self.segment_emb);
    fn(std::string("embeddings.position"), self.position_emb);
    fn(std::string("embeddings.ln.gamma"), self.emb_ln_gamma);
    fn(std::string("embeddings.ln.beta"), self.emb_ln_beta);
    for (std::size_t l = 0; l < self.layers.size(); ++l) {
      auto &layer = self.layers[l];
      const std::string p = "layer" + std::to_string(l) + ".";
      fn(p + "attn.wq", layer.wq);
      fn(p + "attn.bq", layer.bq);
      fn(p + "attn.wk", layer.wk);
      fn(p + "attn.bk", layer.bk);
      fn(p + "attn.wv", layer.wv);
      fn(p + "attn.bv", layer.bv);
      fn(p + "attn.wo", layer.wo);
      fn(p + "attn.bo", layer.bo);
      fn(p + "ln1.gamma", layer.ln1_gamma);
      fn(p + "ln1.beta", layer.ln1_beta);
      fn(p + "ffn.w1", layer.w1);
      fn(p + "ffn.b1", layer.b1);
      fn(p + "ffn.w2", layer.w2);
      fn(p + "ffn.b2", layer.b2);
      fn(p + "ln2.gamma", layer.ln2_gamma);
      fn(p + "ln2.beta", layer.ln2_beta);
    }
    fn(std::string("classifier.w"), self.cls_w);
    fn(std::string("classifier.b"), self.cls_b);
  }
};

// All-zero tensors with the shapes implied by cfg.
ModelParams zeros_like(const EncoderConfig &cfg);

// Weights and embeddings ~ N(0, 0.02^2) truncated at two stddevs, biases 0,
// layer-norm scales 1 and offsets 0. Deterministic in cfg.seed.
ModelParams init_params(const EncoderConfig &cfg);

// True when shapes and config match.
bool same_shape(const ModelParams &a, const ModelParams &b);

// Binary checkpoint: see docs/checkpoint.md. `meta` is stored next to the
// config and returned unchanged by load_checkpoint.
void save_checkpoint(const std::string &path, const ModelParams &params,
                     const nlohmann::json &meta = nlohmann::json::object());

struct Checkpoint {
  ModelParams params;
  nlohmann::json meta;
};

Checkpoint load_checkpoint(const std::string &path);

}  // namespace fever

#endif  // FEVER_ENCODER_PARAMS_H_
