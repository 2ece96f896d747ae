#include "fever/encoder/model.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "fever/common/errors.h"
#include "fever/common/parallel.h"
#include "fever/common/random.h"
#include "fever/sentretrieval/losses.h"

namespace fever {
namespace {

constexpr double kLayerNormEps = 1e-12;
constexpr std::size_t kReduceGroup = 8;

// Dropout sites within one sample.
constexpr std::uint64_t kSiteEmbedding = 0;
constexpr std::uint64_t kSiteClassifier = 255;
std::uint64_t attention_site(std::size_t layer) { return 1 + 2 * layer; }
std::uint64_t ffn_site(std::size_t layer) { return 2 + 2 * layer; }

struct DropoutKey {
  bool active = false;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  std::uint64_t sample = 0;
};

// Keep-scale mask (0 or 1/(1-rate)), or an empty matrix when inactive.
Matrix dropout_mask(const DropoutKey &key, std::uint64_t site,
                    Eigen::Index rows, Eigen::Index cols) {
  if (!key.active || key.rate <= 0.0) return Matrix();
  Matrix mask(rows, cols);
  const double scale = 1.0 / (1.0 - key.rate);
  const std::uint64_t tensor_id = (key.sample << 8) | site;
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    const double u = to_unit(counter_hash(key.seed, key.step, tensor_id,
                                          static_cast<std::uint64_t>(i)));
    mask.data()[i] = u < key.rate ? 0.0 : scale;
  }
  return mask;
}

void apply_mask(Matrix &x, const Matrix &mask) {
  if (mask.size() != 0) x.array() *= mask.array();
}

void layer_norm(const Matrix &x, const Matrix &gamma, const Matrix &beta,
                Matrix &xhat, Eigen::VectorXd &inv_std, Matrix &y) {
  const Eigen::Index rows = x.rows();
  const double h = static_cast<double>(x.cols());
  xhat.resize(rows, x.cols());
  inv_std.resize(rows);
  for (Eigen::Index t = 0; t < rows; ++t) {
    const double mean = x.row(t).sum() / h;
    const double var = (x.row(t).array() - mean).square().sum() / h;
    inv_std(t) = 1.0 / std::sqrt(var + kLayerNormEps);
    xhat.row(t) = (x.row(t).array() - mean) * inv_std(t);
  }
  y = (xhat.array().rowwise() * gamma.row(0).array()).rowwise() +
      beta.row(0).array();
}

// Returns dL/dx and accumulates the scale/offset gradients.
Matrix layer_norm_backward(const Matrix &dy, const Matrix &xhat,
                           const Eigen::VectorXd &inv_std, const Matrix &gamma,
                           Matrix &dgamma, Matrix &dbeta) {
  dgamma += dy.cwiseProduct(xhat).colwise().sum();
  dbeta += dy.colwise().sum();
  const Matrix dxhat = dy.array().rowwise() * gamma.row(0).array();
  Matrix dx(dy.rows(), dy.cols());
  for (Eigen::Index t = 0; t < dy.rows(); ++t) {
    const double mean_d = dxhat.row(t).mean();
    const double mean_dx = dxhat.row(t).dot(xhat.row(t)) /
                           static_cast<double>(dy.cols());
    dx.row(t) = inv_std(t) * (dxhat.row(t).array() - mean_d -
                              xhat.row(t).array() * mean_dx);
  }
  return dx;
}

double gelu(double x) {
  return 0.5 * x * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0));
}

double gelu_grad(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x * std::numbers::sqrt2 / 2.0));
  const double pdf =
      std::exp(-0.5 * x * x) * std::numbers::inv_sqrtpi / std::numbers::sqrt2;
  return cdf + x * pdf;
}

void check_finite(const Matrix &m, int layer, const char *what) {
  if (!m.allFinite()) {
    throw NumericError(layer, std::string("non-finite values in ") + what);
  }
}

// Unpadded length: attention masks are a prefix of ones.
int effective_length(const EncodedPair &pair) {
  int n = 0;
  for (std::size_t i = 0; i < pair.attention_mask.size(); ++i) {
    if (pair.attention_mask[i]) n = static_cast<int>(i) + 1;
  }
  return std::max(n, 1);
}

void check_pair(const ModelParams &params, const EncodedPair &pair) {
  const auto &cfg = params.config;
  const std::size_t len = pair.token_ids.size();
  if (len == 0 || len > static_cast<std::size_t>(cfg.max_len) ||
      pair.segment_ids.size() != len || pair.attention_mask.size() != len) {
    throw InvalidArgument("encoded pair does not match encoder max_len");
  }
  for (std::size_t i = 0; i < len; ++i) {
    if (pair.token_ids[i] < 0 || pair.token_ids[i] >= cfg.vocab_size) {
      throw InvalidArgument("token id outside the encoder vocabulary");
    }
    if (pair.segment_ids[i] != 0 && pair.segment_ids[i] != 1) {
      throw InvalidArgument("segment id must be 0 or 1");
    }
  }
}

// Forward pass for one sample. Fills `cache` when non-null and returns the
// 1 x C logits row.
Matrix forward_sample(const ModelParams &params, const EncodedPair &pair,
                      const DropoutKey &key, SampleCache *cache) {
  const auto &cfg = params.config;
  const int len = effective_length(pair);
  const int hidden = cfg.hidden_dim;
  const int dh = cfg.head_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  const double neg_inf = -std::numeric_limits<double>::infinity();

  Matrix emb(len, hidden);
  for (int t = 0; t < len; ++t) {
    emb.row(t) = params.token_emb.row(pair.token_ids[t]) +
                 params.segment_emb.row(pair.segment_ids[t]) +
                 params.position_emb.row(t);
  }
  SampleCache local;
  SampleCache &c = cache ? *cache : local;
  c.token_ids.assign(pair.token_ids.begin(), pair.token_ids.begin() + len);
  c.segment_ids.assign(pair.segment_ids.begin(),
                       pair.segment_ids.begin() + len);
  Matrix x;
  layer_norm(emb, params.emb_ln_gamma, params.emb_ln_beta, c.emb_xhat,
             c.emb_inv_std, x);
  c.emb_dropout = dropout_mask(key, kSiteEmbedding, len, hidden);
  apply_mask(x, c.emb_dropout);
  check_finite(x, -1, "embeddings");

  c.layers.resize(params.layers.size());
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const LayerParams &p = params.layers[l];
    LayerCache &lc = c.layers[l];
    lc.input = x;
    lc.q = (x * p.wq).rowwise() + p.bq.row(0);
    lc.k = (x * p.wk).rowwise() + p.bk.row(0);
    lc.v = (x * p.wv).rowwise() + p.bv.row(0);
    lc.context.resize(len, hidden);
    lc.probs.resize(static_cast<std::size_t>(cfg.num_heads));
    for (int h = 0; h < cfg.num_heads; ++h) {
      Matrix scores = lc.q.middleCols(h * dh, dh) *
                      lc.k.middleCols(h * dh, dh).transpose() * scale;
      for (int j = 0; j < len; ++j) {
        if (!pair.attention_mask[j]) scores.col(j).setConstant(neg_inf);
      }
      Matrix &probs = lc.probs[static_cast<std::size_t>(h)];
      probs = softmax_rows(scores);
      lc.context.middleCols(h * dh, dh) = probs * lc.v.middleCols(h * dh, dh);
    }
    Matrix attn = (lc.context * p.wo).rowwise() + p.bo.row(0);
    lc.attn_dropout = dropout_mask(key, attention_site(l), len, hidden);
    apply_mask(attn, lc.attn_dropout);
    layer_norm(x + attn, p.ln1_gamma, p.ln1_beta, lc.ln1_xhat, lc.ln1_inv_std,
               lc.ln1_out);

    lc.ffn_pre = (lc.ln1_out * p.w1).rowwise() + p.b1.row(0);
    lc.ffn_act = lc.ffn_pre.unaryExpr([](double v) { return gelu(v); });
    Matrix ffn = (lc.ffn_act * p.w2).rowwise() + p.b2.row(0);
    lc.ffn_dropout = dropout_mask(key, ffn_site(l), len, hidden);
    apply_mask(ffn, lc.ffn_dropout);
    layer_norm(lc.ln1_out + ffn, p.ln2_gamma, p.ln2_beta, lc.ln2_xhat,
               lc.ln2_inv_std, x);
    check_finite(x, static_cast<int>(l), "layer output");
  }

  c.cls_input = x.topRows(1);
  c.cls_dropout = dropout_mask(key, kSiteClassifier, 1, hidden);
  apply_mask(c.cls_input, c.cls_dropout);
  Matrix logits = c.cls_input * params.cls_w + params.cls_b;
  check_finite(logits, cfg.num_layers, "logits");
  return logits;
}

void backward_sample(const ModelParams &params, const SampleCache &c,
                     const Matrix &dlogits, ModelParams &g) {
  const auto &cfg = params.config;
  const int len = static_cast<int>(c.token_ids.size());
  const int dh = cfg.head_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  g.cls_w += c.cls_input.transpose() * dlogits;
  g.cls_b += dlogits;
  Matrix dx = Matrix::Zero(len, cfg.hidden_dim);
  dx.row(0) = dlogits * params.cls_w.transpose();
  if (c.cls_dropout.size() != 0) {
    dx.row(0).array() *= c.cls_dropout.row(0).array();
  }

  for (std::size_t li = params.layers.size(); li-- > 0;) {
    const LayerParams &p = params.layers[li];
    LayerParams &gp = g.layers[li];
    const LayerCache &lc = c.layers[li];

    // Output norm over (ln1_out + dropout(ffn)).
    Matrix dsum2 = layer_norm_backward(dx, lc.ln2_xhat, lc.ln2_inv_std,
                                       p.ln2_gamma, gp.ln2_gamma, gp.ln2_beta);
    Matrix dffn = dsum2;
    apply_mask(dffn, lc.ffn_dropout);
    gp.w2 += lc.ffn_act.transpose() * dffn;
    gp.b2 += dffn.colwise().sum();
    Matrix dpre = dffn * p.w2.transpose();
    for (Eigen::Index i = 0; i < dpre.size(); ++i) {
      dpre.data()[i] *= gelu_grad(lc.ffn_pre.data()[i]);
    }
    gp.w1 += lc.ln1_out.transpose() * dpre;
    gp.b1 += dpre.colwise().sum();
    Matrix dln1 = dsum2 + dpre * p.w1.transpose();

    // Attention norm over (input + dropout(attn)).
    Matrix dsum1 = layer_norm_backward(dln1, lc.ln1_xhat, lc.ln1_inv_std,
                                       p.ln1_gamma, gp.ln1_gamma, gp.ln1_beta);
    Matrix dattn = dsum1;
    apply_mask(dattn, lc.attn_dropout);
    gp.wo += lc.context.transpose() * dattn;
    gp.bo += dattn.colwise().sum();
    const Matrix dcontext = dattn * p.wo.transpose();

    Matrix dq(len, cfg.hidden_dim), dk(len, cfg.hidden_dim),
        dv(len, cfg.hidden_dim);
    for (int h = 0; h < cfg.num_heads; ++h) {
      const Matrix &probs = lc.probs[static_cast<std::size_t>(h)];
      const auto dctx_h = dcontext.middleCols(h * dh, dh);
      const Matrix dprobs = dctx_h * lc.v.middleCols(h * dh, dh).transpose();
      dv.middleCols(h * dh, dh) = probs.transpose() * dctx_h;
      Matrix dscores = probs.cwiseProduct(dprobs);
      const Eigen::VectorXd row_dot = dscores.rowwise().sum();
      dscores -= probs.cwiseProduct(row_dot.replicate(1, len));
      dscores *= scale;
      dq.middleCols(h * dh, dh) = dscores * lc.k.middleCols(h * dh, dh);
      dk.middleCols(h * dh, dh) =
          dscores.transpose() * lc.q.middleCols(h * dh, dh);
    }
    gp.wq += lc.input.transpose() * dq;
    gp.bq += dq.colwise().sum();
    gp.wk += lc.input.transpose() * dk;
    gp.bk += dk.colwise().sum();
    gp.wv += lc.input.transpose() * dv;
    gp.bv += dv.colwise().sum();
    dx = dsum1 + dq * p.wq.transpose() + dk * p.wk.transpose() +
         dv * p.wv.transpose();
  }

  apply_mask(dx, c.emb_dropout);
  const Matrix demb =
      layer_norm_backward(dx, c.emb_xhat, c.emb_inv_std, params.emb_ln_gamma,
                          g.emb_ln_gamma, g.emb_ln_beta);
  for (int t = 0; t < len; ++t) {
    g.token_emb.row(c.token_ids[static_cast<std::size_t>(t)]) += demb.row(t);
    g.segment_emb.row(c.segment_ids[static_cast<std::size_t>(t)]) +=
        demb.row(t);
    g.position_emb.row(t) += demb.row(t);
  }
}

void add_into(ModelParams &dst, const ModelParams &src) {
  std::vector<const Matrix *> parts;
  src.for_each([&](const std::string &, const Matrix &m) {
    parts.push_back(&m);
  });
  std::size_t i = 0;
  dst.for_each([&](const std::string &, Matrix &m) { m += *parts[i++]; });
}

}  // namespace

Matrix softmax_rows(const Matrix &logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double mx = logits.row(r).maxCoeff();
    out.row(r) = (logits.row(r).array() - mx).exp();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

ForwardResult forward(const ModelParams &params,
                      std::span<const EncodedPair> batch,
                      const ForwardOptions &options) {
  params.config.validate();
  for (const auto &pair : batch) check_pair(params, pair);
  ForwardResult result;
  result.cache.config = params.config;
  result.cache.train_mode = options.train_mode;
  result.cache.samples.resize(batch.size());
  result.logits = Matrix::Zero(static_cast<Eigen::Index>(batch.size()),
                               params.config.num_classes);
  parallel_for(batch.size(), options.workers, [&](std::size_t i) {
    DropoutKey key{options.train_mode, params.config.dropout_rate,
                   params.config.seed, options.step, i};
    result.logits.row(static_cast<Eigen::Index>(i)) =
        forward_sample(params, batch[i], key, &result.cache.samples[i]);
  });
  return result;
}

Matrix infer(const ModelParams &params, std::span<const EncodedPair> batch,
             int workers) {
  params.config.validate();
  for (const auto &pair : batch) check_pair(params, pair);
  Matrix logits = Matrix::Zero(static_cast<Eigen::Index>(batch.size()),
                               params.config.num_classes);
  parallel_for(batch.size(), workers, [&](std::size_t i) {
    logits.row(static_cast<Eigen::Index>(i)) =
        forward_sample(params, batch[i], DropoutKey{}, nullptr);
  });
  return logits;
}

ModelParams backward(const ModelParams &params, const ForwardCache &cache,
                     const Matrix &dlogits, int workers) {
  if (!(cache.config == params.config)) {
    throw InvalidArgument("forward cache was produced by a different config");
  }
  if (dlogits.rows() != static_cast<Eigen::Index>(cache.samples.size()) ||
      dlogits.cols() != params.config.num_classes) {
    throw InvalidArgument("logit gradient does not match the forward cache");
  }
  const std::size_t n = cache.samples.size();
  const std::size_t groups = (n + kReduceGroup - 1) / kReduceGroup;
  std::vector<ModelParams> partial(groups);
  parallel_for(groups, workers, [&](std::size_t gi) {
    partial[gi] = zeros_like(params.config);
    const std::size_t end = std::min(n, (gi + 1) * kReduceGroup);
    for (std::size_t i = gi * kReduceGroup; i < end; ++i) {
      backward_sample(params, cache.samples[i],
                      dlogits.row(static_cast<Eigen::Index>(i)), partial[gi]);
    }
  });
  ModelParams grads = zeros_like(params.config);
  for (const auto &p : partial) add_into(grads, p);
  return grads;
}

LossAndGrads loss_and_grads(const ModelParams &params,
                            const ForwardCache &cache, const Matrix &logits,
                            const LossTarget &target, int workers) {
  if (logits.rows() != static_cast<Eigen::Index>(cache.samples.size())) {
    throw InvalidArgument("logits and forward cache disagree on batch size");
  }
  HeadLoss head;
  if (target.kind == LossKind::kCrossEntropy) {
    if (params.config.num_classes < 2) {
      throw InvalidArgument("cross entropy needs at least two classes");
    }
    head = cross_entropy_head(logits, target.classes);
  } else {
    head = pairwise_head(target.kind, logits, target.pairs);
  }
  if (!std::isfinite(head.loss)) {
    throw NumericError(params.config.num_layers, "non-finite loss");
  }
  return {head.loss, backward(params, cache, head.dlogits, workers)};
}

}  // namespace fever
