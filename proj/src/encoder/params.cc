#include "fever/encoder/params.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "fever/common/errors.h"
#include "fever/common/random.h"

namespace fever {

using json = nlohmann::json;

void EncoderConfig::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) throw InvalidArgument(std::string("encoder config: ") + what);
  };
  require(num_layers >= 0, "num_layers must be non-negative");
  require(hidden_dim > 0, "hidden_dim must be positive");
  require(num_heads > 0, "num_heads must be positive");
  require(hidden_dim % num_heads == 0, "num_heads must divide hidden_dim");
  require(ffn_dim > 0, "ffn_dim must be positive");
  require(max_len >= 1, "max_len must be positive");
  require(vocab_size >= 4, "vocab_size must cover the reserved tokens");
  require(num_classes >= 1 && num_classes <= 3, "num_classes must be 1, 2 or 3");
  require(dropout_rate >= 0.0 && dropout_rate < 1.0,
          "dropout_rate must be in [0, 1)");
}

void to_json(json &j, const EncoderConfig &cfg) {
  j = json{{"num_layers", cfg.num_layers},   {"hidden_dim", cfg.hidden_dim},
           {"num_heads", cfg.num_heads},     {"ffn_dim", cfg.ffn_dim},
           {"max_len", cfg.max_len},         {"vocab_size", cfg.vocab_size},
           {"num_classes", cfg.num_classes}, {"dropout_rate", cfg.dropout_rate},
           {"seed", cfg.seed}};
}

void from_json(const json &j, EncoderConfig &cfg) {
  EncoderConfig d;
  cfg.num_layers = j.value("num_layers", d.num_layers);
  cfg.hidden_dim = j.value("hidden_dim", d.hidden_dim);
  cfg.num_heads = j.value("num_heads", d.num_heads);
  cfg.ffn_dim = j.value("ffn_dim", d.ffn_dim);
  cfg.max_len = j.value("max_len", d.max_len);
  cfg.vocab_size = j.value("vocab_size", d.vocab_size);
  cfg.num_classes = j.value("num_classes", d.num_classes);
  cfg.dropout_rate = j.value("dropout_rate", d.dropout_rate);
  cfg.seed = j.value("seed", d.seed);
}

std::size_t ModelParams::num_scalars() const {
  std::size_t n = 0;
  for_each([&](const std::string &, const Matrix &m) {
    n += static_cast<std::size_t>(m.size());
  });
  return n;
}

bool ModelParams::all_finite() const {
  bool ok = true;
  for_each([&](const std::string &, const Matrix &m) {
    ok = ok && m.allFinite();
  });
  return ok;
}

ModelParams zeros_like(const EncoderConfig &cfg) {
  cfg.validate();
  const int h = cfg.hidden_dim;
  const int f = cfg.ffn_dim;
  ModelParams p;
  p.config = cfg;
  p.token_emb = Matrix::Zero(cfg.vocab_size, h);
  p.segment_emb = Matrix::Zero(2, h);
  p.position_emb = Matrix::Zero(cfg.max_len, h);
  p.emb_ln_gamma = Matrix::Zero(1, h);
  p.emb_ln_beta = Matrix::Zero(1, h);
  p.layers.resize(static_cast<std::size_t>(cfg.num_layers));
  for (auto &layer : p.layers) {
    for (Matrix *w : {&layer.wq, &layer.wk, &layer.wv, &layer.wo}) {
      *w = Matrix::Zero(h, h);
    }
    for (Matrix *b : {&layer.bq, &layer.bk, &layer.bv, &layer.bo,
                      &layer.ln1_gamma, &layer.ln1_beta, &layer.b2,
                      &layer.ln2_gamma, &layer.ln2_beta}) {
      *b = Matrix::Zero(1, h);
    }
    layer.w1 = Matrix::Zero(h, f);
    layer.b1 = Matrix::Zero(1, f);
    layer.w2 = Matrix::Zero(f, h);
  }
  p.cls_w = Matrix::Zero(h, cfg.num_classes);
  p.cls_b = Matrix::Zero(1, cfg.num_classes);
  return p;
}

namespace {

bool ends_with(const std::string &s, const char *suffix) {
  const std::size_t n = std::strlen(suffix);
  return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
}

// "attn.bq", "ffn.b1", "classifier.b" and the like.
bool is_bias(const std::string &name) {
  const std::string leaf = name.substr(name.rfind('.') + 1);
  return !leaf.empty() && leaf[0] == 'b' && leaf != "beta";
}

}  // namespace

ModelParams init_params(const EncoderConfig &cfg) {
  ModelParams p = zeros_like(cfg);
  Rng rng(cfg.seed ^ 0x1f2e3d4c5b6a7988ULL);
  p.for_each([&](const std::string &name, Matrix &m) {
    if (ends_with(name, ".gamma")) {
      m.setOnes();
    } else if (ends_with(name, ".beta") || is_bias(name)) {
      m.setZero();
    } else {
      for (Eigen::Index i = 0; i < m.size(); ++i) {
        m.data()[i] = rng.truncated_normal(0.02);
      }
    }
  });
  return p;
}

bool same_shape(const ModelParams &a, const ModelParams &b) {
  if (!(a.config == b.config) || a.layers.size() != b.layers.size()) {
    return false;
  }
  std::vector<std::pair<Eigen::Index, Eigen::Index>> shapes;
  a.for_each([&](const std::string &, const Matrix &m) {
    shapes.emplace_back(m.rows(), m.cols());
  });
  std::size_t i = 0;
  bool ok = true;
  b.for_each([&](const std::string &, const Matrix &m) {
    ok = ok && i < shapes.size() && shapes[i].first == m.rows() &&
         shapes[i].second == m.cols();
    ++i;
  });
  return ok && i == shapes.size();
}

// Checkpoint layout, all integers little-endian:
//   8 bytes  magic "FVRCKPT1"
//   u64      header length n, then n bytes of UTF-8 JSON
//            {"config": {...}, "meta": {...}, "dtype": "f64"}
//   u32      tensor count
//   per tensor: u32 name length, name bytes, u32 rows, u32 cols,
//               rows*cols IEEE-754 binary64 values in row-major order
namespace {

constexpr char kMagic[8] = {'F', 'V', 'R', 'C', 'K', 'P', 'T', '1'};

void put_u32(std::ostream &out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char *>(b), 4);
}

void put_u64(std::ostream &out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char *>(b), 8);
}

std::uint64_t get_bytes(std::istream &in, int n, const std::string &path) {
  unsigned char b[8] = {};
  in.read(reinterpret_cast<char *>(b), n);
  if (!in) throw std::runtime_error("truncated checkpoint " + path);
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void save_checkpoint(const std::string &path, const ModelParams &params,
                     const json &meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  const std::string header =
      json{{"config", params.config}, {"meta", meta}, {"dtype", "f64"}}.dump();
  put_u64(out, header.size());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  std::uint32_t count = 0;
  params.for_each([&](const std::string &, const Matrix &) { ++count; });
  put_u32(out, count);
  params.for_each([&](const std::string &name, const Matrix &m) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      put_u64(out, std::bit_cast<std::uint64_t>(m.data()[i]));
    }
  });
  if (!out) throw std::runtime_error("failed writing " + path);
}

Checkpoint load_checkpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifact(path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a checkpoint file: " + path);
  }
  const std::uint64_t header_len = get_bytes(in, 8, path);
  std::string header(header_len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw std::runtime_error("truncated checkpoint " + path);
  const json h = json::parse(header);
  if (h.value("dtype", "") != "f64") {
    throw std::runtime_error("unsupported checkpoint dtype in " + path);
  }
  Checkpoint ck;
  ck.params = zeros_like(h.at("config").get<EncoderConfig>());
  ck.meta = h.value("meta", json::object());

  const auto count = static_cast<std::uint32_t>(get_bytes(in, 4, path));
  std::uint32_t seen = 0;
  ck.params.for_each([&](const std::string &name, Matrix &m) {
    if (seen++ >= count) {
      throw std::runtime_error("checkpoint is missing tensor " + name);
    }
    const auto name_len = static_cast<std::size_t>(get_bytes(in, 4, path));
    std::string stored(name_len, '\0');
    in.read(stored.data(), static_cast<std::streamsize>(name_len));
    const auto rows = static_cast<Eigen::Index>(get_bytes(in, 4, path));
    const auto cols = static_cast<Eigen::Index>(get_bytes(in, 4, path));
    if (stored != name || rows != m.rows() || cols != m.cols()) {
      throw std::runtime_error("checkpoint tensor mismatch at " + name +
                               " in " + path);
    }
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = std::bit_cast<double>(get_bytes(in, 8, path));
    }
  });
  if (seen != count) throw std::runtime_error("extra tensors in " + path);
  return ck;
}

}  // namespace fever
