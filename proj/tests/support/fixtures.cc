#include "support/fixtures.h"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#ifndef FEVER_DATA_DIR
#define FEVER_DATA_DIR "data"
#endif

namespace fever::testing {

EncoderConfig tiny_config(int num_classes, std::uint64_t seed) {
  EncoderConfig cfg;
  cfg.num_layers = 1;
  cfg.hidden_dim = 8;
  cfg.num_heads = 2;
  cfg.ffn_dim = 16;
  cfg.max_len = 8;
  cfg.vocab_size = 32;
  cfg.num_classes = num_classes;
  cfg.dropout_rate = 0.1;
  cfg.seed = seed;
  return cfg;
}

ModelParams random_params(const EncoderConfig &cfg, std::uint64_t seed,
                          double stddev) {
  ModelParams p = init_params(cfg);
  Rng rng(seed);
  p.for_each([&](const std::string &name, Matrix &m) {
    const bool scale = name.ends_with("gamma");
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = (scale ? 1.0 : 0.0) + stddev * rng.normal();
    }
  });
  return p;
}

EncodedPair random_pair(Rng &rng, const EncoderConfig &cfg) {
  const int budget = cfg.max_len - 3;
  const int len_a = 1 + static_cast<int>(rng.index(budget));
  const int len_b = static_cast<int>(rng.index(budget - len_a + 1));
  EncodedPair out;
  auto push = [&](int token, int segment) {
    out.token_ids.push_back(token);
    out.segment_ids.push_back(segment);
    out.attention_mask.push_back(1);
  };
  auto word = [&] {
    return Vocabulary::kUnk +
           static_cast<int>(rng.index(cfg.vocab_size - Vocabulary::kUnk));
  };
  push(Vocabulary::kCls, 0);
  for (int i = 0; i < len_a; ++i) push(word(), 0);
  push(Vocabulary::kSep, 0);
  if (len_b > 0) {
    for (int i = 0; i < len_b; ++i) push(word(), 1);
    push(Vocabulary::kSep, 1);
  }
  while (static_cast<int>(out.token_ids.size()) < cfg.max_len) {
    out.token_ids.push_back(Vocabulary::kPad);
    out.segment_ids.push_back(0);
    out.attention_mask.push_back(0);
  }
  return out;
}

std::vector<EncodedPair> random_pairs(Rng &rng, const EncoderConfig &cfg,
                                      std::size_t n) {
  std::vector<EncodedPair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_pair(rng, cfg));
  return out;
}

TempDir::TempDir(const std::string &tag) {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    auto candidate = base / ("fever_" + tag + "_" +
                             std::to_string(::getpid()) + "_" +
                             std::to_string(counter++));
    if (std::filesystem::create_directories(candidate)) {
      path_ = candidate;
      return;
    }
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string data_path(const std::string &relative) {
  return (std::filesystem::path(FEVER_DATA_DIR) / relative).string();
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

Claim make_claim(std::int64_t id, Label label,
                 std::vector<EvidenceGroup> groups) {
  Claim c;
  c.id = id;
  c.text = "claim " + std::to_string(id);
  c.label = label;
  c.evidence_groups = std::move(groups);
  return c;
}

}  // namespace fever::testing
