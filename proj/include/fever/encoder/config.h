#ifndef FEVER_ENCODER_CONFIG_H_
#define FEVER_ENCODER_CONFIG_H_

#include <cstdint>

#include "json.hpp"

namespace fever {

struct EncoderConfig {
  int num_layers = 2;
  int hidden_dim = 64;
  int num_heads = 4;
  int ffn_dim = 256;
  int max_len = 64;
  int vocab_size = 0;
  // 2 for pointwise retrieval, 3 for verification. A value of 1 gives the
  // scalar score head used by the pairwise losses.
  int num_classes = 2;
  double dropout_rate = 0.1;
  std::uint64_t seed = 0;

  // Throws InvalidArgument describing the first inconsistency.
  void validate() const;

  int head_dim() const { return hidden_dim / num_heads; }

  bool operator==(const EncoderConfig &) const = default;
};

void to_json(nlohmann::json &j, const EncoderConfig &cfg);
void from_json(const nlohmann::json &j, EncoderConfig &cfg);

}  // namespace fever

#endif  // FEVER_ENCODER_CONFIG_H_
