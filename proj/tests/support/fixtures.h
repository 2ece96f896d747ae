#ifndef FEVER_TESTS_SUPPORT_FIXTURES_H_
#define FEVER_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fever/common/random.h"
#include "fever/corpus/corpus.h"
#include "fever/encoder/params.h"
#include "fever/tokenizer/tokenizer.h"

namespace fever::testing {

// N=1, H=8, two heads, FFN 16, length 8, 32 token ids.
EncoderConfig tiny_config(int num_classes, std::uint64_t seed = 1);

// Parameters drawn from N(0, stddev^2); layer-norm scales centred on 1.
ModelParams random_params(const EncoderConfig &cfg, std::uint64_t seed,
                          double stddev);

// A well-formed input with random content and random (unpadded) length.
EncodedPair random_pair(Rng &rng, const EncoderConfig &cfg);
std::vector<EncodedPair> random_pairs(Rng &rng, const EncoderConfig &cfg,
                                      std::size_t n);

// Removes itself on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &tag);
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::string file(const std::string &name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

std::string data_path(const std::string &relative);
std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &content);

Claim make_claim(std::int64_t id, Label label,
                 std::vector<EvidenceGroup> groups = {});

}  // namespace fever::testing

#endif  // FEVER_TESTS_SUPPORT_FIXTURES_H_
