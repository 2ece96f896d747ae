#ifndef FEVER_TOKENIZER_TOKENIZER_H_
#define FEVER_TOKENIZER_TOKENIZER_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fever {

// Lowercases and splits on whitespace; every ASCII punctuation character is
// a token of its own. Bytes >= 0x80 are treated as word characters.
std::vector<std::string> basic_tokenize(std::string_view text);

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kCls = 1;
  static constexpr int kSep = 2;
  static constexpr int kUnk = 3;
  static constexpr int kNumReserved = 4;

  Vocabulary();

  // Keeps the (max_size - 4) most frequent tokens, ties broken
  // lexicographically. Throws InvalidArgument on an empty corpus or
  // max_size < 4.
  static Vocabulary build(std::span<const std::string> texts, int max_size);

  // One token per line; line n holds id n + 4.
  static Vocabulary read(std::istream &in);
  static Vocabulary load(const std::string &path);
  void write(std::ostream &out) const;
  void save(const std::string &path) const;

  int id(std::string_view token) const;
  const std::string &token(int id) const;
  int size() const { return static_cast<int>(tokens_.size()); }

  bool operator==(const Vocabulary &other) const {
    return tokens_ == other.tokens_;
  }

 private:
  void add(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

struct EncodedPair {
  std::vector<int> token_ids;
  std::vector<int> segment_ids;
  std::vector<int> attention_mask;

  // Number of leading positions with mask 1.
  int length() const;

  bool operator==(const EncodedPair &) const = default;
};

// [CLS] s1 [SEP] s2 [SEP], padded to max_len. When the pair does not fit,
// the tail of whichever sentence is currently longer is dropped one token
// at a time (s2 on ties). An empty s2 gives [CLS] s1 [SEP].
EncodedPair encode_pair(const Vocabulary &vocab, std::string_view s1,
                        std::string_view s2, int max_len);

// Tokens of the non-pad positions, reserved ids rendered as [CLS] etc.
std::vector<std::string> decode(const Vocabulary &vocab,
                                const EncodedPair &pair);

}  // namespace fever

#endif  // FEVER_TOKENIZER_TOKENIZER_H_
