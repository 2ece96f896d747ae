#include <sstream>

#include "doctest.h"
#include "fever/common/errors.h"
#include "fever/tokenizer/tokenizer.h"

using namespace fever;

namespace {

Vocabulary abc_vocab() {
  const std::vector<std::string> texts = {"a b c d e f g h i j k l",
                                          "a b c"};
  return Vocabulary::build(texts, 64);
}

}  // namespace

TEST_CASE("basic_tokenize lowercases and splits punctuation") {
  const auto t = basic_tokenize("Hello, World (film).");
  const std::vector<std::string> want = {"hello", ",", "world", "(",
                                         "film",  ")", "."};
  CHECK(t == want);
  CHECK(basic_tokenize("  ").empty());
  CHECK(basic_tokenize("caf\xc3\xa9!").size() == 2);
}

TEST_CASE("build_vocab orders by frequency") {
  const std::vector<std::string> texts = {"a b. a"};
  const Vocabulary v = Vocabulary::build(texts, 8);
  CHECK(v.id("a") != Vocabulary::kUnk);
  CHECK(v.id("b") != Vocabulary::kUnk);
  CHECK(v.id(".") != Vocabulary::kUnk);
  CHECK(v.id("a") < v.id("b"));
  CHECK(v.id("zzz") == Vocabulary::kUnk);
  CHECK(v.token(Vocabulary::kCls) == "[CLS]");
}

TEST_CASE("build_vocab at the reserved-only boundary") {
  const std::vector<std::string> texts = {"a b. a"};
  const Vocabulary v = Vocabulary::build(texts, 4);
  CHECK(v.size() == 4);
  CHECK(v.id("a") == Vocabulary::kUnk);
  CHECK_THROWS_AS(Vocabulary::build(texts, 3), InvalidArgument);
  CHECK_THROWS_AS(Vocabulary::build(std::vector<std::string>{}, 8),
                  InvalidArgument);
}

TEST_CASE("build_vocab is deterministic and round-trips") {
  const std::vector<std::string> texts = {"z y x w", "y x", "x"};
  const Vocabulary a = Vocabulary::build(texts, 16);
  const Vocabulary b = Vocabulary::build(texts, 16);
  CHECK(a == b);
  std::stringstream ss;
  a.write(ss);
  CHECK(Vocabulary::read(ss) == a);
  // ties resolve lexicographically
  CHECK(a.id("w") < a.id("z"));
}

TEST_CASE("encode_pair layout") {
  const Vocabulary v = abc_vocab();
  const EncodedPair e = encode_pair(v, "a b", "c", 10);
  const std::vector<int> ids = {Vocabulary::kCls, v.id("a"), v.id("b"),
                                Vocabulary::kSep, v.id("c"), Vocabulary::kSep,
                                Vocabulary::kPad, Vocabulary::kPad,
                                Vocabulary::kPad, Vocabulary::kPad};
  CHECK(e.token_ids == ids);
  CHECK(e.segment_ids == std::vector<int>{0, 0, 0, 0, 1, 1, 0, 0, 0, 0});
  CHECK(e.attention_mask == std::vector<int>{1, 1, 1, 1, 1, 1, 0, 0, 0, 0});
  CHECK(e.length() == 6);
}

TEST_CASE("encode_pair truncates the longer sentence first") {
  const Vocabulary v = abc_vocab();
  const EncodedPair e = encode_pair(v, "a b c d e f g h i j", "k l", 8);
  const auto toks = decode(v, e);
  const std::vector<std::string> want = {"[CLS]", "a", "b", "c", "[SEP]",
                                         "k",     "l", "[SEP]"};
  CHECK(toks == want);
}

TEST_CASE("encode_pair with an empty second sentence") {
  const Vocabulary v = abc_vocab();
  const EncodedPair e = encode_pair(v, "a b", "", 8);
  CHECK(decode(v, e) == std::vector<std::string>{"[CLS]", "a", "b", "[SEP]"});
  CHECK(e.token_ids.size() == 8);
}

TEST_CASE("encode_pair invariants hold on random inputs") {
  const Vocabulary v = abc_vocab();
  const std::vector<std::string> words = {"a", "b", "c", "d", "e", "zz"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string s1, s2;
    for (int i = 0; i < (trial * 7) % 13 + 1; ++i) s1 += words[(trial + i) % 6] + " ";
    for (int i = 0; i < (trial * 5) % 11; ++i) s2 += words[(trial * 3 + i) % 6] + " ";
    const int max_len = 8 + trial % 9;
    const EncodedPair e = encode_pair(v, s1, s2, max_len);
    REQUIRE(static_cast<int>(e.token_ids.size()) == max_len);
    CHECK(e.token_ids[0] == Vocabulary::kCls);
    int seps = 0;
    bool after_first_sep = false;
    for (int i = 0; i < max_len; ++i) {
      if (e.attention_mask[i] == 0) {
        CHECK(e.token_ids[i] == Vocabulary::kPad);
        continue;
      }
      CHECK(e.segment_ids[i] == (after_first_sep ? 1 : 0));
      if (e.token_ids[i] == Vocabulary::kSep) {
        ++seps;
        after_first_sep = true;
      }
    }
    CHECK(seps == (s2.empty() ? 1 : 2));
  }
}

TEST_CASE("encode_pair rejects tiny max_len") {
  const Vocabulary v = abc_vocab();
  CHECK_THROWS_AS(encode_pair(v, "a", "b", 4), InvalidArgument);
}
