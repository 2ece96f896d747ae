#include "fever/tokenizer/tokenizer.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "fever/common/errors.h"

namespace fever {

std::vector<std::string> basic_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      tokens.emplace_back(1, ch);
    } else {
      current += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    }
  }
  flush();
  return tokens;
}

namespace {
const char *const kReservedNames[] = {"[PAD]", "[CLS]", "[SEP]", "[UNK]"};
}

Vocabulary::Vocabulary() {
  for (const char *name : kReservedNames) tokens_.emplace_back(name);
}

void Vocabulary::add(std::string token) {
  const int id = static_cast<int>(tokens_.size());
  if (!ids_.emplace(token, id).second) {
    throw InvalidArgument("duplicate vocabulary token '" + token + "'");
  }
  tokens_.push_back(std::move(token));
}

Vocabulary Vocabulary::build(std::span<const std::string> texts,
                             int max_size) {
  if (max_size < kNumReserved) {
    throw InvalidArgument("vocabulary max_size must be at least 4");
  }
  std::map<std::string, long> counts;
  for (const auto &text : texts) {
    for (auto &tok : basic_tokenize(text)) ++counts[std::move(tok)];
  }
  if (counts.empty()) throw InvalidArgument("cannot build vocabulary from an "
                                            "empty corpus");
  std::vector<std::pair<std::string, long>> ranked(counts.begin(),
                                                   counts.end());
  // counts is already lexicographic, so a stable sort on frequency keeps
  // ties in lexicographic order.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto &a, const auto &b) {
                     return a.second > b.second;
                   });
  Vocabulary vocab;
  const std::size_t keep = std::min<std::size_t>(
      ranked.size(), static_cast<std::size_t>(max_size - kNumReserved));
  for (std::size_t i = 0; i < keep; ++i) vocab.add(ranked[i].first);
  return vocab;
}

Vocabulary Vocabulary::read(std::istream &in) {
  Vocabulary vocab;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) throw ParseError(line_no, "empty vocabulary entry");
    try {
      vocab.add(line);
    } catch (const InvalidArgument &e) {
      throw ParseError(line_no, e.what());
    }
  }
  return vocab;
}

Vocabulary Vocabulary::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path);
  return read(in);
}

void Vocabulary::write(std::ostream &out) const {
  for (std::size_t i = kNumReserved; i < tokens_.size(); ++i) {
    out << tokens_[i] << '\n';
  }
}

void Vocabulary::save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out);
}

int Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

const std::string &Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) throw InvalidArgument("token id out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

int EncodedPair::length() const {
  int n = 0;
  while (n < static_cast<int>(attention_mask.size()) && attention_mask[n]) ++n;
  return n;
}

EncodedPair encode_pair(const Vocabulary &vocab, std::string_view s1,
                        std::string_view s2, int max_len) {
  if (max_len < 8) throw InvalidArgument("max_len must be at least 8");
  auto to_ids = [&](std::string_view text) {
    std::vector<int> ids;
    for (const auto &tok : basic_tokenize(text)) ids.push_back(vocab.id(tok));
    return ids;
  };
  std::vector<int> a = to_ids(s1);
  std::vector<int> b = to_ids(s2);
  const std::size_t specials = b.empty() ? 2 : 3;
  const std::size_t budget = static_cast<std::size_t>(max_len) - specials;
  while (a.size() + b.size() > budget) {
    if (a.size() > b.size()) {
      a.pop_back();
    } else {
      b.pop_back();
    }
  }

  EncodedPair out;
  auto push = [&](int id, int segment) {
    out.token_ids.push_back(id);
    out.segment_ids.push_back(segment);
    out.attention_mask.push_back(1);
  };
  push(Vocabulary::kCls, 0);
  for (int id : a) push(id, 0);
  push(Vocabulary::kSep, 0);
  if (!b.empty()) {
    for (int id : b) push(id, 1);
    push(Vocabulary::kSep, 1);
  }
  while (out.token_ids.size() < static_cast<std::size_t>(max_len)) {
    out.token_ids.push_back(Vocabulary::kPad);
    out.segment_ids.push_back(0);
    out.attention_mask.push_back(0);
  }
  return out;
}

std::vector<std::string> decode(const Vocabulary &vocab,
                                const EncodedPair &pair) {
  std::vector<std::string> out;
  const int n = pair.length();
  for (int i = 0; i < n; ++i) out.push_back(vocab.token(pair.token_ids[i]));
  return out;
}

}  // namespace fever
