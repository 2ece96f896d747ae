#include "fever/docretrieval/phrases.h"

#include <algorithm>
#include <array>
#include <cctype>

namespace fever {
namespace {

constexpr std::string_view kTrim = ".,;:!?\"'()[]{}";

struct Word {
  std::string text;
  // Trailing punctuation other than a possessive ends a phrase.
  bool boundary_after = false;
};

std::vector<Word> split_words(std::string_view text) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    std::string_view raw = text.substr(i, j - i);
    i = j;
    if (raw.empty()) continue;
    std::size_t end = raw.size();
    while (end > 0 && kTrim.find(raw[end - 1]) != std::string_view::npos) {
      --end;
    }
    const bool had_trailing = end < raw.size();
    std::string_view core = raw.substr(0, end);
    if (core.size() > 2 && core.substr(core.size() - 2) == "'s") {
      core.remove_suffix(2);
    }
    std::size_t begin = 0;
    while (begin < core.size() &&
           kTrim.find(core[begin]) != std::string_view::npos) {
      ++begin;
    }
    core.remove_prefix(begin);
    if (core.empty()) {
      if (!words.empty()) words.back().boundary_after = true;
      continue;
    }
    words.push_back({std::string(core), had_trailing});
  }
  return words;
}

bool capitalized(const std::string &w) {
  return std::isupper(static_cast<unsigned char>(w[0]));
}

// Numbers may extend a run ("Apollo 11") but never start one.
bool continues_run(const std::string &w) {
  return capitalized(w) || std::isdigit(static_cast<unsigned char>(w[0]));
}

bool connector(const std::string &w) {
  return w == "of" || w == "the" || w == "and";
}

std::string join(const std::vector<Word> &words, std::size_t begin,
                 std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += words[i].text;
  }
  return out;
}

}  // namespace

bool is_verb_like(std::string_view word) {
  static constexpr std::array<std::string_view, 24> kAux = {
      "is",    "are",   "was",    "were",  "be",    "been",
      "being", "am",    "has",    "have",  "had",   "does",
      "do",    "did",   "can",    "could", "will",  "would",
      "shall", "should", "may",   "might", "must",  "won"};
  if (std::find(kAux.begin(), kAux.end(), word) != kAux.end()) return true;
  if (word.size() >= 4 && word.substr(word.size() - 2) == "ed") {
    return std::all_of(word.begin(), word.end(), [](char c) {
      return std::islower(static_cast<unsigned char>(c));
    });
  }
  return false;
}

std::vector<std::string> extract_phrases(std::string_view claim_text) {
  const std::vector<Word> words = split_words(claim_text);
  std::vector<std::string> phrases;
  auto add = [&](std::string phrase) {
    if (phrase.empty()) return;
    if (std::find(phrases.begin(), phrases.end(), phrase) == phrases.end()) {
      phrases.push_back(std::move(phrase));
    }
  };

  std::size_t i = 0;
  while (i < words.size()) {
    if (!capitalized(words[i].text)) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;  // one past the last capitalized word
    std::size_t j = i + 1;
    while (j < words.size() && !words[j - 1].boundary_after) {
      if (continues_run(words[j].text)) {
        end = ++j;
      } else if (connector(words[j].text) && j + 1 < words.size() &&
                 !words[j].boundary_after && capitalized(words[j + 1].text)) {
        ++j;
      } else {
        break;
      }
    }
    add(join(words, i, end));
    i = end;
  }

  if (!words.empty() && capitalized(words[0].text)) {
    for (std::size_t v = 1; v < words.size(); ++v) {
      if (is_verb_like(words[v].text)) {
        add(join(words, 0, v));
        break;
      }
    }
  }
  return phrases;
}

}  // namespace fever
