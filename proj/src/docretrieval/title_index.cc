#include "fever/docretrieval/title_index.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "fever/common/errors.h"
#include "fever/docretrieval/phrases.h"
#include "fever/tokenizer/tokenizer.h"
#include "json.hpp"

namespace fever {

using json = nlohmann::json;

namespace {

constexpr const char *kFormat = "fever-forge-title-index";
constexpr int kVersion = 1;

std::string join_tokens(const std::vector<std::string> &tokens) {
  std::string out;
  for (const auto &t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

// "furia ( film )" -> "furia"
std::string strip_parenthetical(const std::string &normalized) {
  if (normalized.size() < 2 || normalized.back() != ')') return normalized;
  const std::size_t open = normalized.rfind(" (");
  if (open == std::string::npos || open == 0) return normalized;
  return normalized.substr(0, open);
}

std::map<std::string, int> term_counts(std::string_view text) {
  std::map<std::string, int> counts;
  for (auto &tok : basic_tokenize(text)) ++counts[std::move(tok)];
  return counts;
}

}  // namespace

std::string normalize_title(std::string_view text) {
  return join_tokens(basic_tokenize(detokenize_title(text)));
}

TitleIndex TitleIndex::build(const Corpus &corpus) {
  TitleIndex index;
  for (const auto &[id, page] : corpus.pages()) {
    const int doc = static_cast<int>(index.page_ids_.size());
    index.page_ids_.push_back(id);
    const std::string norm = normalize_title(id);
    index.titles_[norm].push_back(doc);
    const std::string base = strip_parenthetical(norm);
    if (base != norm) index.titles_[base].push_back(doc);

    std::string text = detokenize_title(id);
    for (const auto &s : page.sentences) {
      if (s.text.empty()) continue;
      text += " . ";
      text += s.text;
      break;
    }
    for (const auto &[term, tf] : term_counts(text)) {
      index.postings_[term].emplace_back(doc, tf);
    }
  }
  index.finalize();
  return index;
}

void TitleIndex::finalize() {
  const double n = static_cast<double>(page_ids_.size());
  doc_norms_.assign(page_ids_.size(), 0.0);
  for (const auto &[term, plist] : postings_) {
    const double idf = std::log(n / static_cast<double>(plist.size()));
    for (const auto &[doc, tf] : plist) {
      const double w = std::log1p(static_cast<double>(tf)) * idf;
      doc_norms_[static_cast<std::size_t>(doc)] += w * w;
    }
  }
  for (double &v : doc_norms_) v = std::sqrt(v);
}

std::vector<std::string> TitleIndex::exact_matches(
    std::string_view normalized) const {
  std::vector<std::string> out;
  auto it = titles_.find(normalized);
  if (it == titles_.end()) return out;
  for (int doc : it->second) {
    out.push_back(page_ids_[static_cast<std::size_t>(doc)]);
  }
  return out;
}

std::vector<std::pair<std::string, double>> TitleIndex::tfidf_rank(
    std::string_view text) const {
  const double n = static_cast<double>(page_ids_.size());
  std::map<int, double> dots;
  double query_norm = 0.0;
  for (const auto &[term, tf] : term_counts(text)) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double idf = std::log(n / static_cast<double>(it->second.size()));
    const double wq = std::log1p(static_cast<double>(tf)) * idf;
    query_norm += wq * wq;
    for (const auto &[doc, dtf] : it->second) {
      dots[doc] += wq * std::log1p(static_cast<double>(dtf)) * idf;
    }
  }
  std::vector<std::pair<std::string, double>> ranked;
  if (query_norm <= 0.0) return ranked;
  query_norm = std::sqrt(query_norm);
  for (const auto &[doc, dot] : dots) {
    const double dn = doc_norms_[static_cast<std::size_t>(doc)];
    if (dot <= 0.0 || dn <= 0.0) continue;
    ranked.emplace_back(page_ids_[static_cast<std::size_t>(doc)],
                        dot / (query_norm * dn));
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

void TitleIndex::write(std::ostream &out) const {
  json header = {{"format", kFormat},
                 {"version", kVersion},
                 {"num_docs", page_ids_.size()},
                 {"page_ids", page_ids_},
                 {"titles", titles_}};
  out << header.dump() << '\n';
  for (const auto &[term, plist] : postings_) {
    json postings = json::array();
    for (const auto &[doc, tf] : plist) postings.push_back({doc, tf});
    out << json{{"term", term}, {"postings", postings}}.dump() << '\n';
  }
}

void TitleIndex::save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out);
}

TitleIndex TitleIndex::read(std::istream &in) {
  TitleIndex index;
  std::string line;
  std::size_t line_no = 0;
  auto parse = [&](const std::string &text) {
    try {
      return json::parse(text);
    } catch (const json::parse_error &e) {
      throw ParseError(line_no, std::string("malformed index: ") + e.what());
    }
  };
  if (!std::getline(in, line)) throw ParseError(1, "empty index file");
  ++line_no;
  const json header = parse(line);
  try {
    if (header.at("format") != kFormat || header.at("version") != kVersion) {
      throw ParseError(line_no, "unsupported index format");
    }
    index.page_ids_ = header.at("page_ids").get<std::vector<std::string>>();
    for (const auto &[key, docs] : header.at("titles").items()) {
      index.titles_[key] = docs.get<std::vector<int>>();
    }
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json entry = parse(line);
      auto &plist = index.postings_[entry.at("term").get<std::string>()];
      for (const auto &p : entry.at("postings")) {
        plist.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
      }
    }
  } catch (const json::exception &e) {
    throw ParseError(line_no, std::string("bad index entry: ") + e.what());
  }
  index.finalize();
  return index;
}

TitleIndex TitleIndex::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path);
  return read(in);
}

std::vector<std::string> retrieve_docs(const TitleIndex &index,
                                       std::string_view claim_text, int k) {
  if (k < 1) throw InvalidArgument("retrieve_docs: k must be at least 1");
  if (index.num_docs() == 0) throw InvalidArgument("retrieve_docs: empty index");

  // Exact matches keyed by page, keeping the longest matching phrase.
  std::map<std::string, std::size_t> best_len;
  for (const auto &phrase : extract_phrases(claim_text)) {
    const std::string norm = normalize_title(phrase);
    const std::size_t len = basic_tokenize(norm).size();
    for (auto &page : index.exact_matches(norm)) {
      auto &slot = best_len[page];
      slot = std::max(slot, len);
    }
  }
  std::vector<std::pair<std::size_t, std::string>> exact;
  for (auto &[page, len] : best_len) exact.emplace_back(len, page);
  std::sort(exact.begin(), exact.end(), [](const auto &a, const auto &b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<std::string> out;
  std::set<std::string, std::less<>> chosen;
  const auto limit = static_cast<std::size_t>(k);
  for (auto &[len, page] : exact) {
    if (out.size() == limit) break;
    chosen.insert(page);
    out.push_back(page);
  }
  if (out.size() < limit) {
    for (auto &[page, score] : index.tfidf_rank(claim_text)) {
      if (out.size() == limit) break;
      if (chosen.contains(page)) continue;
      chosen.insert(page);
      out.push_back(page);
    }
  }
  return out;
}

}  // namespace fever
