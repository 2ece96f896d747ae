#include "fever/corpus/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "fever/common/errors.h"
#include "json.hpp"

namespace fever {

using json = nlohmann::json;

std::string_view label_to_fever(Label label) {
  switch (label) {
    case Label::kSupported: return "SUPPORTS";
    case Label::kRefuted: return "REFUTES";
    case Label::kNotEnoughInfo: return "NOT ENOUGH INFO";
    case Label::kUnknown: return "";
  }
  return "";
}

std::optional<Label> label_from_fever(std::string_view text) {
  if (text == "SUPPORTS") return Label::kSupported;
  if (text == "REFUTES") return Label::kRefuted;
  if (text == "NOT ENOUGH INFO") return Label::kNotEnoughInfo;
  return std::nullopt;
}

std::string_view label_name(Label label) {
  switch (label) {
    case Label::kSupported: return "SUPPORTED";
    case Label::kRefuted: return "REFUTED";
    case Label::kNotEnoughInfo: return "NEI";
    case Label::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

const Sentence *WikiPage::find(int index) const {
  for (const auto &s : sentences) {
    if (s.index == index) return &s;
  }
  return nullptr;
}

void Corpus::add_page(WikiPage page) {
  if (page.page_id.empty()) throw InvalidArgument("empty page id");
  std::set<int> seen;
  for (const auto &s : page.sentences) {
    if (!seen.insert(s.index).second) {
      throw InvalidArgument("duplicate sentence index " +
                            std::to_string(s.index) + " in page " +
                            page.page_id);
    }
  }
  if (pages_.contains(page.page_id)) {
    throw InvalidArgument("duplicate page id " + page.page_id);
  }
  auto id = page.page_id;
  pages_.emplace(std::move(id), std::move(page));
}

const WikiPage *Corpus::find_page(std::string_view page_id) const {
  auto it = pages_.find(page_id);
  return it == pages_.end() ? nullptr : &it->second;
}

const Sentence *Corpus::find_sentence(std::string_view page_id,
                                      int index) const {
  const WikiPage *page = find_page(page_id);
  return page ? page->find(index) : nullptr;
}

std::vector<Sentence> parse_wiki_lines(std::string_view raw) {
  std::vector<Sentence> out;
  std::size_t entry_no = 0;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    std::size_t nl = raw.find('\n', pos);
    if (nl == std::string_view::npos) nl = raw.size();
    std::string_view entry = raw.substr(pos, nl - pos);
    ++entry_no;
    pos = nl + 1;
    if (!entry.empty() && entry.back() == '\r') entry.remove_suffix(1);
    if (entry.empty()) continue;

    const std::size_t tab = entry.find('\t');
    std::string_view index_field = entry.substr(0, tab);
    int index = 0;
    auto [end, ec] = std::from_chars(
        index_field.data(), index_field.data() + index_field.size(), index);
    if (ec != std::errc() || end != index_field.data() + index_field.size() ||
        index < 0) {
      throw ParseError(entry_no, "sentence index is not a non-negative "
                                 "integer: '" + std::string(index_field) + "'");
    }
    std::string text;
    if (tab != std::string_view::npos) {
      std::string_view rest = entry.substr(tab + 1);
      text = std::string(rest.substr(0, rest.find('\t')));
    }
    out.push_back({index, std::move(text)});
  }
  return out;
}

std::string format_wiki_lines(const std::vector<Sentence> &sentences) {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i) out += '\n';
    out += std::to_string(sentences[i].index);
    out += '\t';
    out += sentences[i].text;
  }
  return out;
}

namespace {

std::ifstream open_input(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path);
  return in;
}

json parse_json_line(const std::string &line, std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::parse_error &e) {
    throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
  }
}

bool blank(const std::string &line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

Corpus read_wiki(std::istream &in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json obj = parse_json_line(line, line_no);
    try {
      WikiPage page;
      page.page_id = obj.at("id").get<std::string>();
      // The official dump carries one entry with an empty id.
      if (page.page_id.empty()) continue;
      try {
        page.sentences = parse_wiki_lines(obj.at("lines").get<std::string>());
      } catch (const ParseError &e) {
        throw ParseError(line_no, "page " + page.page_id + ", lines entry " +
                                      std::to_string(e.line()) + ": " +
                                      e.detail());
      }
      corpus.add_page(std::move(page));
    } catch (const json::exception &e) {
      throw ParseError(line_no, std::string("bad wiki entry: ") + e.what());
    } catch (const InvalidArgument &e) {
      throw ParseError(line_no, e.what());
    }
  }
  return corpus;
}

Corpus load_wiki(const std::string &path) {
  auto in = open_input(path);
  return read_wiki(in);
}

void write_wiki(const Corpus &corpus, std::ostream &out) {
  for (const auto &[id, page] : corpus.pages()) {
    std::string text;
    for (const auto &s : page.sentences) {
      if (s.text.empty()) continue;
      if (!text.empty()) text += ' ';
      text += s.text;
    }
    json obj = {{"id", id},
                {"text", text},
                {"lines", format_wiki_lines(page.sentences)}};
    out << obj.dump() << '\n';
  }
}

namespace {

Claim parse_claim(const json &obj, std::size_t line_no,
                  std::vector<std::string> *warnings) {
  Claim claim;
  claim.id = obj.at("id").get<std::int64_t>();
  claim.text = obj.at("claim").get<std::string>();
  if (obj.contains("label") && !obj.at("label").is_null()) {
    const auto text = obj.at("label").get<std::string>();
    auto label = label_from_fever(text);
    if (!label) throw ParseError(line_no, "unknown label '" + text + "'");
    claim.label = *label;
  }
  if (claim.label != Label::kNotEnoughInfo && obj.contains("evidence")) {
    for (const auto &group_json : obj.at("evidence")) {
      EvidenceGroup group;
      for (const auto &item : group_json) {
        if (!item.is_array() || item.size() != 4) {
          throw ParseError(line_no, "evidence item must have four fields");
        }
        if (item[2].is_null() || item[3].is_null()) continue;
        group.insert({item[2].get<std::string>(), item[3].get<int>()});
      }
      if (group.empty()) continue;
      if (std::find(claim.evidence_groups.begin(), claim.evidence_groups.end(),
                    group) == claim.evidence_groups.end()) {
        claim.evidence_groups.push_back(std::move(group));
      }
    }
  }
  if (is_verifiable(claim.label) && claim.evidence_groups.empty() &&
      warnings) {
    warnings->push_back("line " + std::to_string(line_no) + ": claim " +
                        std::to_string(claim.id) + " is " +
                        std::string(label_name(claim.label)) +
                        " but has no evidence");
  }
  return claim;
}

}  // namespace

std::vector<Claim> read_claims(std::istream &in,
                               std::vector<std::string> *warnings) {
  std::vector<Claim> claims;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json obj = parse_json_line(line, line_no);
    try {
      claims.push_back(parse_claim(obj, line_no, warnings));
    } catch (const json::exception &e) {
      throw ParseError(line_no, std::string("bad claim entry: ") + e.what());
    }
  }
  return claims;
}

std::vector<Claim> load_claims(const std::string &path,
                               std::vector<std::string> *warnings) {
  auto in = open_input(path);
  return read_claims(in, warnings);
}

void write_claims(const std::vector<Claim> &claims, std::ostream &out) {
  for (const auto &claim : claims) {
    json obj = {{"id", claim.id}, {"claim", claim.text}};
    if (claim.label != Label::kUnknown) {
      obj["label"] = std::string(label_to_fever(claim.label));
      json evidence = json::array();
      if (claim.label == Label::kNotEnoughInfo) {
        evidence.push_back(json::array({json::array({0, 0, nullptr, nullptr})}));
      }
      for (const auto &group : claim.evidence_groups) {
        json g = json::array();
        for (const auto &coord : group) {
          g.push_back(json::array({0, 0, coord.page_id, coord.sentence_index}));
        }
        evidence.push_back(std::move(g));
      }
      obj["evidence"] = std::move(evidence);
    }
    out << obj.dump() << '\n';
  }
}

std::size_t mark_unresolved_evidence(const Corpus &corpus,
                                     std::vector<Claim> &claims) {
  std::size_t flagged = 0;
  for (auto &claim : claims) {
    claim.unresolved_evidence = false;
    for (const auto &group : claim.evidence_groups) {
      for (const auto &coord : group) {
        if (!corpus.find_sentence(coord.page_id, coord.sentence_index)) {
          claim.unresolved_evidence = true;
        }
      }
    }
    if (claim.unresolved_evidence) ++flagged;
  }
  return flagged;
}

std::string detokenize_title(std::string_view page_id) {
  static const std::pair<std::string_view, std::string_view> kEscapes[] = {
      {"-LRB-", "("}, {"-RRB-", ")"}, {"-LSB-", "["}, {"-RSB-", "]"},
      {"-LCB-", "{"}, {"-RCB-", "}"}, {"-COLON-", ":"}};
  std::string spaced;
  for (std::size_t i = 0; i < page_id.size();) {
    bool matched = false;
    for (const auto &[escape, literal] : kEscapes) {
      if (page_id.substr(i, escape.size()) == escape) {
        spaced += ' ';
        spaced += literal;
        spaced += ' ';
        i += escape.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    spaced += page_id[i] == '_' ? ' ' : page_id[i];
    ++i;
  }
  // Collapse runs of spaces and trim.
  std::string out;
  for (char c : spaced) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out += c;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string prepend_title(std::string_view page_id,
                          std::string_view sentence_text) {
  std::string out = detokenize_title(page_id);
  out += " . ";
  out += sentence_text;
  return out;
}

}  // namespace fever
