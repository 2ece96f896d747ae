#ifndef FEVER_CORPUS_CORPUS_H_
#define FEVER_CORPUS_CORPUS_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fever {

enum class Label { kSupported, kRefuted, kNotEnoughInfo, kUnknown };

// FEVER file spelling: "SUPPORTS", "REFUTES", "NOT ENOUGH INFO". kUnknown
// has no spelling and maps to an empty string.
std::string_view label_to_fever(Label label);
std::optional<Label> label_from_fever(std::string_view text);
std::string_view label_name(Label label);

inline bool is_verifiable(Label label) {
  return label == Label::kSupported || label == Label::kRefuted;
}

struct Sentence {
  int index = 0;
  std::string text;
};

struct WikiPage {
  std::string page_id;
  std::vector<Sentence> sentences;

  const Sentence *find(int index) const;
};

struct EvidenceCoord {
  std::string page_id;
  int sentence_index = 0;

  auto operator<=>(const EvidenceCoord &) const = default;
};

using EvidenceGroup = std::set<EvidenceCoord>;

struct Claim {
  std::int64_t id = 0;
  std::string text;
  Label label = Label::kUnknown;
  std::vector<EvidenceGroup> evidence_groups;
  // Set when some gold coordinate does not resolve in the loaded dump.
  bool unresolved_evidence = false;
};

// A (claim, title-prepended sentence) pair.
struct Candidate {
  std::int64_t claim_id = 0;
  std::string page_id;
  int sentence_index = 0;
  std::string text;
  std::optional<bool> is_evidence;
  std::optional<double> score;
};

// Immutable after loading; pages are keyed and iterated by page_id.
class Corpus {
 public:
  Corpus() = default;

  // Throws InvalidArgument on an empty or duplicate page id, or on
  // duplicate sentence indices within the page.
  void add_page(WikiPage page);

  const WikiPage *find_page(std::string_view page_id) const;
  const Sentence *find_sentence(std::string_view page_id, int index) const;

  const std::map<std::string, WikiPage, std::less<>> &pages() const {
    return pages_;
  }
  std::size_t size() const { return pages_.size(); }

 private:
  std::map<std::string, WikiPage, std::less<>> pages_;
};

// Parses the "lines" field of a wiki dump entry: newline-separated
// "index<TAB>sentence[<TAB>link]*" entries. Empty entries are skipped; link
// columns are dropped. Throws ParseError with the 1-based entry number.
std::vector<Sentence> parse_wiki_lines(std::string_view raw);

// Inverse of parse_wiki_lines for canonical output.
std::string format_wiki_lines(const std::vector<Sentence> &sentences);

Corpus read_wiki(std::istream &in);
Corpus load_wiki(const std::string &path);
void write_wiki(const Corpus &corpus, std::ostream &out);

std::vector<Claim> read_claims(std::istream &in,
                               std::vector<std::string> *warnings = nullptr);
std::vector<Claim> load_claims(const std::string &path,
                               std::vector<std::string> *warnings = nullptr);
void write_claims(const std::vector<Claim> &claims, std::ostream &out);

// Flags claims whose gold evidence references sentences missing from the
// corpus. Returns the number of flagged claims.
std::size_t mark_unresolved_evidence(const Corpus &corpus,
                                     std::vector<Claim> &claims);

// Turns a dump title into display text: underscores become spaces and the
// -LRB-/-RRB-/-LSB-/-RSB-/-LCB-/-RCB-/-COLON- escapes become punctuation
// surrounded by single spaces.
std::string detokenize_title(std::string_view page_id);

// "<detokenized title> . <sentence>"
std::string prepend_title(std::string_view page_id,
                          std::string_view sentence_text);

}  // namespace fever

#endif  // FEVER_CORPUS_CORPUS_H_
