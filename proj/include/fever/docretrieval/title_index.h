#ifndef FEVER_DOCRETRIEVAL_TITLE_INDEX_H_
#define FEVER_DOCRETRIEVAL_TITLE_INDEX_H_

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fever/corpus/corpus.h"

namespace fever {

// Lowercased, escape-free, single-space-separated token form of a title or
// phrase. normalize_title(normalize_title(x)) == normalize_title(x).
std::string normalize_title(std::string_view text);

// Local replacement for an online title search: exact normalized-title
// lookup plus a TF-IDF index over each page's title and first sentence.
class TitleIndex {
 public:
  static TitleIndex build(const Corpus &corpus);

  // Header line then one postings line per term; see docs/formats.md.
  static TitleIndex read(std::istream &in);
  static TitleIndex load(const std::string &path);
  void write(std::ostream &out) const;
  void save(const std::string &path) const;

  std::size_t num_docs() const { return page_ids_.size(); }

  // Pages whose full title or title without a trailing parenthetical
  // normalizes to `normalized`.
  std::vector<std::string> exact_matches(std::string_view normalized) const;

  // (page_id, cosine) for every page sharing a weighted term with `text`,
  // best first, ties by page_id.
  std::vector<std::pair<std::string, double>> tfidf_rank(
      std::string_view text) const;

  bool operator==(const TitleIndex &) const = default;

 private:
  void finalize();

  std::vector<std::string> page_ids_;                    // sorted
  std::map<std::string, std::vector<int>, std::less<>> titles_;
  std::map<std::string, std::vector<std::pair<int, int>>, std::less<>>
      postings_;                                         // term -> (doc, tf)
  std::vector<double> doc_norms_;
};

// Ranked page ids for a claim, at most k of them. Exact title matches of
// extracted phrases come first (longer phrase first, then page_id), then
// TF-IDF cosine fills the remaining slots. Throws InvalidArgument when
// k < 1 or the index is empty.
std::vector<std::string> retrieve_docs(const TitleIndex &index,
                                       std::string_view claim_text, int k);

}  // namespace fever

#endif  // FEVER_DOCRETRIEVAL_TITLE_INDEX_H_
