#include <sstream>

#include "doctest.h"
#include "fever/common/errors.h"
#include "fever/docretrieval/phrases.h"
#include "fever/docretrieval/title_index.h"
#include "fever/tokenizer/tokenizer.h"

using namespace fever;

namespace {

Corpus small_corpus() {
  Corpus c;
  c.add_page({"Roman_Atwood", {{0, "Roman Atwood is an American YouTuber."}}});
  c.add_page({"Furia_-LRB-film-RRB-", {{0, "Furia is a 1999 French film."}}});
  c.add_page({"Anna_Politkovskaya",
              {{0, "Anna Politkovskaya was a Russian journalist."}}});
  c.add_page({"Atwood", {{0, "Atwood is a surname."}}});
  c.add_page({"Content_creator", {{0, "A content creator makes media."}}});
  return c;
}

}  // namespace

TEST_CASE("extract_phrases finds capitalized spans") {
  CHECK(extract_phrases("Roman Atwood is a content creator.") ==
        std::vector<std::string>{"Roman Atwood"});
  CHECK(extract_phrases(
            "Furia is adapted from a short story by Anna Politkovskaya.") ==
        std::vector<std::string>{"Furia", "Anna Politkovskaya"});
  CHECK(extract_phrases("the sky is blue").empty());
  CHECK(extract_phrases("Bank of America was founded in 1904.") ==
        std::vector<std::string>{"Bank of America"});
}

TEST_CASE("extract_phrases adds the pre-verb prefix") {
  const auto p = extract_phrases("Lorem ipsum band released an album.");
  REQUIRE(p.size() == 2);
  CHECK(p[0] == "Lorem");
  CHECK(p[1] == "Lorem ipsum band");
}

TEST_CASE("verb detection") {
  CHECK(is_verb_like("is"));
  CHECK(is_verb_like("released"));
  CHECK_FALSE(is_verb_like("bed"));
  CHECK_FALSE(is_verb_like("Released"));
}

TEST_CASE("normalize_title is idempotent") {
  for (const char *t : {"Furia_-LRB-film-RRB-", "Roman Atwood", "A_B-COLON-C",
                        "  Mixed   CASE  (x) "}) {
    const auto once = normalize_title(t);
    CHECK(normalize_title(once) == once);
  }
  CHECK(normalize_title("Furia_-LRB-film-RRB-") == "furia ( film )");
}

TEST_CASE("retrieve_docs ranks exact title matches first") {
  const TitleIndex idx = TitleIndex::build(small_corpus());
  const auto docs = retrieve_docs(idx, "Roman Atwood is a content creator.", 7);
  REQUIRE_FALSE(docs.empty());
  CHECK(docs[0] == "Roman_Atwood");
  CHECK(docs.size() <= 7);
  CHECK(retrieve_docs(idx, "Roman Atwood is a content creator.", 1) ==
        std::vector<std::string>{"Roman_Atwood"});

  const auto furia = retrieve_docs(
      idx, "Furia is adapted from a short story by Anna Politkovskaya.", 2);
  CHECK(furia == std::vector<std::string>{"Anna_Politkovskaya",
                                          "Furia_-LRB-film-RRB-"});
}

TEST_CASE("retrieve_docs with no overlap is empty") {
  const TitleIndex idx = TitleIndex::build(small_corpus());
  CHECK(retrieve_docs(idx, "zzz qqq", 5).empty());
  CHECK_THROWS_AS(retrieve_docs(idx, "x", 0), InvalidArgument);
  CHECK_THROWS_AS(retrieve_docs(TitleIndex{}, "x", 1), InvalidArgument);
}

TEST_CASE("tfidf ranking uses title and first sentence") {
  const TitleIndex idx = TitleIndex::build(small_corpus());
  const auto r = idx.tfidf_rank("journalist");
  REQUIRE(r.size() == 1);
  CHECK(r[0].first == "Anna_Politkovskaya");
  CHECK(r[0].second > 0.0);
  const auto tied = idx.tfidf_rank("atwood");
  for (std::size_t i = 1; i < tied.size(); ++i) {
    CHECK(tied[i - 1].second >= tied[i].second);
  }
}

TEST_CASE("index round-trips through its file format") {
  const TitleIndex idx = TitleIndex::build(small_corpus());
  std::stringstream ss;
  idx.write(ss);
  const TitleIndex back = TitleIndex::read(ss);
  CHECK(back == idx);
  CHECK(back.exact_matches("furia") ==
        std::vector<std::string>{"Furia_-LRB-film-RRB-"});
}
