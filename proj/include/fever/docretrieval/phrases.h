#ifndef FEVER_DOCRETRIEVAL_PHRASES_H_
#define FEVER_DOCRETRIEVAL_PHRASES_H_

#include <string>
#include <string_view>
#include <vector>

namespace fever {

// Candidate page-title phrases in a claim: maximal runs of capitalized
// words (numbers may continue a run; "of", "the", "and" are allowed between
// two capitalized words),
// followed by the claim prefix before the first verb-like word when the
// claim starts with a capitalized word. Deduplicated in first-seen order,
// original casing kept.
std::vector<std::string> extract_phrases(std::string_view claim_text);

// Auxiliaries and copulas, plus lowercase words of four or more letters
// ending in "ed".
bool is_verb_like(std::string_view word);

}  // namespace fever

#endif  // FEVER_DOCRETRIEVAL_PHRASES_H_
