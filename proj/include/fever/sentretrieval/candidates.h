#ifndef FEVER_SENTRETRIEVAL_CANDIDATES_H_
#define FEVER_SENTRETRIEVAL_CANDIDATES_H_

#include <span>
#include <string>
#include <vector>

#include "fever/corpus/corpus.h"

namespace fever {

// One title-prepended candidate per non-empty sentence of each retrieved
// page, in page then sentence order. When the claim carries a gold label,
// is_evidence is set: true iff the sentence belongs to any gold group.
// Pages missing from the corpus are skipped.
std::vector<Candidate> gen_candidates(const Corpus &corpus, const Claim &claim,
                                      std::span<const std::string> docs);

}  // namespace fever

#endif  // FEVER_SENTRETRIEVAL_CANDIDATES_H_
