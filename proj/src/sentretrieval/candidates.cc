#include "fever/sentretrieval/candidates.h"

namespace fever {

std::vector<Candidate> gen_candidates(const Corpus &corpus, const Claim &claim,
                                      std::span<const std::string> docs) {
  std::set<EvidenceCoord> gold;
  for (const auto &group : claim.evidence_groups) {
    gold.insert(group.begin(), group.end());
  }
  const bool labelled = claim.label != Label::kUnknown;

  std::vector<Candidate> out;
  for (const auto &page_id : docs) {
    const WikiPage *page = corpus.find_page(page_id);
    if (!page) continue;
    for (const auto &s : page->sentences) {
      if (s.text.empty()) continue;
      Candidate c;
      c.claim_id = claim.id;
      c.page_id = page_id;
      c.sentence_index = s.index;
      c.text = prepend_title(page_id, s.text);
      if (labelled) c.is_evidence = gold.contains({page_id, s.index});
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace fever
