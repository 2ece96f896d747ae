#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fever/common/errors.h"
#include "fever/metrics/metrics.h"
#include "support/fixtures.h"
#include "support/oracles.h"

using namespace fever;
using fever::testing::make_claim;

namespace {

FinalPrediction pred(std::int64_t id, Label label,
                     std::vector<EvidenceCoord> ev) {
  return {id, label, std::move(ev)};
}

}  // namespace

TEST_CASE("strict recall needs a complete group") {
  const std::vector<Claim> gold = {
      make_claim(1, Label::kSupported, {{{"A", 1}}, {{"B", 2}, {"B", 3}}}),
      make_claim(2, Label::kRefuted, {{{"B", 2}, {"B", 3}}})};
  const std::vector<FinalPrediction> preds = {
      pred(1, Label::kSupported, {{"A", 1}, {"C", 0}}),
      pred(2, Label::kRefuted, {{"B", 2}})};
  CHECK(strict_recall_at5(gold, preds) == 0.5);
}

TEST_CASE("recall only looks at the first five predictions") {
  const std::vector<Claim> gold = {
      make_claim(1, Label::kSupported, {{{"A", 9}}})};
  const std::vector<FinalPrediction> preds = {
      pred(1, Label::kSupported,
           {{"A", 0}, {"A", 1}, {"A", 2}, {"A", 3}, {"A", 4}, {"A", 9}})};
  CHECK(strict_recall_at5(gold, preds) == 0.0);
  const auto report = fever_score(gold, preds);
  CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("evidence precision is a macro average") {
  std::vector<Claim> gold = {make_claim(1, Label::kSupported, {{{"A", 1}}})};
  std::vector<FinalPrediction> preds = {pred(
      1, Label::kSupported, {{"A", 1}, {"A", 2}, {"A", 3}, {"A", 4}, {"A", 5}})};
  CHECK(evidence_precision(gold, preds) == doctest::Approx(0.2));

  preds[0].evidence = {{"A", 1}};
  CHECK(evidence_precision(gold, preds) == 1.0);

  gold.push_back(make_claim(2, Label::kRefuted,
                            {{{"B", 0}, {"B", 1}, {"B", 2}}}));
  preds[0].evidence = {{"A", 1}, {"A", 2}, {"A", 3}, {"A", 4}, {"A", 5}};
  preds.push_back(pred(2, Label::kRefuted,
                       {{"B", 0}, {"B", 1}, {"B", 2}, {"C", 0}, {"C", 1}}));
  CHECK(evidence_precision(gold, preds) == doctest::Approx(0.4));
}

TEST_CASE("FEVER score conditions on evidence") {
  const std::vector<Claim> gold = {
      make_claim(1, Label::kSupported, {{{"A", 1}}})};
  auto r = fever_score(gold, std::vector{pred(1, Label::kSupported, {{"A", 1}})});
  CHECK(r.fever_score == 1.0);
  CHECK(r.label_accuracy == 1.0);
  r = fever_score(gold, std::vector{pred(1, Label::kSupported, {{"A", 2}})});
  CHECK(r.fever_score == 0.0);
  CHECK(r.label_accuracy == 1.0);
  CHECK(r.confusion[0][0] == 1);
}

TEST_CASE("NEI needs no evidence") {
  const std::vector<Claim> gold = {make_claim(1, Label::kNotEnoughInfo)};
  const auto r = fever_score(gold, std::vector{pred(1, Label::kNotEnoughInfo, {})});
  CHECK(r.fever_score == 1.0);
  CHECK(r.verifiable_claims == 0);
  CHECK(r.recall_at5 == 0.0);
}

TEST_CASE("id validation") {
  const std::vector<Claim> gold = {make_claim(1, Label::kSupported, {{{"A", 1}}}),
                                   make_claim(2, Label::kNotEnoughInfo)};
  try {
    fever_score(gold, std::vector{pred(1, Label::kSupported, {}),
                                  pred(7, Label::kSupported, {})});
    FAIL("expected InvalidArgument");
  } catch (const InvalidArgument &e) {
    CHECK(std::string(e.what()).find('7') != std::string::npos);
  }
  CHECK_THROWS_AS(fever_score(gold, std::vector{pred(1, Label::kSupported, {})}),
                  InvalidArgument);
  CHECK_THROWS_AS(
      fever_score(gold, std::vector{pred(1, Label::kSupported, {}),
                                    pred(1, Label::kSupported, {}),
                                    pred(2, Label::kSupported, {})}),
      InvalidArgument);

  const auto empty = fever_score(gold, std::vector<FinalPrediction>{});
  CHECK(empty.fever_score == 0.0);
  CHECK(empty.label_accuracy == 0.0);
  CHECK_FALSE(empty.warnings.empty());
}

TEST_CASE("scorer matches the enumeration oracle on random fixtures") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Claim> gold;
    std::vector<FinalPrediction> preds;
    const int n = 1 + static_cast<int>(rng.index(12));
    for (int i = 0; i < n; ++i) {
      const auto label = static_cast<Label>(rng.index(3));
      Claim c = make_claim(i + 1, label);
      if (is_verifiable(label)) {
        const int groups = static_cast<int>(rng.index(3)) + 1;
        for (int g = 0; g < groups; ++g) {
          EvidenceGroup grp;
          const int size = static_cast<int>(rng.index(2)) + 1;
          for (int s = 0; s < size; ++s) {
            grp.insert({"P" + std::to_string(rng.index(3)),
                        static_cast<int>(rng.index(4))});
          }
          c.evidence_groups.push_back(grp);
        }
      }
      gold.push_back(c);
      FinalPrediction p{c.id, static_cast<Label>(rng.index(3)), {}};
      const int k = static_cast<int>(rng.index(7));
      for (int j = 0; j < k; ++j) {
        p.evidence.push_back({"P" + std::to_string(rng.index(3)),
                              static_cast<int>(rng.index(4))});
      }
      preds.push_back(p);
    }
    const auto report = fever_score(gold, preds);
    const auto oracle = fever::testing::oracle_fever_score(gold, preds);
    CHECK(report.fever_score == oracle.fever);
    CHECK(report.label_accuracy == oracle.label_accuracy);
    CHECK(report.recall_at5 == oracle.recall);
    CHECK(report.precision == oracle.precision);
    CHECK(report.fever_score <= report.label_accuracy);
  }
}

TEST_CASE("PR curve endpoints and monotonicity") {
  const std::vector<Claim> gold = {
      make_claim(1, Label::kSupported, {{{"A", 0}}}),
      make_claim(2, Label::kRefuted, {{{"B", 1}}}),
      make_claim(3, Label::kNotEnoughInfo)};
  const std::vector<RetrievalPrediction> ret = {
      {1, {{"A", 0, 0.9}, {"A", 1, 0.4}, {"A", 2, 0.1}}},
      {2, {{"B", 0, 0.8}, {"B", 1, 0.3}}},
      {3, {{"C", 0, 0.7}}}};
  const std::vector<double> ts = {0.5, -INFINITY, 0.95, 0.2, 0.35};
  const auto curve = pr_curve(gold, ret, ts);
  REQUIRE(curve.size() == 5);
  CHECK(curve.front().threshold == -INFINITY);
  const auto base = fever_score(gold, as_final_predictions(ret));
  CHECK(curve.front().recall == base.recall_at5);
  CHECK(curve.front().precision == base.precision);
  CHECK(curve.back().recall == 0.0);
  CHECK_FALSE(curve.back().precision_defined);
  CHECK(curve.back().precision == 0.0);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].recall <= curve[i - 1].recall);
    CHECK(curve[i].retained <= curve[i - 1].retained);
  }
  std::ostringstream csv;
  write_pr_csv(curve, csv);
  CHECK(csv.str().rfind("threshold,precision,recall\n", 0) == 0);
}

TEST_CASE("report formatting") {
  const std::vector<Claim> gold = {
      make_claim(1, Label::kSupported, {{{"A", 1}}})};
  const auto r = fever_score(gold, std::vector{pred(1, Label::kSupported, {{"A", 1}})});
  const auto j = report_to_json(r);
  CHECK(j.at("fever_score") == 1.0);
  CHECK(format_report(r).find("100.00") != std::string::npos);
}
