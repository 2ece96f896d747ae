#include <cmath>

#include "doctest.h"
#include "fever/common/errors.h"
#include "fever/encoder/model.h"
#include "fever/sentretrieval/losses.h"

using namespace fever;

TEST_CASE("pointwise loss") {
  Matrix p(1, 2);
  p << 0.2, 0.8;
  const std::vector<int> t = {kEvidenceClass};
  CHECK(std::abs(pointwise_loss(p, t) - (-std::log(0.8))) < 1e-9);
  p << 0.0, 1.0;
  CHECK(pointwise_loss(p, t) == 0.0);

  Matrix two(2, 2);
  two << std::exp(-0.2), 1 - std::exp(-0.2), std::exp(-0.4),
      1 - std::exp(-0.4);
  const std::vector<int> t2 = {0, 0};
  CHECK(pointwise_loss(two, t2) == doctest::Approx(0.3).epsilon(1e-12));

  p << 1.0, 0.0;
  CHECK(pointwise_loss(p, t) == doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("ranknet loss") {
  CHECK(std::abs(ranknet_loss(0.7, 0.7) - std::log(2.0)) < 1e-9);
  CHECK(std::abs(ranknet_loss(2.5, 0.5) - std::log1p(std::exp(-2.0))) < 1e-9);
  const double far = ranknet_loss(50.0, 0.0);
  CHECK(far >= 0.0);
  CHECK(far < 1e-20);
  CHECK(std::isfinite(ranknet_loss(-800.0, 800.0)));
  CHECK(ranknet_loss(-800.0, 800.0) == doctest::Approx(1600.0));
}

TEST_CASE("hinge loss") {
  CHECK(hinge_loss(0.2, 0.5) == 1.3);
  CHECK(hinge_loss(2.0, 1.0) == 0.0);
  CHECK(hinge_loss(3.0, 0.5) == 0.0);
  CHECK(hinge_loss(0.4, 0.4) == 1.0);
}

TEST_CASE("softplus is stable") {
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(softplus(1000.0) == doctest::Approx(1000.0));
  CHECK(softplus(-1000.0) >= 0.0);
}

TEST_CASE("head gradients match finite differences on logits") {
  Matrix logits(4, 1);
  logits << 0.3, -0.2, 1.7, 0.9;
  const std::vector<std::pair<int, int>> pairs = {{0, 1}, {3, 2}};
  for (auto kind : {LossKind::kRankNet, LossKind::kHinge}) {
    const HeadLoss h = pairwise_head(kind, logits, pairs);
    for (int r = 0; r < 4; ++r) {
      Matrix up = logits, down = logits;
      up(r, 0) += 1e-6;
      down(r, 0) -= 1e-6;
      const double num = (pairwise_head(kind, up, pairs).loss -
                          pairwise_head(kind, down, pairs).loss) /
                         2e-6;
      CHECK(h.dlogits(r, 0) == doctest::Approx(num).epsilon(1e-6));
    }
  }
  Matrix two(3, 3);
  two << 0.1, 0.5, -0.3, 2.0, 0.0, 1.0, -1.0, -2.0, 0.5;
  const std::vector<int> t = {1, 0, 2};
  const HeadLoss ce = cross_entropy_head(two, t);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      Matrix up = two, down = two;
      up(r, c) += 1e-6;
      down(r, c) -= 1e-6;
      const double num = (cross_entropy_head(up, t).loss -
                          cross_entropy_head(down, t).loss) /
                         2e-6;
      CHECK(ce.dlogits(r, c) == doctest::Approx(num).epsilon(1e-6));
    }
  }
}

TEST_CASE("hinge takes the zero subgradient at the kink") {
  Matrix logits(2, 1);
  logits << 1.0, 0.0;
  const std::vector<std::pair<int, int>> pairs = {{0, 1}};
  const HeadLoss h = pairwise_head(LossKind::kHinge, logits, pairs);
  CHECK(h.loss == 0.0);
  CHECK(h.dlogits.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("row score is the last logit") {
  Matrix logits(2, 2);
  logits << 0.1, 0.9, -1.0, 3.0;
  CHECK(row_score(logits, 1) == 3.0);
  const std::vector<std::pair<int, int>> pairs = {{0, 1}};
  CHECK(pair_loss_per_pair(LossKind::kHinge, logits, pairs)[0] ==
        hinge_loss(0.9, 3.0));
  const std::vector<std::pair<int, int>> bad = {{0, 5}};
  CHECK_THROWS_AS(pair_loss_per_pair(LossKind::kHinge, logits, bad),
                  InvalidArgument);
}
