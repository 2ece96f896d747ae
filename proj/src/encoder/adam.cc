#include "fever/encoder/adam.h"

#include <cmath>
#include <vector>

#include "fever/common/errors.h"

namespace fever {

OptState init_opt_state(const ModelParams &params, const AdamConfig &hyper) {
  OptState state;
  state.hyper = hyper;
  state.first_moment = zeros_like(params.config);
  state.second_moment = zeros_like(params.config);
  return state;
}

namespace {

std::vector<Matrix *> tensors(ModelParams &p) {
  std::vector<Matrix *> out;
  p.for_each([&](const std::string &, Matrix &m) { out.push_back(&m); });
  return out;
}

}  // namespace

void adam_step(ModelParams &params, const ModelParams &grads,
               OptState &state) {
  if (!same_shape(params, grads) || !same_shape(params, state.first_moment) ||
      !same_shape(params, state.second_moment)) {
    throw InvalidArgument("adam_step: parameter, gradient and moment shapes "
                          "differ");
  }
  if (!grads.all_finite()) {
    throw NumericError(params.config.num_layers, "non-finite gradient");
  }
  std::vector<const Matrix *> g;
  grads.for_each([&](const std::string &, const Matrix &m) { g.push_back(&m); });
  auto w = tensors(params);
  auto m = tensors(state.first_moment);
  auto v = tensors(state.second_moment);

  const auto &hp = state.hyper;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(hp.beta1, t);
  const double correct2 = 1.0 - std::pow(hp.beta2, t);
  for (std::size_t i = 0; i < w.size(); ++i) {
    m[i]->array() = hp.beta1 * m[i]->array() + (1.0 - hp.beta1) * g[i]->array();
    v[i]->array() =
        hp.beta2 * v[i]->array() + (1.0 - hp.beta2) * g[i]->array().square();
    w[i]->array() -= hp.learning_rate * (m[i]->array() / correct1) /
                     ((v[i]->array() / correct2).sqrt() + hp.epsilon);
  }
}

}  // namespace fever
