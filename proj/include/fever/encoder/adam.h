#ifndef FEVER_ENCODER_ADAM_H_
#define FEVER_ENCODER_ADAM_H_

#include <cstdint>

#include "fever/encoder/params.h"

namespace fever {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct OptState {
  AdamConfig hyper;
  ModelParams first_moment;
  ModelParams second_moment;
  std::int64_t step = 0;
};

OptState init_opt_state(const ModelParams &params, const AdamConfig &hyper);

// One bias-corrected adaptive-moment update in place. Throws InvalidArgument
// on shape mismatch and NumericError on non-finite gradients; in both cases
// params and state are left untouched.
void adam_step(ModelParams &params, const ModelParams &grads, OptState &state);

}  // namespace fever

#endif  // FEVER_ENCODER_ADAM_H_
