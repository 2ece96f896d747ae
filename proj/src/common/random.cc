#include "fever/common/random.h"

#include <cmath>
#include <numbers>

namespace fever {

double Rng::normal() {
  // Box-Muller; one value per call keeps the stream position predictable.
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::truncated_normal(double stddev) {
  double z;
  do {
    z = normal();
  } while (std::fabs(z) > 2.0);
  return z * stddev;
}

}  // namespace fever
