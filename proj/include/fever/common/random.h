#ifndef FEVER_COMMON_RANDOM_H_
#define FEVER_COMMON_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace fever {

// SplitMix64 finalizer. Used to derive independent streams from one seed
// and as the core of the counter-based generator below.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stateless generator: the same key always yields the same value.
inline std::uint64_t counter_hash(std::uint64_t a, std::uint64_t b,
                                  std::uint64_t c, std::uint64_t d) {
  std::uint64_t h = mix64(a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  return mix64(h ^ d);
}

// Uniform in [0, 1) from the top 53 bits.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Seeded sequential generator. mt19937_64 output is fixed by the standard;
// the distributions are written here because the std:: ones are not
// portable across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  double uniform() { return to_unit(engine_()); }

  // Uniform integer in [0, n), rejection sampled to avoid modulo bias.
  std::size_t index(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  double normal();

  // Zero-mean normal with the given stddev, redrawn outside +-2 stddev.
  double truncated_normal(double stddev);

  template <typename T>
  void shuffle(std::vector<T> &items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fever

#endif  // FEVER_COMMON_RANDOM_H_
