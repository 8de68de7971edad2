#pragma once
// Seeded randomness. Everything random in the engine flows through Rng so
// runs are pure functions of their seeds.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace pxplore {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Engine seeded from several integers (e.g. master seed, learner, step).
  static Rng derive(std::initializer_list<std::uint64_t> parts);

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform() < p; }
  int binomial(int trials, double p);
  std::uint64_t next() { return engine_(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Index drawn proportionally to non-negative weights.
  std::size_t categorical(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
};

// Deterministic 64-bit mix of several integers (seed derivation).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

}  // namespace pxplore
