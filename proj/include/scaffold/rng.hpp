#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace scaffold {

// Single seeded generator shared by initialization, dropout and the batch
// scheduler. All randomness in a run flows through one of these so a fixed
// seed reproduces the run bit for bit on the same machine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : engine_(seed) {}

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(engine_);
  }

  // true with probability p
  bool bernoulli(double p) {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    return d(engine_) < p;
  }

  // uniform integer in [0, n)
  std::size_t index(std::size_t n) {
    std::uniform_int_distribution<std::size_t> d(0, n - 1);
    return d(engine_);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    std::shuffle(v.begin(), v.end(), engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace scaffold
