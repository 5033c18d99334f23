#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace negscope {

// Deterministic draws on top of mt19937_64. The standard distributions are
// implementation-defined, so shuffling and gaussians are done by hand here;
// the same seed gives the same stream on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t raw() { return gen_(); }

  // uniform integer in [0, n); returns 0 when n == 0
  uint64_t below(uint64_t n) { return n == 0 ? 0 : gen_() % n; }

  // uniform double in [0, 1) with 53 bits
  double uniform() { return static_cast<double>(gen_() >> 11) * (1.0 / 9007199254740992.0); }

  // standard normal via Box-Muller
  double normal() {
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace negscope
