#ifndef HYPERGP_RNG_HPP
#define HYPERGP_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "hypergp/types.hpp"

namespace hypergp {

// Seeded generator with hand-rolled distributions so that a given seed
// produces the same stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller, one spare cached.
  double normal();

  // Uniform integer in [0, n).
  int uniform_int(int n);

  // Index drawn proportionally to the (nonnegative) weights.
  int categorical(const Vector& weights);

  void shuffle(std::vector<int>& values);
  std::vector<int> permutation(int n);

  // Derive an independent stream for a sub-task.
  std::uint64_t fork(std::uint64_t salt);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hypergp

#endif
