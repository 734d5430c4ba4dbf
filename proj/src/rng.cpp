#include "hypergp/rng.hpp"

#include <cmath>
#include <numbers>

#include "hypergp/errors.hpp"

namespace hypergp {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  double u2 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

int Rng::uniform_int(int n) {
  if (n <= 0) throw ValidationError(errc::empty_input, "uniform_int requires n > 0");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = gen_();
  while (x >= limit) x = gen_();
  return static_cast<int>(x % bound);
}

int Rng::categorical(const Vector& weights) {
  if (weights.size() == 0) throw ValidationError(errc::empty_input, "categorical requires weights");
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0)
      throw ValidationError(errc::non_positive_weight, "categorical weights must be nonnegative");
    total += weights[i];
  }
  if (total <= 0.0)
    throw ValidationError(errc::non_positive_weight, "categorical weights must not all be zero");
  const double u = uniform01() * total;
  double cum = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size() - 1);
}

void Rng::shuffle(std::vector<int>& values) {
  for (int i = static_cast<int>(values.size()) - 1; i > 0; --i) {
    const int j = uniform_int(i + 1);
    std::swap(values[i], values[static_cast<std::size_t>(j)]);
  }
}

std::vector<int> Rng::permutation(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  shuffle(p);
  return p;
}

std::uint64_t Rng::fork(std::uint64_t salt) {
  // splitmix64 over (next draw xor salt) gives well-separated child seeds.
  std::uint64_t z = gen_() ^ (salt + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace hypergp
