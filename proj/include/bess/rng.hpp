#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "bess/types.hpp"

namespace bess {

// Seedable, splittable generator. Streams are derived from (seed, labels) by
// hashing, so parallel consumers drawing from disjoint streams reproduce a
// serial run exactly. Draws use splitmix64 plus explicit float conversion and
// Box-Muller, keeping sequences independent of the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

  // Derived stream for (label, index); does not disturb this generator.
  Rng stream(std::uint64_t label, std::uint64_t index = 0) const {
    return Rng(mix(state_ ^ mix(label + 0x517cc1b727220a95ull)) ^ mix(index + 1));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Standard complex gaussian, E|z|^2 = 1.
  Complex cgauss() {
    const double re = normal();
    const double im = normal();
    return Complex(re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0);
  }

  CMatrix cmatrix(Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = cgauss();
    return m;
  }

  Complex unimodular() {
    const double theta = uniform(0.0, 2.0 * std::numbers::pi);
    return std::polar(1.0, theta);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace bess
