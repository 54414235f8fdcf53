#pragma once

// Seeded, portable pseudo-random generator: the 64-bit linear congruential
// generator with Knuth's MMIX constants,
//     state <- state * 6364136223846793005 + 1442695040888963407,
// uniform doubles from the top 53 bits. Fixed algorithm so that every seeded
// artifact (synthetic densities, sampled flags) reproduces bit-for-bit
// across platforms and languages.

#include <cstdint>

#include "flagrecon/geometry.hpp"

namespace flagrecon {

class Lcg {
  public:
    explicit Lcg(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }
    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    // Uniform in [-1, 1).
    double symmetric() { return 2.0 * uniform() - 1.0; }

    Direction direction() {
        const double z = symmetric();
        const double phi = kTwoPi * uniform();
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        return Direction(rho * std::cos(phi), rho * std::sin(phi), z);
    }

    Flag flag() {
        const Direction omega = direction();
        return Flag(omega, kTwoPi * uniform());
    }

  private:
    std::uint64_t state_;
};

}  // namespace flagrecon
