#pragma once

#include <array>
#include <cstdint>

namespace fqt {

struct Seed {
    uint64_t value = 0;
    auto operator<=>(const Seed &) const = default;
};

/// SplitMix64 step. Used to expand (seed, stream) into generator state.
uint64_t splitmix64(uint64_t &state);

/// xoshiro256** (Blackman & Vigna). Each (seed, stream) pair gives an
/// independent, platform-stable sequence, so per-trial draws never depend on
/// the order trials are evaluated in.
class Rng {
   public:
    Rng(Seed seed, uint64_t stream);

    uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal via Box-Muller; the second variate is cached.
    double normal();
    bool coin();

   private:
    std::array<uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fqt
