#pragma once

#include <cstdint>

namespace spinchain {

// Stream identity: identical (seed, stream) always reproduces the same draw
// sequence, on any platform. Replica r of an experiment seeded (s, b) runs on
// stream b + r.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

namespace detail {

struct SplitMix64 {
    std::uint64_t x;
    std::uint64_t next() {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

}  // namespace detail

// xoshiro256++ with the state expanded from (seed, stream) through splitmix64.
class Rng {
  public:
    explicit Rng(RngSeed s) {
        detail::SplitMix64 g{s.seed};
        const std::uint64_t k = g.next();
        detail::SplitMix64 h{k ^ (s.stream * 0xD2B74407B1CE6E93ull + g.next())};
        for (auto& w : state_) w = h.next();
        state_[0] |= 1ull;  // never all-zero
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform site in [1, L], multiply-shift bounded draw.
    int uniform_site(int length) {
        const unsigned __int128 wide =
            static_cast<unsigned __int128>(next_u64()) * static_cast<std::uint64_t>(length);
        return 1 + static_cast<int>(wide >> 64);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

}  // namespace spinchain
