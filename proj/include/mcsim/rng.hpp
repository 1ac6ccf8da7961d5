#pragma once

#include <cstdint>

namespace mcsim {

/// One SplitMix64 step: advances `state` and returns the next output.
/// This is the only seed-mixing primitive in the project; every stream of
/// randomness (network draws, event streams, calibration trials) derives
/// from the run seed through it, so reruns reproduce byte-identical output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Labeled seed lanes. Deriving per-purpose sub-seeds from (lane, index)
/// keeps partial reruns (e.g. a single repeat) identical to full runs.
enum SeedLane : std::uint64_t {
    kLaneNetwork = 1,
    kLaneEvents = 2,
    kLaneCalibration = 3,
};

/// sub_seed(base, lane, index): fold the lane and index into the base seed
/// with alternating SplitMix64 steps.
inline std::uint64_t sub_seed(std::uint64_t base, std::uint64_t lane,
                              std::uint64_t index = 0) {
    std::uint64_t s = base;
    (void)splitmix64_next(s);
    s ^= 0x9E3779B97F4A7C15ULL * (lane + 1);
    (void)splitmix64_next(s);
    s ^= 0x9E3779B97F4A7C15ULL * (index + 1);
    return splitmix64_next(s);
}

/// xoshiro256** stream generator, seeded via SplitMix64 expansion.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 mantissa bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Unbiased uniform integer in [0, n), n >= 1. Rejection keeps the
    /// distribution exact, so event streams are identical across platforms.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

} // namespace mcsim
