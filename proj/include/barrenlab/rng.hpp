#pragma once

#include <cstdint>

namespace barrenlab {

/// Seeded counter-based generator (splitmix64 finalizer applied to a
/// key + counter word). Independent substreams come from hashing
/// (seed, stream id), so parallel workers can draw without coordination
/// and runs are bit-reproducible.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ull))) {}

    std::uint64_t next_u64() {
        return mix(key_ + (counter_++) * 0x9E3779B97F4A7C15ull);
    }

    /// Uniform double in [0,1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo,hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        // 128-bit multiply rejection-free mapping; bias < 2^-64 is
        // irrelevant for experiment sampling.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace barrenlab
