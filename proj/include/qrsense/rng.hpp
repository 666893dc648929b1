#pragma once

#include <cmath>
#include <cstdint>

namespace qrsense {

// 64-bit finalizer (MurmurHash3 / SplitMix64 style).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xff51afd7ed558ccdULL;
    z ^= z >> 33;
    z *= 0xc4ceb9fe1a85ec53ULL;
    z ^= z >> 33;
    return z;
}

// Counter-based generator: every variate is a pure function of (seed, counter),
// so parallel and serial consumers produce identical streams as long as they
// agree on the counter assignment. No mutable state.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(mix64(seed + 0x9e3779b97f4a7c15ULL)) {}

    // uniform in (0, 1), never exactly 0 or 1
    double uniform(std::uint64_t counter) const { return to_unit(word(counter, 0)); }

    // standard normal via Box-Muller (cosine branch)
    double normal(std::uint64_t counter) const {
        const double u1 = to_unit(word(counter, 1));
        const double u2 = to_unit(word(counter, 2));
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::uint64_t word(std::uint64_t counter, std::uint64_t lane) const {
        return mix64(key_ ^ mix64(counter * 0x9e3779b97f4a7c15ULL + lane + 1));
    }

    static double to_unit(std::uint64_t w) {
        return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t key_;
};

}  // namespace qrsense
