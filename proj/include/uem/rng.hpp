#pragma once

#include <cmath>
#include <cstdint>

namespace uem {

/// Counter-based pseudo-random generator. The i-th output is a pure function
/// of (key, i), so distinct streams keyed by (seed, stream) are independent
/// and a stream can be regenerated bit-identically from its key alone.
/// Mixing function is the splitmix64 finalizer.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

    std::uint64_t next_u64() { return mix(key_ + kGamma * ++counter_); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; generates pairs, caches the second.
    double next_gauss() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// +1 with probability p, else -1.
    int next_sign(double p_plus) { return next_double() < p_plus ? 1 : -1; }

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    /// Deterministic seed derivation for parallel trials: hash(base, cell, trial).
    static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t cell, std::uint64_t trial) {
        return mix(mix(base ^ (kGamma * (cell + 1))) ^ (kGamma * (trial + 1)));
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace uem
