// Test-only brute-force Monte Carlo oracles. These deliberately avoid the
// quadrature code path: expectations are estimated by direct sampling with
// the counter RNG, so agreement with the library oracles is meaningful.
#pragma once

#include <cmath>
#include <cstdint>

#include "uem/rng.hpp"

namespace uem::test_oracles {

struct McValue {
    double mean;
    double se;
};

template <class Draw>
McValue mc(std::int64_t n, std::uint64_t seed, Draw&& draw) {
    double s = 0.0, s2 = 0.0;
    CounterRng rng(seed, 0xabcdef);
    for (std::int64_t i = 0; i < n; ++i) {
        const double g = draw(rng);
        s += g;
        s2 += g * g;
    }
    const double mean = s / n;
    const double var = std::max(0.0, s2 / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

/// Draw from (1-delta) N(eta,1) + delta N(-eta,1).
inline double draw_mixture(CounterRng& rng, double eta, double delta) {
    return rng.next_sign(1.0 - delta) * eta + rng.next_gauss();
}

}  // namespace uem::test_oracles
