#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "uem/vec.hpp"

namespace uem {

/// Record of a fixed-point iteration: every iterate (including the initial
/// state), per-step residuals, and the stopping outcome.
struct IterationTrace {
    std::vector<Vec> iterates;       // iterates[0] is the initial state
    std::vector<double> residuals;   // residuals[t] = ||x_{t+1} - x_t||
    bool converged = false;
    bool diverged = false;           // non-finite iterate encountered
    bool sign_ambiguous = false;     // sign correction hit an exact zero inner product
    int iterations_used = 0;
    double elapsed_seconds = 0.0;

    std::size_t state_dim() const { return iterates.empty() ? 0 : iterates.front().size(); }

    const Vec& final_state() const {
        if (iterates.empty()) throw std::logic_error("IterationTrace: empty trace");
        return iterates.back();
    }
};

struct DivergenceError : std::runtime_error {
    explicit DivergenceError(std::string what, IterationTrace partial)
        : std::runtime_error(std::move(what)), trace(std::move(partial)) {}
    IterationTrace trace;
};

}  // namespace uem
