#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "uem/model.hpp"
#include "uem/population.hpp"
#include "uem/trace.hpp"

namespace uem::analysis {

/// Sentinel returned by convergence_time when the trace never reaches the
/// target accuracy.
inline constexpr int kNeverConverged = std::numeric_limits<int>::max();

/// First t with ||iterate_t - target|| <= tol_mult * (final error), where the
/// final error is the loss of the last iterate.
int convergence_time(const IterationTrace& trace, const Vec& target, double tol_mult);

struct ConcentrationReport {
    std::vector<double> sup_stats;  // normalized supremum, one entry per trial
    double threshold = 0.0;
    double fraction_below = 0.0;    // fraction of trials with statistic <= threshold
    double median = 0.0;

    void to_json(const std::filesystem::path& path) const;
};

/// For each trial draws n samples and computes
///   max_grid ||f_n(theta, rho) - f(theta, rho)|| / (max{||theta||, rho} omega_d),
/// omega_d = sqrt(d log n / n) (C_omega = 1 in normalized reporting). The
/// population value is quadrature-backed. A zero numerator counts as 0 even
/// when the normalizer vanishes.
ConcentrationReport concentration_check(const model::MixtureParams& params, std::int64_t n,
                                        const std::vector<Vec>& theta_grid, double rho, int trials,
                                        std::uint64_t base_seed, double threshold,
                                        const quad::QuadratureGrid& grid);

struct SweepSpec {
    std::vector<int> d;
    std::vector<std::int64_t> n;
    std::vector<double> eta;
    std::vector<double> rho_star;
    int trials = 1;
    std::vector<std::string> estimators;
    std::uint64_t base_seed = 0;

    std::size_t cells() const { return d.size() * n.size() * eta.size() * rho_star.size(); }
    void validate() const;
};

struct SweepRow {
    int d;
    std::int64_t n;
    double eta;
    double rho_star;
    int trial;
    std::string estimator;
    double loss_l2;    // NaN when absent or failed
    double loss_l0;    // NaN when absent or failed
    int iterations;
    std::string branch;
};

struct SweepResult {
    std::vector<SweepRow> rows;

    void to_csv(const std::filesystem::path& path) const;
    /// Per-cell medians plus fitted log-log slopes of median l2 error vs n.
    void summary_json(const std::filesystem::path& path) const;
};

/// Deterministic seed for one (cell, trial) of a sweep; cell is the flattened
/// index of the (d, n, eta, rho_star) grids nested in that order.
std::uint64_t sweep_seed(const SweepSpec& spec, std::size_t cell, int trial);

/// Runs every grid cell x trial x estimator. Individual estimator failures
/// are recorded in their row (branch "error:...", NaN losses), not fatal.
SweepResult error_sweep(const SweepSpec& spec);

enum class RateRegime { LowSignal, WeightLimited, SignalLimited, Parametric };

struct RateEnvelope {
    RateRegime regime;
    double predicted_rate;
};

const char* regime_name(RateRegime regime);

/// Minimax-rate upper envelope for mean estimation. For
/// rho >= (d/n)^{1/4} the rate is the case split
///   eta <= (1/rho) sqrt(d/n)            -> eta
///   (1/rho) sqrt(d/n) < eta <= rho      -> (1/rho) sqrt(d/n)
///   rho < eta <= 1                      -> (1/eta) sqrt(d/n)
///   eta > 1                             -> sqrt(d/n)
/// and for rho < (d/n)^{1/4} the balanced table with pivot (d/n)^{1/4}.
RateEnvelope rate_envelope(double eta, double rho, int d, std::int64_t n);

struct LandscapeCell {
    double delta;
    double eta;
    int negative_fixed_points;
};

/// Counts fixed points of the 1-d population mean map on the negative axis
/// (scan interval [-(eta+1), -1e-3]) for every (delta, eta) pair.
std::vector<LandscapeCell> landscape_scan(const std::vector<double>& delta_grid,
                                          const std::vector<double>& eta_grid,
                                          const quad::QuadratureGrid& grid);

/// Median of a copy of the values (n/2-th order statistic convention for even n:
/// average of the two central order statistics).
double median(std::vector<double> values);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace uem::analysis
