#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "uem/model.hpp"
#include "uem/trace.hpp"
#include "uem/vec.hpp"

namespace uem::empirical {

enum class InitKind { Zero, ScaledMean, RandomSphere };

struct EstimatorConfig {
    InitKind init_kind = InitKind::Zero;
    int max_iter = 10000;
    double tol = 1e-8;                     // tol = 0 gives the fixed-iteration mode
    std::optional<double> truncation;      // C_rho cap for the weight iteration
    std::uint64_t seed = 0;                // random-sphere initialization stream
    double c0 = 1.0;                       // scale of the random-sphere init norm
    double kappa = 1.0;                    // adaptive branch threshold multiplier
};

struct Estimate {
    Vec value;
    std::optional<double> loss_l2;
    std::optional<double> loss_l0;
    IterationTrace trace;
    std::string estimator_name;
    std::string branch;

    double scalar() const { return value.at(0); }
};

/// One empirical mean EM step: E_n[X tanh(<theta, X> + beta_rho)].
Vec emp_mean_iter(const model::Dataset& data, const Vec& theta, double rho);

/// One empirical weight EM step: E_n[tanh(<theta, X> + beta_rho)].
double emp_weight_iter(const model::Dataset& data, double rho, const Vec& theta);

/// Unbalanced mean EM with the true weight held at rho_star, initialized at
/// zero or at the scaled sample mean (1/rho_star) E_n[X].
Estimate em_mean_estimate(const model::Dataset& data, double rho_star, const EstimatorConfig& cfg);

/// Balanced mean EM (rho = 0 in the iteration) from a random low-norm start
/// theta_0 = c0 (d log n / n)^{1/4} u-hat, followed by the sign correction
/// s = sgn <theta_T, E_n[X]>. Reports both the sign-ambiguous and the
/// corrected loss.
Estimate em_balanced_sign_corrected(const model::Dataset& data, const EstimatorConfig& cfg);

/// Truncated weight EM rho_{t+1} = [E_n tanh(<theta, X> + beta_{rho_t})]_{C_rho}
/// from rho_0 = 0, for a fixed mean theta.
Estimate em_weight_estimate(const model::Dataset& data, const Vec& theta,
                            const EstimatorConfig& cfg);

/// Runs the unbalanced iteration when rho_star >= kappa (d log n / n)^{1/4}
/// (ties included), the balanced sign-corrected one otherwise; records which
/// branch fired.
Estimate adaptive_em(const model::Dataset& data, double rho_star, const EstimatorConfig& cfg);

/// Method of moments for the mean: (1/rho_star) E_n[X].
Estimate mom_mean(const model::Dataset& data, double rho_star);

/// Method of moments for the weight: <theta-hat, E_n[X]> / ||theta||.
Estimate mom_weight(const model::Dataset& data, const Vec& theta);

/// Top eigenpair of E_n[X X^T] by power iteration; returns
/// sqrt(max{lambda_max - 1, 0}) v-hat. Sign-ambiguous by construction.
Estimate spectral_estimate(const model::Dataset& data);

/// Synthetic-input path for the spectral estimator: extract the estimate from
/// a given d x d second-moment matrix instead of computing it from data.
Vec spectral_from_second_moment(const std::vector<double>& matrix, int d);

/// Freezing schedule for joint estimation: balanced mean EM with sign
/// correction, then the truncated weight iteration with the mean frozen,
/// alternating further if phases > 2. Returns (mean estimate, weight estimate).
std::pair<Estimate, Estimate> joint_alternating(const model::Dataset& data, int phases,
                                                const EstimatorConfig& cfg);

}  // namespace uem::empirical
