#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "uem/vec.hpp"

namespace uem::model {

/// Largest |rho| the conversions accept; beyond this the beta arithmetic
/// would be effectively infinite downstream.
inline constexpr double kRhoLimit = 1.0 - 1e-12;

/// Inverse-temperature parameter: atanh(rho) = 0.5*log((1+rho)/(1-rho)).
double rho_to_beta(double rho);
double beta_to_rho(double beta);

enum class ConvertDirection { RhoToDelta, DeltaToRho };

/// delta = (1 - rho)/2 and back; both maps are affine and exact.
double delta_rho_convert(double value, ConvertDirection direction);

/// Ground truth of the two-component symmetric mixture
///   (1+rho)/2 * N(theta, I) + (1-rho)/2 * N(-theta, I).
struct MixtureParams {
    Vec theta_star;
    double rho_star = 0.0;
    int d = 1;

    MixtureParams(Vec theta, double rho);
    /// theta_star = eta * e_1 in d dimensions.
    static MixtureParams axis(int d, double eta, double rho);

    double eta() const { return norm(theta_star); }
    double delta_star() const { return (1.0 - rho_star) / 2.0; }
    double beta_star() const { return rho_to_beta(rho_star); }
};

/// Norm/imbalance caps used by truncated iterations and the harness.
struct GlobalBounds {
    double c_theta;
    double c_rho;

    GlobalBounds(double theta_cap, double rho_cap);
    double c_beta() const { return rho_to_beta(c_rho); }
};

/// n i.i.d. samples, row-major n x d, plus generation metadata. Immutable
/// after construction; regeneration with the same (params, n, seed) is
/// bit-identical.
struct Dataset {
    std::vector<double> samples;  // row-major, n*d
    std::int64_t n = 0;
    int d = 1;
    std::uint64_t seed = 0;
    MixtureParams params_used;

    std::span<const double> row(std::int64_t i) const {
        return std::span<const double>(samples.data() + i * d, static_cast<std::size_t>(d));
    }

    Vec mean() const;  // E_n[X]
};

Dataset sample(const MixtureParams& params, std::int64_t n, std::uint64_t seed);

enum class LossKind { L2, L0 };

/// L2: ||a - b||. L0: min(||a - b||, ||a + b||), the sign-ambiguous loss.
double loss(const Vec& theta_hat, const Vec& theta_star, LossKind kind);

/// E[S | X = x] = tanh(<theta, x> + beta_rho).
double posterior_sign(const Vec& theta, double rho, const Vec& x);

/// Observed-data log-likelihood sum_i log p_{theta,rho}(X_i).
double log_likelihood(const Dataset& data, const Vec& theta, double rho);

/// log cosh(t) without overflow.
double log_cosh(double t);

/// Dataset export: CSV with header x0,...,x{d-1} plus a JSON sidecar
/// {n, d, seed, theta_star, rho_star}. csv_path's extension is replaced
/// by .json for the sidecar.
void save_dataset(const Dataset& data, const std::filesystem::path& csv_path);
Dataset load_dataset(const std::filesystem::path& csv_path);

}  // namespace uem::model
