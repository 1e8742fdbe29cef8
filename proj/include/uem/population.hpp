#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "uem/model.hpp"
#include "uem/quadrature.hpp"
#include "uem/trace.hpp"
#include "uem/vec.hpp"

namespace uem::population {

inline constexpr int kMinMapOrder = 40;

/// One-dimensional population mean map
///   f(theta) = E[X tanh(X theta + beta_{delta_iter})],
///   X ~ (1-delta_star) N(eta,1) + delta_star N(-eta,1).
/// delta_iter defaults to delta_star; setting it differently gives the
/// mismatched map used when the iteration runs with a wrong weight.
struct PopMeanMap1D {
    double eta;
    double delta_star;
    double delta_iter;
    quad::QuadratureGrid grid;

    PopMeanMap1D(double eta_, double delta_star_, quad::QuadratureGrid grid_);
    PopMeanMap1D(double eta_, double delta_star_, double delta_iter_, quad::QuadratureGrid grid_);

    double beta_iter() const;
};

double pop_mean_1d(const PopMeanMap1D& map, double theta);

/// Closed-form derivatives of the population mean map:
/// order 1: E[X^2 / cosh^2(X theta + beta)]  (positive everywhere),
/// order 2: -2 E[X^3 tanh(X theta + beta) / cosh^2(X theta + beta)].
double pop_mean_1d_deriv(const PopMeanMap1D& map, double theta, int order);

/// Two-dimensional decomposition of the d-dimensional population mean map
/// into the signal coordinate a (along theta_star) and the orthogonal
/// coordinate b:
///   F(a,b) = E[V tanh(aV + bW + beta)],  G(a,b) = E[W tanh(aV + bW + beta)],
/// with V ~ (1-delta) N(eta,1) + delta N(-eta,1) and W ~ N(0,1) independent.
struct SignalOrthogonalMap {
    double eta;
    double delta;
    quad::QuadratureGrid grid;

    SignalOrthogonalMap(double eta_, double delta_, quad::QuadratureGrid grid_);
};

double signal_map(const SignalOrthogonalMap& map, double a, double b);      // F(a,b)
double orthogonal_map(const SignalOrthogonalMap& map, double a, double b);  // G(a,b)

/// Population weight map h(rho) = E[tanh(||theta|| V + beta_rho)] where V is
/// the data projected onto the fixed direction theta-hat:
///   V ~ (1+rho_star)/2 N(<theta-hat, theta_star>, 1)
///     + (1-rho_star)/2 N(-<theta-hat, theta_star>, 1).
struct PopWeightMap {
    Vec theta;
    Vec theta_star;
    double rho_star;
    quad::QuadratureGrid grid;

    PopWeightMap(Vec theta_, Vec theta_star_, double rho_star_, quad::QuadratureGrid grid_);

    double theta_norm() const { return norm(theta); }
    /// <theta-hat, theta_star>, the projection of the truth on the fixed direction.
    double projection() const;
};

double pop_weight(const PopWeightMap& map, double rho);

/// d/drho h(rho) via d beta_rho/d rho = 1/(1-rho^2); quadrature-backed.
double pop_weight_deriv(const PopWeightMap& map, double rho);

/// d^2/drho^2 h(rho) = 2/(1-rho^2)^2 E[(rho - tanh(.)) / cosh^2(.)].
double pop_weight_second_deriv(const PopWeightMap& map, double rho);

/// Slope of h at rho = 1, in closed form (no quadrature):
///   e^{2||theta||^2} [ (1+rho_star)/2 e^{-2<theta,theta_star>}
///                    + (1-rho_star)/2 e^{+2<theta,theta_star>} ].
/// An interior fixed point rho_# exists iff this exceeds 1.
double weight_deriv_at_one(const PopWeightMap& map);

/// The curvature-change point rho-bar: h is concave on [-1, rho-bar] and
/// convex on [rho-bar, 1]. Located by bisecting h'' (which is increasing).
double weight_curvature_change(const PopWeightMap& map);

/// Interior fixed point rho_# of h, or nullopt when the slope condition at
/// rho = 1 fails (then the only fixed points are the boundaries).
/// Requires <theta, theta_star> != 0; otherwise rho_star is unidentifiable.
std::optional<double> find_weight_fixed_point(const PopWeightMap& map);

/// Scans g(x) = map(x) - x for sign changes on a uniform grid over
/// [lo, hi], refines each bracket by bisection to |g| <= 1e-10, merges roots
/// closer than 1e-6, and returns them sorted. An empty result is valid.
std::vector<double> find_fixed_points_1d(const std::function<double(double)>& map, double lo,
                                         double hi, int scan_points = 2000);

/// Population mean map in d dimensions for an arbitrary iterate theta and
/// iteration weight rho (possibly mismatched to the truth):
///   f(theta, rho | theta_star, rho_star) = E[X tanh(<theta, X> + beta_rho)].
/// Evaluated through the signal/orthogonal decomposition, so only a 2-d
/// tensor quadrature is needed regardless of d.
Vec pop_mean_vector(const model::MixtureParams& truth, double rho_iter, const Vec& theta,
                    const quad::QuadratureGrid& grid);

struct IterateOptions {
    double tol = 1e-8;
    int max_iter = 10000;
};

/// Runs x_{t+1} = map(x_t) until ||x_{t+1} - x_t|| <= tol or max_iter.
/// Throws DivergenceError with the partial trace on a non-finite iterate.
IterationTrace iterate_map(const std::function<Vec(const Vec&)>& map, Vec x0,
                           const IterateOptions& opts);
IterationTrace iterate_scalar_map(const std::function<double(double)>& map, double x0,
                                  const IterateOptions& opts);

/// s(u) = -tanh(u+beta) + tanh(u-beta) - 1/(2 delta cosh^2(u+beta))
///        + 1/(2 (1-delta) cosh^2(u-beta)), with beta = atanh(1-2 delta).
/// Strictly negative on all of R for delta in (0, 1/2).
double s_function(double u, double beta, double delta);

}  // namespace uem::population
