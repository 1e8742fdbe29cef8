#include "uem/population.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace uem::population {

namespace {

double beta_of_delta(double delta) { return 0.5 * std::log((1.0 - delta) / delta); }

void require_delta(double delta, const char* who) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error(std::string(who) + ": delta out of (0,1)");
}

void require_order(const quad::QuadratureGrid& grid, const char* who) {
    if (grid.order() < kMinMapOrder)
        throw std::domain_error(std::string(who) + ": grid order must be >= 40");
}

double sech2(double t) {
    const double c = std::cosh(t);
    return 1.0 / (c * c);
}

// Bisect g on a bracket [lo, hi] with g(lo), g(hi) of opposite sign, until
// |g| <= value_tol at the midpoint (keeps shrinking the bracket regardless).
double bisect(const std::function<double(double)>& g, double lo, double hi, double g_lo,
              double value_tol) {
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double g_mid = g(mid);
        if (std::abs(g_mid) <= value_tol && hi - lo <= 1e-12) break;
        if ((g_mid < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

}  // namespace

PopMeanMap1D::PopMeanMap1D(double eta_, double delta_star_, quad::QuadratureGrid grid_)
    : PopMeanMap1D(eta_, delta_star_, delta_star_, std::move(grid_)) {}

PopMeanMap1D::PopMeanMap1D(double eta_, double delta_star_, double delta_iter_,
                           quad::QuadratureGrid grid_)
    : eta(eta_), delta_star(delta_star_), delta_iter(delta_iter_), grid(std::move(grid_)) {
    if (!(eta >= 0.0)) throw std::domain_error("PopMeanMap1D: eta must be >= 0");
    require_delta(delta_star, "PopMeanMap1D");
    require_delta(delta_iter, "PopMeanMap1D");
    require_order(grid, "PopMeanMap1D");
}

double PopMeanMap1D::beta_iter() const { return beta_of_delta(delta_iter); }

double pop_mean_1d(const PopMeanMap1D& map, double theta) {
    const double beta = map.beta_iter();
    return map.grid.mixture_expectation(map.eta, map.delta_star,
                                        [&](double x) { return x * std::tanh(x * theta + beta); });
}

double pop_mean_1d_deriv(const PopMeanMap1D& map, double theta, int order) {
    const double beta = map.beta_iter();
    if (order == 1)
        return map.grid.mixture_expectation(map.eta, map.delta_star,
                                            [&](double x) { return x * x * sech2(x * theta + beta); });
    if (order == 2)
        return map.grid.mixture_expectation(map.eta, map.delta_star, [&](double x) {
            const double t = x * theta + beta;
            return -2.0 * x * x * x * std::tanh(t) * sech2(t);
        });
    throw std::invalid_argument("pop_mean_1d_deriv: order must be 1 or 2");
}

SignalOrthogonalMap::SignalOrthogonalMap(double eta_, double delta_, quad::QuadratureGrid grid_)
    : eta(eta_), delta(delta_), grid(std::move(grid_)) {
    if (!(eta >= 0.0)) throw std::domain_error("SignalOrthogonalMap: eta must be >= 0");
    require_delta(delta, "SignalOrthogonalMap");
    require_order(grid, "SignalOrthogonalMap");
}

double signal_map(const SignalOrthogonalMap& map, double a, double b) {
    const double beta = beta_of_delta(map.delta);
    return map.grid.tensor_expectation(
        map.eta, map.delta, [&](double v, double w) { return v * std::tanh(a * v + b * w + beta); });
}

double orthogonal_map(const SignalOrthogonalMap& map, double a, double b) {
    const double beta = beta_of_delta(map.delta);
    return map.grid.tensor_expectation(
        map.eta, map.delta, [&](double v, double w) { return w * std::tanh(a * v + b * w + beta); });
}

PopWeightMap::PopWeightMap(Vec theta_, Vec theta_star_, double rho_star_,
                           quad::QuadratureGrid grid_)
    : theta(std::move(theta_)), theta_star(std::move(theta_star_)), rho_star(rho_star_),
      grid(std::move(grid_)) {
    if (theta.size() != theta_star.size()) throw std::invalid_argument("PopWeightMap: dimension mismatch");
    if (!(std::abs(rho_star) < 1.0)) throw std::domain_error("PopWeightMap: |rho_star| must be < 1");
    require_order(grid, "PopWeightMap");
}

double PopWeightMap::projection() const {
    const double nt = norm(theta);
    if (nt == 0.0) return 0.0;
    return dot(theta, theta_star) / nt;
}

namespace {

// E[g(V)] for the projected mixture V ~ (1+rho*)/2 N(m,1) + (1-rho*)/2 N(-m,1).
template <class Fn>
double projected_expectation(const PopWeightMap& map, Fn&& g) {
    const double m = map.projection();
    const double delta = (1.0 - map.rho_star) / 2.0;
    return map.grid.mixture_expectation(m, delta, g);
}

}  // namespace

double pop_weight(const PopWeightMap& map, double rho) {
    const double beta = model::rho_to_beta(rho);
    const double a = map.theta_norm();
    return projected_expectation(map, [&](double v) { return std::tanh(a * v + beta); });
}

double pop_weight_deriv(const PopWeightMap& map, double rho) {
    const double beta = model::rho_to_beta(rho);
    const double a = map.theta_norm();
    const double dbeta = 1.0 / (1.0 - rho * rho);
    return dbeta * projected_expectation(map, [&](double v) { return sech2(a * v + beta); });
}

double pop_weight_second_deriv(const PopWeightMap& map, double rho) {
    const double beta = model::rho_to_beta(rho);
    const double a = map.theta_norm();
    const double scale = 2.0 / ((1.0 - rho * rho) * (1.0 - rho * rho));
    return scale * projected_expectation(map, [&](double v) {
               const double t = a * v + beta;
               return (rho - std::tanh(t)) * sech2(t);
           });
}

double weight_deriv_at_one(const PopWeightMap& map) {
    const double nt2 = dot(map.theta, map.theta);
    const double ip = dot(map.theta, map.theta_star);
    return std::exp(2.0 * nt2) * ((1.0 + map.rho_star) / 2.0 * std::exp(-2.0 * ip) +
                                  (1.0 - map.rho_star) / 2.0 * std::exp(2.0 * ip));
}

double weight_curvature_change(const PopWeightMap& map) {
    // h'' is strictly increasing in rho, negative at -1 side, positive at 1 side.
    const double lo0 = -1.0 + 1e-9, hi0 = 1.0 - 1e-9;
    auto g = [&](double rho) { return pop_weight_second_deriv(map, rho); };
    double lo = lo0, hi = hi0;
    double g_lo = g(lo);
    if (g_lo >= 0.0) return lo0;
    if (g(hi) <= 0.0) return hi0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::optional<double> find_weight_fixed_point(const PopWeightMap& map) {
    if (dot(map.theta, map.theta_star) == 0.0)
        throw std::domain_error("find_weight_fixed_point: <theta, theta_star> = 0, weight unidentifiable");
    if (!(weight_deriv_at_one(map) > 1.0)) return std::nullopt;
    const double lo = -1.0 + 1e-9, hi = 1.0 - 1e-9;
    auto g = [&](double rho) { return pop_weight(map, rho) - rho; };
    // h'( +-1 ) > 1 pins the signs: g > 0 near -1 and g < 0 near +1.
    return bisect(g, lo, hi, g(lo), 1e-10);
}

std::vector<double> find_fixed_points_1d(const std::function<double(double)>& map, double lo,
                                         double hi, int scan_points) {
    if (!(lo < hi)) throw std::invalid_argument("find_fixed_points_1d: need lo < hi");
    if (scan_points < 100) throw std::invalid_argument("find_fixed_points_1d: need scan_points >= 100");
    auto g = [&](double x) { return map(x) - x; };
    std::vector<double> roots;
    const double step = (hi - lo) / scan_points;
    double x_prev = lo;
    double g_prev = g(lo);
    for (int i = 1; i <= scan_points; ++i) {
        const double x = (i == scan_points) ? hi : lo + i * step;
        const double g_x = g(x);
        if (g_prev == 0.0) {
            roots.push_back(x_prev);
        } else if ((g_prev < 0.0) != (g_x < 0.0)) {
            roots.push_back(bisect(g, x_prev, x, g_prev, 1e-10));
        }
        x_prev = x;
        g_prev = g_x;
    }
    if (g_prev == 0.0) roots.push_back(hi);
    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots) {
        if (merged.empty() || r - merged.back() > 1e-6)
            merged.push_back(r);
    }
    return merged;
}

Vec pop_mean_vector(const model::MixtureParams& truth, double rho_iter, const Vec& theta,
                    const quad::QuadratureGrid& grid) {
    if (theta.size() != truth.theta_star.size())
        throw std::invalid_argument("pop_mean_vector: dimension mismatch");
    require_order(grid, "pop_mean_vector");
    const double beta = model::rho_to_beta(rho_iter);
    const double eta = truth.eta();
    const double delta_star = truth.delta_star();
    const std::size_t d = theta.size();

    if (eta == 0.0) {
        // Pure noise: f(theta) = E[W tanh(||theta|| W + beta)] along theta-hat.
        const double nt = norm(theta);
        if (nt == 0.0) return Vec(d, 0.0);
        const double amp =
            grid.normal_expectation([&](double w) { return w * std::tanh(nt * w + beta); });
        return (amp / nt) * theta;
    }

    const Vec theta_hat = (1.0 / eta) * truth.theta_star;
    const double a = dot(theta, theta_hat);
    Vec ortho = theta - a * theta_hat;
    const double b = norm(ortho);

    const double f_signal = grid.tensor_expectation(
        eta, delta_star, [&](double v, double w) { return v * std::tanh(a * v + b * w + beta); });
    Vec out = f_signal * theta_hat;
    if (b > 0.0) {
        const double f_ortho = grid.tensor_expectation(
            eta, delta_star, [&](double v, double w) { return w * std::tanh(a * v + b * w + beta); });
        for (std::size_t j = 0; j < d; ++j) out[j] += (f_ortho / b) * ortho[j];
    }
    return out;
}

IterationTrace iterate_map(const std::function<Vec(const Vec&)>& map, Vec x0,
                           const IterateOptions& opts) {
    if (!(opts.tol >= 0.0)) throw std::invalid_argument("iterate_map: tol must be >= 0");
    const auto t_start = std::chrono::steady_clock::now();
    IterationTrace trace;
    trace.iterates.push_back(std::move(x0));
    for (int t = 0; t < opts.max_iter; ++t) {
        Vec next = map(trace.iterates.back());
        if (!all_finite(next)) {
            trace.diverged = true;
            trace.iterations_used = t;
            trace.elapsed_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
            throw DivergenceError("iterate_map: non-finite iterate at step " + std::to_string(t + 1),
                                  std::move(trace));
        }
        const double residual = dist(next, trace.iterates.back());
        trace.iterates.push_back(std::move(next));
        trace.residuals.push_back(residual);
        trace.iterations_used = t + 1;
        if (residual <= opts.tol) {
            trace.converged = true;
            break;
        }
    }
    trace.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return trace;
}

IterationTrace iterate_scalar_map(const std::function<double(double)>& map, double x0,
                                  const IterateOptions& opts) {
    return iterate_map([&](const Vec& x) { return Vec{map(x[0])}; }, Vec{x0}, opts);
}

double s_function(double u, double beta, double delta) {
    if (!(beta > 0.0)) throw std::invalid_argument("s_function: beta must be > 0");
    if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("s_function: delta out of (0, 1/2)");
    if (std::abs(beta - std::atanh(1.0 - 2.0 * delta)) > 1e-10)
        throw std::invalid_argument("s_function: beta and delta are inconsistent");
    // Algebraically equal to
    //   -tanh(u+b) + tanh(u-b) - 1/(2 d cosh^2(u+b)) + 1/(2 (1-d) cosh^2(u-b));
    // this factored form avoids the e^{-2u} cancellation that flips the sign
    // of the naive sum for |u| beyond ~18.
    const double rho = 1.0 - 2.0 * delta;
    const double cp = std::cosh(u + beta);
    const double cm = std::cosh(u - beta);
    const double scale = 4.0 * delta * delta * (1.0 - delta) * (1.0 - delta);
    return -rho * std::exp(-u) * std::cosh(u) / (scale * cp * cp * cm * cm);
}

}  // namespace uem::population
