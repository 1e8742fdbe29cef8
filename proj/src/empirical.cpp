#include "uem/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "uem/kernels.hpp"
#include "uem/population.hpp"
#include "uem/rng.hpp"

namespace uem::empirical {

namespace {

// Stream tag separating initialization draws from the data-generation streams.
constexpr std::uint64_t kInitStream = 0x1717171717171717ull;

double sign_or_plus(double ip, IterationTrace& trace) {
    if (ip > 0.0) return 1.0;
    if (ip < 0.0) return -1.0;
    trace.sign_ambiguous = true;
    return 1.0;
}

void fill_mean_losses(Estimate& est, const model::Dataset& data) {
    est.loss_l2 = model::loss(est.value, data.params_used.theta_star, model::LossKind::L2);
    est.loss_l0 = model::loss(est.value, data.params_used.theta_star, model::LossKind::L0);
}

Vec random_unit_vector(int d, std::uint64_t seed) {
    CounterRng rng(seed, kInitStream);
    Vec u(static_cast<std::size_t>(d));
    double nrm = 0.0;
    while (nrm == 0.0) {
        for (auto& v : u) v = rng.next_gauss();
        nrm = norm(u);
    }
    for (auto& v : u) v /= nrm;
    return u;
}

IterationTrace run_mean_iteration(const model::Dataset& data, Vec theta0, double rho,
                                  const EstimatorConfig& cfg) {
    population::IterateOptions opts{cfg.tol, cfg.max_iter};
    return population::iterate_map(
        [&](const Vec& theta) { return emp_mean_iter(data, theta, rho); }, std::move(theta0), opts);
}

}  // namespace

Vec emp_mean_iter(const model::Dataset& data, const Vec& theta, double rho) {
    return kernels::parallel::mean_iter(data, theta, model::rho_to_beta(rho));
}

double emp_weight_iter(const model::Dataset& data, double rho, const Vec& theta) {
    return kernels::parallel::weight_iter(data, theta, model::rho_to_beta(rho));
}

Estimate em_mean_estimate(const model::Dataset& data, double rho_star, const EstimatorConfig& cfg) {
    Vec theta0(static_cast<std::size_t>(data.d), 0.0);
    switch (cfg.init_kind) {
        case InitKind::Zero:
            break;
        case InitKind::ScaledMean: {
            if (rho_star == 0.0)
                throw std::domain_error("em_mean_estimate: scaled-mean init needs rho_star != 0");
            theta0 = (1.0 / rho_star) * data.mean();
            break;
        }
        case InitKind::RandomSphere:
            throw std::invalid_argument("em_mean_estimate: init must be Zero or ScaledMean");
    }
    Estimate est;
    est.trace = run_mean_iteration(data, std::move(theta0), rho_star, cfg);
    est.value = est.trace.final_state();
    est.estimator_name = "em-mean";
    fill_mean_losses(est, data);
    return est;
}

Estimate em_balanced_sign_corrected(const model::Dataset& data, const EstimatorConfig& cfg) {
    if (cfg.init_kind != InitKind::RandomSphere)
        throw std::invalid_argument("em_balanced_sign_corrected: init must be RandomSphere");
    const double n = static_cast<double>(data.n);
    const double scale = cfg.c0 * std::pow(data.d * std::log(n) / n, 0.25);
    Vec theta0 = scale * random_unit_vector(data.d, cfg.seed);

    Estimate est;
    est.trace = run_mean_iteration(data, std::move(theta0), 0.0, cfg);
    const Vec& theta_t = est.trace.final_state();
    const double s = sign_or_plus(dot(theta_t, data.mean()), est.trace);
    est.value = s * theta_t;
    est.estimator_name = "em-balanced";
    fill_mean_losses(est, data);
    return est;
}

Estimate em_weight_estimate(const model::Dataset& data, const Vec& theta,
                            const EstimatorConfig& cfg) {
    if (!cfg.truncation || !(*cfg.truncation > 0.0 && *cfg.truncation < 1.0))
        throw std::invalid_argument("em_weight_estimate: truncation C_rho in (0,1) required");
    const double cap = *cfg.truncation;
    population::IterateOptions opts{cfg.tol, cfg.max_iter};
    Estimate est;
    est.trace = population::iterate_scalar_map(
        [&](double rho) { return std::clamp(emp_weight_iter(data, rho, theta), -cap, cap); }, 0.0,
        opts);
    est.value = est.trace.final_state();
    est.estimator_name = "em-weight";
    est.loss_l2 = std::abs(est.scalar() - data.params_used.rho_star);
    return est;
}

Estimate adaptive_em(const model::Dataset& data, double rho_star, const EstimatorConfig& cfg) {
    const double n = static_cast<double>(data.n);
    const double threshold = cfg.kappa * std::pow(data.d * std::log(n) / n, 0.25);
    EstimatorConfig branch_cfg = cfg;
    Estimate est;
    if (rho_star >= threshold) {
        branch_cfg.init_kind = InitKind::ScaledMean;
        est = em_mean_estimate(data, rho_star, branch_cfg);
        est.branch = "unbalanced";
    } else {
        branch_cfg.init_kind = InitKind::RandomSphere;
        est = em_balanced_sign_corrected(data, branch_cfg);
        est.branch = "balanced";
    }
    est.estimator_name = "em-adaptive";
    return est;
}

Estimate mom_mean(const model::Dataset& data, double rho_star) {
    if (rho_star == 0.0) throw std::domain_error("mom_mean: rho_star = 0, mean unidentifiable");
    Estimate est;
    est.value = (1.0 / rho_star) * data.mean();
    est.estimator_name = "mom-mean";
    est.trace.iterates.push_back(est.value);
    est.trace.converged = true;
    fill_mean_losses(est, data);
    return est;
}

Estimate mom_weight(const model::Dataset& data, const Vec& theta) {
    const double nt = norm(theta);
    if (nt == 0.0) throw std::domain_error("mom_weight: theta = 0, weight unidentifiable");
    Estimate est;
    est.value = {dot(theta, data.mean()) / (nt * nt)};
    est.estimator_name = "mom-weight";
    est.trace.iterates.push_back(est.value);
    est.trace.converged = true;
    est.loss_l2 = std::abs(est.scalar() - data.params_used.rho_star);
    return est;
}

Vec spectral_from_second_moment(const std::vector<double>& matrix, int d) {
    if (matrix.size() != static_cast<std::size_t>(d) * d)
        throw std::invalid_argument("spectral_from_second_moment: matrix must be d x d");
    auto multiply = [&](const Vec& v) {
        Vec out(static_cast<std::size_t>(d), 0.0);
        for (int a = 0; a < d; ++a) {
            double s = 0.0;
            for (int b = 0; b < d; ++b) s += matrix[static_cast<std::size_t>(a) * d + b] * v[b];
            out[a] = s;
        }
        return out;
    };

    Vec v(static_cast<std::size_t>(d), 0.0);
    v[0] = 1.0;
    if (norm(multiply(v)) == 0.0) {
        // e_1 lies in the null space; nudge every coordinate.
        for (auto& x : v) x += 1e-3;
        const double nv = norm(v);
        for (auto& x : v) x /= nv;
    }

    bool converged = false;
    for (int it = 0; it < 10000; ++it) {
        Vec w = multiply(v);
        const double nw = norm(w);
        if (nw == 0.0) break;  // matrix annihilates v: treat as lambda = 0
        for (auto& x : w) x /= nw;
        if (dot(w, v) < 0.0)
            for (auto& x : w) x = -x;
        const double delta = dist(w, v);
        v = std::move(w);
        if (delta <= 1e-10) {
            converged = true;
            break;
        }
    }
    if (!converged && norm(multiply(v)) != 0.0)
        throw std::runtime_error("spectral_from_second_moment: power iteration did not converge");

    const double lambda = dot(v, multiply(v));
    const double amp = std::sqrt(std::max(lambda - 1.0, 0.0));
    return amp * v;
}

Estimate spectral_estimate(const model::Dataset& data) {
    if (data.n < 2) throw std::domain_error("spectral_estimate: n must be >= 2");
    Estimate est;
    est.value = spectral_from_second_moment(kernels::parallel::second_moment(data), data.d);
    est.estimator_name = "spectral";
    est.trace.iterates.push_back(est.value);
    est.trace.converged = true;
    est.loss_l0 = model::loss(est.value, data.params_used.theta_star, model::LossKind::L0);
    return est;
}

std::pair<Estimate, Estimate> joint_alternating(const model::Dataset& data, int phases,
                                                const EstimatorConfig& cfg) {
    if (phases < 2) throw std::invalid_argument("joint_alternating: phases must be >= 2");
    EstimatorConfig mean_cfg = cfg;
    mean_cfg.init_kind = InitKind::RandomSphere;

    Estimate mean_est = em_balanced_sign_corrected(data, mean_cfg);
    Estimate weight_est = em_weight_estimate(data, mean_est.value, cfg);

    const double cap = *cfg.truncation;
    population::IterateOptions opts{cfg.tol, cfg.max_iter};
    for (int phase = 3; phase <= phases; ++phase) {
        if (phase % 2 == 1) {
            // Mean phase: refine theta with the weight frozen at the current rho.
            const double rho = weight_est.scalar();
            mean_est.trace = population::iterate_map(
                [&](const Vec& theta) { return emp_mean_iter(data, theta, rho); }, mean_est.value,
                opts);
            mean_est.value = mean_est.trace.final_state();
            fill_mean_losses(mean_est, data);
        } else {
            // Weight phase: continue the truncated iteration from the current rho.
            weight_est.trace = population::iterate_scalar_map(
                [&](double rho) {
                    return std::clamp(emp_weight_iter(data, rho, mean_est.value), -cap, cap);
                },
                weight_est.scalar(), opts);
            weight_est.value = weight_est.trace.final_state();
            weight_est.loss_l2 = std::abs(weight_est.scalar() - data.params_used.rho_star);
        }
    }
    mean_est.branch = "joint:balanced-mean-first";
    weight_est.branch = "joint:balanced-mean-first";
    return {std::move(mean_est), std::move(weight_est)};
}

}  // namespace uem::empirical
