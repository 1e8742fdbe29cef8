#include "uem/checks.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>

#include "uem/analysis.hpp"
#include "uem/empirical.hpp"
#include "uem/kernels.hpp"
#include "uem/model.hpp"
#include "uem/population.hpp"
#include "uem/rng.hpp"

namespace uem::checks {

namespace {

using model::MixtureParams;
using population::PopMeanMap1D;
using population::PopWeightMap;
using population::SignalOrthogonalMap;
using quad::QuadratureGrid;

constexpr int kCheckOrder = 160;  // quadrature order used throughout the suite

const std::vector<double> kEtaGrid = {0.1, 0.5, 1.0, 2.0};
const std::vector<double> kDeltaGrid = {0.05, 0.2, 0.35, 0.45};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

struct Failures {
    int count = 0;
    std::string first;

    void add(const std::string& what) {
        if (count++ == 0) first = what;
    }
    CheckResult result(std::string name, const std::string& ok_detail) const {
        if (count == 0) return {std::move(name), true, ok_detail};
        return {std::move(name), false, std::to_string(count) + " violations, first: " + first};
    }
};

// ---------------------------------------------------------------------------
// Property checks
// ---------------------------------------------------------------------------

CheckResult check_consistency() {
    const QuadratureGrid grid(kCheckOrder);
    Failures fails;
    double worst = 0.0;
    for (double eta : kEtaGrid)
        for (double delta : kDeltaGrid) {
            PopMeanMap1D map(eta, delta, grid);
            const double err = std::abs(population::pop_mean_1d(map, eta) - eta);
            worst = std::max(worst, err);
            if (!(err <= 1e-7))
                fails.add("|f(eta)-eta|=" + fmt(err) + " at eta=" + fmt(eta) + " delta=" + fmt(delta));
        }
    return fails.result("consistency f(eta)=eta", "max |f(eta)-eta| = " + fmt(worst));
}

CheckResult check_unique_positive_fixed_point() {
    const QuadratureGrid grid(kCheckOrder);
    Failures fails;
    for (double eta : kEtaGrid)
        for (double delta : kDeltaGrid) {
            PopMeanMap1D map(eta, delta, grid);
            auto roots = population::find_fixed_points_1d(
                [&](double t) { return population::pop_mean_1d(map, t); }, 0.01, 3.0);
            if (roots.size() != 1 || std::abs(roots[0] - eta) > 1e-6)
                fails.add("eta=" + fmt(eta) + " delta=" + fmt(delta) + " roots=" +
                          std::to_string(roots.size()));
        }
    return fails.result("unique positive fixed point at eta", "exactly {eta} on every grid cell");
}

CheckResult check_negative_fixed_points_confined() {
    const QuadratureGrid grid(kCheckOrder);
    Failures fails;
    for (double eta : kEtaGrid)
        for (double delta : kDeltaGrid) {
            PopMeanMap1D map(eta, delta, grid);
            auto roots = population::find_fixed_points_1d(
                [&](double t) { return population::pop_mean_1d(map, t); }, -3.0, -1e-4);
            for (double r : roots)
                if (!(r > -eta && r < 0.0))
                    fails.add("root " + fmt(r) + " outside (-eta,0) at eta=" + fmt(eta) +
                              " delta=" + fmt(delta));
        }
    return fails.result("negative fixed points confined to (-eta,0)", "all roots interior");
}

CheckResult check_delta_pivot() {
    const QuadratureGrid grid(kCheckOrder);
    Failures fails;
    for (double eta : {0.5, 1.0}) {
        for (int i = 1; i <= 20; ++i) {
            const double theta = eta * i / 10.0;  // includes theta = eta at i = 10
            for (int j = 0; j < 20; ++j) {
                const double delta = 0.05 + j * (0.40 / 19.0);
                const double h = std::min({delta - 1e-3, 0.5 - delta - 1e-3, 0.02});
                PopMeanMap1D up(eta, delta + h, grid);
                PopMeanMap1D down(eta, delta - h, grid);
                const double cdiff = (population::pop_mean_1d(up, theta) -
                                      population::pop_mean_1d(down, theta)) /
                                     (2.0 * h);
                bool ok = true;
                if (theta < eta) ok = cdiff <= 1e-7;
                else if (theta > eta) ok = cdiff >= -1e-7;
                else ok = std::abs(cdiff) <= 1e-7;
                if (!ok)
                    fails.add("d f / d delta = " + fmt(cdiff) + " at theta=" + fmt(theta) +
                              " eta=" + fmt(eta) + " delta=" + fmt(delta));
            }
        }
    }
    return fails.result("delta-derivative sign pivots at theta=eta", "sign(theta-eta) everywhere");
}

CheckResult check_delta_dominance_trajectories() {
    const QuadratureGrid grid(kCheckOrder);
    PopMeanMap1D fast(1.0, 0.1, grid);
    PopMeanMap1D slow(1.0, 0.4, grid);
    double t_fast = 0.2, t_slow = 0.2;
    Failures fails;
    for (int t = 1; t <= 50; ++t) {
        t_fast = population::pop_mean_1d(fast, t_fast);
        t_slow = population::pop_mean_1d(slow, t_slow);
        if (!(std::abs(1.0 - t_fast) < std::abs(1.0 - t_slow)))
            fails.add("t=" + std::to_string(t) + " |1-theta|: delta=0.1 " + fmt(std::abs(1 - t_fast)) +
                      " vs delta=0.4 " + fmt(std::abs(1 - t_slow)));
    }
    return fails.result("lower delta converges faster at every step",
                        "strict dominance for t in [1,50]");
}

CheckResult check_orthogonal_map_properties() {
    const QuadratureGrid grid(kCheckOrder);
    Failures fails;
    // G(a, 0) = 0.
    for (double eta : {0.5, 1.0})
        for (double delta : kDeltaGrid)
            for (int i = 0; i < 10; ++i) {
                SignalOrthogonalMap map(eta, delta, grid);
                const double a = 0.2 * i;
                const double g = population::orthogonal_map(map, a, 0.0);
                if (!(std::abs(g) <= 1e-10)) fails.add("G(a,0)=" + fmt(g) + " at a=" + fmt(a));
            }
    // G(a,b | eta, delta) <= G(a,b | eta, 1/2) + 1e-9 for a >= 0.
    for (double delta : kDeltaGrid) {
        SignalOrthogonalMap unb(1.0, delta, grid);
        SignalOrthogonalMap bal(1.0, 0.4999999, grid);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                const double a = 0.2 * (i + 1), b = 0.2 * (j + 1);
                const double gu = population::orthogonal_map(unb, a, b);
                const double gb = population::orthogonal_map(bal, a, b);
                if (!(gu <= gb + 1e-9))
                    fails.add("G(delta)=" + fmt(gu) + " > G(1/2)=" + fmt(gb) + " at a=" + fmt(a) +
                              " b=" + fmt(b) + " delta=" + fmt(delta));
            }
    }
    // G decreasing in eta on [0, a + b^2/a] for a > 0.
    for (double delta : kDeltaGrid)
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                const double a = 0.2 * (i + 1), b = 0.2 * (j + 1);
                const double hi = a + b * b / a;
                double prev = std::numeric_limits<double>::infinity();
                for (int k = 0; k < 4; ++k) {
                    const double eta = hi * (k + 1) / 4.0;
                    SignalOrthogonalMap map(eta, delta, grid);
                    const double g = population::orthogonal_map(map, a, b);
                    if (!(g <= prev + 1e-9))
                        fails.add("G increasing in eta at a=" + fmt(a) + " b=" + fmt(b) +
                                  " delta=" + fmt(delta));
                    prev = g;
                }
            }
    return fails.result("orthogonal map G: zero at b=0, dominated by balanced, decreasing in eta",
                        "all three properties hold");
}

CheckResult check_s_negativity() {
    Failures fails;
    for (double delta : {0.05, 0.2, 0.4}) {
        const double beta = std::atanh(1.0 - 2.0 * delta);
        for (int i = 0; i <= 4000; ++i) {
            const double u = -20.0 + 0.01 * i;
            const double s = population::s_function(u, beta, delta);
            if (!(s < 0.0)) fails.add("s(" + fmt(u) + ")=" + fmt(s) + " at delta=" + fmt(delta));
        }
    }
    return fails.result("s(u) < 0 on [-20,20]", "negative at every grid point");
}

CheckResult check_weight_map() {
    const QuadratureGrid grid(kCheckOrder);
    const auto params = MixtureParams::axis(2, 1.0, 0.6);
    Failures fails;

    PopWeightMap at_truth(params.theta_star, params.theta_star, params.rho_star, grid);
    // Strict monotonicity and a single curvature change on a 200-point grid.
    const int m = 200;
    std::vector<double> h(m);
    for (int i = 0; i < m; ++i) {
        const double rho = -1.0 + 1e-6 + (2.0 - 2e-6) * i / (m - 1);
        h[i] = population::pop_weight(at_truth, rho);
    }
    for (int i = 0; i + 1 < m; ++i)
        if (!(h[i + 1] > h[i])) fails.add("h not strictly increasing at index " + std::to_string(i));
    int sign_changes = 0;
    int prev_sign = 0;
    for (int i = 1; i + 1 < m; ++i) {
        const double dd = h[i + 1] - 2.0 * h[i] + h[i - 1];
        if (std::abs(dd) < 1e-12) continue;
        const int sign = dd > 0.0 ? 1 : -1;
        if (prev_sign != 0 && sign != prev_sign) ++sign_changes;
        prev_sign = sign;
    }
    if (sign_changes > 1) fails.add("second difference changes sign " + std::to_string(sign_changes) + " times");

    const auto fp = population::find_weight_fixed_point(at_truth);
    if (!fp || std::abs(*fp - params.rho_star) > 1e-7)
        fails.add("fixed point at theta=theta_star: " + (fp ? fmt(*fp) : std::string("none")));

    PopWeightMap stretched(1.5 * params.theta_star, params.theta_star, params.rho_star, grid);
    const auto fp2 = population::find_weight_fixed_point(stretched);
    if (!fp2 || !(*fp2 < params.rho_star))
        fails.add("fixed point at theta=1.5 theta_star not below rho_star: " +
                  (fp2 ? fmt(*fp2) : std::string("none")));

    return fails.result("weight map h: monotone, single curvature change, fixed-point laws",
                        "rho_# = " + fmt(*fp) + " at truth, " + fmt(*fp2) + " under stretch");
}

// Brute-force Monte Carlo estimators used as the independent reference for
// the quadrature oracles. Chunked so runs are deterministic and parallel.
struct McEstimate {
    double mean;
    double se;
};

template <class Draw>
McEstimate mc_expectation(std::int64_t n, std::uint64_t seed, Draw&& draw) {
    constexpr std::int64_t chunk = 1 << 16;
    const std::int64_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<double> sums(n_chunks, 0.0), sq_sums(n_chunks, 0.0);
    #pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        CounterRng rng(seed, static_cast<std::uint64_t>(c) + 1);
        const std::int64_t count = std::min(chunk, n - c * chunk);
        double s = 0.0, s2 = 0.0;
        for (std::int64_t i = 0; i < count; ++i) {
            const double g = draw(rng);
            s += g;
            s2 += g * g;
        }
        sums[c] = s;
        sq_sums[c] = s2;
    }
    double total = 0.0, total_sq = 0.0;
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        total += sums[c];
        total_sq += sq_sums[c];
    }
    const double mean = total / n;
    const double var = std::max(0.0, total_sq / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

CheckResult check_oracle_fidelity() {
    const QuadratureGrid grid(kCheckOrder);
    constexpr std::int64_t kDraws = 10'000'000;
    CounterRng pick(909090);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * pick.next_double(); };
    Failures fails;

    for (int p = 0; p < 5; ++p) {  // 1-d mean map
        const double eta = uniform(0.1, 2.0), delta = uniform(0.05, 0.45), theta = uniform(-3.0, 3.0);
        PopMeanMap1D map(eta, delta, grid);
        const double q = population::pop_mean_1d(map, theta);
        const double beta = map.beta_iter();
        const auto mc = mc_expectation(kDraws, 1000 + p, [&](CounterRng& rng) {
            const double x = rng.next_sign(1.0 - delta) * eta + rng.next_gauss();
            return x * std::tanh(x * theta + beta);
        });
        if (std::abs(q - mc.mean) > 4.0 * mc.se)
            fails.add("pop_mean_1d off by " + fmt(std::abs(q - mc.mean)) + " (4se=" + fmt(4 * mc.se) + ")");
    }
    for (int p = 0; p < 10; ++p) {  // F and G
        const double eta = uniform(0.1, 2.0), delta = uniform(0.05, 0.45);
        const double a = uniform(-2.0, 2.0), b = uniform(0.0, 2.0);
        SignalOrthogonalMap map(eta, delta, grid);
        const bool signal = p < 5;
        const double q = signal ? population::signal_map(map, a, b)
                                : population::orthogonal_map(map, a, b);
        const double beta = std::atanh(1.0 - 2.0 * delta);
        const auto mc = mc_expectation(kDraws, 2000 + p, [&](CounterRng& rng) {
            const double v = rng.next_sign(1.0 - delta) * eta + rng.next_gauss();
            const double w = rng.next_gauss();
            return (signal ? v : w) * std::tanh(a * v + b * w + beta);
        });
        if (std::abs(q - mc.mean) > 4.0 * mc.se)
            fails.add(std::string(signal ? "F" : "G") + " off by " + fmt(std::abs(q - mc.mean)) +
                      " (4se=" + fmt(4 * mc.se) + ")");
    }
    for (int p = 0; p < 5; ++p) {  // weight map
        const double eta = uniform(0.5, 2.0), rho_star = uniform(-0.8, 0.8), rho = uniform(-0.9, 0.9);
        Vec theta = {uniform(0.2, 2.0), uniform(-1.0, 1.0)};
        const auto params = MixtureParams::axis(2, eta, rho_star);
        PopWeightMap map(theta, params.theta_star, rho_star, grid);
        const double q = population::pop_weight(map, rho);
        const double beta = model::rho_to_beta(rho);
        const double nt = norm(theta), proj = map.projection();
        const auto mc = mc_expectation(kDraws, 3000 + p, [&](CounterRng& rng) {
            const double v = rng.next_sign((1.0 + rho_star) / 2.0) * proj + rng.next_gauss();
            return std::tanh(nt * v + beta);
        });
        if (std::abs(q - mc.mean) > 4.0 * mc.se)
            fails.add("pop_weight off by " + fmt(std::abs(q - mc.mean)) + " (4se=" + fmt(4 * mc.se) + ")");
    }
    return fails.result("quadrature oracles match 1e7-draw Monte Carlo within 4 SE",
                        "20 random parameter points agree");
}

CheckResult check_likelihood_ascent() {
    Failures fails;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto params = MixtureParams::axis(3, 1.0, 0.6);
        const auto data = model::sample(params, 20000, seed);
        for (auto init : {empirical::InitKind::Zero, empirical::InitKind::ScaledMean}) {
            empirical::EstimatorConfig cfg;
            cfg.init_kind = init;
            cfg.max_iter = 200;
            const auto est = empirical::em_mean_estimate(data, params.rho_star, cfg);
            double prev = -std::numeric_limits<double>::infinity();
            for (const auto& theta : est.trace.iterates) {
                const double ll = model::log_likelihood(data, theta, params.rho_star);
                if (!(ll >= prev - 1e-9))
                    fails.add("log-likelihood dropped by " + fmt(prev - ll) + " (seed " +
                              std::to_string(seed) + ")");
                prev = ll;
            }
        }
    }
    return fails.result("likelihood ascent along EM mean traces", "nondecreasing within 1e-9");
}

// ---------------------------------------------------------------------------
// Quantitative (Monte Carlo) checks
// ---------------------------------------------------------------------------

CheckResult check_rate_slope() {
    analysis::SweepSpec spec;
    spec.d = {8};
    spec.n = {4096, 8192, 16384, 32768, 65536, 131072, 262144};
    spec.eta = {1.0};
    spec.rho_star = {0.6};
    spec.trials = 50;
    spec.estimators = {"em-adaptive"};
    spec.base_seed = 1101;
    const auto result = analysis::error_sweep(spec);

    std::map<std::int64_t, std::vector<double>> by_n;
    for (const auto& row : result.rows) by_n[row.n].push_back(row.loss_l2);
    std::vector<double> log_n, log_err;
    for (auto& [n, losses] : by_n) {
        log_n.push_back(std::log(static_cast<double>(n)));
        log_err.push_back(std::log(analysis::median(losses)));
    }
    const double slope = analysis::fit_slope(log_n, log_err);
    const bool pass = slope >= -0.6 && slope <= -0.4;
    return {"EM error rate: log-log slope vs n in [-0.6,-0.4]", pass, "slope = " + fmt(slope)};
}

CheckResult check_adaptivity_crossover() {
    const int d = 4;
    const std::int64_t n = 100000;
    const double eta = 0.05;
    const int trials = 50;
    Failures fails;

    std::map<double, std::vector<double>> em_losses;
    std::vector<double> balanced_losses;
    for (int trial = 0; trial < trials; ++trial) {
        for (double rho : {0.2, 0.4, 0.6, 0.8}) {
            const auto seed = CounterRng::derive_seed(1202, static_cast<std::uint64_t>(rho * 10), trial);
            const auto data = model::sample(MixtureParams::axis(d, eta, rho), n, seed);
            empirical::EstimatorConfig cfg;
            cfg.init_kind = empirical::InitKind::ScaledMean;
            cfg.tol = 1e-6;
            cfg.max_iter = 400;
            em_losses[rho].push_back(*empirical::em_mean_estimate(data, rho, cfg).loss_l2);
            if (rho == 0.6) {
                empirical::EstimatorConfig bcfg;
                bcfg.init_kind = empirical::InitKind::RandomSphere;
                bcfg.seed = seed;
                bcfg.tol = 1e-5;
                bcfg.max_iter = 300;
                balanced_losses.push_back(*empirical::em_balanced_sign_corrected(data, bcfg).loss_l2);
            }
        }
    }
    const double em06 = analysis::median(em_losses[0.6]);
    const double bal = analysis::median(balanced_losses);
    if (!(em06 <= 0.5 * bal))
        fails.add("EM median " + fmt(em06) + " not half of balanced median " + fmt(bal));
    double prev = std::numeric_limits<double>::infinity();
    for (double rho : {0.2, 0.4, 0.6, 0.8}) {
        const double med = analysis::median(em_losses[rho]);
        if (!(med <= prev * 1.2))
            fails.add("median error grew from " + fmt(prev) + " to " + fmt(med) + " at rho=" + fmt(rho));
        prev = med;
    }
    return fails.result("unbalanced EM beats balanced EM and improves with rho",
                        "EM@0.6 " + fmt(em06) + " vs balanced " + fmt(bal));
}

CheckResult check_convergence_time_trends() {
    Failures fails;
    // Scaled-mean init in the low-signal regime: converges in O(1) steps.
    {
        std::vector<double> times;
        const auto params = MixtureParams::axis(2, 0.1, 0.6);
        for (int trial = 0; trial < 100; ++trial) {
            const auto seed = CounterRng::derive_seed(1303, 0, trial);
            const auto data = model::sample(params, 100000, seed);
            empirical::EstimatorConfig cfg;
            cfg.init_kind = empirical::InitKind::ScaledMean;
            cfg.tol = 1e-9;
            cfg.max_iter = 300;
            const auto est = empirical::em_mean_estimate(data, params.rho_star, cfg);
            const int t = analysis::convergence_time(est.trace, params.theta_star, 2.0);
            times.push_back(t == analysis::kNeverConverged ? cfg.max_iter + 1 : t);
        }
        const double med = analysis::median(times);
        if (!(med <= 3.0)) fails.add("median T(scaled-mean) = " + fmt(med) + " > 3");
    }
    // Zero init: T scales like 1/rho^2, so halving rho should lengthen it
    // by roughly 4x; accept [2, 8].
    {
        std::map<double, std::vector<double>> times;
        for (double rho : {0.2, 0.4}) {
            const auto params = MixtureParams::axis(2, 0.12, rho);
            for (int trial = 0; trial < 100; ++trial) {
                const auto seed = CounterRng::derive_seed(1304, static_cast<std::uint64_t>(rho * 10), trial);
                const auto data = model::sample(params, 50000, seed);
                empirical::EstimatorConfig cfg;
                cfg.init_kind = empirical::InitKind::Zero;
                cfg.tol = 1e-9;
                cfg.max_iter = 400;
                const auto est = empirical::em_mean_estimate(data, rho, cfg);
                const int t = analysis::convergence_time(est.trace, params.theta_star, 2.0);
                times[rho].push_back(t == analysis::kNeverConverged ? cfg.max_iter + 1 : t);
            }
        }
        const double ratio = analysis::median(times[0.2]) / analysis::median(times[0.4]);
        if (!(ratio >= 2.0 && ratio <= 8.0))
            fails.add("T(rho=0.2)/T(rho=0.4) = " + fmt(ratio) + " outside [2,8]");
    }
    return fails.result("convergence-time trends (O(1) scaled-mean; 1/rho^2 zero-init)",
                        "both trends in range");
}

CheckResult check_sign_correction() {
    const auto params = MixtureParams::axis(4, 1.0, 0.05);
    int correct = 0;
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
        const auto seed = CounterRng::derive_seed(1404, 0, trial);
        const auto data = model::sample(params, 100000, seed);
        empirical::EstimatorConfig cfg;
        cfg.init_kind = empirical::InitKind::RandomSphere;
        cfg.seed = seed;
        cfg.tol = 1e-7;
        cfg.max_iter = 300;
        const auto est = empirical::em_balanced_sign_corrected(data, cfg);
        // The corrected estimate should land on theta_star's side.
        if (dot(est.value, params.theta_star) > 0.0) ++correct;
    }
    const double frac = static_cast<double>(correct) / trials;
    return {"sign correction recovers the sign in >= 95% of trials", frac >= 0.95,
            "success fraction = " + fmt(frac)};
}

CheckResult check_weight_estimation_error() {
    const auto params = MixtureParams::axis(1, 1.0, 0.6);
    const std::int64_t n = 100000;
    std::vector<double> errors;
    for (int trial = 0; trial < 200; ++trial) {
        const auto seed = CounterRng::derive_seed(1505, 0, trial);
        const auto data = model::sample(params, n, seed);
        empirical::EstimatorConfig cfg;
        cfg.truncation = 0.95;
        cfg.max_iter = 300;
        const auto est = empirical::em_weight_estimate(data, params.theta_star, cfg);
        errors.push_back(*est.loss_l2);
    }
    const double med = analysis::median(errors);
    const double bound = 10.0 * std::sqrt(std::log(static_cast<double>(n)) / n) / params.eta();
    return {"weight EM: median |rho-hat - rho*| within rate bound", med <= bound,
            "median " + fmt(med) + " vs bound " + fmt(bound)};
}

CheckResult check_concentration() {
    const QuadratureGrid grid(kCheckOrder);
    const auto params = MixtureParams::axis(2, 1.0, 0.6);
    const double threshold = 20.0;
    Failures fails;

    auto make_grid = [](int count, double max_norm) {
        std::vector<Vec> thetas;
        CounterRng rng(777);
        for (int g = 0; g < count; ++g) {
            Vec u = {rng.next_gauss(), rng.next_gauss()};
            const double nu = norm(u);
            const double r = max_norm * (g + 1) / count;
            thetas.push_back((r / nu) * u);
        }
        return thetas;
    };

    const auto report = analysis::concentration_check(params, 100000, make_grid(50, 2.0),
                                                      params.rho_star, 200, 1606, threshold, grid);
    if (!(report.fraction_below >= 0.95))
        fails.add("fraction below " + fmt(threshold) + " is " + fmt(report.fraction_below));

    const auto small_grid = make_grid(20, 2.0);
    std::vector<double> log_n, log_med;
    for (std::int64_t n : {10000, 100000, 1000000}) {
        const auto rep = analysis::concentration_check(params, n, small_grid, params.rho_star, 50,
                                                       1607, threshold, grid);
        log_n.push_back(std::log(static_cast<double>(n)));
        log_med.push_back(std::log(rep.median));
    }
    const double slope = analysis::fit_slope(log_n, log_med);
    if (!(slope <= 0.2)) fails.add("median sup statistic grows with n, slope " + fmt(slope));
    return fails.result("empirical-population gap concentrates at the omega_d scale",
                        "95% below " + fmt(threshold) + ", slope vs n = " + fmt(slope));
}

CheckResult check_spectral_sanity() {
    Failures fails;
    const Vec theta = {1.0, -0.5, 2.0, 0.25};
    const int d = 4;
    std::vector<double> second_moment(d * d, 0.0);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            second_moment[a * d + b] = theta[a] * theta[b] + (a == b ? 1.0 : 0.0);
    const Vec est = empirical::spectral_from_second_moment(second_moment, d);
    const double err = model::loss(est, theta, model::LossKind::L0);
    if (!(err <= 1e-8)) fails.add("exact-covariance recovery error " + fmt(err));

    std::vector<double> shrunk(d * d, 0.0);
    for (int a = 0; a < d; ++a) shrunk[a * d + a] = 0.5;
    const Vec zero_est = empirical::spectral_from_second_moment(shrunk, d);
    if (norm(zero_est) != 0.0) fails.add("lambda_max <= 1 input gave nonzero estimate");
    return fails.result("spectral estimator sanity on synthetic second moments",
                        "recovers +-theta and returns 0 under pure noise");
}

}  // namespace

std::vector<CheckResult> run_property_checks() {
    return {
        check_consistency(),
        check_unique_positive_fixed_point(),
        check_negative_fixed_points_confined(),
        check_delta_pivot(),
        check_delta_dominance_trajectories(),
        check_orthogonal_map_properties(),
        check_s_negativity(),
        check_weight_map(),
        check_oracle_fidelity(),
        check_likelihood_ascent(),
    };
}

std::vector<CheckResult> run_quantitative_checks() {
    return {
        check_rate_slope(),
        check_adaptivity_crossover(),
        check_convergence_time_trends(),
        check_sign_correction(),
        check_weight_estimation_error(),
        check_concentration(),
        check_spectral_sanity(),
    };
}

}  // namespace uem::checks
