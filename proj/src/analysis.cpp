#include "uem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include <nlohmann/json.hpp>

#include "uem/empirical.hpp"
#include "uem/io.hpp"
#include "uem/rng.hpp"

namespace uem::analysis {

int convergence_time(const IterationTrace& trace, const Vec& target, double tol_mult) {
    if (trace.iterates.empty()) throw std::invalid_argument("convergence_time: empty trace");
    const double final_error = dist(trace.iterates.back(), target);
    const double bar = tol_mult * final_error;
    for (std::size_t t = 0; t < trace.iterates.size(); ++t)
        if (dist(trace.iterates[t], target) <= bar) return static_cast<int>(t);
    return kNeverConverged;
}

ConcentrationReport concentration_check(const model::MixtureParams& params, std::int64_t n,
                                        const std::vector<Vec>& theta_grid, double rho, int trials,
                                        std::uint64_t base_seed, double threshold,
                                        const quad::QuadratureGrid& grid) {
    if (theta_grid.empty()) throw std::invalid_argument("concentration_check: empty theta grid");
    // Population values do not depend on the trial; compute once per grid point.
    std::vector<Vec> pop(theta_grid.size());
    std::vector<double> denom(theta_grid.size());
    const double omega = std::sqrt(params.d * std::log(static_cast<double>(n)) / n);
    for (std::size_t g = 0; g < theta_grid.size(); ++g) {
        pop[g] = population::pop_mean_vector(params, rho, theta_grid[g], grid);
        denom[g] = std::max(norm(theta_grid[g]), std::abs(rho)) * omega;
    }

    ConcentrationReport report;
    report.threshold = threshold;
    report.sup_stats.resize(trials);
    for (int trial = 0; trial < trials; ++trial) {
        const auto seed = CounterRng::derive_seed(base_seed, 0, trial);
        const auto data = model::sample(params, n, seed);
        double sup = 0.0;
        for (std::size_t g = 0; g < theta_grid.size(); ++g) {
            const Vec emp = empirical::emp_mean_iter(data, theta_grid[g], rho);
            const double num = dist(emp, pop[g]);
            if (num == 0.0) continue;
            sup = std::max(sup, num / denom[g]);
        }
        report.sup_stats[trial] = sup;
    }
    std::size_t below = 0;
    for (double s : report.sup_stats)
        if (s <= threshold) ++below;
    report.fraction_below = static_cast<double>(below) / trials;
    report.median = median(report.sup_stats);
    return report;
}

void ConcentrationReport::to_json(const std::filesystem::path& path) const {
    nlohmann::ordered_json j;
    j["schema_version"] = io::kSchemaVersion;
    j["threshold"] = threshold;
    j["fraction_below"] = fraction_below;
    j["median"] = median;
    j["sup_stats"] = sup_stats;
    io::write_json(j, path);
}

void SweepSpec::validate() const {
    if (d.empty() || n.empty() || eta.empty() || rho_star.empty())
        throw std::invalid_argument("SweepSpec: every grid needs at least one value");
    if (estimators.empty()) throw std::invalid_argument("SweepSpec: estimator list is empty");
    if (trials < 1) throw std::invalid_argument("SweepSpec: trials must be >= 1");
    for (int dd : d)
        if (dd < 1) throw std::invalid_argument("SweepSpec: d must be >= 1");
    for (auto nn : n)
        if (nn < 1) throw std::invalid_argument("SweepSpec: n must be >= 1");
    for (double e : eta)
        if (!(e >= 0.0)) throw std::invalid_argument("SweepSpec: eta must be >= 0");
    for (double r : rho_star)
        if (!(std::abs(r) < 1.0)) throw std::invalid_argument("SweepSpec: |rho_star| must be < 1");
}

std::uint64_t sweep_seed(const SweepSpec& spec, std::size_t cell, int trial) {
    return CounterRng::derive_seed(spec.base_seed, cell, static_cast<std::uint64_t>(trial));
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double opt_or_nan(const std::optional<double>& v) { return v ? *v : kNan; }

void run_estimator(const std::string& name, const model::Dataset& data,
                   const empirical::EstimatorConfig& base_cfg, SweepRow& row) {
    using namespace empirical;
    const auto& truth = data.params_used;
    EstimatorConfig cfg = base_cfg;
    Estimate est;
    if (name == "em-mean-zero") {
        cfg.init_kind = InitKind::Zero;
        est = em_mean_estimate(data, truth.rho_star, cfg);
    } else if (name == "em-mean-scaled") {
        cfg.init_kind = InitKind::ScaledMean;
        est = em_mean_estimate(data, truth.rho_star, cfg);
    } else if (name == "em-adaptive") {
        est = adaptive_em(data, truth.rho_star, cfg);
    } else if (name == "em-balanced") {
        cfg.init_kind = InitKind::RandomSphere;
        est = em_balanced_sign_corrected(data, cfg);
    } else if (name == "em-weight") {
        est = em_weight_estimate(data, truth.theta_star, cfg);
    } else if (name == "mom-mean") {
        est = mom_mean(data, truth.rho_star);
    } else if (name == "mom-weight") {
        est = mom_weight(data, truth.theta_star);
    } else if (name == "spectral") {
        est = spectral_estimate(data);
    } else if (name == "joint") {
        auto [mean_est, weight_est] = joint_alternating(data, 2, cfg);
        est = std::move(mean_est);
        est.branch = "joint";
    } else {
        throw std::invalid_argument("unknown estimator: " + name);
    }
    row.loss_l2 = opt_or_nan(est.loss_l2);
    row.loss_l0 = opt_or_nan(est.loss_l0);
    row.iterations = est.trace.iterations_used;
    row.branch = est.branch;
}

}  // namespace

SweepResult error_sweep(const SweepSpec& spec) {
    spec.validate();
    struct Cell {
        int d;
        std::int64_t n;
        double eta;
        double rho;
    };
    std::vector<Cell> cells;
    cells.reserve(spec.cells());
    for (int d : spec.d)
        for (auto n : spec.n)
            for (double eta : spec.eta)
                for (double rho : spec.rho_star) cells.push_back({d, n, eta, rho});

    empirical::EstimatorConfig base_cfg;
    base_cfg.truncation = 0.95;

    const std::size_t n_tasks = cells.size() * spec.trials;
    const std::size_t n_est = spec.estimators.size();
    SweepResult result;
    result.rows.resize(n_tasks * n_est);

    #pragma omp parallel for schedule(dynamic)
    for (std::size_t task = 0; task < n_tasks; ++task) {
        const std::size_t cell_idx = task / spec.trials;
        const int trial = static_cast<int>(task % spec.trials);
        const Cell& cell = cells[cell_idx];
        const auto seed = sweep_seed(spec, cell_idx, trial);
        const auto params = model::MixtureParams::axis(cell.d, cell.eta, cell.rho);
        const auto data = model::sample(params, cell.n, seed);
        empirical::EstimatorConfig cfg = base_cfg;
        cfg.seed = seed;
        for (std::size_t e = 0; e < n_est; ++e) {
            SweepRow& row = result.rows[task * n_est + e];
            row = {cell.d, cell.n, cell.eta, cell.rho, trial, spec.estimators[e], kNan, kNan, 0, ""};
            try {
                run_estimator(spec.estimators[e], data, cfg, row);
            } catch (const std::exception& ex) {
                row.branch = std::string("error:") + ex.what();
            }
        }
    }
    return result;
}

void SweepResult::to_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("SweepResult: cannot open " + path.string());
    out << "d,n,eta,rho_star,trial,estimator,loss_l2,loss_l0,iterations,branch\n";
    for (const auto& r : rows) {
        out << r.d << ',' << r.n << ',' << io::full_precision(r.eta) << ','
            << io::full_precision(r.rho_star) << ',' << r.trial << ',' << r.estimator << ','
            << io::full_precision(r.loss_l2) << ',' << io::full_precision(r.loss_l0) << ','
            << r.iterations << ',' << r.branch << "\n";
    }
    if (!out.good()) throw std::runtime_error("SweepResult: write failed");
}

void SweepResult::summary_json(const std::filesystem::path& path) const {
    // Group rows by (estimator, d, eta, rho, n) and take the median loss;
    // sign-ambiguous estimators report only l0, so fall back to it per row.
    std::map<std::tuple<std::string, int, double, double>,
             std::map<std::int64_t, std::vector<double>>>
        groups;
    for (const auto& r : rows) {
        const double loss = std::isnan(r.loss_l2) ? r.loss_l0 : r.loss_l2;
        if (std::isnan(loss)) continue;
        groups[{r.estimator, r.d, r.eta, r.rho_star}][r.n].push_back(loss);
    }
    nlohmann::ordered_json summary;
    summary["schema_version"] = io::kSchemaVersion;
    summary["medians"] = nlohmann::ordered_json::array();
    summary["slopes"] = nlohmann::ordered_json::array();
    for (auto& [key, by_n] : groups) {
        const auto& [estimator, d, eta, rho] = key;
        std::vector<double> log_n, log_err;
        for (auto& [n, losses] : by_n) {
            const double med = median(losses);
            nlohmann::ordered_json row;
            row["estimator"] = estimator;
            row["d"] = d;
            row["eta"] = eta;
            row["rho_star"] = rho;
            row["n"] = n;
            row["median_loss"] = med;
            summary["medians"].push_back(row);
            if (med > 0.0) {
                log_n.push_back(std::log(static_cast<double>(n)));
                log_err.push_back(std::log(med));
            }
        }
        if (log_n.size() >= 2) {
            nlohmann::ordered_json row;
            row["estimator"] = estimator;
            row["d"] = d;
            row["eta"] = eta;
            row["rho_star"] = rho;
            row["slope_log_error_vs_log_n"] = fit_slope(log_n, log_err);
            summary["slopes"].push_back(row);
        }
    }
    io::write_json(summary, path);
}

const char* regime_name(RateRegime regime) {
    switch (regime) {
        case RateRegime::LowSignal: return "low-signal";
        case RateRegime::WeightLimited: return "weight-limited";
        case RateRegime::SignalLimited: return "signal-limited";
        case RateRegime::Parametric: return "parametric";
    }
    return "unknown";
}

RateEnvelope rate_envelope(double eta, double rho, int d, std::int64_t n) {
    if (!(eta >= 0.0) || d < 1 || n < 1 || !(std::abs(rho) < 1.0))
        throw std::domain_error("rate_envelope: invalid arguments");
    const double root = std::sqrt(static_cast<double>(d) / n);
    const double pivot = std::pow(static_cast<double>(d) / n, 0.25);
    const double r = std::abs(rho);
    if (r >= pivot) {
        if (eta <= root / r) return {RateRegime::LowSignal, eta};
        if (eta <= r) return {RateRegime::WeightLimited, root / r};
        if (eta <= 1.0) return {RateRegime::SignalLimited, root / eta};
        return {RateRegime::Parametric, root};
    }
    if (eta <= pivot) return {RateRegime::LowSignal, eta};
    if (eta <= 1.0) return {RateRegime::SignalLimited, root / eta};
    return {RateRegime::Parametric, root};
}

std::vector<LandscapeCell> landscape_scan(const std::vector<double>& delta_grid,
                                          const std::vector<double>& eta_grid,
                                          const quad::QuadratureGrid& grid) {
    if (delta_grid.empty() || eta_grid.empty())
        throw std::invalid_argument("landscape_scan: empty grid");
    std::vector<LandscapeCell> table;
    table.reserve(delta_grid.size() * eta_grid.size());
    for (double delta : delta_grid) {
        for (double eta : eta_grid) {
            population::PopMeanMap1D map(eta, delta, grid);
            auto roots = population::find_fixed_points_1d(
                [&](double t) { return population::pop_mean_1d(map, t); }, -(eta + 1.0), -1e-3);
            table.push_back({delta, eta, static_cast<int>(roots.size())});
        }
    }
    return table;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    if (values.size() % 2 == 1) return values[m];
    return 0.5 * (values[m - 1] + values[m]);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_slope: degenerate x");
    return sxy / sxx;
}

}  // namespace uem::analysis
