// uem — data generation, estimation, population diagnostics, Monte Carlo
// sweeps and property checks for the unbalanced two-component Gaussian
// mixture. Exit codes: 0 success, 2 usage/domain errors, 1 runtime failures.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uem/analysis.hpp"
#include "uem/checks.hpp"
#include "uem/empirical.hpp"
#include "uem/io.hpp"
#include "uem/model.hpp"
#include "uem/population.hpp"

using uem::operator*;

namespace {

using nlohmann::ordered_json;

struct DataArgs {
    std::string data_path;
    int d = 2;
    std::int64_t n = 10000;
    double eta = 1.0;
    double rho = 0.6;
    std::uint64_t seed = 1;
};

void add_generation_flags(CLI::App* cmd, DataArgs& args) {
    cmd->add_option("--data", args.data_path, "existing dataset CSV (skips generation)");
    cmd->add_option("--d", args.d, "dimension");
    cmd->add_option("--n", args.n, "sample count");
    cmd->add_option("--eta", args.eta, "||theta_star|| (mean is eta * e_1)");
    cmd->add_option("--rho", args.rho, "weight imbalance rho_star");
    cmd->add_option("--seed", args.seed, "generation seed");
}

uem::model::Dataset obtain_dataset(const DataArgs& args) {
    if (!args.data_path.empty()) return uem::model::load_dataset(args.data_path);
    const auto params = uem::model::MixtureParams::axis(args.d, args.eta, args.rho);
    return uem::model::sample(params, args.n, args.seed);
}

void write_trace_csv(const uem::IterationTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    const std::size_t dim = trace.state_dim();
    out << "t";
    for (std::size_t j = 0; j < dim; ++j) out << ",x" << j;
    out << ",residual\n";
    for (std::size_t t = 0; t < trace.iterates.size(); ++t) {
        out << t;
        for (double v : trace.iterates[t]) out << ',' << uem::io::full_precision(v);
        out << ',' << (t == 0 ? "" : uem::io::full_precision(trace.residuals[t - 1])) << "\n";
    }
}

ordered_json estimate_json(const uem::empirical::Estimate& est) {
    ordered_json j;
    j["schema_version"] = uem::io::kSchemaVersion;
    j["estimator"] = est.estimator_name;
    j["value"] = est.value;
    if (est.loss_l2) j["loss_l2"] = *est.loss_l2;
    if (est.loss_l0) j["loss_l0"] = *est.loss_l0;
    j["iterations_used"] = est.trace.iterations_used;
    j["converged"] = est.trace.converged;
    if (!est.branch.empty()) j["branch"] = est.branch;
    if (est.trace.sign_ambiguous) j["sign_ambiguous"] = true;
    return j;
}

std::vector<double> parse_grid(const std::string& text) {
    // Either a comma list "0.1,0.2" or a range "lo:hi:count".
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        double lo, hi;
        int count;
        if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
            throw CLI::ValidationError("grid", "expected lo:hi:count");
        for (int i = 0; i < count; ++i)
            values.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
        return values;
    }
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    if (values.empty()) throw CLI::ValidationError("grid", "empty grid");
    return values;
}

int run_checks(bool full, const std::string& report_path) {
    auto results = uem::checks::run_property_checks();
    if (full) {
        auto more = uem::checks::run_quantitative_checks();
        results.insert(results.end(), more.begin(), more.end());
    }
    bool all_pass = true;
    ordered_json report;
    report["schema_version"] = uem::io::kSchemaVersion;
    report["checks"] = ordered_json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::printf("[%2zu/%zu] %s — %s (%s)\n", i + 1, results.size(), r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.detail.c_str());
        report["checks"].push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        all_pass = all_pass && r.pass;
    }
    report["all_pass"] = all_pass;
    if (!report_path.empty()) uem::io::write_json(report, report_path);
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    uem::io::apply_thread_cap();
    CLI::App app{"unbalanced two-component Gaussian mixture EM toolkit"};
    app.require_subcommand(1);

    // --- sample ---
    auto* sample_cmd = app.add_subcommand("sample", "generate a dataset CSV + JSON sidecar");
    DataArgs sample_args;
    std::string sample_out = "dataset.csv";
    add_generation_flags(sample_cmd, sample_args);
    sample_cmd->add_option("--out", sample_out, "output CSV path");

    // --- estimate ---
    auto* est_cmd = app.add_subcommand("estimate", "run one estimator on a dataset");
    DataArgs est_args;
    std::string estimator = "em-adaptive";
    std::string est_out = "estimate.json";
    std::string trace_out;
    std::string init_name = "zero";
    int max_iter = 10000;
    double tol = 1e-8;
    double truncation = 0.95;
    double kappa = 1.0;
    double c0 = 1.0;
    add_generation_flags(est_cmd, est_args);
    est_cmd->add_option("--estimator", estimator,
                        "em-mean|em-balanced|em-adaptive|em-weight|mom-mean|mom-weight|spectral|joint");
    est_cmd->add_option("--init", init_name, "zero|scaled-mean|random-sphere (em-mean only)");
    est_cmd->add_option("--max-iter", max_iter, "iteration cap");
    est_cmd->add_option("--tol", tol, "residual stopping tolerance (0 = fixed iteration count)");
    est_cmd->add_option("--truncation", truncation, "C_rho cap for the weight iteration");
    est_cmd->add_option("--kappa", kappa, "adaptive branch threshold multiplier");
    est_cmd->add_option("--c0", c0, "random-sphere initialization scale");
    est_cmd->add_option("--out", est_out, "output JSON path");
    est_cmd->add_option("--trace", trace_out, "optional trace CSV path");

    // --- population ---
    auto* pop_cmd = app.add_subcommand("population", "population-map diagnostics");
    pop_cmd->require_subcommand(1);
    int order = 80;
    pop_cmd->add_option("--order", order, "Gauss-Hermite order")->capture_default_str();

    auto* fp_cmd = pop_cmd->add_subcommand("fixed-points", "fixed points of the 1-d mean map");
    double fp_delta = 0.3, fp_eta = 1.0, fp_lo = 0.01, fp_hi = 3.0;
    int fp_scan = 2000;
    std::string fp_out = "fixed_points.json";
    fp_cmd->add_option("--delta", fp_delta, "mixture weight delta");
    fp_cmd->add_option("--eta", fp_eta, "||theta_star||");
    fp_cmd->add_option("--lo", fp_lo, "scan interval lower end");
    fp_cmd->add_option("--hi", fp_hi, "scan interval upper end");
    fp_cmd->add_option("--scan-points", fp_scan, "scan resolution");
    fp_cmd->add_option("--out", fp_out, "output JSON path");

    auto* wfp_cmd = pop_cmd->add_subcommand("weight-fixed-point", "interior fixed point of h");
    double wfp_eta = 1.0, wfp_rho = 0.6, wfp_scale = 1.0;
    std::string wfp_out = "weight_fixed_point.json";
    wfp_cmd->add_option("--eta", wfp_eta, "||theta_star||");
    wfp_cmd->add_option("--rho-star", wfp_rho, "true weight imbalance");
    wfp_cmd->add_option("--theta-scale", wfp_scale, "iteration mean theta = scale * theta_star");
    wfp_cmd->add_option("--out", wfp_out, "output JSON path");

    auto* land_cmd = pop_cmd->add_subcommand("landscape", "negative-fixed-point counts");
    std::string land_delta = "0.05:0.45:9", land_eta = "0.25:2:8";
    std::string land_out = "landscape.csv";
    land_cmd->add_option("--delta-grid", land_delta, "delta grid (list or lo:hi:count)");
    land_cmd->add_option("--eta-grid", land_eta, "eta grid (list or lo:hi:count)");
    land_cmd->add_option("--out", land_out, "output CSV path");

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo error sweep from a JSON spec");
    std::string spec_path;
    std::string sweep_out = "sweep";
    sweep_cmd->add_option("--spec", spec_path, "SweepSpec JSON path")->required();
    sweep_cmd->add_option("--out", sweep_out, "output prefix (writes <out>.csv and <out>_summary.json)");

    // --- check ---
    auto* check_cmd = app.add_subcommand("check", "run the property suites");
    bool check_full = false;
    std::string check_report;
    check_cmd->add_flag("--full", check_full, "also run the Monte Carlo suites (minutes)");
    check_cmd->add_option("--report", check_report, "write the results as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sample_cmd->parsed()) {
            const auto params =
                uem::model::MixtureParams::axis(sample_args.d, sample_args.eta, sample_args.rho);
            const auto data = uem::model::sample(params, sample_args.n, sample_args.seed);
            uem::model::save_dataset(data, sample_out);
        } else if (est_cmd->parsed()) {
            const auto data = obtain_dataset(est_args);
            uem::empirical::EstimatorConfig cfg;
            cfg.max_iter = max_iter;
            cfg.tol = tol;
            cfg.truncation = truncation;
            cfg.seed = est_args.seed;
            cfg.kappa = kappa;
            cfg.c0 = c0;
            if (init_name == "zero") cfg.init_kind = uem::empirical::InitKind::Zero;
            else if (init_name == "scaled-mean") cfg.init_kind = uem::empirical::InitKind::ScaledMean;
            else if (init_name == "random-sphere") cfg.init_kind = uem::empirical::InitKind::RandomSphere;
            else throw CLI::ValidationError("--init", "unknown init kind");

            const auto& truth = data.params_used;
            uem::empirical::Estimate est;
            if (estimator == "em-mean") est = uem::empirical::em_mean_estimate(data, truth.rho_star, cfg);
            else if (estimator == "em-balanced") {
                cfg.init_kind = uem::empirical::InitKind::RandomSphere;
                est = uem::empirical::em_balanced_sign_corrected(data, cfg);
            } else if (estimator == "em-adaptive") est = uem::empirical::adaptive_em(data, truth.rho_star, cfg);
            else if (estimator == "em-weight")
                est = uem::empirical::em_weight_estimate(data, truth.theta_star, cfg);
            else if (estimator == "mom-mean") est = uem::empirical::mom_mean(data, truth.rho_star);
            else if (estimator == "mom-weight") est = uem::empirical::mom_weight(data, truth.theta_star);
            else if (estimator == "spectral") est = uem::empirical::spectral_estimate(data);
            else if (estimator == "joint") {
                auto [mean_est, weight_est] = uem::empirical::joint_alternating(data, 2, cfg);
                ordered_json j;
                j["schema_version"] = uem::io::kSchemaVersion;
                j["mean"] = estimate_json(mean_est);
                j["weight"] = estimate_json(weight_est);
                uem::io::write_json(j, est_out);
                if (!trace_out.empty()) write_trace_csv(mean_est.trace, trace_out);
                return 0;
            } else throw CLI::ValidationError("--estimator", "unknown estimator: " + estimator);
            uem::io::write_json(estimate_json(est), est_out);
            if (!trace_out.empty()) write_trace_csv(est.trace, trace_out);
        } else if (fp_cmd->parsed()) {
            uem::population::PopMeanMap1D map(fp_eta, fp_delta, uem::quad::QuadratureGrid(order));
            const auto roots = uem::population::find_fixed_points_1d(
                [&](double t) { return uem::population::pop_mean_1d(map, t); }, fp_lo, fp_hi, fp_scan);
            ordered_json j;
            j["schema_version"] = uem::io::kSchemaVersion;
            j["fixed_points"] = roots;
            uem::io::write_json(j, fp_out);
        } else if (wfp_cmd->parsed()) {
            const auto params = uem::model::MixtureParams::axis(2, wfp_eta, wfp_rho);
            uem::population::PopWeightMap map(wfp_scale * params.theta_star, params.theta_star,
                                              wfp_rho, uem::quad::QuadratureGrid(order));
            const auto fp = uem::population::find_weight_fixed_point(map);
            ordered_json j;
            j["schema_version"] = uem::io::kSchemaVersion;
            j["slope_at_one"] = uem::population::weight_deriv_at_one(map);
            if (fp) j["rho_fixed_point"] = *fp;
            else j["rho_fixed_point"] = nullptr;
            uem::io::write_json(j, wfp_out);
        } else if (land_cmd->parsed()) {
            const auto table = uem::analysis::landscape_scan(
                parse_grid(land_delta), parse_grid(land_eta), uem::quad::QuadratureGrid(order));
            std::ofstream out(land_out);
            if (!out) throw std::runtime_error("cannot open " + land_out);
            out << "delta,eta,negative_fixed_points\n";
            for (const auto& cell : table)
                out << uem::io::full_precision(cell.delta) << ',' << uem::io::full_precision(cell.eta)
                    << ',' << cell.negative_fixed_points << "\n";
        } else if (sweep_cmd->parsed()) {
            const auto spec_json = uem::io::read_json(spec_path);
            uem::analysis::SweepSpec spec;
            spec.d = spec_json.at("d").get<std::vector<int>>();
            spec.n = spec_json.at("n").get<std::vector<std::int64_t>>();
            spec.eta = spec_json.at("eta").get<std::vector<double>>();
            spec.rho_star = spec_json.at("rho_star").get<std::vector<double>>();
            spec.trials = spec_json.at("trials").get<int>();
            spec.estimators = spec_json.at("estimators").get<std::vector<std::string>>();
            spec.base_seed = spec_json.at("base_seed").get<std::uint64_t>();
            spec.validate();
            const auto result = uem::analysis::error_sweep(spec);
            result.to_csv(sweep_out + ".csv");
            result.summary_json(sweep_out + "_summary.json");
        } else if (check_cmd->parsed()) {
            return run_checks(check_full, check_report);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
