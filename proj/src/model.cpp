#include "uem/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uem/io.hpp"
#include "uem/rng.hpp"

namespace uem::model {

double rho_to_beta(double rho) {
    if (!(std::abs(rho) <= kRhoLimit))
        throw std::domain_error("rho_to_beta: |rho| must be <= 1 - 1e-12");
    return std::atanh(rho);
}

double beta_to_rho(double beta) {
    if (!std::isfinite(beta)) throw std::domain_error("beta_to_rho: beta must be finite");
    return std::tanh(beta);
}

double delta_rho_convert(double value, ConvertDirection direction) {
    if (direction == ConvertDirection::RhoToDelta) {
        if (!(std::abs(value) < 1.0)) throw std::domain_error("delta_rho_convert: rho out of (-1,1)");
        return (1.0 - value) / 2.0;
    }
    if (!(value > 0.0 && value < 1.0)) throw std::domain_error("delta_rho_convert: delta out of (0,1)");
    return 1.0 - 2.0 * value;
}

MixtureParams::MixtureParams(Vec theta, double rho) : theta_star(std::move(theta)), rho_star(rho) {
    if (theta_star.empty()) throw std::domain_error("MixtureParams: d must be >= 1");
    if (!(std::abs(rho_star) < 1.0)) throw std::domain_error("MixtureParams: |rho_star| must be < 1");
    if (!all_finite(theta_star)) throw std::domain_error("MixtureParams: theta_star must be finite");
    d = static_cast<int>(theta_star.size());
}

MixtureParams MixtureParams::axis(int d, double eta, double rho) {
    if (d < 1) throw std::domain_error("MixtureParams: d must be >= 1");
    Vec theta(static_cast<std::size_t>(d), 0.0);
    theta[0] = eta;
    return MixtureParams(std::move(theta), rho);
}

GlobalBounds::GlobalBounds(double theta_cap, double rho_cap) : c_theta(theta_cap), c_rho(rho_cap) {
    if (!(c_theta > 0.0)) throw std::domain_error("GlobalBounds: c_theta must be > 0");
    if (!(c_rho > 0.0 && c_rho < 1.0)) throw std::domain_error("GlobalBounds: c_rho must be in (0,1)");
}

Vec Dataset::mean() const {
    Vec m(static_cast<std::size_t>(d), 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        const double* x = samples.data() + i * d;
        for (int j = 0; j < d; ++j) m[j] += x[j];
    }
    for (int j = 0; j < d; ++j) m[j] /= static_cast<double>(n);
    return m;
}

Dataset sample(const MixtureParams& params, std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("sample: n must be >= 1");
    Dataset data{{}, n, params.d, seed, params};
    data.samples.resize(static_cast<std::size_t>(n) * params.d);
    const double p_plus = (1.0 + params.rho_star) / 2.0;
    // One counter stream per sample so rows are independent of traversal order.
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        const double s = rng.next_sign(p_plus);
        double* x = data.samples.data() + i * params.d;
        for (int j = 0; j < params.d; ++j) x[j] = s * params.theta_star[j] + rng.next_gauss();
    }
    return data;
}

double loss(const Vec& theta_hat, const Vec& theta_star, LossKind kind) {
    if (theta_hat.size() != theta_star.size()) throw std::invalid_argument("loss: dimension mismatch");
    const double l2 = dist(theta_hat, theta_star);
    if (kind == LossKind::L2) return l2;
    return std::min(l2, norm(Vec(theta_hat + theta_star)));
}

double posterior_sign(const Vec& theta, double rho, const Vec& x) {
    const double beta = rho_to_beta(rho);
    return std::tanh(dot(theta, x) + beta);
}

double log_cosh(double t) {
    const double a = std::abs(t);
    return a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453094172321214581766;
}

double log_likelihood(const Dataset& data, const Vec& theta, double rho) {
    if (static_cast<int>(theta.size()) != data.d)
        throw std::invalid_argument("log_likelihood: dimension mismatch");
    const double beta = rho_to_beta(rho);
    const double half_norm2 = 0.5 * dot(theta, theta);
    const double log_2pi = 1.8378770664093454835606594728112353;
    const double lcbeta = log_cosh(beta);
    double total = 0.0;
    #pragma omp parallel for reduction(+ : total) schedule(static)
    for (std::int64_t i = 0; i < data.n; ++i) {
        auto x = data.row(i);
        total += log_cosh(dot(theta, x) + beta) - 0.5 * dot(x, x);
    }
    return total + data.n * (-half_norm2 - lcbeta - 0.5 * data.d * log_2pi);
}

void save_dataset(const Dataset& data, const std::filesystem::path& csv_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("save_dataset: cannot open " + csv_path.string());
    for (int j = 0; j < data.d; ++j) csv << (j ? "," : "") << "x" << j;
    csv << "\n";
    for (std::int64_t i = 0; i < data.n; ++i) {
        const double* x = data.samples.data() + i * data.d;
        for (int j = 0; j < data.d; ++j) csv << (j ? "," : "") << io::full_precision(x[j]);
        csv << "\n";
    }
    if (!csv.good()) throw std::runtime_error("save_dataset: write failed");

    nlohmann::ordered_json side;
    side["schema_version"] = io::kSchemaVersion;
    side["n"] = data.n;
    side["d"] = data.d;
    side["seed"] = data.seed;
    side["theta_star"] = data.params_used.theta_star;
    side["rho_star"] = data.params_used.rho_star;
    io::write_json(side, std::filesystem::path(csv_path).replace_extension(".json"));
}

Dataset load_dataset(const std::filesystem::path& csv_path) {
    auto side = io::read_json(std::filesystem::path(csv_path).replace_extension(".json"));
    MixtureParams params(side.at("theta_star").get<Vec>(), side.at("rho_star").get<double>());
    const auto n = side.at("n").get<std::int64_t>();
    Dataset data{{}, n, params.d, side.at("seed").get<std::uint64_t>(), params};
    data.samples.reserve(static_cast<std::size_t>(n) * params.d);

    std::ifstream csv(csv_path);
    if (!csv) throw std::runtime_error("load_dataset: cannot open " + csv_path.string());
    std::string line;
    std::getline(csv, line);  // header
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) data.samples.push_back(std::stod(cell));
    }
    if (data.samples.size() != static_cast<std::size_t>(n) * params.d)
        throw std::runtime_error("load_dataset: sample count does not match sidecar metadata");
    if (!all_finite(data.samples)) throw std::runtime_error("load_dataset: non-finite sample");
    return data;
}

}  // namespace uem::model
