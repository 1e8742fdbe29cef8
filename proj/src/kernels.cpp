#include "uem/kernels.hpp"

#include <cmath>

namespace uem::kernels {

namespace {

constexpr std::int64_t kChunk = 8192;

void require_dim(const model::Dataset& data, const Vec& theta, const char* who) {
    if (static_cast<int>(theta.size()) != data.d)
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

namespace serial {

Vec mean_iter(const model::Dataset& data, const Vec& theta, double beta) {
    require_dim(data, theta, "mean_iter");
    const int d = data.d;
    Vec acc(d, 0.0);
    for (std::int64_t i = 0; i < data.n; ++i) {
        const double* x = data.samples.data() + i * d;
        double ip = beta;
        for (int j = 0; j < d; ++j) ip += theta[j] * x[j];
        const double t = std::tanh(ip);
        for (int j = 0; j < d; ++j) acc[j] += t * x[j];
    }
    for (int j = 0; j < d; ++j) acc[j] /= static_cast<double>(data.n);
    return acc;
}

double weight_iter(const model::Dataset& data, const Vec& theta, double beta) {
    require_dim(data, theta, "weight_iter");
    const int d = data.d;
    double acc = 0.0;
    for (std::int64_t i = 0; i < data.n; ++i) {
        const double* x = data.samples.data() + i * d;
        double ip = beta;
        for (int j = 0; j < d; ++j) ip += theta[j] * x[j];
        acc += std::tanh(ip);
    }
    return acc / static_cast<double>(data.n);
}

std::vector<double> second_moment(const model::Dataset& data) {
    const int d = data.d;
    std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
    for (std::int64_t i = 0; i < data.n; ++i) {
        const double* x = data.samples.data() + i * d;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) m[static_cast<std::size_t>(a) * d + b] += x[a] * x[b];
    }
    for (double& v : m) v /= static_cast<double>(data.n);
    return m;
}

}  // namespace serial

namespace parallel {

Vec mean_iter(const model::Dataset& data, const Vec& theta, double beta) {
    require_dim(data, theta, "mean_iter");
    const int d = data.d;
    const std::int64_t n_chunks = (data.n + kChunk - 1) / kChunk;
    std::vector<double> partial(static_cast<std::size_t>(n_chunks) * d, 0.0);
    #pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        const std::int64_t i_end = std::min(data.n, (c + 1) * kChunk);
        double* acc = partial.data() + c * d;
        for (std::int64_t i = c * kChunk; i < i_end; ++i) {
            const double* x = data.samples.data() + i * d;
            double ip = beta;
            for (int j = 0; j < d; ++j) ip += theta[j] * x[j];
            const double t = std::tanh(ip);
            for (int j = 0; j < d; ++j) acc[j] += t * x[j];
        }
    }
    Vec out(d, 0.0);
    for (std::int64_t c = 0; c < n_chunks; ++c)
        for (int j = 0; j < d; ++j) out[j] += partial[c * d + j];
    for (int j = 0; j < d; ++j) out[j] /= static_cast<double>(data.n);
    return out;
}

double weight_iter(const model::Dataset& data, const Vec& theta, double beta) {
    require_dim(data, theta, "weight_iter");
    const int d = data.d;
    const std::int64_t n_chunks = (data.n + kChunk - 1) / kChunk;
    std::vector<double> partial(static_cast<std::size_t>(n_chunks), 0.0);
    #pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        const std::int64_t i_end = std::min(data.n, (c + 1) * kChunk);
        double acc = 0.0;
        for (std::int64_t i = c * kChunk; i < i_end; ++i) {
            const double* x = data.samples.data() + i * d;
            double ip = beta;
            for (int j = 0; j < d; ++j) ip += theta[j] * x[j];
            acc += std::tanh(ip);
        }
        partial[c] = acc;
    }
    double out = 0.0;
    for (std::int64_t c = 0; c < n_chunks; ++c) out += partial[c];
    return out / static_cast<double>(data.n);
}

std::vector<double> second_moment(const model::Dataset& data) {
    const int d = data.d;
    const std::int64_t n_chunks = (data.n + kChunk - 1) / kChunk;
    const std::size_t dd = static_cast<std::size_t>(d) * d;
    std::vector<double> partial(n_chunks * dd, 0.0);
    #pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        const std::int64_t i_end = std::min(data.n, (c + 1) * kChunk);
        double* acc = partial.data() + c * dd;
        for (std::int64_t i = c * kChunk; i < i_end; ++i) {
            const double* x = data.samples.data() + i * d;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) acc[static_cast<std::size_t>(a) * d + b] += x[a] * x[b];
        }
    }
    std::vector<double> out(dd, 0.0);
    for (std::int64_t c = 0; c < n_chunks; ++c)
        for (std::size_t k = 0; k < dd; ++k) out[k] += partial[c * dd + k];
    for (double& v : out) v /= static_cast<double>(data.n);
    return out;
}

}  // namespace parallel

}  // namespace uem::kernels
