#include "uem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <lapacke.h>

namespace uem::quad {

// Golub-Welsch for the physicists' Hermite weight e^{-x^2}: the Jacobi matrix
// is tridiagonal with zero diagonal and off-diagonals sqrt(k/2). Eigenvalues
// are the nodes, sqrt(pi) * (first eigenvector component)^2 the raw weights.
// Nodes are rescaled by sqrt(2) and weights normalized to total mass 1 so the
// grid integrates directly against the standard normal.
QuadratureGrid::QuadratureGrid(int order) : order_(order) {
    if (order < 1) throw std::domain_error("QuadratureGrid: order must be >= 1");

    static std::mutex cache_mutex;
    static std::map<int, std::shared_ptr<const Data>> cache;

    {
        std::lock_guard lock(cache_mutex);
        if (auto it = cache.find(order); it != cache.end()) {
            data_ = it->second;
            return;
        }
    }

    const int n = order;
    std::vector<double> diag(n, 0.0);
    std::vector<double> off(n > 1 ? n - 1 : 1, 0.0);
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k / 2.0);
    std::vector<double> evec(static_cast<std::size_t>(n) * n, 0.0);

    const lapack_int info =
        LAPACKE_dstev(LAPACK_ROW_MAJOR, 'V', n, diag.data(), off.data(), evec.data(), n);
    if (info != 0) throw std::runtime_error("QuadratureGrid: dstev failed");

    auto data = std::make_shared<Data>();
    data->nodes.resize(n);
    data->weights.resize(n);
    const double sqrt2 = std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        data->nodes[i] = sqrt2 * diag[i];
        const double v0 = evec[static_cast<std::size_t>(i)];  // first row, column i
        data->weights[i] = v0 * v0;                           // already normalized to sum 1
    }

    std::lock_guard lock(cache_mutex);
    auto [it, inserted] = cache.emplace(order, std::move(data));
    data_ = it->second;
}

}  // namespace uem::quad
