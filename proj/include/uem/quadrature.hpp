#pragma once

#include <memory>
#include <vector>

namespace uem::quad {

/// Gauss-Hermite grid pre-scaled for standard-normal expectations:
/// E[g(Z)] for Z ~ N(0,1) is sum_i weights[i] * g(nodes[i]), and the
/// weights sum to 1 (normalized convention). Nodes and weights come from a
/// Golub-Welsch eigen-decomposition of the Jacobi matrix, computed once per
/// order and cached; instances are immutable and cheap to copy.
class QuadratureGrid {
  public:
    explicit QuadratureGrid(int order);

    int order() const { return order_; }
    const std::vector<double>& nodes() const { return data_->nodes; }
    const std::vector<double>& weights() const { return data_->weights; }

    /// E[g(Z)], Z ~ N(0,1).
    template <class Fn>
    double normal_expectation(Fn&& g) const {
        const auto& z = data_->nodes;
        const auto& w = data_->weights;
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) s += w[i] * g(z[i]);
        return s;
    }

    /// E[g(X)] for the two-component mixture X ~ (1-delta) N(eta,1) + delta N(-eta,1).
    template <class Fn>
    double mixture_expectation(double eta, double delta, Fn&& g) const {
        const auto& z = data_->nodes;
        const auto& w = data_->weights;
        double plus = 0.0, minus = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            plus += w[i] * g(eta + z[i]);
            minus += w[i] * g(-eta + z[i]);
        }
        return (1.0 - delta) * plus + delta * minus;
    }

    /// E[g(V, W)] over the tensor product of V ~ (1-delta) N(eta,1) + delta N(-eta,1)
    /// and W ~ N(0,1) independent.
    template <class Fn>
    double tensor_expectation(double eta, double delta, Fn&& g) const {
        const auto& z = data_->nodes;
        const auto& w = data_->weights;
        double total = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double vp = eta + z[i];
            const double vm = -eta + z[i];
            double row = 0.0;
            for (std::size_t j = 0; j < z.size(); ++j)
                row += w[j] * ((1.0 - delta) * g(vp, z[j]) + delta * g(vm, z[j]));
            total += w[i] * row;
        }
        return total;
    }

  private:
    struct Data {
        std::vector<double> nodes;
        std::vector<double> weights;
    };
    int order_;
    std::shared_ptr<const Data> data_;
};

}  // namespace uem::quad
