#include <doctest.h>

#include <cmath>
#include <thread>

#include "uem/quadrature.hpp"

using uem::quad::QuadratureGrid;

TEST_CASE("weights are normalized to total mass 1") {
    for (int order : {5, 40, 80, 160}) {
        QuadratureGrid grid(order);
        double sum = 0.0;
        for (double w : grid.weights()) {
            CHECK(w > 0.0);
            sum += w;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-10);
        CHECK(static_cast<int>(grid.nodes().size()) == order);
    }
}

TEST_CASE("standard normal moments 1, 1, 3 at order >= 40") {
    for (int order : {40, 80, 200}) {
        QuadratureGrid grid(order);
        CHECK(std::abs(grid.normal_expectation([](double) { return 1.0; }) - 1.0) <= 1e-9);
        CHECK(std::abs(grid.normal_expectation([](double z) { return z * z; }) - 1.0) <= 1e-9);
        CHECK(std::abs(grid.normal_expectation([](double z) { return z * z * z * z; }) - 3.0) <= 1e-9);
    }
}

TEST_CASE("mixture expectation reproduces the mixture mean rho * eta") {
    QuadratureGrid grid(80);
    const double eta = 1.3, delta = 0.3;
    const double mean = grid.mixture_expectation(eta, delta, [](double x) { return x; });
    CHECK(mean == doctest::Approx((1.0 - 2.0 * delta) * eta).epsilon(1e-12));
}

TEST_CASE("tensor expectation marginals match the 1-d rules") {
    QuadratureGrid grid(60);
    const double eta = 0.8, delta = 0.2;
    const double ev = grid.tensor_expectation(eta, delta, [](double v, double) { return v; });
    CHECK(ev == doctest::Approx((1.0 - 2.0 * delta) * eta).epsilon(1e-12));
    const double ew2 = grid.tensor_expectation(eta, delta, [](double, double w) { return w * w; });
    CHECK(ew2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("concurrent first construction of the same order is safe") {
    constexpr int order = 123;
    std::vector<std::thread> workers;
    std::vector<double> sums(8, 0.0);
    for (int t = 0; t < 8; ++t)
        workers.emplace_back([&, t] {
            QuadratureGrid grid(order);
            for (double w : grid.weights()) sums[t] += w;
        });
    for (auto& w : workers) w.join();
    for (double s : sums) CHECK(std::abs(s - 1.0) <= 1e-10);
}
