#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "uem/model.hpp"
#include "uem/rng.hpp"

using namespace uem;
using model::MixtureParams;

TEST_CASE("rho_to_beta basics") {
    CHECK(model::rho_to_beta(0.0) == 0.0);
    CHECK(model::rho_to_beta(0.5) == doctest::Approx(0.5493061443340549).epsilon(1e-14));
    CHECK(std::isfinite(model::rho_to_beta(0.999999)));
    CHECK(model::rho_to_beta(0.999999) > 6.0);
    CHECK_THROWS_AS(model::rho_to_beta(1.0), std::domain_error);
    CHECK_THROWS_AS(model::rho_to_beta(-1.0), std::domain_error);

    for (int i = 0; i < 100; ++i) {
        const double rho = -0.99 + 1.98 * i / 99.0;
        CHECK(std::abs(model::rho_to_beta(-rho) + model::rho_to_beta(rho)) <= 1e-14);  // odd
        CHECK(std::abs(model::beta_to_rho(model::rho_to_beta(rho)) - rho) <= 1e-12);   // inverse
    }
}

TEST_CASE("delta-rho conversion") {
    using model::ConvertDirection;
    CHECK(model::delta_rho_convert(0.0, ConvertDirection::RhoToDelta) == 0.5);
    CHECK(model::delta_rho_convert(0.6, ConvertDirection::RhoToDelta) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(model::delta_rho_convert(0.2, ConvertDirection::DeltaToRho) == doctest::Approx(0.6).epsilon(1e-15));
    for (int i = 1; i < 50; ++i) {
        const double rho = -0.98 + 1.96 * i / 49.0;
        const double back = model::delta_rho_convert(
            model::delta_rho_convert(rho, ConvertDirection::RhoToDelta), ConvertDirection::DeltaToRho);
        CHECK(std::abs(back - rho) <= 1e-15);
    }
    CHECK_THROWS_AS(model::delta_rho_convert(1.5, ConvertDirection::RhoToDelta), std::domain_error);
    CHECK_THROWS_AS(model::delta_rho_convert(0.0, ConvertDirection::DeltaToRho), std::domain_error);
}

TEST_CASE("MixtureParams invariants and derived quantities") {
    auto p = MixtureParams::axis(3, 1.5, 0.6);
    CHECK(p.d == 3);
    CHECK(p.eta() == doctest::Approx(1.5));
    CHECK(p.delta_star() == doctest::Approx(0.2));
    CHECK(p.beta_star() == doctest::Approx(std::atanh(0.6)));
    CHECK_THROWS_AS(MixtureParams::axis(0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(MixtureParams::axis(2, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(model::GlobalBounds(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(model::GlobalBounds(1.0, 1.0), std::domain_error);
    CHECK(model::GlobalBounds(3.0, 0.9).c_beta() == doctest::Approx(std::atanh(0.9)));
}

TEST_CASE("sampling is deterministic and respects the degenerate mixture") {
    auto p0 = MixtureParams::axis(3, 0.0, 0.4);
    auto a = model::sample(p0, 100000, 7);
    auto b = model::sample(p0, 100000, 7);
    CHECK(a.samples == b.samples);  // bit-identical regeneration

    const auto mean = a.mean();
    const double bound = 4.0 / std::sqrt(static_cast<double>(a.n));
    for (double m : mean) CHECK(std::abs(m) <= bound);
}

TEST_CASE("sample mean approaches rho* theta*") {
    auto p = MixtureParams::axis(2, 1.0, 0.5);
    auto data = model::sample(p, 1000000, 99);
    const auto mean = data.mean();
    const double bound = 5.0 * std::sqrt(2.0 / static_cast<double>(data.n));
    CHECK(std::abs(mean[0] - 0.5) <= bound);
    CHECK(std::abs(mean[1] - 0.0) <= bound);
}

TEST_CASE("sample second moment approaches theta theta^T + I") {
    auto p = MixtureParams::axis(2, 1.0, 0.5);
    auto data = model::sample(p, 400000, 123);
    double m00 = 0, m01 = 0, m11 = 0;
    for (std::int64_t i = 0; i < data.n; ++i) {
        auto x = data.row(i);
        m00 += x[0] * x[0];
        m01 += x[0] * x[1];
        m11 += x[1] * x[1];
    }
    m00 /= data.n;
    m01 /= data.n;
    m11 /= data.n;
    // 5 standard errors entrywise; entry variances are O(1) at eta = 1.
    const double se = 5.0 * 4.0 / std::sqrt(static_cast<double>(data.n));
    CHECK(std::abs(m00 - 2.0) <= se);
    CHECK(std::abs(m01 - 0.0) <= se);
    CHECK(std::abs(m11 - 1.0) <= se);
}

TEST_CASE("loss kinds") {
    Vec a = {1.0, 0.0}, b = {-1.0, 0.0};
    CHECK(model::loss(a, b, model::LossKind::L0) == 0.0);
    CHECK(model::loss(a, b, model::LossKind::L2) == 2.0);
    CHECK(model::loss(a, a, model::LossKind::L2) == 0.0);
    CHECK(model::loss(a, a, model::LossKind::L0) == 0.0);
    CHECK_THROWS_AS(model::loss(a, Vec{1.0}, model::LossKind::L2), std::invalid_argument);
}

TEST_CASE("posterior sign") {
    Vec zero = {0.0, 0.0};
    Vec x = {3.0, -1.0};
    CHECK(model::posterior_sign(zero, 0.0, x) == 0.0);
    CHECK(model::posterior_sign(zero, 0.6, x) == doctest::Approx(0.6).epsilon(1e-15));
    Vec e1 = {1.0, 0.0};
    CHECK(model::posterior_sign(e1, 0.0, e1) == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(model::posterior_sign(e1, 1.0, x), std::domain_error);

    // Monotone in rho and in <theta, x>.
    double prev = -2.0;
    for (int i = 0; i <= 20; ++i) {
        const double rho = -0.9 + 1.8 * i / 20.0;
        const double v = model::posterior_sign(e1, rho, x);
        CHECK(v >= prev);
        prev = v;
    }
    prev = -2.0;
    for (int i = 0; i <= 20; ++i) {
        Vec xi = {-3.0 + 6.0 * i / 20.0, 0.5};
        const double v = model::posterior_sign(e1, 0.3, xi);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("log_cosh is accurate at both scales") {
    CHECK(model::log_cosh(0.0) == doctest::Approx(0.0));
    CHECK(model::log_cosh(1e-3) == doctest::Approx(std::log(std::cosh(1e-3))).epsilon(1e-12));
    CHECK(model::log_cosh(50.0) == doctest::Approx(50.0 - std::log(2.0)).epsilon(1e-14));
    CHECK(std::isfinite(model::log_cosh(1e4)));
}

TEST_CASE("dataset CSV + sidecar round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "uem_model_test";
    std::filesystem::create_directories(dir);
    const auto csv = dir / "data.csv";

    auto p = MixtureParams::axis(3, 0.8, 0.25);
    auto data = model::sample(p, 500, 2024);
    model::save_dataset(data, csv);
    auto loaded = model::load_dataset(csv);

    CHECK(loaded.n == data.n);
    CHECK(loaded.d == data.d);
    CHECK(loaded.seed == data.seed);
    CHECK(loaded.params_used.rho_star == data.params_used.rho_star);
    REQUIRE(loaded.samples.size() == data.samples.size());
    for (std::size_t i = 0; i < data.samples.size(); ++i)
        CHECK(loaded.samples[i] == data.samples[i]);  // 17 digits round-trip exactly
    std::filesystem::remove_all(dir);
}

TEST_CASE("counter rng streams are independent and reproducible") {
    CounterRng a(42, 0), b(42, 0), c(42, 1);
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.next_u64() != c.next_u64());
    CHECK(CounterRng::derive_seed(1, 2, 3) == CounterRng::derive_seed(1, 2, 3));
    CHECK(CounterRng::derive_seed(1, 2, 3) != CounterRng::derive_seed(1, 3, 2));

    // Gaussian moments sanity.
    CounterRng g(7);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = g.next_gauss();
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / n) <= 5.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - 1.0) <= 5.0 * std::sqrt(2.0 / n));
}
