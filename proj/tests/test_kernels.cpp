#include <doctest.h>

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "uem/kernels.hpp"
#include "uem/model.hpp"

using namespace uem;

namespace {
const auto kParams = model::MixtureParams::axis(5, 1.0, 0.4);
const auto kData = model::sample(kParams, 100001, 31337);  // odd n exercises the chunk tail
const Vec kTheta = {0.3, -0.2, 0.1, 0.0, 0.5};
const double kBeta = model::rho_to_beta(0.4);
}  // namespace

TEST_CASE("parallel kernels agree with the serial reference") {
    const Vec ms = kernels::serial::mean_iter(kData, kTheta, kBeta);
    const Vec mp = kernels::parallel::mean_iter(kData, kTheta, kBeta);
    for (int j = 0; j < kData.d; ++j) CHECK(mp[j] == doctest::Approx(ms[j]).epsilon(1e-12));

    CHECK(kernels::parallel::weight_iter(kData, kTheta, kBeta) ==
          doctest::Approx(kernels::serial::weight_iter(kData, kTheta, kBeta)).epsilon(1e-12));

    const auto cs = kernels::serial::second_moment(kData);
    const auto cp = kernels::parallel::second_moment(kData);
    for (std::size_t k = 0; k < cs.size(); ++k) CHECK(cp[k] == doctest::Approx(cs[k]).epsilon(1e-12));
}

TEST_CASE("second moment is symmetric with unit-plus-signal diagonal scale") {
    const auto m = kernels::parallel::second_moment(kData);
    const int d = kData.d;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < a; ++b) CHECK(m[a * d + b] == m[b * d + a]);
    CHECK(m[0] == doctest::Approx(2.0).epsilon(0.05));  // 1 + eta^2 on the signal axis
}

#ifdef _OPENMP
TEST_CASE("parallel kernels are bitwise reproducible across thread counts") {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const Vec m1 = kernels::parallel::mean_iter(kData, kTheta, kBeta);
    const double w1 = kernels::parallel::weight_iter(kData, kTheta, kBeta);
    const auto c1 = kernels::parallel::second_moment(kData);
    omp_set_num_threads(2);
    const Vec m2 = kernels::parallel::mean_iter(kData, kTheta, kBeta);
    const double w2 = kernels::parallel::weight_iter(kData, kTheta, kBeta);
    const auto c2 = kernels::parallel::second_moment(kData);
    omp_set_num_threads(saved);

    CHECK(m1 == m2);
    CHECK(w1 == w2);
    CHECK(c1 == c2);
}

TEST_CASE("sampling is bitwise reproducible across thread counts") {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto a = model::sample(kParams, 20000, 99);
    omp_set_num_threads(2);
    const auto b = model::sample(kParams, 20000, 99);
    omp_set_num_threads(saved);
    CHECK(a.samples == b.samples);
}
#endif

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(kernels::parallel::mean_iter(kData, Vec{1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kernels::serial::weight_iter(kData, Vec{1.0, 2.0}, 0.0), std::invalid_argument);
}
