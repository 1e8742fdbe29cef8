// Timing comparison of the serial reference kernels against the OpenMP
// versions on the hot sample-average loops. Run: uem_bench [n] [d] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "uem/io.hpp"
#include "uem/kernels.hpp"
#include "uem/model.hpp"

namespace {

template <class Fn>
double time_best_of(int reps, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    uem::io::apply_thread_cap();
    const std::int64_t n = argc > 1 ? std::atoll(argv[1]) : 2000000;
    const int d = argc > 2 ? std::atoi(argv[2]) : 8;
    const int reps = argc > 3 ? std::atoi(argv[3]) : 5;

    const auto params = uem::model::MixtureParams::axis(d, 1.0, 0.6);
    const auto data = uem::model::sample(params, n, 42);
    uem::Vec theta(d, 0.0);
    theta[0] = 0.5;
    const double beta = uem::model::rho_to_beta(0.6);

    volatile double sink = 0.0;
    std::printf("n = %lld, d = %d, best of %d\n", static_cast<long long>(n), d, reps);

    const double t_mean_serial =
        time_best_of(reps, [&] { sink = uem::kernels::serial::mean_iter(data, theta, beta)[0]; });
    const double t_mean_parallel =
        time_best_of(reps, [&] { sink = uem::kernels::parallel::mean_iter(data, theta, beta)[0]; });
    std::printf("mean_iter      serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
                1e3 * t_mean_serial, 1e3 * t_mean_parallel, t_mean_serial / t_mean_parallel);

    const double t_weight_serial =
        time_best_of(reps, [&] { sink = uem::kernels::serial::weight_iter(data, theta, beta); });
    const double t_weight_parallel =
        time_best_of(reps, [&] { sink = uem::kernels::parallel::weight_iter(data, theta, beta); });
    std::printf("weight_iter    serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
                1e3 * t_weight_serial, 1e3 * t_weight_parallel, t_weight_serial / t_weight_parallel);

    const double t_cov_serial =
        time_best_of(reps, [&] { sink = uem::kernels::serial::second_moment(data)[0]; });
    const double t_cov_parallel =
        time_best_of(reps, [&] { sink = uem::kernels::parallel::second_moment(data)[0]; });
    std::printf("second_moment  serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
                1e3 * t_cov_serial, 1e3 * t_cov_parallel, t_cov_serial / t_cov_parallel);

    (void)sink;
    return 0;
}
