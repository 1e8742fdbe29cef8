#include <cstdio>
#include "uem/checks.hpp"
int main() {
    auto results = uem::checks::run_property_checks();
    auto more = uem::checks::run_quantitative_checks();
    results.insert(results.end(), more.begin(), more.end());
    int failures = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::printf("[%2zu/%zu] %s — %s (%s)\n", i + 1, results.size(), r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
        failures += r.pass ? 0 : 1;
    }
    std::printf("%zu checks, %d failed\n", results.size(), failures);
    return failures == 0 ? 0 : 1;
}
