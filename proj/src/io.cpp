#include "uem/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace uem::io {

std::string full_precision(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json: cannot open " + path.string());
    out << j.dump(2) << "\n";
    if (!out.good()) throw std::runtime_error("write_json: write failed");
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_json: cannot open " + path.string());
    return nlohmann::json::parse(in);
}

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("UEM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) omp_set_num_threads(cap);
    }
#endif
}

}  // namespace uem::io
