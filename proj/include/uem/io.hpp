#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace uem::io {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal string that round-trips the double (17 significant digits).
std::string full_precision(double x);

void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

/// Number of worker threads: UEM_THREADS if set and positive, else the
/// OpenMP default. Call once at program start.
void apply_thread_cap();

}  // namespace uem::io
