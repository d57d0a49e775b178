#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace sehurdle::cli {

enum ExitCode : int { ok = 0, usage_error = 1, numerical_failure = 2 };

// Parses argv, runs one subcommand (ingest, fit, simulate, diagnose,
// forecast) and prints a one-line JSON summary to `out`.
[[nodiscard]] int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Directory for artifacts when no explicit path is given: $SEHURDLE_OUT_DIR or ".".
[[nodiscard]] std::filesystem::path default_output_dir();

// Write to a sibling temp file, then rename over `path`.
void write_atomically(const std::filesystem::path& path, std::string_view content);

// 64-bit FNV-1a, printed as 16 hex digits.
[[nodiscard]] std::string config_digest(std::string_view canonical_config);

// Shortest round-tripping decimal form.
[[nodiscard]] std::string format_double(double v);

} // namespace sehurdle::cli
