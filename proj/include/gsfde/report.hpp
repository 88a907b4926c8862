#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsfde/bounds.hpp"

namespace gsfde {

/// Shortest round-trip decimal form of `v` ("inf", "-inf", "nan" otherwise).
std::string format_number(double v);

/// "true", "false" or "inconclusive".
std::string holds_label(const BoundReport& r);

/// Header `check,name,lhs,rhs,margin,holds,n_paths,seed` and one row per report.
std::string reports_to_csv(const std::vector<BoundReport>& reports);

nlohmann::ordered_json reports_to_json(const std::vector<BoundReport>& reports,
                                       const std::string& subcommand, std::uint64_t seed);

struct EmittedFiles {
  std::filesystem::path json;
  std::filesystem::path csv;
};

/// Writes {subcommand}_{seed}.json and {subcommand}_{seed}.csv into `dir`.
/// Throws UsageError on an empty list and ConfigError("output_dir") when the
/// directory cannot be written.
EmittedFiles emit_report(const std::vector<BoundReport>& reports, const std::filesystem::path& dir,
                         const std::string& subcommand, std::uint64_t seed);

/// Writes `content` to `path`, throwing ConfigError("output_dir") on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace gsfde
