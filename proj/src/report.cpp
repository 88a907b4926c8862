#include "gsfde/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gsfde/errors.hpp"

namespace gsfde {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string holds_label(const BoundReport& r) {
  if (r.inconclusive) return "inconclusive";
  return r.holds ? "true" : "false";
}

std::string reports_to_csv(const std::vector<BoundReport>& reports) {
  std::ostringstream out;
  out << "check,name,lhs,rhs,margin,holds,n_paths,seed\n";
  for (const auto& r : reports) {
    out << r.check << ',' << r.name << ',' << format_number(r.lhs) << ',' << format_number(r.rhs)
        << ',' << format_number(r.margin) << ',' << holds_label(r) << ',' << r.n_paths << ','
        << r.seed << '\n';
  }
  return out.str();
}

namespace {

nlohmann::ordered_json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

nlohmann::ordered_json reports_to_json(const std::vector<BoundReport>& reports,
                                       const std::string& subcommand, std::uint64_t seed) {
  nlohmann::ordered_json doc;
  doc["subcommand"] = subcommand;
  doc["seed"] = seed;
  auto& list = doc["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json item;
    item["check"] = r.check;
    item["name"] = r.name;
    item["lhs"] = number_json(r.lhs);
    item["rhs"] = number_json(r.rhs);
    item["margin"] = number_json(r.margin);
    item["holds"] = r.holds;
    item["inconclusive"] = r.inconclusive;
    item["lhs_stderr"] = number_json(r.lhs_stderr);
    item["n_paths"] = r.n_paths;
    item["seed"] = r.seed;
    if (!r.extras.empty()) {
      auto& extras = item["extras"] = nlohmann::ordered_json::object();
      for (const auto& [key, value] : r.extras) extras[key] = number_json(value);
    }
    list.push_back(std::move(item));
  }
  return doc;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'", "output_dir");
  out << content;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'", "output_dir");
}

EmittedFiles emit_report(const std::vector<BoundReport>& reports, const std::filesystem::path& dir,
                         const std::string& subcommand, std::uint64_t seed) {
  if (reports.empty()) throw UsageError("emit_report: empty report list");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("cannot create output directory '" + dir.string() + "'", "output_dir");
  }
  const std::string stem = subcommand + "_" + std::to_string(seed);
  EmittedFiles files{dir / (stem + ".json"), dir / (stem + ".csv")};
  write_file(files.json, reports_to_json(reports, subcommand, seed).dump(2) + "\n");
  write_file(files.csv, reports_to_csv(reports));
  return files;
}

}  // namespace gsfde
