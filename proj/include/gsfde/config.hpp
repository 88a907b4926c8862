#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsfde/bounds.hpp"

namespace gsfde {

/// Parsed and validated experiment description. See README.md for the schema.
struct ExperimentConfig {
  TimeGrid grid{1.0, 1000};
  ScenarioFamily family{{Scenario{}}};
  Coefficients model;
  double tau = 0.0;
  InitialData initial;
  std::size_t n_paths = 256;
  std::size_t n_iter = 8;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  BdgConstants bdg;
  std::vector<std::string> integrands;
  std::vector<double> chebyshev_c{0.5, 1.0, 2.0};
  double chebyshev_p = 2.0;
  UniquenessOptions uniqueness;
  ExponentialOptions exponential;
  std::size_t audit_probes = 2000;
  std::size_t simulate_paths = 4;
  std::string output_dir = "out";

  Experiment experiment() const;
  BoundConstants constants() const;
};

/// Throws ConfigError naming the offending key path.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

}  // namespace gsfde
