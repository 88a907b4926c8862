#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsfde {

/// Invalid experiment or model configuration. `key()` names the offending
/// config path (e.g. "scenarios[0].band") when one is known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message, std::string key = {})
      : std::runtime_error(key.empty() ? message : key + ": " + message),
        key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Caller misuse of a numerical routine (index out of range, mismatched
/// lengths, bad argument).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The solver produced a non-finite state.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& message, std::size_t node)
      : std::runtime_error(message + " at node " + std::to_string(node)),
        node_(node) {}

  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// A path functional returned a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& message, std::size_t scenario, std::size_t path)
      : std::runtime_error(message + " (scenario " + std::to_string(scenario) + ", path " +
                           std::to_string(path) + ")"),
        scenario_(scenario),
        path_(path) {}

  std::size_t scenario() const noexcept { return scenario_; }
  std::size_t path() const noexcept { return path_; }

 private:
  std::size_t scenario_;
  std::size_t path_;
};

}  // namespace gsfde
