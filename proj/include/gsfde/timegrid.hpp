#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gsfde {

/// Uniform partition 0 = t_0 < t_1 < ... < t_n = T.
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t n_steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t n_nodes() const noexcept { return n_steps_ + 1; }
  double dt() const noexcept { return dt_; }

  /// t_i = i*dt, with the last node pinned to T.
  double time(std::size_t i) const;

  /// Index i such that t_i < s <= t_{i+1}, for s in (0, T].
  std::size_t interval_containing(double s) const;

  bool operator==(const TimeGrid& other) const noexcept {
    return horizon_ == other.horizon_ && n_steps_ == other.n_steps_;
  }

 private:
  double horizon_;
  std::size_t n_steps_;
  double dt_;
};

enum class ControlKind { constant, bang_bang, piecewise_random };

std::string to_string(ControlKind kind);
ControlKind control_kind_from_string(const std::string& name);

/// One admissible volatility path inside the band [lo, hi]. The value on
/// [t_i, t_{i+1}) is fixed at t_i and never looks at the Brownian increments.
struct VolatilityControl {
  ControlKind kind = ControlKind::constant;
  double lo = 1.0;
  double hi = 1.0;
  /// Level used by the constant kind; defaults to `hi` when unset (negative).
  double level = -1.0;
  /// Switching period for bang_bang and piecewise_random.
  double period = 0.1;
  std::uint64_t seed_offset = 0;

  static VolatilityControl constant_at(double sigma) {
    return {ControlKind::constant, sigma, sigma, sigma, 0.1, 0};
  }

  /// Throws ConfigError on an invalid band or period.
  void validate() const;

  /// sigma(t_i) for i = 0..n_steps-1.
  std::vector<double> evaluate(const TimeGrid& grid, std::uint64_t path_seed) const;
};

/// Jump-size law of a compound Poisson measure. Either a finite atom list or
/// a uniform law on [a, b]; sizes are never exactly 0.
class JumpLaw {
 public:
  struct Atom {
    double size;
    double prob;
  };

  static JumpLaw atoms(std::vector<Atom> atoms);
  static JumpLaw uniform(double a, double b);

  bool is_uniform() const noexcept { return uniform_; }
  const std::vector<Atom>& atom_list() const noexcept { return atoms_; }
  std::pair<double, double> interval() const noexcept { return {a_, b_}; }

  template <class Engine>
  double sample(Engine& engine) const;

  /// E[fn(z)] under the law. Exact for atoms; composite Gauss-Legendre on
  /// the interval otherwise.
  double expect(const std::function<double(double)>& fn) const;

  double abs_moment() const;
  double second_moment() const;

 private:
  JumpLaw() = default;

  bool uniform_ = false;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
  double a_ = 0.0;
  double b_ = 0.0;
};

/// Finite-activity Levy measure nu = intensity * law.
struct LevyScenario {
  double intensity = 0.0;
  JumpLaw law = JumpLaw::atoms({{1.0, 1.0}});

  void validate() const;

  /// First-moment rate alpha = intensity * E|z|, so E|x^d(t)| <= alpha t.
  double alpha() const { return intensity * law.abs_moment(); }

  /// Integral of fn against nu(dz).
  double nu_integral(const std::function<double(double)>& fn) const {
    return intensity == 0.0 ? 0.0 : intensity * law.expect(fn);
  }
};

struct Scenario {
  VolatilityControl volatility;
  LevyScenario levy;
};

/// Ordered, nonempty list of scenarios; index j is stable.
class ScenarioFamily {
 public:
  explicit ScenarioFamily(std::vector<Scenario> scenarios);

  static ScenarioFamily constant_volatilities(std::span<const double> sigmas);

  std::size_t size() const noexcept { return scenarios_.size(); }
  const Scenario& operator[](std::size_t j) const { return scenarios_.at(j); }
  const std::vector<Scenario>& scenarios() const noexcept { return scenarios_; }

  /// Upper volatility bound over the family.
  double sigma_bar() const;

 private:
  std::vector<Scenario> scenarios_;
};

struct JumpEvent {
  double time;
  double size;
};

/// One realized G-Levy driver: continuous part B, its quadratic variation,
/// and the jump events, all on one grid.
struct DrivingPath {
  TimeGrid grid;
  std::vector<double> B;
  std::vector<double> qv;
  std::vector<JumpEvent> jumps;
  /// jumps in (t_i, t_{i+1}] are jumps[offsets[i] .. offsets[i+1]).
  std::vector<std::size_t> offsets;

  std::span<const JumpEvent> jumps_in(std::size_t interval) const {
    return std::span<const JumpEvent>(jumps).subspan(offsets[interval],
                                                     offsets[interval + 1] - offsets[interval]);
  }
};

struct BrownianPart {
  std::vector<double> B;
  std::vector<double> qv;
};

/// Seed of path `path` in scenario `scenario`: base + scenario * 2^32 + path.
std::uint64_t derive_seed(std::uint64_t base, std::size_t scenario, std::size_t path);

BrownianPart generate_brownian(const TimeGrid& grid, const VolatilityControl& control,
                               std::uint64_t seed);

std::vector<JumpEvent> generate_jumps(const TimeGrid& grid, const LevyScenario& levy,
                                      std::uint64_t seed);

/// qv[k] = sum_{i<k} (B[i+1] - B[i])^2.
std::vector<double> quadratic_variation(std::span<const double> B);

DrivingPath make_driving_path(const TimeGrid& grid, std::vector<double> B,
                              std::vector<JumpEvent> jumps);

DrivingPath generate_driver(const TimeGrid& grid, const Scenario& scenario, std::uint64_t seed);

/// Same driver on a grid `factor` times coarser: B sampled at every factor-th
/// node, quadratic variation recomputed, jumps kept.
DrivingPath coarsen(const DrivingPath& path, std::size_t factor);

}  // namespace gsfde

#include "gsfde/timegrid_inl.hpp"
