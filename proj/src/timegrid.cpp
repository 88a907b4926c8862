#include "gsfde/timegrid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "gsfde/errors.hpp"
#include "seeding.hpp"

namespace gsfde {

TimeGrid::TimeGrid(double horizon, std::size_t n_steps)
    : horizon_(horizon), n_steps_(n_steps), dt_(0.0) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("horizon must be positive and finite", "grid.T");
  }
  if (n_steps == 0) {
    throw ConfigError("n_steps must be positive", "grid.n_steps");
  }
  dt_ = horizon / static_cast<double>(n_steps);
}

double TimeGrid::time(std::size_t i) const {
  if (i > n_steps_) throw UsageError("node index out of range");
  if (i == n_steps_) return horizon_;
  return static_cast<double>(i) * dt_;
}

std::size_t TimeGrid::interval_containing(double s) const {
  if (!(s > 0.0) || s > horizon_) {
    throw UsageError("time outside (0, T]");
  }
  auto i = static_cast<std::size_t>(std::ceil(s / dt_));
  i = std::clamp<std::size_t>(i, 1, n_steps_);
  // ceil() can land one node off when s/dt rounds across an integer.
  while (i > 1 && time(i - 1) >= s) --i;
  while (i < n_steps_ && time(i) < s) ++i;
  return i - 1;
}

std::string to_string(ControlKind kind) {
  switch (kind) {
    case ControlKind::constant:
      return "constant";
    case ControlKind::bang_bang:
      return "bang_bang";
    case ControlKind::piecewise_random:
      return "piecewise_random";
  }
  return "unknown";
}

ControlKind control_kind_from_string(const std::string& name) {
  if (name == "constant") return ControlKind::constant;
  if (name == "bang_bang") return ControlKind::bang_bang;
  if (name == "piecewise_random") return ControlKind::piecewise_random;
  throw ConfigError("unknown volatility control kind '" + name + "'", "kind");
}

void VolatilityControl::validate() const {
  if (!(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw ConfigError("volatility band must satisfy 0 <= lo <= hi", "band");
  }
  if (kind == ControlKind::constant && level >= 0.0 && (level < lo || level > hi)) {
    throw ConfigError("constant level outside the band", "sigma");
  }
  if (kind != ControlKind::constant && !(period > 0.0)) {
    throw ConfigError("switching period must be positive", "period");
  }
}

std::vector<double> VolatilityControl::evaluate(const TimeGrid& grid,
                                                std::uint64_t path_seed) const {
  validate();
  const std::size_t n = grid.n_steps();
  std::vector<double> sigma(n);
  switch (kind) {
    case ControlKind::constant: {
      std::fill(sigma.begin(), sigma.end(), level >= 0.0 ? level : hi);
      break;
    }
    case ControlKind::bang_bang: {
      for (std::size_t i = 0; i < n; ++i) {
        const auto block = static_cast<std::uint64_t>(std::floor(grid.time(i) / period + 1e-12));
        sigma[i] = (block % 2 == 0) ? hi : lo;
      }
      break;
    }
    case ControlKind::piecewise_random: {
      std::mt19937_64 engine(detail::stream_seed(path_seed + seed_offset, detail::kControlStream));
      std::uniform_real_distribution<double> level_dist(0.0, 1.0);
      std::uint64_t drawn_block = 0;
      double current = lo + (hi - lo) * level_dist(engine);
      for (std::size_t i = 0; i < n; ++i) {
        const auto block = static_cast<std::uint64_t>(std::floor(grid.time(i) / period + 1e-12));
        while (drawn_block < block) {
          current = lo + (hi - lo) * level_dist(engine);
          ++drawn_block;
        }
        sigma[i] = current;
      }
      break;
    }
  }
  return sigma;
}

JumpLaw JumpLaw::atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ConfigError("jump law needs at least one atom", "law.atoms");
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (atom.size == 0.0) throw ConfigError("jump law has an atom at 0", "law.atoms");
    if (!std::isfinite(atom.size)) throw ConfigError("jump size must be finite", "law.atoms");
    if (!(atom.prob > 0.0)) throw ConfigError("atom probabilities must be positive", "law.atoms");
    total += atom.prob;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("atom probabilities must sum to 1", "law.atoms");
  }
  JumpLaw law;
  law.atoms_ = std::move(atoms);
  double acc = 0.0;
  for (const auto& atom : law.atoms_) {
    acc += atom.prob / total;
    law.cumulative_.push_back(acc);
  }
  law.cumulative_.back() = 1.0;
  return law;
}

JumpLaw JumpLaw::uniform(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ConfigError("uniform jump law needs a < b", "law.uniform");
  }
  JumpLaw law;
  law.uniform_ = true;
  law.a_ = a;
  law.b_ = b;
  return law;
}

double JumpLaw::expect(const std::function<double(double)>& fn) const {
  if (!uniform_) {
    double acc = 0.0;
    for (const auto& atom : atoms_) acc += atom.prob * fn(atom.size);
    return acc;
  }
  // 5-point Gauss-Legendre on 64 panels per side of 0, where the usual
  // integrands (|z|, z^2 clipped, ...) have their kink.
  static constexpr std::array<double, 5> nodes = {0.0, -0.5384693101056831, 0.5384693101056831,
                                                  -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {0.5688888888888889, 0.4786286704993665,
                                                    0.4786286704993665, 0.2369268850561891,
                                                    0.2369268850561891};
  constexpr int panels = 64;
  auto integrate = [&](double lo, double hi) {
    const double width = (hi - lo) / panels;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
      const double mid = lo + (k + 0.5) * width;
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        acc += weights[q] * fn(mid + 0.5 * width * nodes[q]);
      }
    }
    return acc * 0.5 * width;
  };
  const double total = (a_ < 0.0 && b_ > 0.0) ? integrate(a_, 0.0) + integrate(0.0, b_)
                                              : integrate(a_, b_);
  return total / (b_ - a_);
}

double JumpLaw::abs_moment() const {
  return expect([](double z) { return std::abs(z); });
}

double JumpLaw::second_moment() const {
  return expect([](double z) { return z * z; });
}

void LevyScenario::validate() const {
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
    throw ConfigError("jump intensity must be >= 0", "intensity");
  }
}

ScenarioFamily::ScenarioFamily(std::vector<Scenario> scenarios)
    : scenarios_(std::move(scenarios)) {
  if (scenarios_.empty()) throw ConfigError("scenario family is empty", "scenarios");
  for (const auto& s : scenarios_) {
    s.volatility.validate();
    s.levy.validate();
  }
}

ScenarioFamily ScenarioFamily::constant_volatilities(std::span<const double> sigmas) {
  std::vector<Scenario> out;
  for (double s : sigmas) out.push_back({VolatilityControl::constant_at(s), LevyScenario{}});
  return ScenarioFamily(std::move(out));
}

double ScenarioFamily::sigma_bar() const {
  double bar = 0.0;
  for (const auto& s : scenarios_) bar = std::max(bar, s.volatility.hi);
  return bar;
}

std::uint64_t derive_seed(std::uint64_t base, std::size_t scenario, std::size_t path) {
  return base + (static_cast<std::uint64_t>(scenario) << 32) + static_cast<std::uint64_t>(path);
}

BrownianPart generate_brownian(const TimeGrid& grid, const VolatilityControl& control,
                               std::uint64_t seed) {
  const auto sigma = control.evaluate(grid, seed);
  const double sqrt_dt = std::sqrt(grid.dt());
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  BrownianPart out;
  out.B.assign(grid.n_nodes(), 0.0);
  for (std::size_t i = 0; i < grid.n_steps(); ++i) {
    out.B[i + 1] = out.B[i] + sigma[i] * sqrt_dt * normal(engine);
  }
  out.qv = quadratic_variation(out.B);
  return out;
}

std::vector<JumpEvent> generate_jumps(const TimeGrid& grid, const LevyScenario& levy,
                                      std::uint64_t seed) {
  levy.validate();
  std::vector<JumpEvent> events;
  if (levy.intensity == 0.0) return events;
  std::mt19937_64 engine(detail::stream_seed(seed, detail::kJumpStream));
  std::poisson_distribution<long> count_dist(levy.intensity * grid.horizon());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const long count = count_dist(engine);
  std::vector<double> times(static_cast<std::size_t>(count));
  for (auto& t : times) t = grid.horizon() * (1.0 - unit(engine));
  std::sort(times.begin(), times.end());
  events.reserve(times.size());
  for (double t : times) events.push_back({t, levy.law.sample(engine)});
  return events;
}

std::vector<double> quadratic_variation(std::span<const double> B) {
  std::vector<double> qv(B.size(), 0.0);
  for (std::size_t i = 0; i + 1 < B.size(); ++i) {
    const double inc = B[i + 1] - B[i];
    qv[i + 1] = qv[i] + inc * inc;
  }
  return qv;
}

DrivingPath make_driving_path(const TimeGrid& grid, std::vector<double> B,
                              std::vector<JumpEvent> jumps) {
  if (B.size() != grid.n_nodes()) throw UsageError("B length does not match the grid");
  if (B.front() != 0.0) throw UsageError("B[0] must be 0");
  DrivingPath path{grid, std::move(B), {}, std::move(jumps), {}};
  path.qv = quadratic_variation(path.B);
  path.offsets.assign(grid.n_nodes(), 0);
  double previous = 0.0;
  std::vector<std::size_t> counts(grid.n_steps(), 0);
  for (const auto& event : path.jumps) {
    if (event.size == 0.0) throw UsageError("jump of size 0");
    if (event.time < previous) throw UsageError("jump list is not sorted by time");
    previous = event.time;
    ++counts[grid.interval_containing(event.time)];
  }
  for (std::size_t i = 0; i < grid.n_steps(); ++i) {
    path.offsets[i + 1] = path.offsets[i] + counts[i];
  }
  return path;
}

DrivingPath generate_driver(const TimeGrid& grid, const Scenario& scenario, std::uint64_t seed) {
  auto brownian = generate_brownian(grid, scenario.volatility, seed);
  auto jumps = generate_jumps(grid, scenario.levy, seed);
  auto path = make_driving_path(grid, std::move(brownian.B), std::move(jumps));
  return path;
}

DrivingPath coarsen(const DrivingPath& path, std::size_t factor) {
  if (factor == 0 || path.grid.n_steps() % factor != 0) {
    throw UsageError("coarsening factor must divide n_steps");
  }
  const TimeGrid coarse(path.grid.horizon(), path.grid.n_steps() / factor);
  std::vector<double> B(coarse.n_nodes());
  for (std::size_t k = 0; k < B.size(); ++k) B[k] = path.B[k * factor];
  return make_driving_path(coarse, std::move(B), path.jumps);
}

}  // namespace gsfde
