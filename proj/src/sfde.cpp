#include "gsfde/sfde.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gsfde/errors.hpp"

namespace gsfde {

double SegmentView::at_lag(std::size_t k) const {
  if (k == 0) return now_;
  if (k > past_.size()) throw UsageError("segment lag beyond the window");
  return past_[past_.size() - k];
}

double SegmentView::operator()(double theta) const {
  if (theta > 0.0) throw UsageError("segment argument must be <= 0");
  const double steps = std::round(-theta / dt_);
  const auto k = steps >= static_cast<double>(past_.size()) ? past_.size()
                                                            : static_cast<std::size_t>(steps);
  return at_lag(k);
}

double SegmentView::sup_norm() const {
  double out = std::abs(now_);
  for (double v : past_) out = std::max(out, std::abs(v));
  return out;
}

SegmentView Segment::view() const {
  if (values.empty()) throw UsageError("empty segment");
  return SegmentView(std::span<const double>(values).first(values.size() - 1), values.back(), dt);
}

double InitialData::norm_sq() const {
  const double n = zeta.sup_norm();
  return n * n;
}

InitialData InitialData::constant(double value, std::size_t window_nodes, double dt) {
  return linear(value, value, window_nodes, dt);
}

InitialData InitialData::linear(double oldest, double newest, std::size_t window_nodes, double dt) {
  if (window_nodes == 0) throw ConfigError("delay window must hold at least one step", "delay.tau");
  if (!(dt > 0.0)) throw UsageError("dt must be positive");
  InitialData data;
  data.zeta.dt = dt;
  data.zeta.values.resize(window_nodes + 1);
  for (std::size_t k = 0; k <= window_nodes; ++k) {
    const double w = static_cast<double>(k) / static_cast<double>(window_nodes);
    data.zeta.values[k] = k == window_nodes ? newest : oldest + (newest - oldest) * w;
  }
  return data;
}

namespace models {

Coefficients zero() { return Coefficients{}; }

Coefficients linear_drift(double a) {
  Coefficients c;
  c.name = "linear_drift";
  c.f = [a](double, const SegmentView& x) { return a * x.now(); };
  return c;
}

Coefficients gbm(double mu, double sigma_coef) {
  Coefficients c;
  c.name = "gbm";
  c.f = [mu](double, const SegmentView& x) { return mu * x.now(); };
  c.h = [sigma_coef](double, const SegmentView& x) { return sigma_coef * x.now(); };
  return c;
}

Coefficients delayed_linear(double a, double b, double lag) {
  if (!(lag >= 0.0)) throw ConfigError("lag must be >= 0", "model.lag");
  Coefficients c;
  c.name = "delayed_linear";
  c.max_lag = lag;
  c.f = [a, b, lag](double, const SegmentView& x) { return a * x.now() + b * x(-lag); };
  return c;
}

Coefficients jump_linear(double c_jump) {
  Coefficients c;
  c.name = "jump_linear";
  c.K = [c_jump](double, const SegmentView& x, double z) { return c_jump * x.now() * z; };
  return c;
}

Coefficients sum(const std::vector<Coefficients>& terms) {
  if (terms.size() == 1) return terms.front();
  Coefficients out;
  out.name.clear();
  auto add_state = [](StateCoefficient acc, const StateCoefficient& term) -> StateCoefficient {
    if (!term) return acc;
    if (!acc) return term;
    return [acc, term](double t, const SegmentView& x) { return acc(t, x) + term(t, x); };
  };
  for (const auto& term : terms) {
    out.name += (out.name.empty() ? "" : "+") + term.name;
    out.f = add_state(out.f, term.f);
    out.g = add_state(out.g, term.g);
    out.h = add_state(out.h, term.h);
    if (term.K) {
      if (!out.K) {
        out.K = term.K;
      } else {
        out.K = [acc = out.K, k = term.K](double t, const SegmentView& x, double z) {
          return acc(t, x, z) + k(t, x, z);
        };
      }
    }
    out.max_lag = std::max(out.max_lag, term.max_lag);
  }
  return out;
}

}  // namespace models

namespace {

// History buffer: zeta(-tau) .. zeta(-dt) followed by the path values, so the
// segment at node i is a contiguous window starting at offset i.
class History {
 public:
  History(const InitialData& zeta, std::size_t n_nodes)
      : window_(zeta.zeta.window_nodes()), dt_(zeta.zeta.dt) {
    buffer_.reserve(window_ + n_nodes);
    buffer_.assign(zeta.zeta.values.begin(), zeta.zeta.values.end() - 1);
  }

  void push(double value) { buffer_.push_back(value); }

  void assign_path(std::span<const double> values) {
    buffer_.resize(window_);
    buffer_.insert(buffer_.end(), values.begin(), values.end());
  }

  /// Segment at node i with psi(0) = now. Needs nodes < i already pushed.
  SegmentView at(std::size_t node, double now) const {
    return SegmentView(std::span<const double>(buffer_).subspan(node, window_), now, dt_);
  }

 private:
  std::size_t window_;
  double dt_;
  std::vector<double> buffer_;
};

void check_compatible(const Coefficients& coeffs, const InitialData& zeta,
                      const DrivingPath& driver) {
  if (zeta.zeta.values.empty()) throw UsageError("empty initial segment");
  if (coeffs.max_lag > zeta.zeta.tau() * (1.0 + 1e-12)) {
    throw ConfigError("coefficient lag exceeds the history window", "model.lag");
  }
  if (std::abs(zeta.zeta.dt - driver.grid.dt()) > 1e-12 * driver.grid.dt()) {
    throw UsageError("initial segment and driver use different dt");
  }
}

double continuous_increment(const Coefficients& c, double t, const SegmentView& seg, double dt,
                            double dqv, double dB) {
  double inc = 0.0;
  if (c.f) inc += c.f(t, seg) * dt;
  if (c.g) inc += c.g(t, seg) * dqv;
  if (c.h) inc += c.h(t, seg) * dB;
  return inc;
}

double jump_increment(const Coefficients& c, std::span<const JumpEvent> jumps,
                      const SegmentView& seg_minus) {
  double total = 0.0;
  if (!c.K) return total;
  for (const auto& ev : jumps) total += c.K(ev.time, seg_minus, ev.size);
  return total;
}

void check_finite(double v, std::size_t node) {
  if (!std::isfinite(v)) throw DivergenceError("non-finite state", node);
}

}  // namespace

Segment segment_extract(const SolutionPath& x, const InitialData& zeta, std::size_t node,
                        bool pre_jump) {
  if (node >= x.values.size()) throw UsageError("segment node out of range");
  History history(zeta, x.values.size());
  history.assign_path(x.values);
  const double now = pre_jump ? x.pre_jump[node] : x.values[node];
  const auto view = history.at(node, now);
  Segment seg;
  seg.dt = zeta.zeta.dt;
  seg.left_limit = pre_jump;
  seg.values.reserve(view.window_nodes() + 1);
  for (std::size_t k = view.window_nodes(); k > 0; --k) seg.values.push_back(view.at_lag(k));
  seg.values.push_back(now);
  return seg;
}

namespace {

PartialSolution euler_core(const Coefficients& coeffs, const InitialData& zeta,
                           const DrivingPath& driver, bool stop_on_divergence) {
  check_compatible(coeffs, zeta, driver);
  const auto& grid = driver.grid;
  const std::size_t n = grid.n_steps();
  const double dt = grid.dt();
  SolutionPath x{grid, std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0), &driver};
  History history(zeta, n + 1);
  x.values[0] = x.pre_jump[0] = zeta.at_zero();
  history.push(x.values[0]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto seg = history.at(i, x.values[i]);
    const double inc = continuous_increment(coeffs, grid.time(i), seg, dt,
                                            driver.qv[i + 1] - driver.qv[i],
                                            driver.B[i + 1] - driver.B[i]);
    const double pre = x.values[i] + inc;
    const auto jumps = driver.jumps_in(i);
    double next = pre;
    if (std::isfinite(pre) && !jumps.empty()) {
      next = pre + jump_increment(coeffs, jumps, history.at(i + 1, pre));
    }
    if (!std::isfinite(next)) {
      if (!stop_on_divergence) throw DivergenceError("non-finite state", i + 1);
      return {std::move(x), i + 1};
    }
    x.pre_jump[i + 1] = pre;
    x.values[i + 1] = next;
    history.push(next);
  }
  return {std::move(x), n + 1};
}

}  // namespace

SolutionPath euler_solve(const Coefficients& coeffs, const InitialData& zeta,
                         const DrivingPath& driver) {
  return euler_core(coeffs, zeta, driver, false).path;
}

PartialSolution euler_solve_partial(const Coefficients& coeffs, const InitialData& zeta,
                                    const DrivingPath& driver) {
  return euler_core(coeffs, zeta, driver, true);
}

SolutionPath initial_iterate(const InitialData& zeta, const DrivingPath& driver, double offset) {
  check_compatible(Coefficients{}, zeta, driver);
  const double v = zeta.at_zero() + offset;
  const std::size_t nodes = driver.grid.n_nodes();
  return SolutionPath{driver.grid, std::vector<double>(nodes, v), std::vector<double>(nodes, v),
                      &driver};
}

SolutionPath picard_step(const Coefficients& coeffs, const InitialData& zeta,
                         const DrivingPath& driver, const SolutionPath& previous) {
  check_compatible(coeffs, zeta, driver);
  if (!(previous.grid == driver.grid)) throw UsageError("previous iterate is on another grid");
  const auto& grid = driver.grid;
  const std::size_t n = grid.n_steps();
  const double dt = grid.dt();
  History history(zeta, n + 1);
  history.assign_path(previous.values);
  SolutionPath x{grid, std::vector<double>(n + 1), std::vector<double>(n + 1), &driver};
  x.values[0] = x.pre_jump[0] = zeta.at_zero();
  for (std::size_t i = 0; i < n; ++i) {
    const auto seg = history.at(i, previous.values[i]);
    const double inc = continuous_increment(coeffs, grid.time(i), seg, dt,
                                            driver.qv[i + 1] - driver.qv[i],
                                            driver.B[i + 1] - driver.B[i]);
    const double pre = x.values[i] + inc;
    check_finite(pre, i + 1);
    const auto jumps = driver.jumps_in(i);
    double next = pre;
    if (!jumps.empty()) {
      next = pre + jump_increment(coeffs, jumps, history.at(i + 1, previous.pre_jump[i + 1]));
      check_finite(next, i + 1);
    }
    x.pre_jump[i + 1] = pre;
    x.values[i + 1] = next;
  }
  return x;
}

std::vector<SolutionPath> picard_iterate(const Coefficients& coeffs, const InitialData& zeta,
                                         const DrivingPath& driver, std::size_t n_iter,
                                         const SolutionPath& start) {
  if (n_iter < 1) throw UsageError("picard_iterate needs n_iter >= 1");
  std::vector<SolutionPath> iterates;
  iterates.reserve(n_iter + 1);
  iterates.push_back(start);
  for (std::size_t k = 1; k <= n_iter; ++k) {
    iterates.push_back(picard_step(coeffs, zeta, driver, iterates.back()));
  }
  return iterates;
}

std::vector<SolutionPath> picard_iterate(const Coefficients& coeffs, const InitialData& zeta,
                                         const DrivingPath& driver, std::size_t n_iter) {
  return picard_iterate(coeffs, zeta, driver, n_iter, initial_iterate(zeta, driver));
}

double sup_distance(const SolutionPath& a, const SolutionPath& b) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size()) {
    throw UsageError("sup_distance: paths live on different grids");
  }
  double out = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    out = std::max(out, std::abs(a.values[i] - b.values[i]));
    out = std::max(out, std::abs(a.pre_jump[i] - b.pre_jump[i]));
  }
  return out;
}

double sup_square(const SolutionPath& x) {
  double out = 0.0;
  for (double v : x.values) out = std::max(out, v * v);
  return out;
}

namespace {

std::vector<double> random_window(std::mt19937_64& engine, std::size_t window_nodes) {
  static constexpr double scales[] = {0.0, 0.1, 1.0, 10.0, 100.0};
  std::uniform_int_distribution<int> pick(0, 4);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = scales[pick(engine)];
  std::vector<double> values(window_nodes + 1);
  for (auto& v : values) v = scale * normal(engine);
  return values;
}

double eval_state(const StateCoefficient& c, double t, const SegmentView& x) {
  return c ? c(t, x) : 0.0;
}

double jump_energy(const Coefficients& coeffs, const ScenarioFamily& family,
                   const std::function<double(double)>& k_of_z) {
  if (!coeffs.K) return 0.0;
  double worst = 0.0;
  for (const auto& s : family.scenarios()) {
    worst = std::max(worst, s.levy.nu_integral([&](double z) {
      const double k = k_of_z(z);
      return k * k;
    }));
  }
  return worst;
}

CoefficientAudit finish_audit(double max_ratio, double declared) {
  return {max_ratio, declared, max_ratio <= declared * (1.0 + 1e-9)};
}

}  // namespace

CoefficientAudit audit_growth(const Coefficients& coeffs, const ScenarioFamily& family,
                              std::size_t window_nodes, double dt, double horizon,
                              std::size_t n_probes, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> time_dist(0.0, horizon);
  double worst = 0.0;
  for (std::size_t k = 0; k < n_probes; ++k) {
    Segment seg{dt, random_window(engine, window_nodes), false};
    const auto x = seg.view();
    const double t = time_dist(engine);
    const double f = eval_state(coeffs.f, t, x);
    const double g = eval_state(coeffs.g, t, x);
    const double h = eval_state(coeffs.h, t, x);
    double lhs = std::max({f * f, g * g, h * h});
    lhs = std::max(lhs, jump_energy(coeffs, family, [&](double z) { return coeffs.K(t, x, z); }));
    const double norm = x.sup_norm();
    worst = std::max(worst, lhs / (1.0 + norm * norm));
  }
  return finish_audit(worst, coeffs.c1);
}

CoefficientAudit audit_lipschitz(const Coefficients& coeffs, const ScenarioFamily& family,
                                 std::size_t window_nodes, double dt, double horizon,
                                 std::size_t n_probes, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> time_dist(0.0, horizon);
  double worst = 0.0;
  for (std::size_t k = 0; k < n_probes; ++k) {
    Segment a{dt, random_window(engine, window_nodes), false};
    Segment b = a;
    auto shift = random_window(engine, window_nodes);
    for (std::size_t q = 0; q < shift.size(); ++q) b.values[q] += shift[q];
    Segment diff = b;
    for (std::size_t q = 0; q < shift.size(); ++q) diff.values[q] = b.values[q] - a.values[q];
    const double dist = diff.sup_norm();
    if (dist == 0.0) continue;
    const auto x = a.view();
    const auto y = b.view();
    const double t = time_dist(engine);
    auto sq = [](double v) { return v * v; };
    double lhs = std::max({sq(eval_state(coeffs.f, t, y) - eval_state(coeffs.f, t, x)),
                           sq(eval_state(coeffs.g, t, y) - eval_state(coeffs.g, t, x)),
                           sq(eval_state(coeffs.h, t, y) - eval_state(coeffs.h, t, x))});
    lhs = std::max(lhs, jump_energy(coeffs, family, [&](double z) {
                     return coeffs.K(t, y, z) - coeffs.K(t, x, z);
                   }));
    worst = std::max(worst, lhs / (dist * dist));
  }
  return finish_audit(worst, coeffs.c2);
}

}  // namespace gsfde
