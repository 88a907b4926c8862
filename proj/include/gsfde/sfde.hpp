#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gsfde/timegrid.hpp"

namespace gsfde {

/// Non-owning view of a history segment psi on {-tau, ..., -dt, 0}.
/// `past` holds psi(-tau) .. psi(-dt); `now` is psi(0) (or psi(0-) for a
/// left-limit segment).
class SegmentView {
 public:
  SegmentView(std::span<const double> past, double now, double dt)
      : past_(past), now_(now), dt_(dt) {}

  double now() const noexcept { return now_; }
  double dt() const noexcept { return dt_; }
  std::size_t window_nodes() const noexcept { return past_.size(); }
  double tau() const noexcept { return static_cast<double>(past_.size()) * dt_; }

  /// psi(-k dt) for k <= window_nodes().
  double at_lag(std::size_t k) const;

  /// psi(theta) at the nearest window node; theta < -tau reads psi(-tau).
  double operator()(double theta) const;

  /// max over window nodes of |psi|.
  double sup_norm() const;

 private:
  std::span<const double> past_;
  double now_;
  double dt_;
};

/// Owning segment: values[k] = psi(-tau + k dt), k = 0..w, values.back() = psi(0).
struct Segment {
  double dt = 0.0;
  std::vector<double> values;
  bool left_limit = false;

  std::size_t window_nodes() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  double tau() const noexcept { return static_cast<double>(window_nodes()) * dt; }
  SegmentView view() const;
  double sup_norm() const { return view().sup_norm(); }
};

/// Deterministic initial history zeta on [-tau, 0].
struct InitialData {
  Segment zeta;

  double at_zero() const { return zeta.values.back(); }
  /// ||zeta||^2
  double norm_sq() const;

  /// Window of `window_nodes` steps of size dt.
  static InitialData constant(double value, std::size_t window_nodes, double dt);
  /// Linear from `oldest` at -tau to `newest` at 0.
  static InitialData linear(double oldest, double newest, std::size_t window_nodes, double dt);
};

using StateCoefficient = std::function<double(double t, const SegmentView& x)>;
using JumpCoefficient = std::function<double(double t, const SegmentView& x, double z)>;

/// f, g, h, K of dx = f dt + g d<B> + h dB + int K L(dt, dz). An empty
/// callable is the zero coefficient. c1 and c2 are the declared growth and
/// Lipschitz constants.
struct Coefficients {
  std::string name = "zero";
  StateCoefficient f;
  StateCoefficient g;
  StateCoefficient h;
  JumpCoefficient K;
  double c1 = 0.0;
  double c2 = 0.0;
  /// Largest history lag read by any coefficient.
  double max_lag = 0.0;
};

namespace models {

Coefficients zero();
/// f = a psi(0)
Coefficients linear_drift(double a);
/// f = mu psi(0), h = sigma_coef psi(0)
Coefficients gbm(double mu, double sigma_coef);
/// f = a psi(0) + b psi(-lag)
Coefficients delayed_linear(double a, double b, double lag);
/// K = c psi(0) z
Coefficients jump_linear(double c);
/// Coefficient-wise sum of several terms. Declared constants are left at 0.
Coefficients sum(const std::vector<Coefficients>& terms);

}  // namespace models

/// Solution on the grid. `pre_jump[i]` is x(t_i-); it equals `values[i]`
/// where no jump lands in (t_{i-1}, t_i].
struct SolutionPath {
  TimeGrid grid;
  std::vector<double> values;
  std::vector<double> pre_jump;
  /// Driver the path was solved against (non-owning; may be null).
  const DrivingPath* driver = nullptr;
};

/// x_{t_i} (or x_{t_i-} when `pre_jump`), pulling t + theta < 0 from zeta.
Segment segment_extract(const SolutionPath& x, const InitialData& zeta, std::size_t node,
                        bool pre_jump);

/// Explicit left-point scheme:
/// x[i+1] = x[i] + f dt + g dqv + h dB + sum over jumps in (t_i, t_{i+1}] of
/// K(s_j, x_{t_{i+1}-}, z_j). Throws DivergenceError on a non-finite state.
SolutionPath euler_solve(const Coefficients& coeffs, const InitialData& zeta,
                         const DrivingPath& driver);

struct PartialSolution {
  SolutionPath path;
  /// Nodes [0, valid_nodes) are finite; later nodes are left at 0.
  std::size_t valid_nodes = 0;
};

/// As euler_solve, but stops at the first non-finite state instead of throwing.
PartialSolution euler_solve_partial(const Coefficients& coeffs, const InitialData& zeta,
                                    const DrivingPath& driver);

/// x^0 = zeta(0) + offset on [0, T].
SolutionPath initial_iterate(const InitialData& zeta, const DrivingPath& driver, double offset = 0.0);

/// One Picard map: every coefficient is evaluated on segments of `previous`.
SolutionPath picard_step(const Coefficients& coeffs, const InitialData& zeta,
                         const DrivingPath& driver, const SolutionPath& previous);

/// Iterates x^0, ..., x^n_iter starting from `start`.
std::vector<SolutionPath> picard_iterate(const Coefficients& coeffs, const InitialData& zeta,
                                         const DrivingPath& driver, std::size_t n_iter,
                                         const SolutionPath& start);

std::vector<SolutionPath> picard_iterate(const Coefficients& coeffs, const InitialData& zeta,
                                         const DrivingPath& driver, std::size_t n_iter);

/// max over nodes of |a - b|, including pre-jump values.
double sup_distance(const SolutionPath& a, const SolutionPath& b);

/// max over nodes of |x|^2.
double sup_square(const SolutionPath& x);

struct CoefficientAudit {
  double max_ratio = 0.0;
  double declared = 0.0;
  bool passed = false;
};

/// Growth audit: sampled |f|^2 v |g|^2 v |h|^2 v sup_nu int |K|^2 nu(dz)
/// over (1 + ||x||^2) on random probe segments, against c1.
CoefficientAudit audit_growth(const Coefficients& coeffs, const ScenarioFamily& family,
                              std::size_t window_nodes, double dt, double horizon,
                              std::size_t n_probes, std::uint64_t seed);

/// Lipschitz audit: squared coefficient differences over ||y - x||^2 on
/// random probe pairs, against c2.
CoefficientAudit audit_lipschitz(const Coefficients& coeffs, const ScenarioFamily& family,
                                 std::size_t window_nodes, double dt, double horizon,
                                 std::size_t n_probes, std::uint64_t seed);

}  // namespace gsfde
