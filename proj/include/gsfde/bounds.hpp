#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gsfde/sfde.hpp"
#include "gsfde/sublinear.hpp"
#include "gsfde/timegrid.hpp"

namespace gsfde {

/// Constants entering the moment, Picard and exponential bounds.
struct BoundConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double horizon = 1.0;
  double zeta_norm_sq = 0.0;

  /// (1 + k1) T + k2 + k3
  double k_hat = 0.0;
  /// 4 c2 k_hat
  double M = 0.0;
  /// 4 c2 k_hat (1 + ||zeta||^2) T.
  double C_theorem = 0.0;
  /// Same with c1 in place of c2.
  double C_proof = 0.0;
  /// Same with max(c1, c2); used for pass/fail.
  double C_safe = 0.0;

  /// 5[(1 + c1 k T)||zeta||^2 + c1 k T] e^{5 c1 k T}
  double boundedness_rhs() const;
  /// ||zeta||^2 + 5(1 + c1 k T) e^{5 c1 k T}
  double boundedness_additive_rhs() const;
  /// C_safe (M T)^n / n!
  double picard_rhs(std::size_t n) const;
  /// C_safe (M T)^n / n! e^{M T}
  double error_rhs(std::size_t n) const;
  /// (5/2) c1 k_hat
  double exponential_rate() const;
};

/// Throws UsageError on a negative input or T <= 0.
BoundConstants compute_constants(double c1, double c2, double k1, double k2, double k3,
                                 double horizon, double zeta_norm_sq);

/// Default martingale-inequality constants for volatility bound sigma_bar:
/// k1 = sigma_bar^4, k2 = 4 sigma_bar^2, k3 = 8.
struct BdgConstants {
  double k1 = 1.0;
  double k2 = 4.0;
  double k3 = 8.0;

  static BdgConstants defaults(double sigma_bar);
};

struct BoundReport {
  std::string check;
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;
  /// Neither a pass nor a failure (e.g. Picard did not converge).
  bool inconclusive = false;
  double lhs_stderr = 0.0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> extras;
};

/// Builds a report; holds iff lhs <= rhs + 3 * lhs_stderr.
BoundReport make_report(std::string check, std::string name, double lhs, double rhs,
                        double lhs_stderr, std::size_t n_paths, std::uint64_t seed);

/// Model, initial data and sampling setup shared by every check.
struct Experiment {
  Coefficients model;
  InitialData zeta;
  ScenarioFamily family;
  SamplingPlan plan;
};

/// Growth and Lipschitz audits of the declared c1, c2.
std::vector<BoundReport> audit_coefficients(const Experiment& exp, std::size_t n_probes);

/// Sublinear-expectation properties of the estimator on functionals of the
/// driver (common random numbers).
std::vector<BoundReport> check_axioms(const Experiment& exp);

std::vector<BoundReport> check_boundedness(const Experiment& exp, const BoundConstants& k);

/// One report per n = 0..n_iter-1 comparing E sup|x^{n+1} - x^n|^2 with
/// C_safe (MT)^n / n!.
std::vector<BoundReport> check_picard_decay(const Experiment& exp, std::size_t n_iter,
                                            const BoundConstants& k);

/// One report per n = 0..n_iter comparing E sup|x^n - x|^2, x the converged
/// solution, with C_safe (MT)^n / n! e^{MT}.
std::vector<BoundReport> check_error_estimate(const Experiment& exp, std::size_t n_iter,
                                              const BoundConstants& k);

enum class IntegralKind { dB, dQV, jump };

IntegralKind integral_kind_from_string(const std::string& name);
std::string to_string(IntegralKind kind);

/// Adapted integrand lambda(t) read at left node `node` of the interval that
/// contains `t`.
struct Integrand {
  std::string name;
  std::function<double(const DrivingPath& path, std::size_t node, double t)> value;
};

/// {1, 2, t, B(t-), sin(2 pi t), cos(B(t-))}
std::vector<Integrand> default_integrands();
Integrand integrand_from_name(const std::string& name);

/// p = 2 martingale inequalities. One report per integrand plus a
/// "calibrated_k" report with the smallest empirical constant.
std::vector<BoundReport> check_bdg(IntegralKind kind, const std::vector<Integrand>& integrands,
                                   const Experiment& exp, const BdgConstants& bdg);

/// Capacity tail bound on x = B(T) for each c, printed and Markov forms.
std::vector<BoundReport> check_chebyshev(const Experiment& exp, const std::vector<double>& cs,
                                         double p);

struct UniquenessOptions {
  double perturbation = 1.0;
  std::size_t max_iter = 40;
  double tolerance = 1e-8;
};

/// Picard from zeta(0) and from zeta(0) + perturbation on the same drivers;
/// lhs is the largest final sup-distance over paths.
BoundReport check_uniqueness(const Experiment& exp, const UniquenessOptions& opts);

struct ExponentialOptions {
  std::size_t m_max = 20;
  double slack = 0.0;
};

/// Fits the growth exponent of E sup_{m-1<=t<=m}|x|^2 over the last half of
/// the horizons m = 1..m_max (halved, so it estimates the rate of |x|) and
/// compares it with (5/2) c1 k_hat + slack.
BoundReport check_exponential(const Experiment& exp, const ExponentialOptions& opts,
                              const BoundConstants& k);

}  // namespace gsfde
