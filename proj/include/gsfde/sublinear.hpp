#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "gsfde/timegrid.hpp"

namespace gsfde {

/// Real functional of one realized driver under a given scenario.
using PathFunctional = std::function<double(const DrivingPath&, const Scenario&)>;
/// Several functionals evaluated on the same path (common random numbers).
using MultiFunctional = std::function<std::vector<double>(const DrivingPath&, const Scenario&)>;
using PathPredicate = std::function<bool(const DrivingPath&, const Scenario&)>;

/// How drivers are drawn: path p of scenario j uses derive_seed(seed, j, p).
struct SamplingPlan {
  TimeGrid grid;
  std::size_t n_paths = 256;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Per-scenario samples of one functional.
struct EmpiricalLaw {
  std::vector<std::vector<double>> samples;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;

  std::size_t n_scenarios() const noexcept { return samples.size(); }

  /// Pointwise map of every sample.
  EmpiricalLaw map(const std::function<double(double)>& fn) const;
};

/// Pointwise combination of two laws drawn on the same paths.
EmpiricalLaw combine(const EmpiricalLaw& a, const EmpiricalLaw& b,
                     const std::function<double(double, double)>& op);

/// sup over scenarios of the empirical mean.
struct UpperEstimate {
  double value = 0.0;
  std::vector<double> means;
  std::vector<double> stderrs;
  std::size_t argmax = 0;

  double stderr_at_argmax() const { return stderrs.at(argmax); }
};

UpperEstimate upper_estimate(const EmpiricalLaw& law);

EmpiricalLaw sample_law(const PathFunctional& functional, const ScenarioFamily& family,
                        const SamplingPlan& plan);

/// One law per output of `functional`; every call must return `n_outputs`
/// values.
std::vector<EmpiricalLaw> sample_laws(const MultiFunctional& functional, std::size_t n_outputs,
                                      const ScenarioFamily& family, const SamplingPlan& plan);

UpperEstimate g_expectation(const PathFunctional& functional, const ScenarioFamily& family,
                            const SamplingPlan& plan);

UpperEstimate capacity(const PathPredicate& event, const ScenarioFamily& family,
                       const SamplingPlan& plan);

/// Capacity tail bound nu(|x| > c) <= E|x|^p / c, plus the Markov form with c^p.
struct ChebyshevReport {
  double c = 0.0;
  double p = 0.0;
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  double moment = 0.0;
  double rhs_stated = 0.0;
  double rhs_markov = 0.0;
  bool holds_stated = false;
  bool holds_markov = false;
};

ChebyshevReport chebyshev_check(const EmpiricalLaw& x, double c, double p);

/// Result of checking the four sublinear-expectation properties on the
/// estimator for one pair of laws drawn on common paths.
struct AxiomAudit {
  double estimate_x = 0.0;
  double estimate_y = 0.0;
  double estimate_max = 0.0;
  double estimate_sum = 0.0;
  double estimate_scaled = 0.0;
  double estimate_constant = 0.0;
  bool monotone = false;
  bool constant_preserving = false;
  bool subadditive = false;
  bool homogeneous = false;
  double subadditivity_gap = 0.0;
  double homogeneity_gap = 0.0;

  bool all() const { return monotone && constant_preserving && subadditive && homogeneous; }
};

/// Monotonicity is tested on (x, max(x, y)), constant preservation on the
/// constant `c`, positive homogeneity with factor `kappa` > 0. Comparisons
/// carry no statistical slack; sub-additivity and homogeneity allow only the
/// rounding of the sampled sums and products.
AxiomAudit audit_axioms(const EmpiricalLaw& x, const EmpiricalLaw& y, double kappa, double c);

}  // namespace gsfde
