#include "gsfde/sublinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsfde/errors.hpp"
#include "gsfde/parallel.hpp"
#include "gsfde/summation.hpp"

namespace gsfde {

namespace {

void check_plan(const SamplingPlan& plan) {
  if (plan.n_paths < 2) throw UsageError("n_paths must be at least 2");
}

void check_same_shape(const EmpiricalLaw& a, const EmpiricalLaw& b) {
  if (a.samples.size() != b.samples.size()) throw UsageError("laws have different scenario counts");
  for (std::size_t j = 0; j < a.samples.size(); ++j) {
    if (a.samples[j].size() != b.samples[j].size()) {
      throw UsageError("laws have different path counts");
    }
  }
}

double max_abs_mean(const EmpiricalLaw& law) {
  double out = 0.0;
  for (const auto& s : law.samples) {
    CompensatedSum acc;
    for (double v : s) acc.add(std::abs(v));
    out = std::max(out, acc.value() / static_cast<double>(s.size()));
  }
  return out;
}

}  // namespace

EmpiricalLaw EmpiricalLaw::map(const std::function<double(double)>& fn) const {
  EmpiricalLaw out = *this;
  for (auto& s : out.samples) {
    for (auto& v : s) v = fn(v);
  }
  return out;
}

EmpiricalLaw combine(const EmpiricalLaw& a, const EmpiricalLaw& b,
                     const std::function<double(double, double)>& op) {
  check_same_shape(a, b);
  EmpiricalLaw out = a;
  for (std::size_t j = 0; j < out.samples.size(); ++j) {
    for (std::size_t p = 0; p < out.samples[j].size(); ++p) {
      out.samples[j][p] = op(a.samples[j][p], b.samples[j][p]);
    }
  }
  return out;
}

UpperEstimate upper_estimate(const EmpiricalLaw& law) {
  if (law.samples.empty()) throw UsageError("empirical law has no scenarios");
  UpperEstimate est;
  for (const auto& s : law.samples) {
    if (s.size() < 2) throw UsageError("each scenario needs at least 2 samples");
    ExactSum total;
    for (double v : s) total.add(v);
    const double mean = total.mean(s.size());
    CompensatedSum squares;
    for (double v : s) squares.add((v - mean) * (v - mean));
    const auto n = static_cast<double>(s.size());
    est.means.push_back(mean);
    est.stderrs.push_back(std::sqrt(squares.value() / (n - 1.0) / n));
  }
  const auto it = std::max_element(est.means.begin(), est.means.end());
  est.argmax = static_cast<std::size_t>(it - est.means.begin());
  est.value = *it;
  return est;
}

std::vector<EmpiricalLaw> sample_laws(const MultiFunctional& functional, std::size_t n_outputs,
                                      const ScenarioFamily& family, const SamplingPlan& plan) {
  check_plan(plan);
  const std::size_t n_scen = family.size();
  std::vector<EmpiricalLaw> laws(n_outputs);
  for (auto& law : laws) {
    law.samples.assign(n_scen, std::vector<double>(plan.n_paths, 0.0));
    law.n_paths = plan.n_paths;
    law.seed = plan.seed;
  }
  parallel_for(n_scen * plan.n_paths, plan.threads, [&](std::size_t job) {
    const std::size_t j = job / plan.n_paths;
    const std::size_t p = job % plan.n_paths;
    const auto driver = generate_driver(plan.grid, family[j], derive_seed(plan.seed, j, p));
    const auto values = functional(driver, family[j]);
    if (values.size() != n_outputs) {
      throw EvaluationError("functional returned the wrong number of outputs", j, p);
    }
    for (std::size_t k = 0; k < n_outputs; ++k) {
      if (!std::isfinite(values[k])) {
        throw EvaluationError("functional output " + std::to_string(k) + " is not finite", j, p);
      }
      laws[k].samples[j][p] = values[k];
    }
  });
  return laws;
}

EmpiricalLaw sample_law(const PathFunctional& functional, const ScenarioFamily& family,
                        const SamplingPlan& plan) {
  auto laws = sample_laws(
      [&](const DrivingPath& path, const Scenario& scenario) {
        return std::vector<double>{functional(path, scenario)};
      },
      1, family, plan);
  return std::move(laws.front());
}

UpperEstimate g_expectation(const PathFunctional& functional, const ScenarioFamily& family,
                            const SamplingPlan& plan) {
  return upper_estimate(sample_law(functional, family, plan));
}

UpperEstimate capacity(const PathPredicate& event, const ScenarioFamily& family,
                       const SamplingPlan& plan) {
  return g_expectation(
      [&](const DrivingPath& path, const Scenario& scenario) {
        return event(path, scenario) ? 1.0 : 0.0;
      },
      family, plan);
}

ChebyshevReport chebyshev_check(const EmpiricalLaw& x, double c, double p) {
  if (!(c > 0.0)) throw UsageError("chebyshev_check needs c > 0");
  if (!(p >= 1.0)) throw UsageError("chebyshev_check needs p >= 1");
  ChebyshevReport r;
  r.c = c;
  r.p = p;
  const auto tail = upper_estimate(x.map([c](double v) { return std::abs(v) > c ? 1.0 : 0.0; }));
  const auto moment = upper_estimate(x.map([p](double v) { return std::pow(std::abs(v), p); }));
  r.lhs = tail.value;
  r.lhs_stderr = tail.stderr_at_argmax();
  r.moment = moment.value;
  r.rhs_stated = moment.value / c;
  r.rhs_markov = moment.value / std::pow(c, p);
  r.holds_stated = r.lhs <= r.rhs_stated + 3.0 * r.lhs_stderr;
  r.holds_markov = r.lhs <= r.rhs_markov + 3.0 * r.lhs_stderr;
  return r;
}

AxiomAudit audit_axioms(const EmpiricalLaw& x, const EmpiricalLaw& y, double kappa, double c) {
  if (!(kappa > 0.0)) throw UsageError("homogeneity factor must be positive");
  check_same_shape(x, y);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  AxiomAudit audit;

  const double ex = upper_estimate(x).value;
  const double ey = upper_estimate(y).value;
  audit.estimate_x = ex;
  audit.estimate_y = ey;

  const auto upper = combine(x, y, [](double a, double b) { return std::max(a, b); });
  audit.estimate_max = upper_estimate(upper).value;
  audit.monotone = ex <= audit.estimate_max;

  audit.estimate_constant = upper_estimate(x.map([c](double) { return c; })).value;
  audit.constant_preserving = audit.estimate_constant == c;

  const double esum = upper_estimate(combine(x, y, std::plus<>())).value;
  audit.estimate_sum = esum;
  const double rounding = 4.0 * eps * (max_abs_mean(x) + max_abs_mean(y));
  audit.subadditivity_gap = esum - (ex + ey);
  audit.subadditive = audit.subadditivity_gap <= rounding;

  const double escaled = upper_estimate(x.map([kappa](double v) { return kappa * v; })).value;
  audit.estimate_scaled = escaled;
  audit.homogeneity_gap = escaled - kappa * ex;
  audit.homogeneous = std::abs(audit.homogeneity_gap) <= 4.0 * eps * kappa * max_abs_mean(x);
  return audit;
}

}  // namespace gsfde
