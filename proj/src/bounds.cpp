#include "gsfde/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "gsfde/errors.hpp"
#include "gsfde/integrals.hpp"

namespace gsfde {

double BoundConstants::boundedness_rhs() const {
  const double a = c1 * k_hat * horizon;
  return 5.0 * ((1.0 + a) * zeta_norm_sq + a) * std::exp(5.0 * a);
}

double BoundConstants::boundedness_additive_rhs() const {
  const double a = c1 * k_hat * horizon;
  return zeta_norm_sq + 5.0 * (1.0 + a) * std::exp(5.0 * a);
}

double BoundConstants::picard_rhs(std::size_t n) const {
  const double mt = M * horizon;
  double term = C_safe;
  for (std::size_t j = 1; j <= n; ++j) term *= mt / static_cast<double>(j);
  return term;
}

double BoundConstants::error_rhs(std::size_t n) const {
  return picard_rhs(n) * std::exp(M * horizon);
}

double BoundConstants::exponential_rate() const { return 2.5 * c1 * k_hat; }

BoundConstants compute_constants(double c1, double c2, double k1, double k2, double k3,
                                 double horizon, double zeta_norm_sq) {
  for (double v : {c1, c2, k1, k2, k3, zeta_norm_sq}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw UsageError("bound constants must be finite and >= 0");
    }
  }
  if (!(horizon > 0.0)) throw UsageError("horizon must be positive");
  BoundConstants k{c1, c2, k1, k2, k3, horizon, zeta_norm_sq};
  k.k_hat = (1.0 + k1) * horizon + k2 + k3;
  k.M = 4.0 * c2 * k.k_hat;
  const double tail = k.k_hat * (1.0 + zeta_norm_sq) * horizon;
  k.C_theorem = 4.0 * c2 * tail;
  k.C_proof = 4.0 * c1 * tail;
  k.C_safe = 4.0 * std::max(c1, c2) * tail;
  return k;
}

BdgConstants BdgConstants::defaults(double sigma_bar) {
  const double s2 = sigma_bar * sigma_bar;
  return {s2 * s2, 4.0 * s2, 8.0};
}

BoundReport make_report(std::string check, std::string name, double lhs, double rhs,
                        double lhs_stderr, std::size_t n_paths, std::uint64_t seed) {
  BoundReport r;
  r.check = std::move(check);
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.lhs_stderr = lhs_stderr;
  r.holds = lhs <= rhs + 3.0 * lhs_stderr;
  r.n_paths = n_paths;
  r.seed = seed;
  return r;
}

namespace {

BoundReport report_from(const std::string& check, const std::string& name,
                        const UpperEstimate& lhs, double rhs, const Experiment& exp) {
  return make_report(check, name, lhs.value, rhs, lhs.stderr_at_argmax(), exp.plan.n_paths,
                     exp.plan.seed);
}

std::size_t probe_window(const Experiment& exp) { return exp.zeta.zeta.window_nodes(); }

}  // namespace

std::vector<BoundReport> audit_coefficients(const Experiment& exp, std::size_t n_probes) {
  const auto& grid = exp.plan.grid;
  const auto growth = audit_growth(exp.model, exp.family, probe_window(exp), grid.dt(),
                                   grid.horizon(), n_probes, exp.plan.seed);
  const auto lipschitz = audit_lipschitz(exp.model, exp.family, probe_window(exp), grid.dt(),
                                         grid.horizon(), n_probes, exp.plan.seed + 1);
  auto a1 = make_report("coefficient_audit", "growth_c1", growth.max_ratio, growth.declared, 0.0,
                        n_probes, exp.plan.seed);
  a1.holds = growth.passed;
  auto a2 = make_report("coefficient_audit", "lipschitz_c2", lipschitz.max_ratio,
                        lipschitz.declared, 0.0, n_probes, exp.plan.seed + 1);
  a2.holds = lipschitz.passed;
  return {a1, a2};
}

std::vector<BoundReport> check_axioms(const Experiment& exp) {
  auto laws = sample_laws(
      [](const DrivingPath& path, const Scenario&) {
        double sup_abs = 0.0;
        for (double b : path.B) sup_abs = std::max(sup_abs, std::abs(b));
        double jumps = 0.0;
        for (const auto& ev : path.jumps) jumps += ev.size;
        const double bt = path.B.back();
        return std::vector<double>{bt, path.qv.back() - 1.0, sup_abs, std::sin(3.0 * bt), jumps};
      },
      5, exp.family, exp.plan);
  const std::vector<std::pair<std::size_t, std::size_t>> pairs = {{0, 1}, {2, 3}, {0, 4}, {3, 1}};
  std::vector<BoundReport> out;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const auto& [a, b] = pairs[q];
    const auto audit = audit_axioms(laws[a], laws[b], 2.5, 0.7);
    const std::string tag = "pair" + std::to_string(q) + ":";
    auto add = [&](const std::string& name, double lhs, double rhs, bool holds) {
      auto r = make_report("axioms", tag + name, lhs, rhs, 0.0, exp.plan.n_paths, exp.plan.seed);
      r.holds = holds;
      out.push_back(std::move(r));
    };
    add("monotonicity", audit.estimate_x, audit.estimate_max, audit.monotone);
    add("constant_preserving", audit.estimate_constant, 0.7, audit.constant_preserving);
    add("subadditivity", audit.estimate_sum, audit.estimate_x + audit.estimate_y,
        audit.subadditive);
    add("homogeneity", audit.estimate_scaled, 2.5 * audit.estimate_x, audit.homogeneous);
  }
  return out;
}

std::vector<BoundReport> check_boundedness(const Experiment& exp, const BoundConstants& k) {
  const auto& grid = exp.plan.grid;
  const auto growth = audit_growth(exp.model, exp.family, probe_window(exp), grid.dt(),
                                   grid.horizon(), 2000, exp.plan.seed);
  if (!growth.passed) {
    throw ConfigError("declared c1 = " + std::to_string(growth.declared) +
                          " is below the sampled growth ratio " +
                          std::to_string(growth.max_ratio),
                      "model.c1");
  }
  const double zeta_sq = exp.zeta.norm_sq();
  auto laws = sample_laws(
      [&](const DrivingPath& path, const Scenario&) {
        const double s = sup_square(euler_solve(exp.model, exp.zeta, path));
        return std::vector<double>{s, std::max(s, zeta_sq)};
      },
      2, exp.family, exp.plan);
  return {report_from("boundedness", "gronwall", upper_estimate(laws[0]),
                      k.boundedness_rhs(), exp),
          report_from("boundedness", "additive", upper_estimate(laws[1]),
                      k.boundedness_additive_rhs(), exp)};
}

std::vector<BoundReport> check_picard_decay(const Experiment& exp, std::size_t n_iter,
                                            const BoundConstants& k) {
  if (n_iter < 3) throw UsageError("check_picard_decay needs n_iter >= 3");
  auto laws = sample_laws(
      [&](const DrivingPath& path, const Scenario&) {
        const auto iterates = picard_iterate(exp.model, exp.zeta, path, n_iter);
        std::vector<double> out(2 * n_iter);
        for (std::size_t n = 0; n < n_iter; ++n) {
          const double d = sup_distance(iterates[n + 1], iterates[n]);
          out[n] = d * d;
          out[n_iter + n] = d;
        }
        return out;
      },
      2 * n_iter, exp.family, exp.plan);
  std::vector<UpperEstimate> sq;
  for (std::size_t n = 0; n < n_iter; ++n) sq.push_back(upper_estimate(laws[n]));
  std::vector<BoundReport> out;
  const double mt = k.M * k.horizon;
  for (std::size_t n = 0; n < n_iter; ++n) {
    auto r = report_from("picard_decay", "n=" + std::to_string(n), sq[n], k.picard_rhs(n), exp);
    r.extras.emplace_back("mean_sup_distance", upper_estimate(laws[n_iter + n]).value);
    if (n + 1 < n_iter) {
      const double ratio = sq[n].value > 0.0 ? sq[n + 1].value / sq[n].value : 0.0;
      r.extras.emplace_back("ratio", ratio);
      r.extras.emplace_back("ratio_bound", mt / static_cast<double>(n + 1));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BoundReport> check_error_estimate(const Experiment& exp, std::size_t n_iter,
                                              const BoundConstants& k) {
  auto laws = sample_laws(
      [&](const DrivingPath& path, const Scenario&) {
        const auto limit = euler_solve(exp.model, exp.zeta, path);
        const auto iterates = picard_iterate(exp.model, exp.zeta, path, std::max<std::size_t>(n_iter, 1));
        std::vector<double> out(n_iter + 1);
        for (std::size_t n = 0; n <= n_iter; ++n) {
          const double d = sup_distance(iterates[n], limit);
          out[n] = d * d;
        }
        return out;
      },
      n_iter + 1, exp.family, exp.plan);
  std::vector<BoundReport> out;
  for (std::size_t n = 0; n <= n_iter; ++n) {
    out.push_back(report_from("error_estimate", "n=" + std::to_string(n), upper_estimate(laws[n]),
                              k.error_rhs(n), exp));
  }
  return out;
}

IntegralKind integral_kind_from_string(const std::string& name) {
  if (name == "dB") return IntegralKind::dB;
  if (name == "dQV") return IntegralKind::dQV;
  if (name == "jump") return IntegralKind::jump;
  throw UsageError("unknown integral kind '" + name + "'");
}

std::string to_string(IntegralKind kind) {
  switch (kind) {
    case IntegralKind::dB:
      return "dB";
    case IntegralKind::dQV:
      return "dQV";
    case IntegralKind::jump:
      return "jump";
  }
  return "unknown";
}

Integrand integrand_from_name(const std::string& name) {
  using std::numbers::pi;
  if (name == "const1") return {name, [](const DrivingPath&, std::size_t, double) { return 1.0; }};
  if (name == "const2") return {name, [](const DrivingPath&, std::size_t, double) { return 2.0; }};
  if (name == "zero") return {name, [](const DrivingPath&, std::size_t, double) { return 0.0; }};
  if (name == "t") return {name, [](const DrivingPath&, std::size_t, double t) { return t; }};
  if (name == "B") {
    return {name, [](const DrivingPath& p, std::size_t node, double) { return p.B[node]; }};
  }
  if (name == "sin2pit") {
    return {name, [](const DrivingPath&, std::size_t, double t) { return std::sin(2.0 * pi * t); }};
  }
  if (name == "cosB") {
    return {name,
            [](const DrivingPath& p, std::size_t node, double) { return std::cos(p.B[node]); }};
  }
  throw ConfigError("unknown integrand '" + name + "'", "bdg.integrands");
}

std::vector<Integrand> default_integrands() {
  std::vector<Integrand> out;
  for (const char* name : {"const1", "const2", "t", "B", "sin2pit", "cosB"}) {
    out.push_back(integrand_from_name(name));
  }
  return out;
}

std::vector<BoundReport> check_bdg(IntegralKind kind, const std::vector<Integrand>& integrands,
                                   const Experiment& exp, const BdgConstants& bdg) {
  if (integrands.empty()) throw UsageError("check_bdg needs at least one integrand");
  const auto& grid = exp.plan.grid;
  const std::size_t m = integrands.size();
  auto laws = sample_laws(
      [&](const DrivingPath& path, const Scenario& scenario) {
        std::vector<double> out(2 * m);
        for (std::size_t q = 0; q < m; ++q) {
          const auto& fn = integrands[q].value;
          std::vector<double> lam(grid.n_nodes());
          for (std::size_t i = 0; i < lam.size(); ++i) lam[i] = fn(path, i, grid.time(i));
          std::vector<double> lam_sq(lam.size());
          for (std::size_t i = 0; i < lam.size(); ++i) lam_sq[i] = lam[i] * lam[i];
          const GridProcess energy(grid, std::move(lam_sq));
          const GridProcess integrand(grid, std::move(lam));
          GridProcess running = GridProcess::constant(grid, 0.0);
          double base = lebesgue_integral(energy, grid.n_steps());
          switch (kind) {
            case IntegralKind::dB:
              running = running_ito(integrand, path.B);
              break;
            case IntegralKind::dQV:
              running = running_qv(integrand, path.qv);
              break;
            case IntegralKind::jump: {
              std::vector<double> k_values(path.jumps.size());
              for (std::size_t j = 0; j < path.jumps.size(); ++j) {
                const auto& ev = path.jumps[j];
                k_values[j] = fn(path, grid.interval_containing(ev.time), ev.time) * ev.size;
              }
              running = running_jump(k_values, path);
              base *= scenario.levy.nu_integral([](double z) { return z * z; });
              break;
            }
          }
          double sup_sq = 0.0;
          for (double v : running.values) sup_sq = std::max(sup_sq, v * v);
          out[q] = sup_sq;
          out[m + q] = base;
        }
        return out;
      },
      2 * m, exp.family, exp.plan);

  double k = 0.0;
  double scale = 1.0;
  switch (kind) {
    case IntegralKind::dB:
      k = bdg.k2;
      break;
    case IntegralKind::dQV:
      k = bdg.k1;
      scale = grid.horizon();
      break;
    case IntegralKind::jump:
      k = bdg.k3;
      break;
  }
  const std::string check = "bdg_" + to_string(kind);
  std::vector<BoundReport> out;
  double calibrated = 0.0;
  double calibrated_se = 0.0;
  for (std::size_t q = 0; q < m; ++q) {
    const auto lhs = upper_estimate(laws[q]);
    const auto base = upper_estimate(laws[m + q]);
    auto r = report_from(check, integrands[q].name, lhs, k * scale * base.value, exp);
    double k_emp = 0.0;
    double k_se = 0.0;
    if (base.value > 0.0) {
      k_emp = lhs.value / (scale * base.value);
      k_se = lhs.stderr_at_argmax() / (scale * base.value);
    }
    r.extras.emplace_back("empirical_k", k_emp);
    if (k_emp >= calibrated) {
      calibrated = k_emp;
      calibrated_se = k_se;
    }
    out.push_back(std::move(r));
  }
  out.push_back(make_report(check, "calibrated_k", calibrated, k, calibrated_se, exp.plan.n_paths,
                            exp.plan.seed));
  return out;
}

std::vector<BoundReport> check_chebyshev(const Experiment& exp, const std::vector<double>& cs,
                                         double p) {
  const auto law = sample_law(
      [](const DrivingPath& path, const Scenario&) { return path.B.back(); }, exp.family,
      exp.plan);
  std::vector<BoundReport> out;
  for (double c : cs) {
    const auto r = chebyshev_check(law, c, p);
    char tag[64];
    std::snprintf(tag, sizeof tag, "c=%g", c);
    auto stated = make_report("chebyshev", std::string(tag) + ":stated", r.lhs, r.rhs_stated,
                              r.lhs_stderr, exp.plan.n_paths, exp.plan.seed);
    stated.extras.emplace_back("moment", r.moment);
    auto markov = make_report("chebyshev", std::string(tag) + ":markov", r.lhs, r.rhs_markov,
                              r.lhs_stderr, exp.plan.n_paths, exp.plan.seed);
    markov.extras.emplace_back("moment", r.moment);
    out.push_back(std::move(stated));
    out.push_back(std::move(markov));
  }
  return out;
}

BoundReport check_uniqueness(const Experiment& exp, const UniquenessOptions& opts) {
  auto laws = sample_laws(
      [&](const DrivingPath& path, const Scenario&) {
        auto x = initial_iterate(exp.zeta, path, 0.0);
        auto y = initial_iterate(exp.zeta, path, opts.perturbation);
        double dist = sup_distance(x, y);
        double change = std::numeric_limits<double>::infinity();
        std::size_t needed = opts.max_iter + 1;
        for (std::size_t it = 1; it <= opts.max_iter; ++it) {
          auto nx = picard_step(exp.model, exp.zeta, path, x);
          auto ny = picard_step(exp.model, exp.zeta, path, y);
          change = std::max(sup_distance(nx, x), sup_distance(ny, y));
          x = std::move(nx);
          y = std::move(ny);
          dist = sup_distance(x, y);
          if (dist < opts.tolerance && needed > opts.max_iter) needed = it;
          if (change == 0.0) break;
        }
        const double converged = change < opts.tolerance ? 1.0 : 0.0;
        return std::vector<double>{dist, static_cast<double>(needed), converged};
      },
      3, exp.family, exp.plan);
  double worst = 0.0;
  double needed = 0.0;
  bool converged = true;
  for (std::size_t j = 0; j < laws[0].samples.size(); ++j) {
    for (std::size_t p = 0; p < laws[0].samples[j].size(); ++p) {
      worst = std::max(worst, laws[0].samples[j][p]);
      needed = std::max(needed, laws[1].samples[j][p]);
      converged = converged && laws[2].samples[j][p] == 1.0;
    }
  }
  auto r = make_report("uniqueness", "perturbed_start", worst, opts.tolerance, 0.0,
                       exp.plan.n_paths, exp.plan.seed);
  r.holds = worst < opts.tolerance;
  r.inconclusive = !converged;
  r.extras.emplace_back("iterations_needed", needed);
  return r;
}

BoundReport check_exponential(const Experiment& exp, const ExponentialOptions& opts,
                              const BoundConstants& k) {
  if (opts.m_max < 2) throw UsageError("check_exponential needs m_max >= 2");
  const auto& grid = exp.plan.grid;
  const double per_unit = static_cast<double>(grid.n_steps()) / grid.horizon();
  const double rounded = std::round(per_unit);
  if (rounded < 1.0 || std::abs(per_unit - rounded) > 1e-9 * per_unit) {
    throw ConfigError("steps per unit time must be an integer for the exponential check",
                      "grid.n_steps");
  }
  const auto spu = static_cast<std::size_t>(rounded);
  const std::size_t m_max = opts.m_max;
  Experiment long_exp = exp;
  long_exp.plan.grid = TimeGrid(static_cast<double>(m_max), m_max * spu);

  auto laws = sample_laws(
      [&](const DrivingPath& path, const Scenario&) {
        const auto partial = euler_solve_partial(exp.model, exp.zeta, path);
        std::vector<double> out(m_max + 1, 0.0);
        std::size_t completed = 0;
        for (std::size_t m = 1; m <= m_max; ++m) {
          if (m * spu >= partial.valid_nodes) break;
          double s = 0.0;
          for (std::size_t i = (m - 1) * spu; i <= m * spu; ++i) {
            const double v = partial.path.values[i];
            s = std::max(s, v * v);
          }
          if (!std::isfinite(s)) break;
          out[m - 1] = s;
          completed = m;
        }
        out[m_max] = static_cast<double>(completed);
        return out;
      },
      m_max + 1, long_exp.family, long_exp.plan);

  std::size_t m_eff = m_max;
  for (const auto& s : laws[m_max].samples) {
    for (double c : s) m_eff = std::min(m_eff, static_cast<std::size_t>(c));
  }
  BoundReport r = make_report("exponential", "growth_rate", 0.0, k.exponential_rate() + opts.slack,
                              0.0, exp.plan.n_paths, exp.plan.seed);
  r.extras.emplace_back("horizons_used", static_cast<double>(m_eff));
  if (m_eff < 2) {
    r.inconclusive = true;
    r.holds = false;
    return r;
  }
  const std::size_t first = m_eff - std::max<std::size_t>(2, m_eff / 2) + 1;
  // Least squares on centered abscissae and ordinates taken relative to the
  // first point, so a flat sequence fits a slope of exactly 0.
  std::vector<double> ys;
  for (std::size_t m = first; m <= m_eff; ++m) {
    const double moment = upper_estimate(laws[m - 1]).value;
    ys.push_back(std::log(std::max(moment, std::numeric_limits<double>::denorm_min())));
  }
  const double x_mean = 0.5 * static_cast<double>(first + m_eff);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t q = 0; q < ys.size(); ++q) {
    const double dx = static_cast<double>(first + q) - x_mean;
    sxx += dx * dx;
    sxy += dx * (ys[q] - ys.front());
  }
  const double slope = sxy / sxx;
  const double rate = 0.5 * slope;
  r = make_report("exponential", "growth_rate", rate, k.exponential_rate() + opts.slack, 0.0,
                  exp.plan.n_paths, exp.plan.seed);
  r.extras.emplace_back("horizons_used", static_cast<double>(m_eff));
  r.extras.emplace_back("fit_first_horizon", static_cast<double>(first));
  r.extras.emplace_back("log_moment_slope", slope);
  return r;
}

}  // namespace gsfde
