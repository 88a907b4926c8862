// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails (including its runtime budget).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gsfde/bounds.hpp"
#include "gsfde/config.hpp"
#include "gsfde/integrals.hpp"
#include "gsfde/runner.hpp"

using namespace gsfde;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

Coefficients declared(Coefficients c, double c1, double c2) {
  c.c1 = c1;
  c.c2 = c2;
  return c;
}

ScenarioFamily sigmas(std::vector<double> values) {
  return ScenarioFamily::constant_volatilities(values);
}

Experiment experiment(Coefficients model, ScenarioFamily family, std::size_t n_steps,
                      std::size_t n_paths, std::uint64_t seed, double tau_steps = 1,
                      double zeta0 = 1.0) {
  const TimeGrid grid(1.0, n_steps);
  return Experiment{std::move(model),
                    InitialData::constant(zeta0, static_cast<std::size_t>(tau_steps), grid.dt()),
                    std::move(family), SamplingPlan{grid, n_paths, seed, 0}};
}

BoundConstants default_constants(const Coefficients& m, double zeta_sq) {
  return compute_constants(m.c1, m.c2, 1.0, 4.0, 8.0, 1.0, zeta_sq);
}

// 1. Discrete Ito identity.
Outcome ito_identity() {
  const TimeGrid grid(1.0, 1000);
  Scenario s;
  s.volatility = VolatilityControl::constant_at(1.0);
  double worst = 0.0;
  for (std::uint64_t p = 0; p < 100; ++p) {
    const auto d = generate_driver(grid, s, derive_seed(2024, 0, p));
    const double b = d.B.back();
    const double ito = ito_integral(GridProcess(grid, d.B), d.B, grid.n_steps());
    const double residual = b * b - 2.0 * ito - d.qv.back();
    const double scale = std::max({b * b, d.qv.back(), 1.0});
    worst = std::max(worst, std::abs(residual) / scale);
  }
  return {worst <= 1e-12, fmt("max relative residual %.3g over 100 paths (tol 1e-12)", worst)};
}

// 2. Sublinear-expectation axioms on 20 randomized functional pairs.
Outcome axiom_suite() {
  const auto family = sigmas({0.5, 1.0});
  const SamplingPlan plan{TimeGrid(1.0, 200), 256, 77, 0};
  std::size_t passed = 0;
  for (std::size_t pair = 0; pair < 20; ++pair) {
    // Randomized pair: coefficients drawn per pair from a seeded generator.
    std::mt19937_64 engine(1000 + pair);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double a = u(engine), b = u(engine), c = u(engine), d = u(engine);
    const std::size_t mid = 1 + engine() % 199;
    const auto laws = sample_laws(
        [=](const DrivingPath& path, const Scenario&) {
          const double bt = path.B.back();
          const double bm = path.B[mid];
          return std::vector<double>{a * bt * bt + b * std::sin(bm), c * bm * bt + d * path.qv.back()};
        },
        2, family, plan);
    const double kappa = 0.1 + std::abs(u(engine));
    const auto audit = audit_axioms(laws[0], laws[1], kappa, u(engine));
    if (audit.all()) ++passed;
  }
  return {passed == 20, std::to_string(passed) + "/20 pairs satisfy all four properties exactly"};
}

double gbm_rms(const std::vector<DrivingPath>& drivers, double mu, double s, double* oracle_rms) {
  double sq = 0.0, oracle_sq = 0.0;
  for (const auto& d : drivers) {
    const auto x = euler_solve(models::gbm(mu, s), InitialData::constant(1.0, 1, d.grid.dt()), d);
    const double exact = std::exp((mu - 0.5 * s * s) * d.grid.horizon() + s * d.B.back());
    sq += (x.values.back() - exact) * (x.values.back() - exact);
    oracle_sq += exact * exact;
  }
  const double n = static_cast<double>(drivers.size());
  if (oracle_rms) *oracle_rms = std::sqrt(oracle_sq / n);
  return std::sqrt(sq / n);
}

// 3. GBM oracle: strong error and halving ratio on shared Brownian paths.
Outcome gbm_oracle() {
  const double mu = 0.05, s = 0.2;
  Scenario sc;
  sc.volatility = VolatilityControl::constant_at(1.0);
  std::vector<DrivingPath> fine, coarse;
  for (std::size_t p = 0; p < 256; ++p) {
    fine.push_back(generate_driver(TimeGrid(1.0, 2000), sc, derive_seed(31, 0, p)));
    coarse.push_back(coarsen(fine.back(), 2));
  }
  double oracle_rms = 0.0;
  const double err_coarse = gbm_rms(coarse, mu, s, &oracle_rms);
  const double err_fine = gbm_rms(fine, mu, s, nullptr);
  const double bound = 3.0 * std::sqrt(1e-3) * oracle_rms;
  const double ratio = err_coarse / err_fine;
  // Diagnostic only: the same ratio over 16x more paths, separating the
  // sampling spread of the 256-path ratio from the scheme's convergence order.
  double big_fine_sq = 0.0, big_coarse_sq = 0.0;
  for (std::size_t p = 0; p < 4096; ++p) {
    std::vector<DrivingPath> one{generate_driver(TimeGrid(1.0, 2000), sc, derive_seed(31, 1, p))};
    const double f = gbm_rms(one, mu, s, nullptr);
    one.front() = coarsen(one.front(), 2);
    const double c = gbm_rms(one, mu, s, nullptr);
    big_fine_sq += f * f;
    big_coarse_sq += c * c;
  }
  const double big_ratio = std::sqrt(big_coarse_sq / big_fine_sq);
  std::ostringstream out;
  out << "RMS error " << err_coarse << " <= " << bound << "; halving ratio " << ratio
      << " >= 1.3 (diagnostic ratio over 4096 paths: " << big_ratio << ")";
  return {err_coarse <= bound && ratio >= 1.3, out.str()};
}

// 4. Picard factorial law (linear drift) and the error envelope (GBM).
Outcome picard_law() {
  std::ostringstream out;
  auto lin = experiment(declared(models::linear_drift(1.0), 1.0, 1.0), sigmas({1.0}), 1000, 2, 5);
  const auto decay = check_picard_decay(lin, 9, default_constants(lin.model, 1.0));
  bool law_ok = true;
  double worst = 0.0;
  std::size_t worst_n = 0;
  double grid_gap = 0.0;
  double factorial = 1.0;
  for (std::size_t n = 0; n <= 8; ++n) {
    factorial *= static_cast<double>(n + 1);
    double e = 0.0;
    for (const auto& [key, v] : decay[n].extras) {
      if (key == "mean_sup_distance") e = v;
    }
    // Diagnostic: the left-point grid value C(N, n+1) dt^(n+1).
    double grid_exact = 1.0;
    for (std::size_t j = 0; j <= n; ++j) grid_exact *= static_cast<double>(1000 - j) * 1e-3 / static_cast<double>(j + 1);
    grid_gap = std::max(grid_gap, std::abs(e - grid_exact));
    const double rel = std::abs(e * factorial - 1.0);
    if (rel > worst) {
      worst = rel;
      worst_n = n;
    }
    if (rel > 0.01) law_ok = false;
  }
  out << "factorial law worst relative gap " << worst << " at n=" << worst_n << " (tol 0.01; max gap to the grid-exact binomial value " << grid_gap << ")";

  auto gbm = experiment(declared(models::gbm(0.05, 0.2), 0.04, 0.04), sigmas({0.5, 1.0}), 1000, 256, 6);
  const auto reports = check_error_estimate(gbm, 8, default_constants(gbm.model, 1.0));
  const bool envelope_ok = std::all_of(reports.begin(), reports.end(), [](const BoundReport& r) { return r.holds; });
  out << "; GBM envelope holds for " << std::count_if(reports.begin(), reports.end(), [](const BoundReport& r) { return r.holds; })
      << "/" << reports.size() << " n";
  return {law_ok && envelope_ok, out.str()};
}

// 5. Boundedness for GBM and delayed-linear models.
Outcome boundedness() {
  std::ostringstream out;
  bool ok = true;
  auto gbm = experiment(declared(models::gbm(0.05, 0.2), 0.04, 0.04), sigmas({0.5, 1.0}), 1000, 512, 8);
  auto delayed = experiment(declared(models::delayed_linear(-0.5, 0.3, 0.1), 0.64, 0.64),
                            sigmas({0.5, 1.0}), 1000, 512, 9, 100);
  for (auto* exp : {&gbm, &delayed}) {
    const auto k = default_constants(exp->model, exp->zeta.norm_sq());
    const auto audit = audit_coefficients(*exp, 2000);
    const auto reports = check_boundedness(*exp, k);
    const auto& gronwall = reports.front();
    ok = ok && audit[0].holds && gronwall.holds;
    out << exp->model.name << ": " << gronwall.lhs << " <= " << gronwall.rhs << "; ";
  }
  return {ok, out.str()};
}

// 6. Martingale inequalities for the three integral kinds.
Outcome bdg_suite() {
  std::ostringstream out;
  Scenario low, high;
  low.volatility = VolatilityControl::constant_at(0.5);
  high.volatility = VolatilityControl::constant_at(1.0);
  low.levy = LevyScenario{2.0, JumpLaw::atoms({{1.0, 0.5}, {-1.0, 0.5}})};
  high.levy = LevyScenario{1.0, JumpLaw::uniform(-1.0, 1.0)};
  const ScenarioFamily family({low, high});
  auto exp = experiment(models::zero(), family, 1000, 1000, 10);
  const auto bdg = BdgConstants::defaults(family.sigma_bar());
  bool ok = bdg.k1 == 1.0 && bdg.k2 == 4.0 && bdg.k3 == 8.0;
  for (auto kind : {IntegralKind::dB, IntegralKind::dQV, IntegralKind::jump}) {
    const auto reports = check_bdg(kind, default_integrands(), exp, bdg);
    const auto held = std::count_if(reports.begin(), reports.end(), [](const BoundReport& r) { return r.holds; });
    ok = ok && static_cast<std::size_t>(held) == reports.size();
    out << to_string(kind) << " " << held << "/" << reports.size() << " (calibrated k "
        << reports.back().lhs << "); ";
    if (kind == IntegralKind::jump) ok = ok && reports.back().lhs <= 8.0;
  }
  return {ok, out.str()};
}

// 7. Capacity tail bound for B(1).
Outcome chebyshev() {
  std::ostringstream out;
  bool ok = true;
  for (auto family : {sigmas({0.5, 1.0}), sigmas({1.0})}) {
    const auto n = family.size();
    auto exp = experiment(models::zero(), std::move(family), 1000, 1000, 11);
    const auto reports = check_chebyshev(exp, {0.5, 1.0, 2.0}, 2.0);
    std::size_t stated = 0, markov = 0;
    for (const auto& r : reports) {
      const bool is_stated = r.name.find(":stated") != std::string::npos;
      if (is_stated && r.holds) ++stated;
      if (!is_stated && r.holds) ++markov;
    }
    ok = ok && stated == 3;
    out << (n == 1 ? "singleton" : "family") << ": stated " << stated << "/3, c^p form " << markov << "/3; ";
  }
  return {ok, out.str()};
}

// 8. Uniqueness via two Picard runs.
Outcome uniqueness() {
  auto exp = experiment(declared(models::gbm(0.05, 0.2), 0.04, 0.04), sigmas({0.5, 1.0}), 1000, 64, 12);
  const auto r = check_uniqueness(exp, UniquenessOptions{1.0, 40, 1e-8});
  double needed = 0.0;
  for (const auto& [key, v] : r.extras) {
    if (key == "iterations_needed") needed = v;
  }
  std::ostringstream out;
  out << "max sup-distance " << r.lhs << " < 1e-08 after " << needed << " iterations";
  return {r.holds && !r.inconclusive && r.lhs < 1e-8, out.str()};
}

// 9. Exponential growth rate.
Outcome exponential() {
  auto exp = experiment(declared(models::linear_drift(0.3), 0.09, 0.09), sigmas({1.0}), 1000, 2, 13);
  const auto k = default_constants(exp.model, 1.0);
  const auto r = check_exponential(exp, ExponentialOptions{20, 0.0}, k);
  std::ostringstream out;
  out << "slope " << r.lhs << " vs a = 0.3 (5% band), rhs " << r.rhs;
  return {std::abs(r.lhs - 0.3) <= 0.015 && r.holds, out.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10. Determinism of `verify` artifacts, sequential and fully parallel.
Outcome determinism(const std::string& config_dir) {
  const auto base = std::filesystem::temp_directory_path() / "gsfde_acceptance_det";
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  auto doc = nlohmann::json::parse(std::ifstream(config_dir + "/gbm.json"));
  const unsigned max_threads = std::max(8u, std::thread::hardware_concurrency());
  std::vector<std::string> csvs;
  std::ostringstream log;
  int runs = 0;
  for (unsigned threads : {1u, max_threads}) {
    doc["threads"] = threads;
    const auto cfg_path = base / ("cfg_" + std::to_string(threads) + ".json");
    std::ofstream(cfg_path) << doc.dump();
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = base / ("run" + std::to_string(runs++));
      const int code = run(RunOptions{"verify", cfg_path.string(), out.string(), std::nullopt}, log);
      if (code != kExitOk) return {false, "verify exited with " + std::to_string(code) + ": " + log.str()};
      csvs.push_back(slurp(out / "verify_42.csv"));
    }
  }
  const bool identical = std::all_of(csvs.begin(), csvs.end(), [&](const std::string& s) { return s == csvs.front(); });
  return {identical && !csvs.front().empty(),
          std::to_string(csvs.size()) + " verify runs (threads 1 and " + std::to_string(max_threads) +
              ") " + (identical ? "byte-identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string config_dir = argc > 1 ? argv[1] : GSFDE_CONFIG_DIR;
  struct Criterion {
    int id;
    double budget_seconds;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria{
      {1, 1.0, ito_identity},
      {2, 5.0, axiom_suite},
      {3, 30.0, gbm_oracle},
      {4, 120.0, picard_law},
      {5, 60.0, boundedness},
      {6, 60.0, bdg_suite},
      {7, 10.0, chebyshev},
      {8, 60.0, uniqueness},
      {9, 60.0, exponential},
      {10, 120.0, [&] { return determinism(config_dir); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds < c.budget_seconds;
    const bool pass = outcome.pass && in_budget;
    if (!pass) ++failures;
    std::printf("criterion %d: %s - %s [%.2fs / %.0fs budget]\n", c.id, pass ? "PASS" : "FAIL",
                outcome.detail.c_str(), seconds, c.budget_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
