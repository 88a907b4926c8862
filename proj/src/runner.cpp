#include "gsfde/runner.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "gsfde/errors.hpp"
#include "gsfde/report.hpp"

namespace gsfde {

namespace {

std::vector<Integrand> configured_integrands(const ExperimentConfig& cfg) {
  std::vector<Integrand> out;
  for (const auto& name : cfg.integrands) out.push_back(integrand_from_name(name));
  return out;
}

void append(std::vector<BoundReport>& dst, std::vector<BoundReport> src) {
  for (auto& r : src) dst.push_back(std::move(r));
}

std::vector<BoundReport> run_bdg(const ExperimentConfig& cfg) {
  const auto exp = cfg.experiment();
  const auto integrands = configured_integrands(cfg);
  std::vector<BoundReport> out;
  for (auto kind : {IntegralKind::dB, IntegralKind::dQV, IntegralKind::jump}) {
    append(out, check_bdg(kind, integrands, exp, cfg.bdg));
  }
  return out;
}

std::vector<BoundReport> run_picard(const ExperimentConfig& cfg) {
  return check_picard_decay(cfg.experiment(), cfg.n_iter, cfg.constants());
}

std::string picard_table(const std::vector<BoundReport>& reports) {
  std::ostringstream out;
  out << "n,sup_distance,sup_distance_sq,bound\n";
  for (std::size_t n = 0; n < reports.size(); ++n) {
    const auto& r = reports[n];
    double distance = 0.0;
    for (const auto& [key, value] : r.extras) {
      if (key == "mean_sup_distance") distance = value;
    }
    out << n << ',' << format_number(distance) << ',' << format_number(r.lhs) << ','
        << format_number(r.rhs) << '\n';
  }
  return out.str();
}

void run_simulate(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const auto exp = cfg.experiment();
  std::ostringstream csv;
  csv << "scenario,path,t,B,qv,x,x_pre\n";
  nlohmann::ordered_json doc;
  doc["subcommand"] = "simulate";
  doc["seed"] = cfg.seed;
  auto& paths = doc["paths"] = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < exp.family.size(); ++j) {
    for (std::size_t p = 0; p < cfg.simulate_paths; ++p) {
      const auto seed = derive_seed(cfg.seed, j, p);
      const auto driver = generate_driver(cfg.grid, exp.family[j], seed);
      const auto x = euler_solve(exp.model, exp.zeta, driver);
      for (std::size_t i = 0; i < cfg.grid.n_nodes(); ++i) {
        csv << j << ',' << p << ',' << format_number(cfg.grid.time(i)) << ','
            << format_number(driver.B[i]) << ',' << format_number(driver.qv[i]) << ','
            << format_number(x.values[i]) << ',' << format_number(x.pre_jump[i]) << '\n';
      }
      nlohmann::ordered_json item;
      item["scenario"] = j;
      item["path"] = p;
      item["seed"] = seed;
      item["terminal"] = x.values.back();
      item["sup_square"] = sup_square(x);
      auto& jumps = item["jumps"] = nlohmann::ordered_json::array();
      for (const auto& ev : driver.jumps) jumps.push_back({ev.time, ev.size});
      paths.push_back(std::move(item));
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("cannot create output directory '" + dir.string() + "'", "output_dir");
  }
  const std::string stem = "simulate_" + std::to_string(cfg.seed);
  write_file(dir / (stem + ".csv"), csv.str());
  write_file(dir / (stem + ".json"), doc.dump(2) + "\n");
}

bool all_hold(const std::vector<BoundReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const BoundReport& r) { return r.holds || r.inconclusive; });
}

}  // namespace

std::vector<BoundReport> run_verify(const ExperimentConfig& cfg) {
  const auto exp = cfg.experiment();
  const auto k = cfg.constants();
  std::vector<BoundReport> out;
  append(out, audit_coefficients(exp, cfg.audit_probes));
  append(out, check_axioms(exp));
  append(out, check_boundedness(exp, k));
  append(out, check_picard_decay(exp, cfg.n_iter, k));
  append(out, check_error_estimate(exp, cfg.n_iter, k));
  append(out, run_bdg(cfg));
  append(out, check_chebyshev(exp, cfg.chebyshev_c, cfg.chebyshev_p));
  out.push_back(check_uniqueness(exp, cfg.uniqueness));
  out.push_back(check_exponential(exp, cfg.exponential, k));
  return out;
}

int run(const RunOptions& options, std::ostream& log) {
  try {
    auto cfg = load_config(options.config_path);
    if (options.seed) cfg.seed = *options.seed;
    const std::filesystem::path dir = options.out_dir ? *options.out_dir : cfg.output_dir;
    const auto& sub = options.subcommand;

    std::vector<BoundReport> reports;
    if (sub == "simulate") {
      run_simulate(cfg, dir);
      log << "simulate: wrote " << cfg.simulate_paths * cfg.family.size() << " paths to "
          << dir.string() << "\n";
      return kExitOk;
    } else if (sub == "picard") {
      reports = run_picard(cfg);
      emit_report(reports, dir, sub, cfg.seed);
      write_file(dir / ("picard_" + std::to_string(cfg.seed) + "_table.csv"), picard_table(reports));
    } else if (sub == "verify") {
      reports = run_verify(cfg);
      emit_report(reports, dir, sub, cfg.seed);
    } else if (sub == "bdg") {
      reports = run_bdg(cfg);
      emit_report(reports, dir, sub, cfg.seed);
    } else if (sub == "exp-estimate") {
      reports = {check_exponential(cfg.experiment(), cfg.exponential, cfg.constants())};
      emit_report(reports, dir, sub, cfg.seed);
    } else {
      log << "error: unknown subcommand '" << sub << "'\n";
      return kExitConfig;
    }

    std::size_t failed = 0;
    for (const auto& r : reports) {
      if (!r.holds && !r.inconclusive) {
        ++failed;
        log << "FAILED " << r.check << " " << r.name << ": lhs=" << format_number(r.lhs)
            << " rhs=" << format_number(r.rhs) << "\n";
      }
    }
    log << sub << ": " << reports.size() - failed << "/" << reports.size() << " checks hold\n";
    return all_hold(reports) ? kExitOk : kExitCheckFailed;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DivergenceError& e) {
    log << "solver divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const EvaluationError& e) {
    log << "evaluation error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace gsfde
