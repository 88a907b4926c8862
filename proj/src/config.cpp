#include "gsfde/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "gsfde/errors.hpp"

namespace gsfde {

using nlohmann::json;

namespace {

/// Typed access to one JSON object that remembers which keys were read, so
/// leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError("expected an object", path_.empty() ? "$" : path_);
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key", key_path(key));
    return node_.at(key);
  }

  double number(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError("expected a number", key_path(key));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError("expected a finite number", key_path(key));
    return d;
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_number_unsigned()) {
      if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
      throw ConfigError("expected a nonnegative integer", key_path(key));
    }
    return v.get<std::uint64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    return has(key) ? unsigned_integer(key) : fallback;
  }

  std::string string(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError("expected a string", key_path(key));
    return v.get<std::string>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key", key_path(key));
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

// Re-throw low-level ConfigErrors with the full key path of their object.
template <class Fn>
auto with_prefix(const std::string& prefix, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    if (e.key().empty()) throw ConfigError(e.what(), prefix);
    std::string what = e.what();
    const std::string head = e.key() + ": ";
    if (what.rfind(head, 0) == 0) what = what.substr(head.size());
    throw ConfigError(what, prefix + "." + e.key());
  }
}

// Re-throw a ConfigError from a low-level constructor under `key`.
template <class Fn>
auto rekey(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::string what = e.what();
    if (!e.key().empty()) what = what.substr(e.key().size() + 2);
    throw ConfigError(what, key);
  }
}

std::pair<double, double> read_pair(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError("expected [lo, hi]", path);
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

LevyScenario parse_levy(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  LevyScenario levy;
  levy.intensity = r.number("intensity", 0.0);
  if (!(levy.intensity >= 0.0)) throw ConfigError("intensity must be >= 0", r.key_path("intensity"));
  const bool atoms = r.has("atoms");
  const bool uniform = r.has("uniform");
  if (atoms && uniform) throw ConfigError("give either atoms or uniform", path);
  if (uniform) {
    const auto [a, b] = read_pair(r.at("uniform"), r.key_path("uniform"));
    levy.law = rekey(r.key_path("uniform"), [&] { return JumpLaw::uniform(a, b); });
  } else if (atoms) {
    const auto& list = r.at("atoms");
    const auto key = r.key_path("atoms");
    if (!list.is_array()) throw ConfigError("expected a list of [size, prob]", key);
    std::vector<JumpLaw::Atom> parsed;
    for (const auto& item : list) {
      const auto [size, prob] = read_pair(item, key);
      parsed.push_back({size, prob});
    }
    levy.law = rekey(key, [&] { return JumpLaw::atoms(std::move(parsed)); });
  }
  r.finish();
  return levy;
}

Scenario parse_scenario(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  Scenario s;
  auto& vol = s.volatility;
  vol.kind = with_prefix(path, [&] { return control_kind_from_string(r.string("kind", "constant")); });
  const auto [lo, hi] = read_pair(r.at("band"), r.key_path("band"));
  vol.lo = lo;
  vol.hi = hi;
  vol.level = r.number("sigma", -1.0);
  vol.period = r.number("period", 0.1);
  vol.seed_offset = r.unsigned_integer("seed_offset", 0);
  with_prefix(path, [&] {
    vol.validate();
    return 0;
  });
  if (r.has("levy")) s.levy = parse_levy(r.at("levy"), r.key_path("levy"));
  r.finish();
  return s;
}

Coefficients parse_term(const json& node, const std::string& path, double tau) {
  ObjectReader r(node, path);
  const auto name = r.string("name");
  Coefficients c;
  if (name == "zero") {
    c = models::zero();
  } else if (name == "linear_drift") {
    c = models::linear_drift(r.number("a"));
  } else if (name == "gbm") {
    c = models::gbm(r.number("mu"), r.number("sigma_coef"));
  } else if (name == "delayed_linear") {
    const double a = r.number("a");
    const double b = r.number("b");
    const double lag = r.number("lag");
    if (!(lag >= 0.0)) throw ConfigError("lag must be >= 0", r.key_path("lag"));
    if (lag > tau * (1.0 + 1e-12)) {
      throw ConfigError("lag exceeds the delay window delay.tau", r.key_path("lag"));
    }
    c = models::delayed_linear(a, b, lag);
  } else if (name == "jump_linear") {
    c = models::jump_linear(r.number("c"));
  } else {
    throw ConfigError("unknown model '" + name + "'", r.key_path("name"));
  }
  if (path == "model") {
    // Single-term model: the declared constants live beside the parameters.
    c.c1 = r.number("c1");
    c.c2 = r.number("c2");
  }
  r.finish();
  return c;
}

Coefficients parse_model(const json& node, double tau) {
  if (node.is_object() && node.contains("terms")) {
    ObjectReader r(node, "model");
    const auto& terms = r.at("terms");
    if (!terms.is_array() || terms.empty()) {
      throw ConfigError("expected a nonempty list of terms", "model.terms");
    }
    std::vector<Coefficients> parsed;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      parsed.push_back(parse_term(terms[k], "model.terms[" + std::to_string(k) + "]", tau));
    }
    auto c = models::sum(parsed);
    c.c1 = r.number("c1");
    c.c2 = r.number("c2");
    r.finish();
    if (c.c1 < 0.0) throw ConfigError("c1 must be >= 0", "model.c1");
    if (c.c2 < 0.0) throw ConfigError("c2 must be >= 0", "model.c2");
    return c;
  }
  auto c = parse_term(node, "model", tau);
  if (c.c1 < 0.0) throw ConfigError("c1 must be >= 0", "model.c1");
  if (c.c2 < 0.0) throw ConfigError("c2 must be >= 0", "model.c2");
  return c;
}

}  // namespace

Experiment ExperimentConfig::experiment() const {
  return Experiment{model, initial, family, SamplingPlan{grid, n_paths, seed, threads}};
}

BoundConstants ExperimentConfig::constants() const {
  return compute_constants(model.c1, model.c2, bdg.k1, bdg.k2, bdg.k3, grid.horizon(),
                           initial.norm_sq());
}

ExperimentConfig parse_config(const json& doc) {
  ObjectReader root(doc, "");
  ExperimentConfig cfg;

  {
    ObjectReader g(root.at("grid"), "grid");
    const double T = g.number("T");
    const auto n = g.unsigned_integer("n_steps");
    if (!(T > 0.0)) throw ConfigError("must be positive", "grid.T");
    if (n == 0) throw ConfigError("must be positive", "grid.n_steps");
    cfg.grid = TimeGrid(T, n);
    g.finish();
  }

  {
    const auto& list = root.at("scenarios");
    if (!list.is_array() || list.empty()) {
      throw ConfigError("expected a nonempty list", "scenarios");
    }
    std::vector<Scenario> scenarios;
    for (std::size_t j = 0; j < list.size(); ++j) {
      scenarios.push_back(parse_scenario(list[j], "scenarios[" + std::to_string(j) + "]"));
    }
    cfg.family = ScenarioFamily(std::move(scenarios));
  }

  std::size_t window = 1;
  if (root.has("delay")) {
    ObjectReader d(root.at("delay"), "delay");
    cfg.tau = d.number("tau");
    d.finish();
    if (!(cfg.tau > 0.0)) throw ConfigError("must be positive", "delay.tau");
    const double ratio = cfg.tau / cfg.grid.dt();
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
      throw ConfigError("must be a positive multiple of grid.T / grid.n_steps", "delay.tau");
    }
    window = static_cast<std::size_t>(rounded);
  }
  cfg.tau = static_cast<double>(window) * cfg.grid.dt();

  cfg.model = parse_model(root.at("model"), cfg.tau);

  if (root.has("initial")) {
    ObjectReader in(root.at("initial"), "initial");
    const auto kind = in.string("kind", "constant");
    if (kind == "constant") {
      cfg.initial = InitialData::constant(in.number("value"), window, cfg.grid.dt());
    } else if (kind == "linear") {
      cfg.initial = InitialData::linear(in.number("from"), in.number("to"), window, cfg.grid.dt());
    } else {
      throw ConfigError("unknown initial segment kind '" + kind + "'", "initial.kind");
    }
    in.finish();
  } else {
    cfg.initial = InitialData::constant(1.0, window, cfg.grid.dt());
  }

  cfg.n_paths = root.unsigned_integer("n_paths", cfg.n_paths);
  if (cfg.n_paths < 2) throw ConfigError("must be at least 2", "n_paths");
  cfg.n_iter = root.unsigned_integer("n_iter", cfg.n_iter);
  if (cfg.n_iter < 3) throw ConfigError("must be at least 3", "n_iter");
  cfg.seed = root.unsigned_integer("seed", 0);
  cfg.threads = static_cast<unsigned>(root.unsigned_integer("threads", 0));

  cfg.bdg = BdgConstants::defaults(cfg.family.sigma_bar());
  cfg.integrands = {"const1", "const2", "t", "B", "sin2pit", "cosB"};
  if (root.has("bdg")) {
    ObjectReader b(root.at("bdg"), "bdg");
    cfg.bdg.k1 = b.number("k1", cfg.bdg.k1);
    cfg.bdg.k2 = b.number("k2", cfg.bdg.k2);
    cfg.bdg.k3 = b.number("k3", cfg.bdg.k3);
    for (const char* key : {"k1", "k2", "k3"}) {
      if (b.has(key) && !(b.number(key) > 0.0)) throw ConfigError("must be positive", b.key_path(key));
    }
    if (b.has("integrands")) {
      const auto& list = b.at("integrands");
      if (!list.is_array() || list.empty()) {
        throw ConfigError("expected a nonempty list of names", "bdg.integrands");
      }
      cfg.integrands.clear();
      for (const auto& item : list) {
        if (!item.is_string()) throw ConfigError("expected a name", "bdg.integrands");
        integrand_from_name(item.get<std::string>());
        cfg.integrands.push_back(item.get<std::string>());
      }
    }
    b.finish();
  }

  if (root.has("checks")) {
    ObjectReader c(root.at("checks"), "checks");
    if (c.has("chebyshev_c")) {
      const auto& list = c.at("chebyshev_c");
      if (!list.is_array() || list.empty()) {
        throw ConfigError("expected a nonempty list", "checks.chebyshev_c");
      }
      cfg.chebyshev_c.clear();
      for (const auto& v : list) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) {
          throw ConfigError("levels must be positive numbers", "checks.chebyshev_c");
        }
        cfg.chebyshev_c.push_back(v.get<double>());
      }
    }
    cfg.chebyshev_p = c.number("chebyshev_p", cfg.chebyshev_p);
    if (!(cfg.chebyshev_p >= 1.0)) throw ConfigError("must be >= 1", "checks.chebyshev_p");
    cfg.audit_probes = c.unsigned_integer("audit_probes", cfg.audit_probes);
    if (c.has("uniqueness")) {
      ObjectReader u(c.at("uniqueness"), "checks.uniqueness");
      cfg.uniqueness.perturbation = u.number("perturbation", cfg.uniqueness.perturbation);
      cfg.uniqueness.max_iter = u.unsigned_integer("max_iter", cfg.uniqueness.max_iter);
      cfg.uniqueness.tolerance = u.number("tolerance", cfg.uniqueness.tolerance);
      if (cfg.uniqueness.max_iter < 1) throw ConfigError("must be >= 1", "checks.uniqueness.max_iter");
      if (!(cfg.uniqueness.tolerance > 0.0)) {
        throw ConfigError("must be positive", "checks.uniqueness.tolerance");
      }
      u.finish();
    }
    if (c.has("exponential")) {
      ObjectReader e(c.at("exponential"), "checks.exponential");
      cfg.exponential.m_max = e.unsigned_integer("m_max", cfg.exponential.m_max);
      cfg.exponential.slack = e.number("slack", cfg.exponential.slack);
      if (cfg.exponential.m_max < 2) throw ConfigError("must be >= 2", "checks.exponential.m_max");
      if (!(cfg.exponential.slack >= 0.0)) {
        throw ConfigError("must be >= 0", "checks.exponential.slack");
      }
      e.finish();
    }
    c.finish();
  }

  if (root.has("simulate")) {
    ObjectReader s(root.at("simulate"), "simulate");
    cfg.simulate_paths = s.unsigned_integer("paths", cfg.simulate_paths);
    if (cfg.simulate_paths == 0) throw ConfigError("must be positive", "simulate.paths");
    s.finish();
  }

  cfg.output_dir = root.string("output_dir", cfg.output_dir);
  root.finish();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", "$");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(), "$");
  }
  return parse_config(doc);
}

}  // namespace gsfde
