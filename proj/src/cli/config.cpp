#include "gsieve/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>
#include <string_view>

#include "gsieve/sieve.hpp"

namespace gsieve::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kScanNames[] = {"lambda", "omega", "d_qq", "d_pp", "d_pq"};

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void require_object(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path, "expected an object");
}

void check_keys(const json& node, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  require_object(node, path);
  for (const auto& item : node.items()) {
    bool known = false;
    for (std::string_view key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError(join(path, item.key()), "unknown field");
  }
}

double as_number(const json& node, const std::string& path) {
  if (!node.is_number()) throw ConfigError(path, "expected a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

double number_or(const json& obj, std::string_view key, const std::string& path, double fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, join(path, key));
}

double required_number(const json& obj, std::string_view key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "missing required field");
  return as_number(*it, join(path, key));
}

int as_int(const json& node, const std::string& path) {
  if (!node.is_number_integer()) throw ConfigError(path, "expected an integer");
  return node.get<int>();
}

TimeValue as_time(const json& node, const std::string& path) {
  if (node.is_object()) {
    check_keys(node, path, {"periods"});
    return {required_number(node, "periods", path), true};
  }
  return {as_number(node, path), false};
}

std::complex<double> as_complex(const json& node, const std::string& path) {
  if (!node.is_array() || node.size() != 2) throw ConfigError(path, "expected [re, im]");
  return {as_number(node[0], path + "[0]"), as_number(node[1], path + "[1]")};
}

OutputFormat parse_format(const std::string& text, const std::string& path) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw ConfigError(path, "expected \"csv\" or \"json\" (got \"" + text + "\")");
}

ordered_json time_to_json(const TimeValue& t) {
  if (t.in_periods) return ordered_json{{"periods", t.value}};
  return t.value;
}

ordered_json complex_to_json(std::complex<double> z) { return ordered_json::array({z.real(), z.imag()}); }

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(path, "must be > 0");
}

void require_nonnegative(double v, const std::string& path) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(path, "must be >= 0");
}

}  // namespace

double TimeValue::resolve(double omega) const {
  return in_periods ? value * 2.0 * std::numbers::pi / omega : value;
}

std::vector<double> ScanAxis::samples() const {
  if (!values.empty()) return values;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    if (log_spacing) {
      out.push_back(std::exp(std::log(from) + frac * (std::log(to) - std::log(from))));
    } else {
      out.push_back(from + frac * (to - from));
    }
  }
  if (points > 1) out.back() = to;
  return out;
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  auto same_coeffs = [](const std::optional<GeneratorCoefficients>& a,
                        const std::optional<GeneratorCoefficients>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return a->a1 == b->a1 && a->a2 == b->a2 && a->b1 == b->b1 && a->b2 == b->b2;
  };
  return constants.m == o.constants.m && constants.omega == o.constants.omega &&
         constants.hbar == o.constants.hbar && params == o.params &&
         same_coeffs(coefficients, o.coefficients) && shape == o.shape &&
         covariance == o.covariance && time_grid == o.time_grid && sieve == o.sieve &&
         scan == o.scan && output == o.output;
}

ScenarioConfig parse_config(const json& doc) {
  check_keys(doc, "", {"constants", "params", "coefficients", "initial_state", "time_grid",
                       "sieve", "scan", "output"});
  ScenarioConfig cfg;

  if (const auto it = doc.find("constants"); it != doc.end()) {
    check_keys(*it, "constants", {"m", "omega", "hbar"});
    cfg.constants.m = number_or(*it, "m", "constants", 1.0);
    cfg.constants.omega = number_or(*it, "omega", "constants", 1.0);
    cfg.constants.hbar = number_or(*it, "hbar", "constants", 1.0);
  }

  if (const auto it = doc.find("params"); it != doc.end()) {
    check_keys(*it, "params", {"lambda", "d_qq", "d_pp", "d_pq", "enforce_positivity"});
    ParamSpec p;
    p.lambda = required_number(*it, "lambda", "params");
    p.d_qq = required_number(*it, "d_qq", "params");
    p.d_pp = required_number(*it, "d_pp", "params");
    p.d_pq = number_or(*it, "d_pq", "params", 0.0);
    if (const auto e = it->find("enforce_positivity"); e != it->end()) {
      if (!e->is_boolean()) throw ConfigError("params.enforce_positivity", "expected a boolean");
      p.enforce_positivity = e->get<bool>();
    }
    cfg.params = p;
  }

  if (const auto it = doc.find("coefficients"); it != doc.end()) {
    check_keys(*it, "coefficients", {"a1", "a2", "b1", "b2"});
    GeneratorCoefficients c;
    auto read = [&](std::string_view key) -> std::complex<double> {
      const auto v = it->find(key);
      return v == it->end() ? std::complex<double>{} : as_complex(*v, join("coefficients", key));
    };
    c.a1 = read("a1");
    c.a2 = read("a2");
    c.b1 = read("b1");
    c.b2 = read("b2");
    cfg.coefficients = c;
  }

  if (const auto it = doc.find("initial_state"); it != doc.end()) {
    check_keys(*it, "initial_state", {"shape", "covariance"});
    const bool has_shape = it->contains("shape");
    const bool has_cov = it->contains("covariance");
    if (has_shape == has_cov) {
      throw ConfigError("initial_state", "give exactly one of shape, covariance");
    }
    if (has_shape) {
      const json& s = (*it)["shape"];
      check_keys(s, "initial_state.shape", {"area", "theta", "aleph"});
      cfg.shape = ShapeDecomposition{number_or(s, "area", "initial_state.shape", 1.0),
                                     number_or(s, "theta", "initial_state.shape", 0.0),
                                     number_or(s, "aleph", "initial_state.shape", 1.0)};
    } else {
      const json& s = (*it)["covariance"];
      const std::string path = "initial_state.covariance";
      check_keys(s, path, {"sigma_qq", "sigma_pp", "sigma_pq"});
      cfg.covariance = CovarianceMatrix{required_number(s, "sigma_qq", path),
                                        required_number(s, "sigma_pp", path),
                                        number_or(s, "sigma_pq", path, 0.0)};
    }
  }

  if (const auto it = doc.find("time_grid"); it != doc.end()) {
    check_keys(*it, "time_grid", {"t_max", "steps", "times"});
    TimeGridSpec grid;
    if (const auto t = it->find("t_max"); t != it->end()) grid.t_max = as_time(*t, "time_grid.t_max");
    if (const auto s = it->find("steps"); s != it->end()) grid.steps = as_int(*s, "time_grid.steps");
    if (const auto ts = it->find("times"); ts != it->end()) {
      if (!ts->is_array()) throw ConfigError("time_grid.times", "expected an array");
      for (std::size_t i = 0; i < ts->size(); ++i) {
        grid.times.push_back(as_time((*ts)[i], "time_grid.times[" + std::to_string(i) + "]"));
      }
    }
    cfg.time_grid = grid;
  }

  if (const auto it = doc.find("sieve"); it != doc.end()) {
    check_keys(*it, "sieve", {"eval_time", "grid"});
    if (const auto e = it->find("eval_time"); e != it->end()) {
      if (e->is_string()) {
        if (e->get<std::string>() != "auto") {
          throw ConfigError("sieve.eval_time", "expected a time or \"auto\"");
        }
      } else {
        cfg.sieve.eval_time = as_time(*e, "sieve.eval_time");
      }
    }
    if (const auto g = it->find("grid"); g != it->end()) {
      check_keys(*g, "sieve.grid", {"theta", "aleph"});
      if (const auto v = g->find("theta"); v != g->end()) {
        cfg.sieve.theta_samples = as_int(*v, "sieve.grid.theta");
      }
      if (const auto v = g->find("aleph"); v != g->end()) {
        cfg.sieve.aleph_samples = as_int(*v, "sieve.grid.aleph");
      }
    }
  }

  if (const auto it = doc.find("scan"); it != doc.end()) {
    check_keys(*it, "scan", {"lambda", "omega", "d_qq", "d_pp", "d_pq"});
    for (std::string_view name : kScanNames) {
      const auto a = it->find(name);
      if (a == it->end()) continue;
      const std::string path = join("scan", name);
      check_keys(*a, path, {"from", "to", "points", "spacing", "values"});
      ScanAxis axis;
      axis.name = std::string(name);
      if (const auto v = a->find("values"); v != a->end()) {
        if (!v->is_array() || v->empty()) throw ConfigError(path + ".values", "expected a nonempty array");
        for (std::size_t i = 0; i < v->size(); ++i) {
          axis.values.push_back(as_number((*v)[i], path + ".values[" + std::to_string(i) + "]"));
        }
        axis.points = static_cast<int>(axis.values.size());
      } else {
        axis.from = required_number(*a, "from", path);
        axis.to = required_number(*a, "to", path);
        const auto p = a->find("points");
        if (p == a->end()) throw ConfigError(path + ".points", "missing required field");
        axis.points = as_int(*p, path + ".points");
      }
      if (const auto sp = a->find("spacing"); sp != a->end()) {
        const std::string text = sp->is_string() ? sp->get<std::string>() : "";
        if (text != "log" && text != "linear") {
          throw ConfigError(path + ".spacing", "expected \"log\" or \"linear\"");
        }
        axis.log_spacing = text == "log";
      }
      cfg.scan.push_back(axis);
    }
  }

  if (const auto it = doc.find("output"); it != doc.end()) {
    check_keys(*it, "output", {"path", "format"});
    if (const auto p = it->find("path"); p != it->end()) {
      if (!p->is_string()) throw ConfigError("output.path", "expected a string");
      cfg.output.path = p->get<std::string>();
    }
    if (const auto f = it->find("format"); f != it->end()) {
      if (!f->is_string()) throw ConfigError("output.format", "expected a string");
      cfg.output.format = parse_format(f->get<std::string>(), "output.format");
    }
  }

  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

void apply_overrides(ScenarioConfig& cfg, const Overrides& ov) {
  const bool touches_params = ov.lambda || ov.d_qq || ov.d_pp || ov.d_pq;
  if (touches_params) {
    if (cfg.coefficients) {
      throw ConfigError("params", "cannot override lambda/D values when coefficients are given");
    }
    if (!cfg.params) cfg.params = ParamSpec{};
    if (ov.lambda) cfg.params->lambda = *ov.lambda;
    if (ov.d_qq) cfg.params->d_qq = *ov.d_qq;
    if (ov.d_pp) cfg.params->d_pp = *ov.d_pp;
    if (ov.d_pq) cfg.params->d_pq = *ov.d_pq;
  }
  if (ov.a1 || ov.a2 || ov.b1 || ov.b2) {
    if (cfg.params) {
      throw ConfigError("coefficients", "cannot set generator coefficients when params are given");
    }
    if (!cfg.coefficients) cfg.coefficients = GeneratorCoefficients{};
    if (ov.a1) cfg.coefficients->a1 = *ov.a1;
    if (ov.a2) cfg.coefficients->a2 = *ov.a2;
    if (ov.b1) cfg.coefficients->b1 = *ov.b1;
    if (ov.b2) cfg.coefficients->b2 = *ov.b2;
  }
  if (ov.omega) cfg.constants.omega = *ov.omega;
  if (ov.t_max || ov.steps) {
    if (!cfg.time_grid) cfg.time_grid = TimeGridSpec{};
    cfg.time_grid->times.clear();
    if (ov.t_max) cfg.time_grid->t_max = TimeValue{*ov.t_max, false};
    if (ov.steps) cfg.time_grid->steps = *ov.steps;
  }
  if (ov.eval_time) {
    if (*ov.eval_time == "auto") {
      cfg.sieve.eval_time.reset();
    } else {
      try {
        std::size_t used = 0;
        const double t = std::stod(*ov.eval_time, &used);
        if (used != ov.eval_time->size()) throw std::invalid_argument("trailing");
        cfg.sieve.eval_time = TimeValue{t, false};
      } catch (const std::exception&) {
        throw ConfigError("sieve.eval_time", "expected a number or \"auto\"");
      }
    }
  }
  if (ov.out) cfg.output.path = *ov.out;
  if (ov.format) cfg.output.format = parse_format(*ov.format, "output.format");
}

void validate_config(const ScenarioConfig& cfg) {
  require_positive(cfg.constants.m, "constants.m");
  require_positive(cfg.constants.omega, "constants.omega");
  require_positive(cfg.constants.hbar, "constants.hbar");

  if (cfg.params && cfg.coefficients) {
    throw ConfigError("params", "give exactly one of params, coefficients");
  }
  if (cfg.params) {
    require_positive(cfg.params->lambda, "params.lambda");
    require_nonnegative(cfg.params->d_qq, "params.d_qq");
    require_nonnegative(cfg.params->d_pp, "params.d_pp");
  }
  if (cfg.shape && cfg.covariance) {
    throw ConfigError("initial_state", "give exactly one of shape, covariance");
  }

  if (cfg.time_grid) {
    const TimeGridSpec& g = *cfg.time_grid;
    if (g.t_max) {
      require_positive(g.t_max->value, "time_grid.t_max");
      if (g.steps < 1) throw ConfigError("time_grid.steps", "must be >= 1");
      if (!g.times.empty()) throw ConfigError("time_grid", "give either t_max/steps or times");
    } else if (g.times.empty()) {
      throw ConfigError("time_grid", "needs t_max and steps, or a nonempty times list");
    }
    for (std::size_t i = 0; i < g.times.size(); ++i) {
      require_nonnegative(g.times[i].value, "time_grid.times[" + std::to_string(i) + "]");
    }
  }

  if (cfg.sieve.eval_time) require_nonnegative(cfg.sieve.eval_time->value, "sieve.eval_time");
  if (cfg.sieve.theta_samples < 64) throw ConfigError("sieve.grid.theta", "must be >= 64");
  if (cfg.sieve.aleph_samples < 64) throw ConfigError("sieve.grid.aleph", "must be >= 64");

  std::set<std::string> seen;
  for (const ScanAxis& axis : cfg.scan) {
    const std::string path = "scan." + axis.name;
    if (!seen.insert(axis.name).second) throw ConfigError(path, "duplicate axis");
    if (axis.values.empty()) {
      if (axis.points < 1) throw ConfigError(path + ".points", "must be >= 1");
      if (axis.log_spacing && (!(axis.from > 0.0) || !(axis.to > 0.0))) {
        throw ConfigError(path, "log spacing needs from, to > 0");
      }
    }
  }
}

ordered_json to_json(const ScenarioConfig& cfg) {
  ordered_json doc;
  doc["constants"] = {{"m", cfg.constants.m},
                      {"omega", cfg.constants.omega},
                      {"hbar", cfg.constants.hbar}};
  if (cfg.params) {
    doc["params"] = {{"lambda", cfg.params->lambda},
                     {"d_qq", cfg.params->d_qq},
                     {"d_pp", cfg.params->d_pp},
                     {"d_pq", cfg.params->d_pq},
                     {"enforce_positivity", cfg.params->enforce_positivity}};
  }
  if (cfg.coefficients) {
    doc["coefficients"] = {{"a1", complex_to_json(cfg.coefficients->a1)},
                           {"a2", complex_to_json(cfg.coefficients->a2)},
                           {"b1", complex_to_json(cfg.coefficients->b1)},
                           {"b2", complex_to_json(cfg.coefficients->b2)}};
  }
  if (cfg.shape) {
    doc["initial_state"]["shape"] = {
        {"area", cfg.shape->area}, {"theta", cfg.shape->theta}, {"aleph", cfg.shape->aleph}};
  } else if (cfg.covariance) {
    doc["initial_state"]["covariance"] = {{"sigma_qq", cfg.covariance->sigma_qq},
                                          {"sigma_pp", cfg.covariance->sigma_pp},
                                          {"sigma_pq", cfg.covariance->sigma_pq}};
  }
  if (cfg.time_grid) {
    ordered_json grid = ordered_json::object();
    if (cfg.time_grid->t_max) {
      grid["t_max"] = time_to_json(*cfg.time_grid->t_max);
      grid["steps"] = cfg.time_grid->steps;
    } else {
      ordered_json times = ordered_json::array();
      for (const TimeValue& t : cfg.time_grid->times) times.push_back(time_to_json(t));
      grid["times"] = times;
    }
    doc["time_grid"] = grid;
  }
  doc["sieve"]["eval_time"] =
      cfg.sieve.eval_time ? time_to_json(*cfg.sieve.eval_time) : ordered_json("auto");
  doc["sieve"]["grid"] = {{"theta", cfg.sieve.theta_samples}, {"aleph", cfg.sieve.aleph_samples}};
  if (!cfg.scan.empty()) {
    ordered_json scan = ordered_json::object();
    for (const ScanAxis& axis : cfg.scan) {
      ordered_json a = ordered_json::object();
      if (!axis.values.empty()) {
        a["values"] = axis.values;
      } else {
        a["from"] = axis.from;
        a["to"] = axis.to;
        a["points"] = axis.points;
      }
      a["spacing"] = axis.log_spacing ? "log" : "linear";
      scan[axis.name] = a;
    }
    doc["scan"] = scan;
  }
  doc["output"] = {{"path", cfg.output.path},
                   {"format", cfg.output.format == OutputFormat::csv ? "csv" : "json"}};
  return doc;
}

LindbladParams build_params(const ScenarioConfig& cfg) {
  if (cfg.coefficients) return coefficients_to_parameters(*cfg.coefficients, cfg.constants);
  if (!cfg.params) throw ConfigError("params", "missing: give params or coefficients");
  const ParamSpec& p = *cfg.params;
  return LindbladParams::create(
      cfg.constants, p.lambda, p.d_qq, p.d_pp, p.d_pq,
      p.enforce_positivity ? PositivityPolicy::enforce : PositivityPolicy::warn);
}

CovarianceMatrix build_initial_state(const ScenarioConfig& cfg) {
  if (cfg.shape) return compose(*cfg.shape, cfg.constants);
  if (cfg.covariance) {
    validate_state(*cfg.covariance, cfg.constants);
    return *cfg.covariance;
  }
  throw ConfigError("initial_state", "missing: give shape or covariance");
}

std::vector<double> build_times(const ScenarioConfig& cfg) {
  if (!cfg.time_grid) throw ConfigError("time_grid", "missing");
  const TimeGridSpec& g = *cfg.time_grid;
  std::vector<double> times;
  if (g.t_max) {
    const double t_max = g.t_max->resolve(cfg.constants.omega);
    for (int i = 0; i <= g.steps; ++i) times.push_back(t_max * i / g.steps);
    times.back() = t_max;
  } else {
    for (const TimeValue& t : g.times) times.push_back(t.resolve(cfg.constants.omega));
  }
  return times;
}

double resolve_eval_time(const ScenarioConfig& cfg, const LindbladParams& lp) {
  if (cfg.sieve.eval_time) return cfg.sieve.eval_time->resolve(cfg.constants.omega);
  return default_eval_time(lp);
}

}  // namespace gsieve::cli
