#include "gsieve/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "gsieve/cli/output.hpp"
#include "gsieve/sieve.hpp"
#include "gsieve/simd/kernels.hpp"

namespace gsieve::cli {

using nlohmann::ordered_json;

namespace {

ordered_json envelope(const ScenarioConfig& cfg, ordered_json results,
                      const std::vector<std::string>& warnings, ordered_json extra = {}) {
  ordered_json doc;
  doc["config_echo"] = to_json(cfg);
  doc["results"] = std::move(results);
  ordered_json diag;
  diag["kernel_isa"] = std::string(simd::to_string(simd::active_kernels().isa));
  diag["warnings"] = warnings;
  if (extra.is_object()) {
    for (const auto& item : extra.items()) diag[item.key()] = item.value();
  }
  doc["diagnostics"] = diag;
  return doc;
}

std::string dump_json(const ordered_json& doc) {
  std::ostringstream os;
  write_json(os, doc);
  return os.str();
}

std::string dump_csv(const std::vector<CsvColumn>& columns,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<std::string>& trailer = {}) {
  std::ostringstream os;
  write_csv(os, columns, rows, trailer);
  return os.str();
}

// Positions of a scan grid point along each axis; last axis varies fastest.
std::vector<std::size_t> unravel(std::size_t index, const std::vector<std::size_t>& extents) {
  std::vector<std::size_t> pos(extents.size());
  for (std::size_t k = extents.size(); k-- > 0;) {
    pos[k] = index % extents[k];
    index /= extents[k];
  }
  return pos;
}

}  // namespace

Rendered render_evolve(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const LindbladParams lp = build_params(cfg);
  const CovarianceMatrix sigma0 = build_initial_state(cfg);
  const std::vector<double> times = build_times(cfg);
  const PhysicalConstants& pc = lp.constants();

  Rendered out;
  if (!lp.positivity_holds()) {
    std::ostringstream os;
    os.precision(17);
    os << "diffusion matrix violates positivity (margin " << lp.positivity_margin()
       << "); Heisenberg checks downgraded to warnings";
    out.warnings.push_back(os.str());
  }

  const std::vector<CovarianceMatrix> traj = evolve_trajectory(sigma0, times, lp);
  std::vector<std::vector<double>> rows;
  rows.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const CovarianceMatrix& s = traj[i];
    const SymMatrix2 scaled = s.scaled(pc);
    const double area = phase_space_area(scaled, pc.hbar);
    double entropy_value = std::nan("");
    if (satisfies_heisenberg(s, pc)) {
      entropy_value = entropy(area);
    } else {
      std::ostringstream os;
      os.precision(17);
      os << "Heisenberg inequality violated at t=" << times[i] << " (det=" << scaled.det() << ")";
      if (lp.policy() == PositivityPolicy::enforce) {
        throw Error(ErrorKind::HeisenbergViolation, os.str());
      }
      out.warnings.push_back(os.str());
    }
    rows.push_back({times[i], s.sigma_qq, s.sigma_pp, s.sigma_pq, scaled.det(), area,
                    entropy_value});
  }

  const std::vector<CsvColumn> columns = {
      {"t", "time"},          {"sigma_qq", "length^2"}, {"sigma_pp", "momentum^2"},
      {"sigma_pq", "length*momentum"}, {"det_sigma", "action^2"}, {"area", "hbar/2"},
      {"entropy", "nats"}};
  if (cfg.output.format == OutputFormat::csv) {
    out.text = dump_csv(columns, rows);
    return out;
  }
  ordered_json traj_json = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r;
    for (std::size_t k = 0; k < columns.size(); ++k) r[columns[k].name] = row[k];
    traj_json.push_back(r);
  }
  ordered_json results;
  results["stationary"] = {{"sigma_qq", stationary_covariance(lp).sigma_qq},
                           {"sigma_pp", stationary_covariance(lp).sigma_pp},
                           {"sigma_pq", stationary_covariance(lp).sigma_pq}};
  results["trajectory"] = traj_json;
  out.text = dump_json(envelope(cfg, results, out.warnings));
  return out;
}

Rendered render_sieve(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const LindbladParams lp = build_params(cfg);
  Rendered out;
  CovarianceMatrix sigma0;
  if (cfg.shape || cfg.covariance) {
    sigma0 = build_initial_state(cfg);
  } else {
    sigma0 = compose(ShapeDecomposition{}, lp.constants());
    out.warnings.push_back("no initial_state given; dropped term uses the coherent state");
  }
  const double t_eval = resolve_eval_time(cfg, lp);

  const SievePoint point = sieve_kernels(t_eval, lp);
  const double aleph_closed = optimal_squeezing_closed_form(lp);
  SieveResult from_kernels = optimal_shape_from_kernels(point);
  GridSpec grid;
  grid.theta_samples = cfg.sieve.theta_samples;
  grid.aleph_samples = cfg.sieve.aleph_samples;
  SieveResult numeric = optimal_shape_numeric(point, grid);
  record_cross_residual(from_kernels, numeric);

  const double residual_kernels = std::abs(aleph_closed - from_kernels.aleph_star);
  const double residual_numeric = std::abs(aleph_closed - numeric.aleph_star);
  const double dropped = dropped_long_time_term(sigma0, t_eval, lp);
  const double initial_objective = sieve_objective(decompose(sigma0, lp.constants()), point);
  const ShapeDecomposition canonical = from_kernels.canonical();

  if (residual_kernels > kKernelRouteRelTol * aleph_closed) {
    out.warnings.push_back("kernel-route aleph differs from closed form by " +
                           format_double(residual_kernels));
  }
  if (residual_numeric > kNumericAlephTol) {
    out.warnings.push_back("numeric aleph differs from closed form by " +
                           format_double(residual_numeric));
  }

  const std::vector<CsvColumn> columns = {{"eval_time", "time"},
                                          {"aleph_closed", "1"},
                                          {"aleph_from_kernels", "1"},
                                          {"aleph_numeric", "1"},
                                          {"aleph_canonical", "1"},
                                          {"theta_star", "rad"},
                                          {"theta_canonical", "rad"},
                                          {"theta_numeric", "rad"},
                                          {"objective_value", "action^2"},
                                          {"initial_state_objective", "action^2"},
                                          {"dropped_term", "action^2"},
                                          {"residual_kernels", "1"},
                                          {"residual_numeric", "1"},
                                          {"degenerate", "bool"}};
  const std::vector<double> row = {t_eval,
                                   aleph_closed,
                                   from_kernels.aleph_star,
                                   numeric.aleph_star,
                                   canonical.aleph,
                                   from_kernels.theta_star,
                                   canonical.theta,
                                   numeric.theta_star,
                                   from_kernels.objective_value,
                                   initial_objective,
                                   dropped,
                                   residual_kernels,
                                   residual_numeric,
                                   from_kernels.degenerate ? 1.0 : 0.0};
  if (cfg.output.format == OutputFormat::csv) {
    out.text = dump_csv(columns, {row});
    return out;
  }
  ordered_json results;
  for (std::size_t k = 0; k + 1 < columns.size(); ++k) results[columns[k].name] = row[k];
  results["degenerate"] = from_kernels.degenerate;
  results["kernels"] = {{"t_pp", point.t_pp}, {"t_qq", point.t_qq}, {"t_pq", point.t_pq}};
  out.text = dump_json(envelope(cfg, results, out.warnings));
  return out;
}

Rendered render_scan(const ScenarioConfig& cfg, const RunOptions& options) {
  validate_config(cfg);
  if (!cfg.params) throw ConfigError("params", "scan needs a params section as its base point");

  std::vector<std::vector<double>> samples;
  std::vector<std::size_t> extents;
  std::size_t total = 1;
  for (const ScanAxis& axis : cfg.scan) {
    samples.push_back(axis.samples());
    extents.push_back(samples.back().size());
    total *= extents.back();
  }

  struct Point {
    std::size_t index;
    double lambda, omega, d_qq, d_pp, d_pq;
  };
  std::vector<Point> points(total);
  std::vector<LindbladParams> valid;
  std::vector<std::size_t> valid_index;
  ordered_json skipped = ordered_json::array();
  Rendered out;

  for (std::size_t n = 0; n < total; ++n) {
    Point p{n, cfg.params->lambda, cfg.constants.omega, cfg.params->d_qq, cfg.params->d_pp,
            cfg.params->d_pq};
    const auto pos = unravel(n, extents);
    for (std::size_t k = 0; k < cfg.scan.size(); ++k) {
      const double v = samples[k][pos[k]];
      const std::string& name = cfg.scan[k].name;
      if (name == "lambda") p.lambda = v;
      else if (name == "omega") p.omega = v;
      else if (name == "d_qq") p.d_qq = v;
      else if (name == "d_pp") p.d_pp = v;
      else p.d_pq = v;
    }
    points[n] = p;
    PhysicalConstants pc = cfg.constants;
    pc.omega = p.omega;
    try {
      valid.push_back(LindbladParams::create(pc, p.lambda, p.d_qq, p.d_pp, p.d_pq));
      valid_index.push_back(n);
    } catch (const Error& e) {
      skipped.push_back({{"index", n}, {"reason", e.what()}});
      out.warnings.push_back("skipped grid point " + std::to_string(n) + ": " + e.what());
    }
  }
  if (valid.empty()) throw ConfigError("scan", "no grid point satisfies the parameter constraints");

  const std::vector<double> closed = optimal_squeezing_closed_form_batch(valid);
  std::vector<double> numeric(valid.size());
  GridSpec grid;
  grid.theta_samples = cfg.sieve.theta_samples;
  grid.aleph_samples = cfg.sieve.aleph_samples;

  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(valid.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](unsigned id) {
    try {
      for (std::size_t k = next++; k < valid.size(); k = next++) {
        const LindbladParams& lp = valid[k];
        const double t_eval = cfg.sieve.eval_time
                                  ? cfg.sieve.eval_time->resolve(lp.constants().omega)
                                  : default_eval_time(lp);
        numeric[k] = optimal_shape_numeric(sieve_kernels(t_eval, lp), grid).aleph_star;
      }
    } catch (...) {
      failures[id] = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned id = 1; id < workers; ++id) pool.emplace_back(work, id);
    work(0);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  double max_residual = 0.0;
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < valid.size(); ++k) {
    const Point& p = points[valid_index[k]];
    const double residual = std::abs(closed[k] - numeric[k]);
    max_residual = std::max(max_residual, residual);
    rows.push_back({static_cast<double>(p.index), p.lambda, p.omega, p.d_qq, p.d_pp, p.d_pq,
                    closed[k], numeric[k], residual});
  }
  if (max_residual > kNumericAlephTol) {
    out.warnings.push_back("max residual " + format_double(max_residual) + " exceeds " +
                           format_double(kNumericAlephTol));
  }

  const std::vector<CsvColumn> columns = {
      {"index", "1"},         {"lambda", "1/time"},        {"omega", "rad/time"},
      {"d_qq", "length^2/time"}, {"d_pp", "momentum^2/time"}, {"d_pq", "action/time"},
      {"aleph_closed", "1"},  {"aleph_numeric", "1"},      {"residual", "1"}};
  const std::size_t n_skipped = total - valid.size();
  if (cfg.output.format == OutputFormat::csv) {
    const std::string summary = "summary: points=" + std::to_string(total) +
                                " valid=" + std::to_string(valid.size()) +
                                " skipped=" + std::to_string(n_skipped) +
                                " max_residual=" + format_double(max_residual);
    out.text = dump_csv(columns, rows, {summary});
    return out;
  }
  ordered_json rows_json = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r;
    r["index"] = static_cast<std::size_t>(row[0]);
    for (std::size_t k = 1; k < columns.size(); ++k) r[columns[k].name] = row[k];
    rows_json.push_back(r);
  }
  ordered_json results;
  results["rows"] = rows_json;
  results["summary"] = {{"points", total},
                        {"valid", valid.size()},
                        {"skipped", n_skipped},
                        {"max_residual", max_residual}};
  out.text = dump_json(envelope(cfg, results, out.warnings, {{"skipped", skipped}}));
  return out;
}

Rendered render_coeffs(const ScenarioConfig& cfg) {
  validate_config(cfg);
  if (!cfg.coefficients) {
    throw ConfigError("coefficients", "missing: give a1, a2, b1, b2 as [re, im] pairs");
  }
  const LindbladParams lp = coefficients_to_parameters(*cfg.coefficients, cfg.constants);
  const std::vector<CsvColumn> columns = {{"d_qq", "length^2/time"},
                                          {"d_pp", "momentum^2/time"},
                                          {"d_pq", "action/time"},
                                          {"lambda", "1/time"},
                                          {"positivity_margin", "action^2/time^2"}};
  const std::vector<double> row = {lp.d_qq(), lp.d_pp(), lp.d_pq(), lp.lambda(),
                                   lp.positivity_margin()};
  Rendered out;
  if (cfg.output.format == OutputFormat::csv) {
    out.text = dump_csv(columns, {row});
    return out;
  }
  ordered_json results;
  for (std::size_t k = 0; k < columns.size(); ++k) results[columns[k].name] = row[k];
  out.text = dump_json(envelope(cfg, results, out.warnings));
  return out;
}

Rendered render(Command command, const ScenarioConfig& cfg, const RunOptions& options) {
  switch (command) {
    case Command::evolve: return render_evolve(cfg);
    case Command::sieve: return render_sieve(cfg);
    case Command::scan: return render_scan(cfg, options);
    case Command::coeffs: return render_coeffs(cfg);
  }
  throw std::logic_error("unknown command");
}

int execute(Command command, const ScenarioConfig& cfg, std::ostream& out, std::ostream& err,
            const RunOptions& options) {
  try {
    const Rendered rendered = render(command, cfg, options);
    for (const auto& w : rendered.warnings) err << "warning: " << w << "\n";
    if (cfg.output.path.empty() || cfg.output.path == "-") {
      out << rendered.text;
    } else {
      std::ofstream file(cfg.output.path, std::ios::binary | std::ios::trunc);
      if (!file) throw ConfigError("output.path", "cannot open " + cfg.output.path);
      file << rendered.text;
      if (!file) throw ConfigError("output.path", "write failed for " + cfg.output.path);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    err << "physics error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return kExitPhysicsError;
  }
}

}  // namespace gsieve::cli
