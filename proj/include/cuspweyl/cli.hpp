/*
 * cli.hpp: batch front end: one model file, one verb, one table.
 *
 * Tables go to `out` (or --out) as CSV with a header row, or as a single JSON
 * object {"rows": [...], "meta": {...}}.  Errors go to `err` as one JSON line
 * {"error": {"kind": ..., "message": ...}}.
 *
 * Exit status: 0 ok, 1 model parse/validation failure, 2 usage or computation error.
 */
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cuspweyl/cross_section.hpp"
#include "cuspweyl/embedded_bound.hpp"
#include "cuspweyl/errors.hpp"
#include "cuspweyl/fiber_schrodinger.hpp"
#include "cuspweyl/manifold_model.hpp"
#include "cuspweyl/model_io.hpp"
#include "cuspweyl/weyl_counting.hpp"

namespace cuspweyl::cli {

inline constexpr const char* tool_version = "0.1.0";

struct Command {
  std::string verb;
  std::optional<double> lambda;
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;
  int points = 16;
  std::size_t cusp = 0;
  std::size_t ell = 0;
  double tau_max = 0.1;
  std::string format = "csv";
  std::optional<std::string> out;
  std::string boundary = "dirichlet";
  bool linear = false;
};

class usage_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "usage"; }
};

class validation_error : public error {
 public:
  validation_error(std::string what, std::vector<Violation> v) : error(std::move(what)), violations(std::move(v)) {}
  const char* kind() const noexcept override { return "validation"; }
  std::vector<Violation> violations;
};

using Cell = std::variant<std::monostate, long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> footer;  // CSV: "# key=value"; JSON: meta.<group>.<key>
  std::string footer_group;
};

namespace detail {

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

inline std::string csv_cell(const Cell& c) {
  if (std::holds_alternative<long>(c)) return std::to_string(std::get<long>(c));
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<std::string>(c)) {
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  return "";
}

inline nlohmann::json json_cell(const Cell& c) {
  if (std::holds_alternative<long>(c)) return std::get<long>(c);
  if (std::holds_alternative<double>(c)) {
    const double x = std::get<double>(c);
    if (!std::isfinite(x)) return nullptr;
    return x;
  }
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

inline void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  for (const auto& [k, v] : t.footer) os << "# " << t.footer_group << '.' << k << '=' << csv_cell(v) << '\n';
}

inline void write_json(const Table& t, const nlohmann::ordered_json& meta, std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_cell(row[i]);
    doc["rows"].push_back(std::move(r));
  }
  doc["meta"] = meta;
  if (!t.footer.empty()) {
    nlohmann::ordered_json g = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.footer) g[k] = json_cell(v);
    doc["meta"][t.footer_group] = std::move(g);
  }
  os << doc.dump(2) << '\n';
}

inline std::vector<double> lambda_grid(const Command& c) {
  if (!c.lambda_min || !c.lambda_max) throw usage_error(c.verb + ": --lambda-min and --lambda-max are required");
  if (!(*c.lambda_min < *c.lambda_max)) throw usage_error(c.verb + ": lambda range must be strictly increasing");
  if (c.points < 2) throw usage_error(c.verb + ": --points must be >= 2");
  return c.linear ? linear_grid(*c.lambda_min, *c.lambda_max, c.points)
                  : geometric_grid(*c.lambda_min, *c.lambda_max, c.points);
}

inline double need_lambda(const Command& c) {
  if (!c.lambda) throw usage_error(c.verb + ": --lambda is required");
  return *c.lambda;
}

inline Boundary boundary_of(const Command& c) {
  if (c.boundary == "dirichlet") return Boundary::dirichlet;
  if (c.boundary == "robin") return Boundary::robin;
  throw usage_error("--boundary must be dirichlet or robin");
}

inline const CuspEnd& cusp_of(const ManifoldModel& m, const Command& c) {
  if (c.cusp >= m.cusps.size()) throw usage_error("--cusp " + std::to_string(c.cusp) + " out of range");
  return m.cusps[c.cusp];
}

/// mu_ell of the cross-section at tau = 1.
inline double mode_mu(const TorusCrossSection& X, std::size_t ell) {
  for (double cutoff = 1.0;; cutoff *= 2.0) {
    const auto spec = mu_spectrum(X, 1.0, cutoff);
    if (spec.values.size() > ell) return spec.values[ell];
  }
}

inline std::vector<Cell> count_row(const CountResult& r) {
  return {r.lambda, r.count_low, r.count_high, r.leading, r.residual_low, r.residual_high};
}

inline void require_model(const ManifoldModel& m, FieldMode mode) {
  auto v = validate_model(m, mode);
  if (!v.empty()) throw validation_error("invalid model: " + v.front().kind + ": " + v.front().message, v);
}

// ---------------------------------------------------------------------------

inline Table verb_validate(const ManifoldModel& m) {
  Table t;
  t.columns = {"kind", "cusp", "message"};
  for (const auto& v : validate_model(m)) {
    t.rows.push_back({v.kind, v.cusp ? Cell(static_cast<long>(*v.cusp)) : Cell(), v.message});
  }
  return t;
}

inline Table verb_count(const ManifoldModel& m, const Command& c, const PruferSettings& s) {
  Table t;
  t.columns = {"lambda", "count_low", "count_high", "leading", "residual_low", "residual_high"};
  t.rows.push_back(count_row(total_count_bracket(m, need_lambda(c), s)));
  return t;
}

inline Table verb_sweep(const ManifoldModel& m, const Command& c, const PruferSettings& s) {
  const auto grid = lambda_grid(c);
  Table t;
  t.columns = {"lambda", "count_low", "count_high", "leading", "residual_low", "residual_high", "theta_sum", "r_model"};
  std::vector<double> res;
  for (double lambda : grid) {
    const auto r = total_count_bracket(m, lambda, s);
    double theta = 0.0;
    for (std::size_t j = 0; j < m.cusps.size(); ++j) theta += theta_sum(m, j, lambda);
    auto row = count_row(r);
    row.push_back(theta);
    row.push_back(remainder_model(m.n, m.delta(), lambda));
    t.rows.push_back(std::move(row));
    res.push_back(r.residual_low);
  }
  t.footer_group = "fit";
  try {
    const auto f = fit_remainder(grid, res);
    t.footer = {{"slope", f.slope},
                {"log_correction", std::string(f.log_correction ? "true" : "false")},
                {"constant", f.constant},
                {"rss", f.rss},
                {"slope_defined", std::string(f.slope_defined ? "true" : "false")},
                {"samples", static_cast<long>(f.samples)},
                {"slope_power", f.slope_power},
                {"rss_power", f.rss_power},
                {"slope_log", f.slope_log},
                {"rss_log", f.rss_log}};
  } catch (const precondition_error& e) {
    t.footer = {{"unavailable", std::string(e.what())}};
  }
  return t;
}

inline Table verb_fiber(const ManifoldModel& m, const Command& c, const PruferSettings& s) {
  const auto& cusp = cusp_of(m, c);
  const double mu = mode_mu(cusp.cross_section, c.ell);
  const auto bc = boundary_of(c) == Boundary::dirichlet ? BoundaryCondition::dirichlet()
                                                        : BoundaryCondition::robin(default_robin_beta(cusp, m.n));
  const auto f = FiberPotential::for_cusp(cusp, m.n, mu);
  Table t;
  t.columns = {"index", "mu", "eigenvalue"};
  const auto ev = fiber_eigenvalues(f, need_lambda(c), bc, s);
  for (std::size_t k = 0; k < ev.size(); ++k) t.rows.push_back({static_cast<long>(k), mu, ev[k]});
  return t;
}

inline Table verb_phase(const ManifoldModel& m, const Command& c, const PruferSettings& s) {
  const auto& cusp = cusp_of(m, c);
  const double mu = mode_mu(cusp.cross_section, c.ell);
  const auto f = FiberPotential::for_cusp(cusp, m.n, mu);
  Table t;
  t.columns = {"lambda", "mu", "w", "count", "deviation"};
  for (double lambda : lambda_grid(c)) {
    const double w = phase_integral(f, lambda);
    const long N = fiber_count(f, lambda, BoundaryCondition::dirichlet(), s);
    t.rows.push_back({lambda, mu, w, N, std::abs(static_cast<double>(N) - w / std::numbers::pi)});
  }
  return t;
}

inline Table verb_perturb(const ManifoldModel& m, const Command& c) {
  const auto& X = cusp_of(m, c).cross_section;
  if (!(c.tau_max > 0.0)) throw usage_error("perturb: --tau-max must be positive");
  if (c.points < 2) throw usage_error("perturb: --points must be >= 2");
  // Each reduced coordinate contributes at most (pi / L_k)^2 to the ground state.
  double cutoff = 1.0;
  for (double L : X.lengths) cutoff += (std::numbers::pi / L) * (std::numbers::pi / L);
  Table t;
  t.columns = {"tau", "mu0", "mu0_over_tau2"};
  for (double tau : geometric_grid(c.tau_max * 1e-3, c.tau_max, c.points)) {
    const auto spec = mu_spectrum(X, tau, cutoff);
    const double mu0 = spec.values.front();
    t.rows.push_back({tau, mu0, mu0 / (tau * tau)});
  }
  return t;
}

inline Table verb_embedded(const ManifoldModel& m, const Command& c, const PruferSettings& s) {
  require_model(m, FieldMode::magnetic);
  const auto grid = c.lambda ? std::vector<double>{*c.lambda} : lambda_grid(c);
  Table t;
  t.columns = {"lambda", "rho", "tau", "c_a", "shifted_lambda", "n_ess", "bound", "leading", "r0"};
  for (double lambda : grid) {
    const auto r = embedded_upper_bound(m, lambda, s);
    t.rows.push_back({r.lambda, r.rho, r.tau, r.c_a, r.shifted_lambda, r.n_ess ? Cell(*r.n_ess) : Cell(), r.bound,
                      r.leading, r.r0});
  }
  return t;
}

inline Table verb_rj_identity(const ManifoldModel& m, const Command& c) {
  const auto& X = cusp_of(m, c).cross_section;
  const auto grid = c.lambda ? std::vector<double>{*c.lambda} : lambda_grid(c);
  Table t;
  t.columns = {"mu", "r_sum", "half_integral", "residual"};
  for (double mu : grid) {
    const double a = rj_sum(X, 1.0, mu);
    const double b = rj_half_integral(X, 1.0, mu);
    t.rows.push_back({mu, a, b, std::abs(a - b)});
  }
  return t;
}

inline void report(std::ostream& err, const char* kind, const std::string& message,
                   const std::vector<Violation>* violations = nullptr) {
  nlohmann::ordered_json e;
  e["kind"] = kind;
  e["message"] = message;
  if (violations) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& v : *violations) {
      nlohmann::ordered_json o;
      o["kind"] = v.kind;
      o["cusp"] = v.cusp ? nlohmann::ordered_json(*v.cusp) : nlohmann::ordered_json(nullptr);
      o["message"] = v.message;
      arr.push_back(std::move(o));
    }
    e["violations"] = std::move(arr);
  }
  nlohmann::ordered_json doc;
  doc["error"] = std::move(e);
  err << doc.dump() << '\n';
}

}  // namespace detail

inline int run(const Command& cmd, const std::string& model_path, std::ostream& out, std::ostream& err) {
  using namespace detail;
  const PruferSettings settings;
  try {
    if (cmd.format != "csv" && cmd.format != "json") throw usage_error("--format must be csv or json");
    const std::string text = read_text_file(model_path);
    const ManifoldModel model = parse_model(text);

    Table table;
    int status = 0;
    if (cmd.verb == "validate") {
      table = verb_validate(model);
      status = table.rows.empty() ? 0 : 1;
    } else {
      require_model(model, FieldMode::automatic);
      if (cmd.verb == "count") table = verb_count(model, cmd, settings);
      else if (cmd.verb == "sweep") table = verb_sweep(model, cmd, settings);
      else if (cmd.verb == "fiber") table = verb_fiber(model, cmd, settings);
      else if (cmd.verb == "phase") table = verb_phase(model, cmd, settings);
      else if (cmd.verb == "perturb") table = verb_perturb(model, cmd);
      else if (cmd.verb == "embedded") table = verb_embedded(model, cmd, settings);
      else if (cmd.verb == "rj-identity") table = verb_rj_identity(model, cmd);
      else throw usage_error("unknown verb '" + cmd.verb + "'");
    }

    nlohmann::ordered_json meta;
    meta["model_hash"] = content_hash(text);
    meta["tool_version"] = tool_version;
    auto& tol = meta["tolerances"];
    tol["rel_tol"] = settings.rel_tol;
    tol["angle_tol"] = settings.angle_tol;
    tol["t_margin"] = settings.t_margin;
    tol["ode_tol"] = settings.ode_tol;
    tol["flux_tol"] = default_flux_tolerance;

    std::ofstream file;
    std::ostream* sink = &out;
    if (cmd.out) {
      file.open(*cmd.out, std::ios::binary | std::ios::trunc);
      if (!file) throw usage_error("cannot open --out " + *cmd.out);
      sink = &file;
    }
    if (cmd.format == "json") write_json(table, meta, *sink);
    else write_csv(table, *sink);
    sink->flush();

    if (status == 1) {
      const auto v = validate_model(model);
      report(err, "validation", "model has " + std::to_string(v.size()) + " violation(s)", &v);
    }
    return status;
  } catch (const validation_error& e) {
    report(err, e.kind(), e.what(), &e.violations);
    return 1;
  } catch (const model_format_error& e) {
    report(err, e.kind(), e.what());
    return 1;
  } catch (const error& e) {
    report(err, e.kind(), e.what());
    return 2;
  } catch (const std::exception& e) {
    report(err, "internal", e.what());
    return 2;
  }
}

}  // namespace cuspweyl::cli
