/**
 * @file commands.hpp
 * @brief The qps subcommands as plain functions from a RunConfig to rendered
 * output plus an exit code, so they can be driven without a process boundary.
 *
 * Exit codes: 0 success, 1 verification failure, 2 usage or configuration
 * error, 3 numerical non-convergence.
 */
#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qps/parallel.hpp"
#include "qps/qalgebra.hpp"
#include "qps/qseries.hpp"
#include "qps/rspoly.hpp"
#include "qps/theta.hpp"
#include "qps/wigner.hpp"

namespace qps::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonConvergence = 3;

class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::optional<double> q;
  std::optional<double> mu;
  std::optional<int> n;
  int grid_points = kDefaultGridPoints;
  double tol = 1e-12;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::string> output_path;
  std::optional<int> m;
  std::optional<std::pair<int, int>> m_range;
  std::vector<double> mu_list;
  unsigned threads = 1;
};

/// Figure-style default: one angle-distribution column per mu.
inline const std::vector<double> kDefaultMuList{0.1, 0.5, 1.0};

struct CommandResult {
  int exit_code = kExitOk;
  std::string output;
  std::string message;
};

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

/// Round-trip decimal form (17 significant digits, shortest exponent style).
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string short_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Column-major numeric table with free-form metadata.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  void add_column(std::string name, std::vector<double> values) {
    if (!data.empty() && values.size() != data.front().size()) {
      throw std::logic_error("Table: column length mismatch for " + name);
    }
    columns.push_back(std::move(name));
    data.push_back(std::move(values));
  }
  [[nodiscard]] std::size_t rows() const noexcept { return data.empty() ? 0 : data.front().size(); }
};

inline void write_csv_rows(std::ostringstream& os, const Table& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << format_number(t.data[c][r]);
    os << '\n';
  }
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  write_csv_rows(os, t);
  return os.str();
}

inline nlohmann::ordered_json table_json(const Table& t) {
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < t.columns.size(); ++c) data[t.columns[c]] = t.data[c];
  return data;
}

inline std::string to_json(std::string_view command, const Table& t) {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["metadata"] = t.metadata;
  doc["columns"] = t.columns;
  doc["data"] = table_json(t);
  return doc.dump(2) + "\n";
}

inline std::string render(std::string_view command, const Table& t, OutputFormat format) {
  return format == OutputFormat::Json ? to_json(command, t) : to_csv(t);
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

inline void validate(const RunConfig& cfg) {
  if (cfg.q && cfg.mu) throw usage_error("--q and --mu are mutually exclusive");
  if (cfg.q) QParam::from_q(*cfg.q);
  if (cfg.mu) QParam::from_mu(*cfg.mu);
  if (cfg.grid_points < 8) throw usage_error("--grid-points must be at least 8");
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) throw usage_error("--tol must be positive");
  if (cfg.n && *cfg.n < 0) throw usage_error("--n must be non-negative");
  if (cfg.m_range && cfg.m_range->second < cfg.m_range->first) throw usage_error("--m-range must satisfy lo <= hi");
  for (double mu : cfg.mu_list) QParam::from_mu(mu);
}

inline QParam qparam_of(const RunConfig& cfg) {
  if (cfg.q.has_value() == cfg.mu.has_value()) throw usage_error("exactly one of --q or --mu is required");
  return cfg.q ? QParam::from_q(*cfg.q) : QParam::from_mu(*cfg.mu);
}

inline nlohmann::ordered_json qparam_json(const QParam& qp) {
  return {{"q", qp.q()}, {"mu", qp.mu()}};
}

/// Parses "lo:hi" or "lo,hi".
inline std::pair<int, int> parse_m_range(const std::string& text) {
  const auto sep = text.find_first_of(":,", 1);
  if (sep == std::string::npos) throw usage_error("--m-range expects lo:hi, got '" + text + "'");
  try {
    std::size_t used_lo = 0;
    std::size_t used_hi = 0;
    const std::string lo_text = text.substr(0, sep);
    const std::string hi_text = text.substr(sep + 1);
    const int lo = std::stoi(lo_text, &used_lo);
    const int hi = std::stoi(hi_text, &used_hi);
    if (used_lo != lo_text.size() || used_hi != hi_text.size()) throw std::invalid_argument("trailing text");
    if (hi < lo) throw usage_error("--m-range must satisfy lo <= hi");
    return {lo, hi};
  } catch (const usage_error&) {
    throw;
  } catch (const std::exception&) {
    throw usage_error("--m-range expects integers lo:hi, got '" + text + "'");
  }
}

namespace detail {

inline std::vector<double> sweep(const PhaseGrid& grid, unsigned threads, auto&& fn) {
  std::vector<double> out(static_cast<std::size_t>(grid.size()));
  parallel_for(out.size(), threads, [&](std::size_t k) { out[k] = fn(grid[static_cast<int>(k)]); });
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

/// Coefficients of H_0..H_n and |R_k(theta)|^2 on the grid.
inline CommandResult cmd_poly(const RunConfig& cfg) {
  const QParam qp = qparam_of(cfg);
  const int n = cfg.n.value_or(0);
  const PhaseGrid grid(cfg.grid_points);

  std::vector<std::vector<double>> coeffs;
  for (int k = 0; k <= n; ++k) coeffs.push_back(qbinomial_row(k, qp));

  Table samples;
  samples.add_column("theta", grid.points());
  for (int k = 0; k <= n; ++k) {
    samples.add_column("R" + std::to_string(k) + "_sq",
                       detail::sweep(grid, cfg.threads, [&](double th) { return std::norm(rs_function(k, th, qp)); }));
  }

  CommandResult res;
  if (cfg.format == OutputFormat::Json) {
    nlohmann::ordered_json doc;
    doc["command"] = "poly";
    doc["metadata"] = {{"q", qp.q()}, {"mu", qp.mu()}, {"n", n}, {"grid_points", grid.size()}};
    doc["coefficients"] = coeffs;
    doc["columns"] = samples.columns;
    doc["data"] = table_json(samples);
    res.output = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "# H_k(y;q) coefficients, row k lists [k r] for r = 0..k\n";
    for (const auto& row : coeffs) {
      for (std::size_t r = 0; r < row.size(); ++r) os << (r ? "," : "") << format_number(row[r]);
      os << '\n';
    }
    os << "# |R_k(theta)|^2 on the angle grid\n";
    write_csv_rows(os, samples);
    res.output = os.str();
  }
  return res;
}

/// theta3 on the grid.
inline CommandResult cmd_theta(const RunConfig& cfg) {
  const QParam qp = qparam_of(cfg);
  const PhaseGrid grid(cfg.grid_points);
  std::vector<ThetaEval> evals(static_cast<std::size_t>(grid.size()));
  parallel_for(evals.size(), cfg.threads, [&](std::size_t k) { evals[k] = theta3(grid[static_cast<int>(k)], qp, cfg.tol); });

  Table t;
  t.add_column("theta", grid.points());
  std::vector<double> values;
  int terms = 0;
  for (const auto& e : evals) {
    values.push_back(e.value);
    terms = std::max(terms, e.terms_used);
  }
  t.add_column("theta3", std::move(values));
  t.metadata = qparam_json(qp);
  t.metadata["tol"] = cfg.tol;
  t.metadata["grid_points"] = grid.size();
  t.metadata["representation"] = to_string(evals.front().representation);
  t.metadata["terms_used"] = terms;
  return {kExitOk, render("theta", t, cfg.format), {}};
}

/**
 * Omega_n(theta) on the grid. With --mu-list each mu gets its own column; with
 * neither --mu-list nor --q/--mu the default list {0.1, 0.5, 1.0} is used.
 */
inline CommandResult cmd_angle_dist(const RunConfig& cfg) {
  const int n = cfg.n.value_or(0);
  const PhaseGrid grid(cfg.grid_points);

  std::vector<QParam> params;
  bool single = false;
  if (!cfg.mu_list.empty()) {
    if (cfg.q || cfg.mu) throw usage_error("--mu-list cannot be combined with --q or --mu");
    for (double mu : cfg.mu_list) params.push_back(QParam::from_mu(mu));
  } else if (cfg.q || cfg.mu) {
    params.push_back(qparam_of(cfg));
    single = true;
  } else {
    for (double mu : kDefaultMuList) params.push_back(QParam::from_mu(mu));
  }

  Table t;
  t.add_column("theta", grid.points());
  nlohmann::ordered_json curves = nlohmann::ordered_json::array();
  for (const QParam& qp : params) {
    std::vector<double> values =
        detail::sweep(grid, cfg.threads, [&](double th) { return angle_distribution(n, th, qp, cfg.tol); });
    double mass = 0.0;
    for (double v : values) mass += v * grid.weight();
    curves.push_back({{"column", single ? std::string("omega") : "omega_mu=" + short_label(qp.mu())},
                      {"q", qp.q()},
                      {"mu", qp.mu()},
                      {"theta3_terms", theta3(0.0, qp, cfg.tol).terms_used},
                      {"weighted_sum", mass},
                      {"circular_variance", circular_variance(grid, values)}});
    t.add_column(curves.back()["column"].get<std::string>(), std::move(values));
  }
  t.metadata["kind"] = "angle";
  t.metadata["n"] = n;
  t.metadata["tol"] = cfg.tol;
  t.metadata["grid_points"] = grid.size();
  t.metadata["curves"] = std::move(curves);
  return {kExitOk, render("angle-dist", t, cfg.format), {}};
}

/// Lambda_n(m) over --m-range (default 0..n+4) by quadrature of the Wigner function.
inline CommandResult cmd_action_dist(const RunConfig& cfg) {
  const QParam qp = qparam_of(cfg);
  const int n = cfg.n.value_or(0);
  const auto [lo, hi] = cfg.m_range.value_or(std::pair{0, n + 4});
  const int points = adequate_grid_points(n, n, qp, cfg.tol, cfg.grid_points);
  const PhaseGrid grid(points);
  const DistributionTable dist = action_distribution_table(n, lo, hi, qp, grid, cfg.tol);

  Table t;
  const auto& ms = std::get<std::vector<int>>(dist.support);
  t.add_column("m", std::vector<double>(ms.begin(), ms.end()));
  t.add_column("lambda", dist.values);
  t.metadata = qparam_json(qp);
  t.metadata["kind"] = "action";
  t.metadata["n"] = n;
  t.metadata["tol"] = cfg.tol;
  t.metadata["grid_points"] = points;
  t.metadata["t_max"] = dist.series_terms;
  return {kExitOk, render("action-dist", t, cfg.format), {}};
}

/// O_n(m, theta) on the grid at fixed m: real (symmetrized) and imaginary parts.
inline CommandResult cmd_wigner(const RunConfig& cfg) {
  const QParam qp = qparam_of(cfg);
  const int n = cfg.n.value_or(0);
  const int m = cfg.m.value_or(0);
  const PhaseGrid grid(cfg.grid_points);
  const WignerKernel kernel(n, qp, cfg.tol);

  std::vector<std::complex<double>> values(static_cast<std::size_t>(grid.size()));
  parallel_for(values.size(), cfg.threads,
               [&](std::size_t k) { values[k] = kernel.evaluate(m, grid[static_cast<int>(k)]); });
  std::vector<double> re;
  std::vector<double> im;
  for (const auto& v : values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }

  Table t;
  t.add_column("theta", grid.points());
  t.add_column("wigner", std::move(re));
  t.add_column("wigner_imag", std::move(im));
  t.metadata = qparam_json(qp);
  t.metadata["n"] = n;
  t.metadata["m"] = m;
  t.metadata["tol"] = cfg.tol;
  t.metadata["grid_points"] = grid.size();
  t.metadata["t_max"] = kernel.t_max();
  return {kExitOk, render("wigner", t, cfg.format), {}};
}

/**
 * Runs the algebra relations, the three-route orthogonality triangle, the
 * theta3 dual-representation check and both marginal checks for indices up
 * to n_max (--n, default 10). Always emits JSON.
 *
 * Orthogonality residuals are measured on the scale sqrt(I_mm I_nn) of the
 * quantities compared; theta3 residuals relative to max theta3 = theta3(0).
 */
inline CommandResult cmd_verify(const RunConfig& cfg) {
  const QParam qp = qparam_of(cfg);
  const int n_max = cfg.n.value_or(10);
  if (n_max < 2) throw usage_error("verify needs --n of at least 2");
  const double tol = cfg.tol;

  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  std::vector<std::string> failed;
  auto record = [&](const std::string& group, const std::string& name, double residual) {
    const bool ok = residual < tol;
    checks.push_back({{"group", group}, {"name", name}, {"residual", residual}, {"threshold", tol}, {"passed", ok}});
    if (!ok) failed.push_back(name);
  };

  const RelationReport algebra = verify_algebra(n_max, qp, tol);
  for (const auto& r : algebra.relations) record("algebra", r.name, r.residual);

  {
    const PhaseGrid grid(adequate_grid_points(n_max, n_max, qp, tol, cfg.grid_points));
    const int dim = n_max + 1;
    std::vector<double> closed(static_cast<std::size_t>(dim * dim));
    std::vector<double> dsum(closed.size());
    std::vector<double> quad(closed.size());
    parallel_for(closed.size(), cfg.threads, [&](std::size_t idx) {
      const int m = static_cast<int>(idx) / dim;
      const int n = static_cast<int>(idx) % dim;
      closed[idx] = carlitz_closed_form(m, n, qp);
      dsum[idx] = carlitz_double_sum(m, n, qp);
      quad[idx] = orthogonality_quadrature(m, n, qp, grid, tol).value;
    });
    double ds_cf = 0.0;
    double qd_cf = 0.0;
    double ds_qd = 0.0;
    for (int m = 0; m < dim; ++m) {
      for (int n = 0; n < dim; ++n) {
        const auto idx = static_cast<std::size_t>(m * dim + n);
        const double scale = std::sqrt(carlitz_closed_form(m, m, qp) * carlitz_closed_form(n, n, qp));
        ds_cf = std::max(ds_cf, std::abs(dsum[idx] - closed[idx]) / scale);
        qd_cf = std::max(qd_cf, std::abs(quad[idx] - closed[idx]) / scale);
        ds_qd = std::max(ds_qd, std::abs(dsum[idx] - quad[idx]) / scale);
      }
    }
    record("orthogonality", "double_sum vs closed_form", ds_cf);
    record("orthogonality", "quadrature vs closed_form", qd_cf);
    record("orthogonality", "double_sum vs quadrature", ds_qd);
  }

  {
    const PhaseGrid grid(cfg.grid_points);
    const double peak = theta3(0.0, qp, tol).value;
    std::vector<double> diff(static_cast<std::size_t>(grid.size()));
    parallel_for(diff.size(), cfg.threads, [&](std::size_t k) {
      const double phi = grid[static_cast<int>(k)];
      diff[k] = std::abs(theta3_series(phi, qp, tol).value - theta3_gaussian(phi, qp, tol).value);
    });
    double worst = 0.0;
    for (double d : diff) worst = std::max(worst, d);
    record("theta3", "fourier_series vs gaussian_sum", worst / peak);
  }

  {
    const PhaseGrid grid(adequate_grid_points(n_max, n_max, qp, tol, cfg.grid_points));
    std::vector<double> action_err(static_cast<std::size_t>(n_max + 1));
    std::vector<double> norm_err(action_err.size());
    parallel_for(action_err.size(), cfg.threads, [&](std::size_t idx) {
      const int n = static_cast<int>(idx);
      const std::vector<double> lambda = action_distribution_range(n, -2, n_max + 2, qp, grid, tol);
      double worst = 0.0;
      for (int m = -2; m <= n_max + 2; ++m) {
        worst = std::max(worst, std::abs(lambda[static_cast<std::size_t>(m + 2)] - (m == n ? 1.0 : 0.0)));
      }
      action_err[idx] = worst;
      double mass = 0.0;
      for (int k = 0; k < grid.size(); ++k) mass += angle_distribution(n, grid[k], qp, tol) * grid.weight();
      norm_err[idx] = std::abs(mass - 1.0);
    });
    double worst_action = 0.0;
    double worst_norm = 0.0;
    for (std::size_t i = 0; i < action_err.size(); ++i) {
      worst_action = std::max(worst_action, action_err[i]);
      worst_norm = std::max(worst_norm, norm_err[i]);
    }
    record("marginals", "action marginal vs delta", worst_action);
    record("marginals", "angle marginal normalization", worst_norm);
  }

  nlohmann::ordered_json doc;
  doc["command"] = "verify";
  doc["q"] = qp.q();
  doc["mu"] = qp.mu();
  doc["n_max"] = n_max;
  doc["tol"] = tol;
  doc["checks"] = std::move(checks);
  doc["commutator_identity_deviation"] = algebra.commutator_identity_deviation;
  doc["near_classical_limit"] = algebra.commutator_identity_deviation < 1e-2;
  doc["failed"] = failed;
  doc["passed"] = failed.empty();

  CommandResult res;
  res.output = doc.dump(2) + "\n";
  res.exit_code = failed.empty() ? kExitOk : kExitVerificationFailed;
  if (!failed.empty()) res.message = "verification failed: " + failed.front();
  return res;
}

/// Dispatches by subcommand name and maps exceptions onto exit codes.
inline CommandResult run_command(std::string_view name, const RunConfig& cfg) {
  try {
    validate(cfg);
    if (name == "poly") return cmd_poly(cfg);
    if (name == "theta") return cmd_theta(cfg);
    if (name == "angle-dist") return cmd_angle_dist(cfg);
    if (name == "action-dist") return cmd_action_dist(cfg);
    if (name == "wigner") return cmd_wigner(cfg);
    if (name == "verify") return cmd_verify(cfg);
    return {kExitUsage, {}, "unknown subcommand '" + std::string(name) + "'"};
  } catch (const convergence_error& e) {
    return {kExitNonConvergence, {}, e.what()};
  } catch (const std::logic_error& e) {
    return {kExitUsage, {}, e.what()};
  } catch (const std::exception& e) {
    return {kExitNonConvergence, {}, e.what()};
  }
}

/// Writes the rendered output to --out or the given stream.
inline bool emit(const CommandResult& res, const RunConfig& cfg, std::ostream& fallback) {
  if (!cfg.output_path) {
    fallback << res.output;
    return static_cast<bool>(fallback);
  }
  std::ofstream out(*cfg.output_path, std::ios::binary);
  out << res.output;
  return static_cast<bool>(out);
}

}  // namespace qps::cli
