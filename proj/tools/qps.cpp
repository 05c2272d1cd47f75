// qps: tables of q-deformed phase-space quantities.
//
//   qps poly        --q 0.5 --n 4
//   qps theta       --mu 0.1 --format json
//   qps angle-dist  --n 1 --mu-list 0.1,0.5,1.0
//   qps action-dist --q 0.5 --n 2 --m-range -2:8
//   qps wigner      --q 0.5 --n 1 --m 1
//   qps verify      --q 0.5 --n 10
//
// Output goes to stdout unless --out is given. QPS_THREADS caps worker threads.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "qps/cli/commands.hpp"

namespace {

struct Options {
  std::optional<double> q;
  std::optional<double> mu;
  std::optional<int> n;
  int grid_points = qps::kDefaultGridPoints;
  double tol = 1e-12;
  std::string format = "csv";
  std::optional<std::string> out;
  std::optional<int> m;
  std::optional<std::string> m_range;
  std::vector<double> mu_list;
};

void add_common(CLI::App* sub, Options& o, bool with_q = true) {
  if (with_q) {
    auto* q = sub->add_option("--q", o.q, "deformation parameter, 0 < q < 1");
    auto* mu = sub->add_option("--mu", o.mu, "mu > 0 with q = exp(-2 mu)");
    q->excludes(mu);
  }
  sub->add_option("--n", o.n, "state index (verify: largest index checked, default 10)");
  sub->add_option("--grid-points", o.grid_points, "angle grid size")->capture_default_str();
  sub->add_option("--tol", o.tol, "series truncation tolerance")->capture_default_str();
  sub->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", o.out, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-deformed oscillator phase-space tables"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qps 0.1.0");

  Options o;
  std::map<std::string, CLI::App*> subs;
  subs["poly"] = app.add_subcommand("poly", "Rogers-Szego coefficients and |R_n|^2");
  subs["theta"] = app.add_subcommand("theta", "theta3 measure on the angle grid");
  subs["angle-dist"] = app.add_subcommand("angle-dist", "angle distribution Omega_n(theta)");
  subs["action-dist"] = app.add_subcommand("action-dist", "action distribution Lambda_n(m)");
  subs["wigner"] = app.add_subcommand("wigner", "Wigner function O_n(m, theta) at fixed m");
  subs["verify"] = app.add_subcommand("verify", "algebra, orthogonality and marginal checks (JSON report)");

  for (auto& [name, sub] : subs) add_common(sub, o);
  subs["angle-dist"]->add_option("--mu-list", o.mu_list, "one column per mu (comma separated)")->delimiter(',');
  subs["action-dist"]->add_option("--m-range", o.m_range, "lo:hi (default 0:n+4)");
  subs["wigner"]->add_option("--m", o.m, "action index (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qps::cli::kExitUsage;
  }

  std::string name;
  for (auto& [key, sub] : subs) {
    if (sub->parsed()) name = key;
  }

  qps::cli::RunConfig cfg;
  cfg.q = o.q;
  cfg.mu = o.mu;
  cfg.n = o.n;
  cfg.grid_points = o.grid_points;
  cfg.tol = o.tol;
  cfg.format = o.format == "json" ? qps::cli::OutputFormat::Json : qps::cli::OutputFormat::Csv;
  cfg.output_path = o.out;
  cfg.m = o.m;
  cfg.mu_list = o.mu_list;
  cfg.threads = qps::thread_budget_from_env();
  try {
    if (o.m_range) cfg.m_range = qps::cli::parse_m_range(*o.m_range);
  } catch (const qps::cli::usage_error& e) {
    std::cerr << "qps: " << e.what() << '\n';
    return qps::cli::kExitUsage;
  }

  const qps::cli::CommandResult res = qps::cli::run_command(name, cfg);
  if (!res.output.empty() && !qps::cli::emit(res, cfg, std::cout)) {
    std::cerr << "qps: cannot write output\n";
    return qps::cli::kExitUsage;
  }
  if (!res.message.empty()) std::cerr << "qps: " << res.message << '\n';
  return res.exit_code;
}
