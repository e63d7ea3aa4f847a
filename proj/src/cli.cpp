#include "oraclebench/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oraclebench/complexity.hpp"
#include "oraclebench/concentration.hpp"
#include "oraclebench/config.hpp"
#include "oraclebench/harness.hpp"
#include "oraclebench/parallel.hpp"
#include "oraclebench/report_io.hpp"
#include "oraclebench/residuals.hpp"

namespace oraclebench {
namespace {

std::string format_printed(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

/// Numeric rows of a text file; commas and whitespace separate values and
/// lines starting with '#' are skipped.
std::vector<std::vector<double>> read_numeric_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t' || ch == '\r') ch = ' ';
    std::istringstream tokens(line);
    std::vector<double> row;
    std::string token;
    while (tokens >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw InvalidInput(path + ": not a number: \"" + token + "\"");
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::VectorXd read_values(const std::string& path) {
  std::vector<double> flat;
  for (const auto& row : read_numeric_rows(path)) flat.insert(flat.end(), row.begin(), row.end());
  if (flat.empty()) throw InvalidInput(path + ": no values");
  return Eigen::Map<const Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
}

Eigen::MatrixXd read_points(const std::string& path) {
  const auto rows = read_numeric_rows(path);
  if (rows.empty()) throw InvalidInput(path + ": no points");
  Eigen::MatrixXd points(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size())
      throw InvalidInput(path + ": every point needs the same number of coordinates");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return points;
}

/// sqrt | const:C | power:A
std::function<double(double)> parse_phi(const std::string& spec) {
  if (spec == "sqrt") return [](double l) { return std::sqrt(l); };
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    double value = 0.0;
    std::size_t used = 0;
    try {
      value = std::stod(spec.substr(colon + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used > 0 && used == spec.size() - colon - 1 && std::isfinite(value)) {
      if (kind == "const") return [value](double) { return value; };
      if (kind == "power") return [value](double l) { return std::pow(l, value); };
    }
  }
  throw InvalidInput("--phi: expected sqrt, const:C or power:A, got \"" + spec + "\"");
}

struct Options {
  // experiment
  std::string configPath;
  std::string outDir;
  std::vector<std::string> sets;
  unsigned workers = default_workers();
  // compute
  std::string file;
  std::vector<double> values;
  double alpha = 1.0;
  double tol = kDefaultPsiTol;
  double n = 0, d = 0, x = 0, q = 2, Kd = 1, c0 = 1, c2 = 1, c3 = 1;
  double lambdaStar = 0, bn = 0, Bn = 0, epsilon = 0.25, r = 0, V = 1;
  int scales = 20;
  std::string phi;
  std::string table;
  double hi = 1.0;
  double fixedTol = 1e-12;
};

int cmd_experiment(const Options& o, std::ostream& out) {
  RunManifest manifest;
  manifest.startedAt = utc_timestamp();
  manifest.configPath = o.configPath;
  manifest.outputDir = o.outDir;
  manifest.workers = o.workers;

  std::optional<std::string> seed;
  if (const char* env = std::getenv("ORACLEBENCH_SEED"); env != nullptr) seed = env;
  const ScenarioConfig config = resolve_config(load_config_file(o.configPath), seed, o.sets);
  manifest.masterSeed = config.masterSeed;
  manifest.resolvedConfig = config_to_json(config);

  const ScenarioResult result = run_scenario(config, o.workers);

  namespace fs = std::filesystem;
  const fs::path dir(o.outDir);
  fs::create_directories(dir);
  auto write_file = [&](const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    body(file);
    file.flush();
    if (!file) throw std::runtime_error("failed writing " + path.string());
  };
  write_file(dir / "rows.csv", [&](std::ostream& s) { write_rows_csv(s, result); });
  write_file(dir / "summary.csv", [&](std::ostream& s) { write_summary_csv(s, result); });
  manifest.finishedAt = utc_timestamp();
  write_file(dir / "manifest.json",
             [&](std::ostream& s) { s << manifest_to_json(manifest).dump(2) << '\n'; });

  out << to_string(result.scenario) << ": " << result.rows.size() << " rows written to "
      << o.outDir << '\n';
  auto report_fit = [&](const char* label, const std::optional<RateFit>& fit) {
    if (fit)
      out << "  " << label << " slope " << format_printed(fit->slope) << " (R^2 "
          << format_printed(fit->rSquared) << ")\n";
  };
  report_fit("exact", result.exactFit);
  report_fit("nonexact", result.nonexactFit);
  for (const SummaryRow& s : result.summary)
    if (s.eventFrequency)
      out << "  n=" << s.n << " event frequency " << format_printed(*s.eventFrequency)
          << " (target " << format_printed(*s.eventTarget) << ")\n";
  return kExitOk;
}

double compute_quantity(const std::string& quantity, const Options& o) {
  if (quantity == "psi-norm") {
    const bool hasFile = !o.file.empty();
    const bool hasValues = !o.values.empty();
    if (hasFile == hasValues) throw InvalidInput("psi-norm: give exactly one of --file or --values");
    const Eigen::VectorXd samples =
        hasFile ? read_values(o.file)
                : Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
                      o.values.data(), static_cast<Eigen::Index>(o.values.size())));
    return psi_alpha_norm(samples, o.alpha, o.tol).value;
  }
  if (quantity == "penalty") return theorem_c_penalty(o.n, o.d, o.x, o.q, o.Kd, o.c0);
  if (quantity == "rho-a") {
    detail::require(o.n >= 1 && o.n == std::floor(o.n), "rho-a: --n must be a positive integer");
    return rho_n_theorem_a(o.lambdaStar, o.bn, o.Bn, o.epsilon, o.x, static_cast<long>(o.n), o.c0)
        .value;
  }
  if (quantity == "rho-b") {
    const ComplexityProfile profile =
        theorem_c_profile(o.n, o.d, o.q, o.Kd, o.epsilon, ProfileConstants{o.c0, o.c2, o.c3});
    return rho_n_theorem_b(profile, o.r, o.x, o.c0);
  }
  if (quantity == "dudley") return dudley_gamma2(read_points(o.file), o.scales);
  if (quantity == "fixed-point") {
    const bool hasPhi = !o.phi.empty();
    const bool hasTable = !o.table.empty();
    if (hasPhi == hasTable) throw InvalidInput("fixed-point: give exactly one of --phi or --table");
    std::function<double(double)> phi;
    if (hasPhi) {
      phi = parse_phi(o.phi);
    } else {
      std::vector<double> grid, values;
      for (const auto& row : read_numeric_rows(o.table)) {
        if (row.size() != 2) throw InvalidInput(o.table + ": expected two columns (lambda, phi)");
        grid.push_back(row[0]);
        values.push_back(row[1]);
      }
      phi = MonotoneMap(std::move(grid), std::move(values));
    }
    return fixed_point_lambda(phi, o.epsilon, o.hi, o.fixedTol);
  }
  if (quantity == "massart-rate") return massart_rate(o.V, o.n, o.x, o.epsilon, o.c0);
  throw InvalidInput("unknown quantity \"" + quantity + "\"");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Monte Carlo benchmarks for oracle inequalities of empirical risk minimisers",
               "oraclebench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CLI::App* experiment = app.add_subcommand("experiment", "Run a scenario from a JSON config");
  experiment->add_option("--config", o.configPath, "Scenario configuration (JSON)")->required();
  experiment->add_option("--out", o.outDir, "Output directory")->required();
  experiment->add_option("--set", o.sets, "Override a config value: dotted.key=value")
      ->allow_extra_args(false);
  experiment->add_option("--workers", o.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* compute = app.add_subcommand("compute", "Evaluate a single quantity");
  compute->require_subcommand(1);
  std::string quantity;
  auto quantity_command = [&](const char* name, const char* description) {
    CLI::App* sub = compute->add_subcommand(name, description);
    sub->callback([&quantity, name] { quantity = name; });
    return sub;
  };

  CLI::App* psi = quantity_command("psi-norm", "Empirical psi_alpha Orlicz norm");
  psi->add_option("--file", o.file, "Values separated by whitespace or commas");
  psi->add_option("--values", o.values, "Inline values")->delimiter(',');
  psi->add_option("--alpha", o.alpha)->capture_default_str();
  psi->add_option("--tol", o.tol)->capture_default_str();

  CLI::App* penalty = quantity_command("penalty", "lambda(n, d, x) of the l1^q penalty");
  penalty->add_option("--n", o.n)->required();
  penalty->add_option("--d", o.d)->required();
  penalty->add_option("--x", o.x)->required();
  penalty->add_option("--q", o.q)->capture_default_str();
  penalty->add_option("--Kd", o.Kd)->capture_default_str();
  penalty->add_option("--c0", o.c0)->capture_default_str();

  CLI::App* rhoA = quantity_command("rho-a", "Residual of ERM over a fixed class");
  rhoA->add_option("--lambda-star", o.lambdaStar)->required();
  rhoA->add_option("--bn", o.bn)->required();
  rhoA->add_option("--Bn", o.Bn)->required();
  rhoA->add_option("--epsilon", o.epsilon)->required();
  rhoA->add_option("--x", o.x)->required();
  rhoA->add_option("--n", o.n)->required();
  rhoA->add_option("--c0", o.c0)->capture_default_str();

  CLI::App* rhoB = quantity_command("rho-b", "Residual of the l1-ball family at radius r");
  rhoB->add_option("--n", o.n)->required();
  rhoB->add_option("--d", o.d)->required();
  rhoB->add_option("--r", o.r)->required();
  rhoB->add_option("--x", o.x)->required();
  rhoB->add_option("--epsilon", o.epsilon)->required();
  rhoB->add_option("--q", o.q)->capture_default_str();
  rhoB->add_option("--Kd", o.Kd)->capture_default_str();
  rhoB->add_option("--c0", o.c0)->capture_default_str();
  rhoB->add_option("--c2", o.c2)->capture_default_str();
  rhoB->add_option("--c3", o.c3)->capture_default_str();

  CLI::App* dudley = quantity_command("dudley", "Dudley entropy integral of a point set");
  dudley->add_option("--file", o.file, "One point per line")->required();
  dudley->add_option("--scales", o.scales)->capture_default_str();

  CLI::App* fixed = quantity_command("fixed-point", "Smallest lambda with phi <= (eps/4) lambda");
  fixed->add_option("--phi", o.phi, "sqrt, const:C or power:A");
  fixed->add_option("--table", o.table, "Two columns: lambda, phi(lambda)");
  fixed->add_option("--epsilon", o.epsilon)->required();
  fixed->add_option("--hi", o.hi, "Initial upper bracket")->capture_default_str();
  fixed->add_option("--tol", o.fixedTol)->capture_default_str();

  CLI::App* massart = quantity_command("massart-rate", "Nonexact residual of a VC class");
  massart->add_option("--V", o.V)->required();
  massart->add_option("--n", o.n)->required();
  massart->add_option("--x", o.x)->required();
  massart->add_option("--epsilon", o.epsilon)->required();
  massart->add_option("--c0", o.c0)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (experiment->parsed()) return cmd_experiment(o, out);
    out << format_printed(compute_quantity(quantity, o)) << '\n';
    return kExitOk;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (...) {
    err << "error: unknown failure\n";
    return kExitRuntime;
  }
}

}  // namespace oraclebench
