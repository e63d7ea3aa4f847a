// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oraclebench/complexity.hpp"
#include "oraclebench/concentration.hpp"
#include "oraclebench/config.hpp"
#include "oraclebench/harness.hpp"
#include "oraclebench/parallel.hpp"
#include "oraclebench/report_io.hpp"
#include "oraclebench/rng.hpp"
#include "oraclebench/solvers.hpp"

#ifndef ORACLEBENCH_CONFIG_DIR
#define ORACLEBENCH_CONFIG_DIR "configs"
#endif

using namespace oraclebench;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, pattern, value);
  return buffer;
}

ScenarioConfig shipped(const std::string& name) {
  return config_from_json(load_config_file(std::string(ORACLEBENCH_CONFIG_DIR) + "/" + name));
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Outcome psi_closed_form() {
  const double target = 1.0 / std::numbers::ln2;
  const double ones = psi_alpha_norm(Eigen::VectorXd::Ones(1000), 1.0).value;
  Engine engine = make_engine(1001);
  std::exponential_distribution<double> ex(1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd x(200);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = ex(engine);
    const double base = psi_alpha_norm(x, 1.0).value;
    worst = std::max(worst, std::abs(psi_alpha_norm(Eigen::VectorXd(3.0 * x), 1.0).value - 3.0 * base));
  }
  const double err = std::abs(ones - target);
  return {err <= 1e-6 && worst <= 2e-6,
          "|psi1(ones) - 1/ln2| = " + fmt("%.3g", err) + " (tol 1e-6), max homogeneity error " +
              fmt("%.3g", worst) + " (tol 2e-6)"};
}

Outcome localization_oracle() {
  Engine engine = make_engine(1002);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 20);
  const int points = 10000;
  std::uniform_int_distribution<int> gridIndex(1, points - 1);
  double worst = 0.0;
  for (int cls = 0; cls < 100; ++cls) {
    const int M = size(engine);
    const double level = 0.05 + 2.0 * u(engine);
    Eigen::VectorXd means(M), dev(M);
    for (int j = 0; j < M; ++j) {
      const double kind = u(engine);
      // Clipped members put their critical theta = level / mean on the grid.
      if (kind < 0.6) {
        const double theta = static_cast<double>(gridIndex(engine)) / (points - 1);
        means(j) = level / theta;
        while (theta * means(j) > level) means(j) = std::nextafter(means(j), 0.0);
      } else if (kind < 0.9) {
        means(j) = level * u(engine);
      } else {
        means(j) = 0.0;
      }
      dev(j) = 3.0 * u(engine);
    }
    double brute = 0.0;
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < points; ++k) {
        const double theta = static_cast<double>(k) / (points - 1);
        if (theta * means(j) <= level) brute = std::max(brute, theta * dev(j));
      }
    worst = std::max(worst, std::abs(localized_sup_starhull({means, dev, level}) - brute));
  }
  return {worst <= 1e-10, "max |closed form - grid| over 100 classes = " + fmt("%.3g", worst) + " (tol 1e-10)"};
}

Outcome fixed_point_algebra() {
  const double tol = 1e-10;
  const double a = fixed_point_lambda([](double l) { return std::sqrt(l); }, 0.4, 1.0, tol);
  const double b = fixed_point_lambda([](double) { return 1.0; }, 0.4, 1.0, tol);
  return {std::abs(a - 100.0) <= 1e-6 && std::abs(b - 10.0) <= 1e-6,
          "sqrt -> " + fmt("%.12g", a) + ", constant -> " + fmt("%.12g", b) + " (tol 1e-6)"};
}

struct Grid {
  double minimum = std::numeric_limits<double>::infinity();
  double resolution = 0.0;
};

Grid grid_search(const std::function<double(double, double)>& f) {
  const int points = 400;
  std::vector<double> v(static_cast<std::size_t>(points) * points);
  auto at = [&](int a, int b) -> double& { return v[static_cast<std::size_t>(a) * points + b]; };
  for (int a = 0; a < points; ++a)
    for (int b = 0; b < points; ++b)
      at(a, b) = f(-3.0 + 6.0 * a / (points - 1), -3.0 + 6.0 * b / (points - 1));
  Grid g;
  for (int a = 0; a < points; ++a)
    for (int b = 0; b < points; ++b) {
      g.minimum = std::min(g.minimum, at(a, b));
      if (a + 1 < points) g.resolution = std::max(g.resolution, std::abs(at(a + 1, b) - at(a, b)));
      if (b + 1 < points) g.resolution = std::max(g.resolution, std::abs(at(a, b + 1) - at(a, b)));
    }
  return g;
}

Eigen::VectorXd sort_threshold_projection(const Eigen::VectorXd& v, double r) {
  if (v.lpNorm<1>() <= r) return v;
  std::vector<double> u(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) u[static_cast<std::size_t>(i)] = std::abs(v(i));
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - r) / static_cast<double>(k + 1);
    if (u[k] > t) theta = t;
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = std::copysign(std::max(std::abs(v(i)) - theta, 0.0), v(i));
  return out;
}

Outcome solver_oracle() {
  Engine engine = make_engine(1004);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double tol = 1e-8;
  bool ok = true;
  double worstExcess = 0.0;  // solver objective above the grid minimum
  double worstSlack = 0.0;   // (grid minimum - solver) / (tol + resolution)
  for (int instance = 0; instance < 50; ++instance) {
    const long n = 20;
    Eigen::MatrixXd X(n, 2);
    for (Eigen::Index i = 0; i < X.size(); ++i) X(i) = g(engine);
    const Eigen::VectorXd beta = vec2(3.0 * u(engine) - 1.5, 3.0 * u(engine) - 1.5);
    Eigen::VectorXd y = X * beta;
    for (long i = 0; i < n; ++i) y(i) += 0.5 * g(engine);
    const SampleD sample(X, y);
    const double kappa = 20.0 * u(engine);
    const double lambda1 = 2.0 * u(engine);
    auto risk = [&](const Eigen::VectorXd& b) { return (y - X * b).squaredNorm() / n; };

    const RermSolution<double> sq = solve_square_lasso(sample, kappa, tol);
    const Grid gs = grid_search([&](double a, double b) {
      const Eigen::VectorXd v = vec2(a, b);
      return risk(v) + kappa * std::pow(v.lpNorm<1>(), 2) / n;
    });
    const Eigen::VectorXd la = solve_lasso(sample, lambda1, tol);
    const double laObjective = risk(la) + lambda1 * la.lpNorm<1>();
    const Grid gl = grid_search([&](double a, double b) {
      const Eigen::VectorXd v = vec2(a, b);
      return risk(v) + lambda1 * v.lpNorm<1>();
    });
    for (auto [obj, grid, inside] : {std::tuple{sq.objective, gs, sq.beta.lpNorm<Eigen::Infinity>() <= 3.0},
                                     std::tuple{laObjective, gl, la.lpNorm<Eigen::Infinity>() <= 3.0}}) {
      worstExcess = std::max(worstExcess, obj - grid.minimum);
      worstSlack = std::max(worstSlack, (grid.minimum - obj) / (tol + grid.resolution));
      ok = ok && inside && obj <= grid.minimum + tol && grid.minimum - obj <= tol + grid.resolution;
    }
  }

  double worstProjection = 0.0;
  std::uniform_int_distribution<int> size(1, 40);
  for (int k = 0; k < 1000; ++k) {
    Eigen::VectorXd v(size(engine));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 3.0 * g(engine);
    const double r = 1.5 * u(engine) * v.lpNorm<1>();
    worstProjection = std::max(
        worstProjection, (project_l1_ball(v, r) - sort_threshold_projection(v, r)).lpNorm<Eigen::Infinity>());
  }
  ok = ok && worstProjection <= 1e-12;
  return {ok, "100 grid comparisons: max solver excess over grid " + fmt("%.3g", worstExcess) +
                  ", max (grid gap)/(tol+resolution) " + fmt("%.3g", worstSlack) +
                  "; projection vs sort oracle on 1000 vectors max diff " + fmt("%.3g", worstProjection) +
                  " (tol 1e-12)"};
}

Outcome rate_gap() {
  const ScenarioConfig c = shipped("finite_gap.json");
  const ScenarioResult r = run_finite_gap(c, default_workers());
  if (!r.exactFit || !r.nonexactFit) return {false, "fits unavailable"};
  const RateFit& e = *r.exactFit;
  const RateFit& ne = *r.nonexactFit;
  long floored = 0;
  for (const SummaryRow& s : r.summary) floored += s.flooredCount;
  const bool exactOk = e.slope >= -0.65 && e.slope <= -0.35 && e.rSquared >= 0.85;
  const bool nonexactOk = ne.slope <= -0.85 && ne.rSquared >= 0.85;
  return {exactOk && nonexactOk,
          "exact slope " + fmt("%.4f", e.slope) + " R2 " + fmt("%.4f", e.rSquared) +
              (exactOk ? " [ok]" : " [miss]") + "; nonexact slope " + fmt("%.4f", ne.slope) + " R2 " +
              fmt("%.4f", ne.rSquared) + (nonexactOk ? " [ok]" : " [miss]") + "; floored " +
              std::to_string(floored) + "/" + std::to_string(r.rows.size())};
}

Outcome isomorphy_frequency() {
  const ScenarioConfig c = shipped("isomorphy.json");
  const ScenarioResult r = run_isomorphy(c, default_workers());
  const double threshold = 1.0 - 4.0 * std::exp(-c.x) - 0.02;
  bool ok = c.x == 2.0 && c.replications == 2000;
  std::string detail;
  for (const SummaryRow& s : r.summary) {
    ok = ok && *s.eventFrequency >= threshold;
    detail += "n=" + std::to_string(s.n) + " freq " + fmt("%.4f", *s.eventFrequency) + "; ";
  }
  return {ok, detail + "threshold " + fmt("%.4f", threshold)};
}

Outcome square_lasso_rate() {
  const ScenarioConfig c = shipped("square_lasso.json");
  const ScenarioResult r = run_square_lasso(c, default_workers());
  double minSatisfied = 1.0;
  for (const SummaryRow& s : r.summary) minSatisfied = std::min(minSatisfied, s.satisfiedFrequency);
  if (!r.nonexactFit) return {false, "nonexact fit unavailable (fewer than 3 positive means)"};
  const RateFit& f = *r.nonexactFit;
  const bool slopeOk = f.slope <= -0.8 && f.rSquared >= 0.9;
  const bool satOk = minSatisfied >= 0.9;
  return {slopeOk && satOk, "nonexact slope " + fmt("%.4f", f.slope) + " R2 " + fmt("%.4f", f.rSquared) +
                                (slopeOk ? " [ok]" : " [miss]") + "; min satisfaction frequency " +
                                fmt("%.4f", minSatisfied) + (satOk ? " [ok]" : " [miss]")};
}

Outcome bernstein_universality() {
  Engine engine = make_engine(1008);
  std::uniform_int_distribution<int> size(2, 2000);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::exponential_distribution<double> ex(1.0);
  std::normal_distribution<double> g;
  int failures = 0;
  for (int k = 0; k < 1000; ++k) {
    Eigen::VectorXd x(size(engine));
    const double scale = std::exp(4.0 * u(engine) - 2.0);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      switch (k % 3) {
        case 0: x(i) = scale * ex(engine); break;
        case 1: x(i) = scale * u(engine); break;
        default: x(i) = scale * std::abs(g(engine)); break;
      }
    }
    const double psi1 = psi_alpha_norm(x, 1.0).value;
    if (!bernstein_verify(x, psi1, static_cast<double>(x.size()))) ++failures;
  }
  return {failures == 0, std::to_string(1000 - failures) + "/1000 datasets verified"};
}

Outcome determinism() {
  std::vector<std::string> broken;
  for (const char* name : {"finite_gap.json", "isomorphy.json", "square_lasso.json", "lq_rerm.json"}) {
    ScenarioConfig c = shipped(name);
    // Shortened runs keep the check quick; the seed streams are those of the full runs.
    c.nGrid.resize(std::min<std::size_t>(c.nGrid.size(), 3));
    c.replications = std::min<long>(c.replications, 16);
    c.lambdaReplications = std::min<long>(c.lambdaReplications, 100);
    if (c.scenario == Scenario::SquareLasso || c.scenario == Scenario::LqRerm) c.testSize = 20000;
    auto text = [&](unsigned workers) {
      std::ostringstream out;
      write_rows_csv(out, run_scenario(c, workers));
      return out.str();
    };
    const std::string reference = text(1);
    if (text(1) != reference || text(8) != reference || text(8) != reference) broken.push_back(name);
  }
  std::string detail = broken.empty() ? "rows.csv identical across repeats at 1 and 8 workers for all 4 scenarios"
                                      : "differences in:";
  for (const auto& b : broken) detail += " " + b;
  return {broken.empty(), detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limitSeconds;  // 0: no runtime bound
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria{
      {1, "psi1 closed form", 1.0, psi_closed_form},
      {2, "localization oracle equivalence", 10.0, localization_oracle},
      {3, "fixed-point algebra", 0.0, fixed_point_algebra},
      {4, "solver oracle equivalence", 30.0, solver_oracle},
      {5, "rate-gap reproduction", 120.0, rate_gap},
      {6, "isomorphy frequency", 120.0, isomorphy_frequency},
      {7, "square LASSO rate", 300.0, square_lasso_rate},
      {8, "Bernstein condition universality", 10.0, bernstein_universality},
      {9, "determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool inTime = c.limitSeconds == 0.0 || seconds < c.limitSeconds;
    const bool pass = o.pass && inTime;
    if (!pass) ++failed;
    std::string timing = fmt("%.2fs", seconds);
    if (c.limitSeconds > 0.0) timing += fmt(" of %.0fs", c.limitSeconds) + (inTime ? "" : " [over limit]");
    std::printf("AC%d %s %s: %s (%s)\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
