#include "oraclebench/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>

#include "oraclebench/complexity.hpp"
#include "oraclebench/concentration.hpp"
#include "oraclebench/parallel.hpp"
#include "oraclebench/residuals.hpp"
#include "oraclebench/rng.hpp"
#include "oraclebench/solvers.hpp"

namespace oraclebench {
namespace {

// Stream tags. SquareLasso and LqRerm share theirs so that the q = 2 paths coincide.
constexpr std::uint64_t kTagFiniteGap = 1;
constexpr std::uint64_t kTagIsomorphyEvent = 2;
constexpr std::uint64_t kTagIsomorphyLambda = 3;
constexpr std::uint64_t kTagIsomorphyEnvelope = 4;
constexpr std::uint64_t kTagIsomorphyPilot = 5;
constexpr std::uint64_t kTagLinearSample = 6;
constexpr std::uint64_t kTagLinearTest = 7;
constexpr std::uint64_t kTagLinearPilot = 8;

constexpr long kMaxTestSize = 1000000;
constexpr long kMaxPilotSize = 20000;

void require_scenario(const ScenarioConfig& config, Scenario expected, const char* where) {
  if (config.scenario != expected)
    throw InvalidInput(std::string(where) + ": scenario must be " + to_string(expected) + ", got " +
                       to_string(config.scenario));
}

struct MeanAndError {
  double mean = 0.0;
  double standardError = 0.0;
};

MeanAndError mean_and_error(const std::vector<double>& values) {
  MeanAndError out;
  if (values.empty()) return out;
  const double m = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / m;
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.standardError = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  }
  return out;
}

SummaryRow summarize(long n, std::span<const OracleReport> rows, double floor) {
  SummaryRow s;
  s.n = n;
  s.replications = static_cast<long>(rows.size());
  std::vector<double> achieved, oracle, exact, nonexact, budget;
  long satisfied = 0;
  for (const OracleReport& r : rows) {
    achieved.push_back(r.achievedRisk);
    oracle.push_back(r.oracleRisk);
    exact.push_back(r.slackExact);
    if (r.slackNonexact <= floor) ++s.flooredCount;
    nonexact.push_back(std::max(r.slackNonexact, floor));
    budget.push_back(r.residualBudget);
    if (r.satisfied) ++satisfied;
  }
  s.meanAchievedRisk = mean_and_error(achieved).mean;
  s.meanOracleRisk = mean_and_error(oracle).mean;
  const MeanAndError e = mean_and_error(exact);
  s.meanSlackExact = e.mean;
  s.stderrSlackExact = e.standardError;
  const MeanAndError ne = mean_and_error(nonexact);
  s.meanSlackNonexact = ne.mean;
  s.stderrSlackNonexact = ne.standardError;
  s.meanBudget = mean_and_error(budget).mean;
  s.satisfiedFrequency = rows.empty() ? 0.0 : static_cast<double>(satisfied) / rows.size();
  return s;
}

std::optional<RateFit> try_fit(const std::vector<std::pair<double, double>>& points) {
  const auto usable = std::count_if(points.begin(), points.end(), [](const auto& p) {
    return p.first > 0.0 && p.second > 0.0 && std::isfinite(p.second);
  });
  if (usable < 3) return std::nullopt;
  return rate_fit(points);
}

void attach_fits(ScenarioResult& result) {
  std::vector<std::pair<double, double>> exact, nonexact;
  for (const SummaryRow& s : result.summary) {
    exact.emplace_back(static_cast<double>(s.n), s.meanSlackExact);
    nonexact.emplace_back(static_cast<double>(s.n), s.meanSlackNonexact);
  }
  result.exactFit = try_fit(exact);
  result.nonexactFit = try_fit(nonexact);
}

// ---------------------------------------------------------------- isomorphy

struct CellDraw {
  std::vector<long> cells;
  Eigen::VectorXd labels;
};

CellDraw draw_cells(const CellModel& cm, long n, Engine& engine) {
  const long m = static_cast<long>(cm.model.predictions().cols());
  std::uniform_int_distribution<long> cell(0, m - 1);
  std::bernoulli_distribution flip(cm.labelNoise);
  CellDraw out;
  out.cells.resize(static_cast<std::size_t>(n));
  out.labels.resize(n);
  for (long i = 0; i < n; ++i) {
    const long c = cell(engine);
    out.cells[static_cast<std::size_t>(i)] = c;
    const double t = cm.target(c);
    out.labels(i) = flip(engine) ? -t : t;
  }
  return out;
}

// loss(j, i) = l_{f_j}(Z_i).
Eigen::MatrixXd cell_losses(const CellModel& cm, const CellDraw& draw) {
  const LossSpec loss = LossSpec::zero_one();
  const auto& preds = cm.model.predictions();
  Eigen::MatrixXd out(preds.rows(), static_cast<Eigen::Index>(draw.cells.size()));
  for (Eigen::Index i = 0; i < out.cols(); ++i)
    for (Eigen::Index j = 0; j < out.rows(); ++j)
      out(j, i) = loss(preds(j, draw.cells[static_cast<std::size_t>(i)]), draw.labels(i));
  return out;
}

Eigen::MatrixXd predictions_on(const CellModel& cm, const CellDraw& draw) {
  const auto& preds = cm.model.predictions();
  Eigen::MatrixXd out(preds.rows(), static_cast<Eigen::Index>(draw.cells.size()));
  for (Eigen::Index i = 0; i < out.cols(); ++i)
    out.col(i) = preds.col(draw.cells[static_cast<std::size_t>(i)]);
  return out;
}

// ------------------------------------------------------------------ linear

struct LinearSetup {
  double q = 2.0;
  bool boundedDesign = false;
  Eigen::VectorXd betaStar;
  double Kd = 1.0;
  Eigen::MatrixXd testX;
  Eigen::VectorXd testY;
  double oracleRisk = 0.0;
};

Sample<double> draw_linear(const ScenarioConfig& config, const LinearSetup& setup, long n,
                           Engine& engine) {
  const long d = config.d;
  Eigen::MatrixXd X(n, d);
  if (setup.boundedDesign) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (long j = 0; j < d; ++j)
      for (long i = 0; i < n; ++i) X(i, j) = u(engine);
  } else {
    std::normal_distribution<double> g(0.0, 1.0);
    for (long j = 0; j < d; ++j)
      for (long i = 0; i < n; ++i) X(i, j) = g(engine);
  }
  Eigen::VectorXd noise(n);
  const double p = config.noise.parameter;
  switch (config.noise.family) {
    case NoiseFamily::Gaussian: {
      std::normal_distribution<double> g(0.0, 1.0);
      for (long i = 0; i < n; ++i) noise(i) = p * g(engine);
      break;
    }
    case NoiseFamily::Bounded: {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (long i = 0; i < n; ++i) noise(i) = p * u(engine);
      break;
    }
    case NoiseFamily::Exponential:
      throw ConfigError("noise", "Exponential noise violates the psi_q envelope assumption");
  }
  Eigen::VectorXd y = X * setup.betaStar + noise;
  return Sample<double>(std::move(X), std::move(y));
}

double lq_test_risk(const LinearSetup& setup, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd r = setup.testY - setup.testX * beta;
  if (setup.q == 2.0) return r.squaredNorm() / static_cast<double>(r.size());
  return r.array().abs().pow(setup.q).mean();
}

LinearSetup make_linear_setup(const ScenarioConfig& config) {
  LinearSetup setup;
  setup.q = config.scenario == Scenario::SquareLasso ? 2.0 : config.q;
  setup.boundedDesign = setup.q > 2.0;
  setup.betaStar = Eigen::VectorXd::Zero(config.d);
  setup.betaStar.head(config.betaStar.supportSize).setConstant(config.betaStar.magnitude);

  if (auto it = config.constants.find("Kd"); it != config.constants.end()) {
    setup.Kd = it->second;
  } else {
    const long pilotSize = std::min(config.effective_test_size(), kMaxPilotSize);
    Engine engine = make_engine(derive_seed(config.masterSeed, kTagLinearPilot, 0, 0));
    const Sample<double> pilot = draw_linear(config, setup, pilotSize, engine);
    const Eigen::VectorXd rowMax = pilot.design().cwiseAbs().rowwise().maxCoeff();
    setup.Kd = std::max(psi_alpha_norm(pilot.response(), setup.q).value,
                        psi_alpha_norm(rowMax, setup.q).value);
  }
  detail::require(setup.Kd > 0.0, "Kd must be > 0");

  Engine engine = make_engine(derive_seed(config.masterSeed, kTagLinearTest, 0, 0));
  Sample<double> test = draw_linear(config, setup, config.effective_test_size(), engine);
  setup.testX = test.design();
  setup.testY = test.response();
  setup.oracleRisk = lq_test_risk(setup, setup.betaStar);
  return setup;
}

ScenarioResult run_linear(const ScenarioConfig& config, Scenario tag, unsigned workers) {
  validate(config);
  const LinearSetup setup = make_linear_setup(config);
  const double q = setup.q;
  const double eps = config.epsilon;
  const double c0 = config.constant("c0");
  const double c1 = config.constant("c1");
  const double betaNorm = setup.betaStar.lpNorm<1>();

  ScenarioResult result;
  result.scenario = tag;
  for (long n : config.nGrid) {
    const double nd = static_cast<double>(n);
    const double d = static_cast<double>(config.d);
    const double kappa = theorem_c_penalty(nd, d, config.x, q, setup.Kd, c0) / (eps * eps);
    const double eta = theorem_c_penalty(nd, d, config.x, q, setup.Kd, c1);
    const double budget = eta * (1.0 + std::pow(betaNorm, q)) / (nd * eps * eps);

    std::vector<OracleReport> reports(static_cast<std::size_t>(config.replications));
    parallel_for(reports.size(), workers, [&](std::size_t i) {
      Engine engine = make_engine(derive_seed(config.masterSeed, kTagLinearSample,
                                              static_cast<std::uint64_t>(n), i));
      const Sample<double> sample = draw_linear(config, setup, n, engine);
      const RermSolution<double> sol = q == 2.0 ? solve_square_lasso(sample, kappa)
                                                : solve_lq_rerm(sample, q, kappa / nd);
      reports[i] = make_report(n, static_cast<long>(i), lq_test_risk(setup, sol.beta),
                               setup.oracleRisk, eps, budget);
    });
    result.summary.push_back(summarize(n, reports, config.floor));
    result.rows.insert(result.rows.end(), reports.begin(), reports.end());
  }
  attach_fits(result);
  return result;
}

}  // namespace

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::FiniteGap: return "FiniteGap";
    case Scenario::Isomorphy: return "Isomorphy";
    case Scenario::SquareLasso: return "SquareLasso";
    case Scenario::LqRerm: return "LqRerm";
  }
  return "?";
}

std::string to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::Gaussian: return "Gaussian";
    case NoiseFamily::Bounded: return "Bounded";
    case NoiseFamily::Exponential: return "Exponential";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(const std::string& name) {
  for (Scenario s : {Scenario::FiniteGap, Scenario::Isomorphy, Scenario::SquareLasso,
                     Scenario::LqRerm})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

std::optional<NoiseFamily> parse_noise_family(const std::string& name) {
  for (NoiseFamily f : {NoiseFamily::Gaussian, NoiseFamily::Bounded, NoiseFamily::Exponential})
    if (to_string(f) == name) return f;
  return std::nullopt;
}

double ScenarioConfig::constant(const std::string& name) const {
  const auto it = constants.find(name);
  return it == constants.end() ? 1.0 : it->second;
}

long ScenarioConfig::effective_test_size() const {
  if (testSize > 0) return testSize;
  const long largest = nGrid.empty() ? 1 : nGrid.back();
  return std::min(20 * largest, kMaxTestSize);
}

void validate(const ScenarioConfig& c) {
  if (c.nGrid.empty()) throw ConfigError("nGrid", "must be nonempty");
  for (std::size_t i = 0; i < c.nGrid.size(); ++i) {
    if (c.nGrid[i] < 1) throw ConfigError("nGrid", "sample sizes must be >= 1");
    if (i > 0 && c.nGrid[i] <= c.nGrid[i - 1])
      throw ConfigError("nGrid", "must be strictly increasing");
  }
  if (c.replications < 1) throw ConfigError("replications", "must be >= 1");
  if (!(c.epsilon > 0.0 && c.epsilon < 0.5)) throw ConfigError("epsilon", "must lie in (0, 1/2)");
  if (!(c.x > 0.0) || !std::isfinite(c.x)) throw ConfigError("x", "must be > 0");
  if (c.d < 1) throw ConfigError("d", "must be >= 1");
  if (!(c.q >= 2.0) || !std::isfinite(c.q)) throw ConfigError("q", "must be >= 2");
  if (!(c.floor > 0.0)) throw ConfigError("floor", "must be > 0");
  if (c.testSize != 0 && c.testSize < 2) throw ConfigError("testSize", "must be >= 2");
  if (c.lambdaReplications < 2) throw ConfigError("lambdaReplications", "must be >= 2");
  if (!(c.rhoScale >= 0.0) || !std::isfinite(c.rhoScale))
    throw ConfigError("rhoScale", "must be >= 0");
  if (!(c.gamma >= 0.0) || !std::isfinite(c.gamma)) throw ConfigError("gamma", "must be >= 0");
  if (c.cells < 1) throw ConfigError("cells", "must be >= 1");
  if (c.modelSize < 1 || c.modelSize > c.cells + 1)
    throw ConfigError("modelSize", "must lie in [1, cells + 1]");
  if (!(c.labelNoise >= 0.0 && c.labelNoise <= 0.5))
    throw ConfigError("labelNoise", "must lie in [0, 1/2]");
  if (!(c.noise.parameter >= 0.0) || !std::isfinite(c.noise.parameter))
    throw ConfigError("noise", "parameter must be >= 0");
  if (c.noise.family == NoiseFamily::Exponential && !(c.noise.parameter > 0.0))
    throw ConfigError("noise", "Exponential rate must be > 0");
  if (c.betaStar.supportSize < 0 || c.betaStar.supportSize > c.d)
    throw ConfigError("betaStar", "supportSize must lie in [0, d]");
  if (!std::isfinite(c.betaStar.magnitude)) throw ConfigError("betaStar", "magnitude must be finite");
  for (const auto& [name, value] : c.constants) {
    if (!(value >= 0.0) || !std::isfinite(value))
      throw ConfigError("constants." + name, "must be finite and >= 0");
  }
  if (auto it = c.constants.find("Kd"); it != c.constants.end() && !(it->second > 0.0))
    throw ConfigError("constants.Kd", "must be > 0");

  const bool linear = c.scenario == Scenario::SquareLasso || c.scenario == Scenario::LqRerm;
  if (linear) {
    if (c.d < 2) throw ConfigError("d", "must be >= 2 for the linear scenarios");
    if (c.nGrid.front() < 2) throw ConfigError("nGrid", "sample sizes must be >= 2");
    if (c.noise.family == NoiseFamily::Exponential)
      throw ConfigError("noise", "Exponential noise violates the psi_q envelope assumption");
  }
  if (c.scenario == Scenario::SquareLasso && c.q != 2.0)
    throw ConfigError("q", "SquareLasso requires q = 2");
  if (c.scenario == Scenario::LqRerm && c.q > 2.0 && c.noise.family != NoiseFamily::Bounded)
    throw ConfigError("noise", "q > 2 requires Bounded noise");
}

OracleReport make_report(long n, long replication, double achievedRisk, double oracleRisk,
                         double epsilon, double residualBudget) {
  OracleReport r;
  r.n = n;
  r.replication = replication;
  r.achievedRisk = achievedRisk;
  r.oracleRisk = oracleRisk;
  r.epsilon = epsilon;
  r.residualBudget = residualBudget;
  r.slackExact = achievedRisk - oracleRisk;
  r.slackNonexact = achievedRisk - (1.0 + 3.0 * epsilon) * oracleRisk;
  r.satisfied = r.slackNonexact <= residualBudget;
  return r;
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& points) {
  RateFit fit;
  std::vector<double> lx, ly;
  for (const auto& [n, v] : points) {
    if (n > 0.0 && v > 0.0 && std::isfinite(n) && std::isfinite(v)) {
      fit.points.emplace_back(n, v);
      lx.push_back(std::log(n));
      ly.push_back(std::log(v));
    }
  }
  detail::require(lx.size() >= 3, "rate_fit: need at least 3 points with positive values");
  const double m = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  detail::require(sxx > 0.0, "rate_fit: sample sizes must not all coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ssr += e * e;
  }
  // A flat series is fitted perfectly by slope 0.
  const double r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  fit.rSquared = std::clamp(r2, 0.0, 1.0);
  return fit;
}

CellModel default_cell_model(long modelSize, long cells, double labelNoise) {
  detail::require(cells >= 1 && modelSize >= 1 && modelSize <= cells + 1,
                  "default_cell_model: need 1 <= modelSize <= cells + 1");
  detail::require(labelNoise >= 0.0 && labelNoise <= 0.5,
                  "default_cell_model: labelNoise must lie in [0, 1/2]");
  Eigen::VectorXd target = Eigen::VectorXd::Ones(cells);
  Eigen::MatrixXd preds = Eigen::MatrixXd::Ones(modelSize, cells);
  Eigen::VectorXd risks(modelSize);
  for (long j = 0; j < modelSize; ++j) {
    preds.row(j).head(j).setConstant(-1.0);
    const double wrong = static_cast<double>(j) / static_cast<double>(cells);
    risks(j) = wrong * (1.0 - labelNoise) + (1.0 - wrong) * labelNoise;
  }
  return CellModel{FiniteModel<double>(std::move(preds), std::move(risks)), std::move(target),
                   labelNoise};
}

ScenarioResult run_finite_gap(const ScenarioConfig& config, unsigned workers) {
  require_scenario(config, Scenario::FiniteGap, "run_finite_gap");
  validate(config);
  const LossSpec loss = LossSpec::zero_one();
  const double eps = config.epsilon;
  const double c0 = config.constant("c0");
  constexpr long M = 2;

  ScenarioResult result;
  result.scenario = Scenario::FiniteGap;
  for (long n : config.nGrid) {
    const double nd = static_cast<double>(n);
    const double delta = std::min(config.gamma / std::sqrt(nd), 1.0);
    Eigen::VectorXd risks(M);
    risks << (1.0 - delta) / 2.0, (1.0 + delta) / 2.0;
    Eigen::MatrixXd preds(M, n);
    preds.row(0).setOnes();
    preds.row(1).setConstant(-1.0);
    const FiniteModel<double> model(std::move(preds), risks);
    const Eigen::MatrixXd design = Eigen::MatrixXd::Ones(n, 1);
    const double budget = c0 * (config.x + std::log(static_cast<double>(M))) / (eps * nd);
    const double oracle = risks.minCoeff();

    std::vector<OracleReport> reports(static_cast<std::size_t>(config.replications));
    parallel_for(reports.size(), workers, [&](std::size_t i) {
      Engine engine = make_engine(derive_seed(config.masterSeed, kTagFiniteGap,
                                              static_cast<std::uint64_t>(n), i));
      std::bernoulli_distribution positive((1.0 + delta) / 2.0);
      Eigen::VectorXd y(n);
      for (long k = 0; k < n; ++k) y(k) = positive(engine) ? 1.0 : -1.0;
      const Sample<double> sample(design, std::move(y));
      const Eigen::Index chosen = erm_finite(model, sample, loss);
      reports[i] = make_report(n, static_cast<long>(i), risks(chosen), oracle, eps, budget);
    });
    result.summary.push_back(summarize(n, reports, config.floor));
    result.rows.insert(result.rows.end(), reports.begin(), reports.end());
  }
  attach_fits(result);
  return result;
}

ScenarioResult run_isomorphy(const ScenarioConfig& config, unsigned workers) {
  return run_isomorphy(config,
                       default_cell_model(config.modelSize, config.cells, config.labelNoise),
                       workers);
}

ScenarioResult run_isomorphy(const ScenarioConfig& config, const CellModel& cm,
                             unsigned workers) {
  require_scenario(config, Scenario::Isomorphy, "run_isomorphy");
  validate(config);
  if (!cm.model.trueRisks())
    throw InvalidInput("run_isomorphy: the model must carry trueRisks");
  detail::require(cm.target.size() == cm.model.predictions().cols(),
                  "run_isomorphy: target must have one entry per cell");
  const Eigen::VectorXd& trueRisks = *cm.model.trueRisks();
  const long M = static_cast<long>(cm.model.size());
  const double eps = config.epsilon;
  const double c0 = config.constant("c0");
  const double x = config.x;
  const long pilotReps = config.lambdaReplications;

  // D = max_f |l_f|_psi1 on one large pilot sample.
  double D = 0.0;
  {
    Engine engine = make_engine(derive_seed(config.masterSeed, kTagIsomorphyPilot, 0, 0));
    const Eigen::MatrixXd losses = cell_losses(cm, draw_cells(cm, config.effective_test_size(), engine));
    for (long j = 0; j < M; ++j)
      D = std::max(D, psi_alpha_norm(Eigen::VectorXd(losses.row(j).transpose()), 1.0).value);
  }

  ScenarioResult result;
  result.scenario = Scenario::Isomorphy;
  for (long n : config.nGrid) {
    const auto nu = static_cast<std::uint64_t>(n);
    const ClassSampler sampler = [&](Engine& engine) {
      const Eigen::MatrixXd losses = cell_losses(cm, draw_cells(cm, n, engine));
      return ClassDraw{trueRisks, losses.rowwise().mean()};
    };
    const LocalizedProcess process = LocalizedProcess::sample(
        sampler, pilotReps, derive_seed(config.masterSeed, kTagIsomorphyLambda, nu, 0), workers);
    auto lambda_with = [&](double band) {
      return fixed_point_lambda(
          [&](double level) {
            const RiskEstimate e = process.sup_at(level);
            return std::max(0.0, e.mean + band * e.standard_error);
          },
          eps, 1.0, 1e-10);
    };

    std::vector<std::vector<double>> envelopes(static_cast<std::size_t>(pilotReps));
    parallel_for(envelopes.size(), workers, [&](std::size_t i) {
      Engine engine = make_engine(derive_seed(config.masterSeed, kTagIsomorphyEnvelope, nu, i));
      const Eigen::VectorXd env = cell_losses(cm, draw_cells(cm, n, engine)).colwise().maxCoeff();
      envelopes[i].assign(env.data(), env.data() + env.size());
    });
    const double bn = envelope_bn(std::span<const std::vector<double>>(envelopes));
    const double Bn = bernstein_from_psi1(D, n, c0).bn;
    auto rho_at = [&](double lambdaStar) {
      return config.rhoScale * rho_n_theorem_a(lambdaStar, bn, Bn, eps, x, n, c0).value;
    };
    const double rho = rho_at(lambda_with(0.0));

    std::vector<OracleReport> reports(static_cast<std::size_t>(config.replications));
    std::vector<char> events(reports.size(), 0);
    parallel_for(reports.size(), workers, [&](std::size_t i) {
      Engine engine = make_engine(derive_seed(config.masterSeed, kTagIsomorphyEvent, nu, i));
      const CellDraw draw = draw_cells(cm, n, engine);
      const Eigen::VectorXd empirical = cell_losses(cm, draw).rowwise().mean();
      events[i] = ((trueRisks.array() <= (1.0 + 2.0 * eps) * empirical.array() + rho).all()) ? 1 : 0;
      const FiniteModel<double> onSample(predictions_on(cm, draw));
      const Sample<double> sample(Eigen::MatrixXd::Ones(n, 1), draw.labels);
      const Eigen::Index chosen = erm_finite(onSample, sample, LossSpec::zero_one());
      reports[i] = make_report(n, static_cast<long>(i), trueRisks(chosen), trueRisks.minCoeff(),
                               eps, rho);
    });

    SummaryRow s = summarize(n, reports, config.floor);
    s.eventFrequency =
        static_cast<double>(std::count(events.begin(), events.end(), 1)) / events.size();
    s.eventTarget = 1.0 - 4.0 * std::exp(-x);
    s.residual = rho;
    s.residualLow = rho_at(lambda_with(-2.0));
    s.residualHigh = rho_at(lambda_with(2.0));
    result.summary.push_back(s);
    result.rows.insert(result.rows.end(), reports.begin(), reports.end());
  }
  attach_fits(result);
  return result;
}

ScenarioResult run_square_lasso(const ScenarioConfig& config, unsigned workers) {
  require_scenario(config, Scenario::SquareLasso, "run_square_lasso");
  return run_linear(config, Scenario::SquareLasso, workers);
}

ScenarioResult run_lq_rerm(const ScenarioConfig& config, unsigned workers) {
  require_scenario(config, Scenario::LqRerm, "run_lq_rerm");
  return run_linear(config, Scenario::LqRerm, workers);
}

ScenarioResult run_scenario(const ScenarioConfig& config, unsigned workers) {
  switch (config.scenario) {
    case Scenario::FiniteGap: return run_finite_gap(config, workers);
    case Scenario::Isomorphy: return run_isomorphy(config, workers);
    case Scenario::SquareLasso: return run_square_lasso(config, workers);
    case Scenario::LqRerm: return run_lq_rerm(config, workers);
  }
  throw InvalidInput("run_scenario: unknown scenario");
}

}  // namespace oraclebench
