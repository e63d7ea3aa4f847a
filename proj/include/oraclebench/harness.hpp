#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oraclebench/core_model.hpp"
#include "oraclebench/errors.hpp"

namespace oraclebench {

enum class Scenario { FiniteGap, Isomorphy, SquareLasso, LqRerm };
enum class NoiseFamily { Gaussian, Bounded, Exponential };

std::string to_string(Scenario scenario);
std::string to_string(NoiseFamily family);
std::optional<Scenario> parse_scenario(const std::string& name);
std::optional<NoiseFamily> parse_noise_family(const std::string& name);

/// Gaussian: standard deviation. Bounded: half-width of a centred uniform.
/// Exponential: rate.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::Gaussian;
  double parameter = 1.0;
};

/// beta* has `supportSize` leading coordinates equal to `magnitude`.
struct BetaStarSpec {
  long supportSize = 3;
  double magnitude = 1.0;
};

/// A configuration field failed validation; `field()` names it.
class ConfigError : public InvalidInput {
 public:
  ConfigError(std::string field, const std::string& reason)
      : InvalidInput("invalid field \"" + field + "\": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::FiniteGap;
  std::vector<long> nGrid;
  long d = 50;
  double q = 2.0;
  double epsilon = 0.25;
  double x = 2.0;
  long replications = 100;
  std::uint64_t masterSeed = 0;
  NoiseSpec noise;
  BetaStarSpec betaStar;
  /// c0, K, Kprime, K1, c1, c2, c3 default to 1. "Kd" (optional) fixes the
  /// psi_q envelope of the linear scenarios instead of estimating it.
  std::map<std::string, double> constants;

  double gamma = 1.0;            // FiniteGap: risk gap gamma / sqrt(n)
  double floor = 1e-12;          // positive floor for nonexact slacks in fits
  long testSize = 0;             // 0: 20 max(nGrid), capped at 1e6
  long lambdaReplications = 500; // Monte Carlo draws behind lambda*
  double rhoScale = 1.0;         // Isomorphy: multiplies rho_n
  long modelSize = 10;           // Isomorphy: number of predictors
  long cells = 20;               // Isomorphy: size of the feature space
  double labelNoise = 0.2;       // Isomorphy: label flip probability

  double constant(const std::string& name) const;
  long effective_test_size() const;
};

/// Throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& config);

struct OracleReport {
  long n = 0;
  long replication = 0;
  double achievedRisk = 0.0;
  double oracleRisk = 0.0;
  double epsilon = 0.0;
  double residualBudget = 0.0;
  double slackNonexact = 0.0;
  double slackExact = 0.0;
  bool satisfied = false;
};

OracleReport make_report(long n, long replication, double achievedRisk, double oracleRisk,
                         double epsilon, double residualBudget);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rSquared = 0.0;
  std::vector<std::pair<double, double>> points;
};

/// Least squares of log(value) on log(n) over the points with n, value > 0.
RateFit rate_fit(const std::vector<std::pair<double, double>>& points);

struct SummaryRow {
  long n = 0;
  long replications = 0;
  double meanAchievedRisk = 0.0;
  double meanOracleRisk = 0.0;
  double meanSlackExact = 0.0;
  double stderrSlackExact = 0.0;
  double meanSlackNonexact = 0.0;  // after flooring
  double stderrSlackNonexact = 0.0;
  long flooredCount = 0;
  double meanBudget = 0.0;
  double satisfiedFrequency = 0.0;
  std::optional<double> eventFrequency;
  std::optional<double> eventTarget;
  std::optional<double> residual;
  std::optional<double> residualLow;
  std::optional<double> residualHigh;
};

struct ScenarioResult {
  Scenario scenario = Scenario::FiniteGap;
  std::vector<OracleReport> rows;  // ordered by n, then replication
  std::vector<SummaryRow> summary;
  std::optional<RateFit> exactFit;
  std::optional<RateFit> nonexactFit;
};

/// Finite predictor class over a discrete feature space {0, ..., cells-1}.
/// Row j of `model.predictions()` is f_j on every cell; labels are
/// target(cell) flipped with probability labelNoise.
struct CellModel {
  FiniteModel<double> model;
  Eigen::VectorXd target;
  double labelNoise = 0.0;
};

/// f_j disagrees with the target on its first j cells, so
/// R(f_j) = (j/m)(1 - eta) + (1 - j/m) eta.
CellModel default_cell_model(long modelSize, long cells, double labelNoise);

ScenarioResult run_finite_gap(const ScenarioConfig& config, unsigned workers = 1);
ScenarioResult run_isomorphy(const ScenarioConfig& config, unsigned workers = 1);
ScenarioResult run_isomorphy(const ScenarioConfig& config, const CellModel& model,
                             unsigned workers = 1);
ScenarioResult run_square_lasso(const ScenarioConfig& config, unsigned workers = 1);
ScenarioResult run_lq_rerm(const ScenarioConfig& config, unsigned workers = 1);

/// Dispatches on config.scenario.
ScenarioResult run_scenario(const ScenarioConfig& config, unsigned workers = 1);

}  // namespace oraclebench
