#include "oraclebench/report_io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace oraclebench {
namespace {

std::string optional_real(const std::optional<double>& value) {
  return value ? format_real(*value) : std::string();
}

}  // namespace

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_rows_csv(std::ostream& out, const ScenarioResult& result) {
  const std::string scenario = to_string(result.scenario);
  out << "scenario,n,replication,achievedRisk,oracleRisk,slackExact,slackNonexact,budget,"
         "satisfied\n";
  for (const OracleReport& r : result.rows) {
    out << scenario << ',' << r.n << ',' << r.replication << ',' << format_real(r.achievedRisk)
        << ',' << format_real(r.oracleRisk) << ',' << format_real(r.slackExact) << ','
        << format_real(r.slackNonexact) << ',' << format_real(r.residualBudget) << ','
        << (r.satisfied ? "true" : "false") << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ScenarioResult& result) {
  const std::string scenario = to_string(result.scenario);
  out << "scenario,n,replications,meanAchievedRisk,meanOracleRisk,meanSlackExact,"
         "stderrSlackExact,meanSlackNonexact,stderrSlackNonexact,flooredCount,meanBudget,"
         "satisfiedFrequency,eventFrequency,eventTarget,residual,residualLow,residualHigh,"
         "exactSlope,exactRSquared,nonexactSlope,nonexactRSquared\n";
  auto fit_fields = [](const std::optional<RateFit>& fit) {
    return fit ? format_real(fit->slope) + ',' + format_real(fit->rSquared) : std::string(",");
  };
  const std::string fits = fit_fields(result.exactFit) + ',' + fit_fields(result.nonexactFit);
  for (const SummaryRow& s : result.summary) {
    out << scenario << ',' << s.n << ',' << s.replications << ',' << format_real(s.meanAchievedRisk)
        << ',' << format_real(s.meanOracleRisk) << ',' << format_real(s.meanSlackExact) << ','
        << format_real(s.stderrSlackExact) << ',' << format_real(s.meanSlackNonexact) << ','
        << format_real(s.stderrSlackNonexact) << ',' << s.flooredCount << ','
        << format_real(s.meanBudget) << ',' << format_real(s.satisfiedFrequency) << ','
        << optional_real(s.eventFrequency) << ',' << optional_real(s.eventTarget) << ','
        << optional_real(s.residual) << ',' << optional_real(s.residualLow) << ','
        << optional_real(s.residualHigh) << ',' << fits << '\n';
  }
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  return {{"configPath", m.configPath},   {"outputDir", m.outputDir},
          {"toolVersion", m.toolVersion}, {"masterSeed", m.masterSeed},
          {"startedAt", m.startedAt},     {"finishedAt", m.finishedAt},
          {"workers", m.workers},         {"config", m.resolvedConfig}};
}

std::string utc_timestamp() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const std::time_t seconds = system_clock::to_time_t(now);
  const auto millis = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", utc.tm_year + 1900,
                utc.tm_mon + 1, utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec,
                static_cast<int>(millis));
  return buffer;
}

}  // namespace oraclebench
