#pragma once

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>

#include "oraclebench/harness.hpp"

namespace oraclebench {

inline constexpr const char* kToolVersion = "0.1.0";

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double value);

/// scenario,n,replication,achievedRisk,oracleRisk,slackExact,slackNonexact,budget,satisfied
void write_rows_csv(std::ostream& out, const ScenarioResult& result);

/// One line per n: means, standard errors, frequencies and the fitted slopes.
/// Fields that do not apply to the scenario are left empty.
void write_summary_csv(std::ostream& out, const ScenarioResult& result);

struct RunManifest {
  std::string configPath;
  std::string outputDir;
  std::string toolVersion = kToolVersion;
  std::uint64_t masterSeed = 0;
  std::string startedAt;
  std::string finishedAt;
  unsigned workers = 1;
  nlohmann::json resolvedConfig;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

/// Current UTC time as an ISO 8601 timestamp with millisecond precision.
std::string utc_timestamp();

}  // namespace oraclebench
