#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "thml/gcd_energy.hpp"
#include "thml/mollifier.hpp"
#include "thml/sieve_sets.hpp"
#include "thml/theta.hpp"

namespace thml {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "0.1.0";

/// Reals are written with 17 significant digits.
std::string format_real(double value);

using Cell = std::variant<std::string, double, long long, unsigned long long>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void write_csv(std::ostream& out, const Table& table);
nlohmann::json table_to_json(const Table& table);

/// Whitespace-delimited columns with a "#"-prefixed header; `columns`
/// selects and orders a subset (all columns when empty).
void write_plot_data(std::ostream& out, const Table& table, const std::vector<std::string>& columns = {});
void emit_plot_data(const Table& table, const std::filesystem::path& path,
                    const std::vector<std::string>& columns = {});

/// Write to path.tmp then rename over path.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

nlohmann::json to_json(const MomentReport& report);
MomentReport moment_report_from_json(const nlohmann::json& j);
Table moment_table(const std::vector<MomentReport>& reports);

Table theta_table(const std::vector<ThetaValue>& values);
Table theorem1_table(const std::vector<Theorem1Row>& rows);
Table cancellation_table(u64 p, const std::vector<CancellationRow>& rows);
Table brun_table(u64 upper, const std::vector<BrunRow>& rows);
Table frontier_table(u64 upper, const std::vector<FrontierRow>& rows);
Table energy_table(const std::vector<EnergyReport>& reports);

nlohmann::json to_json(const EnergyReport& report);

struct ResultEnvelope {
  nlohmann::json config;
  std::string timestamp;
  std::string code_version = kCodeVersion;
  int schema_version = kSchemaVersion;
  nlohmann::json payload;
  long long wall_time_ms = 0;
  bool complete = true;  // false when results are partial (exit code 1)

  friend bool operator==(const ResultEnvelope&, const ResultEnvelope&) = default;
};

nlohmann::json to_json(const ResultEnvelope& envelope);
ResultEnvelope envelope_from_json(const nlohmann::json& j);

/// UTC, ISO 8601 to the second.
std::string utc_timestamp();

}  // namespace thml
