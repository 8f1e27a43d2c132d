#include "thml/report_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace thml {

namespace {

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_real(v);
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json cell_json(const Cell& cell) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, cell);
}

unsigned long long narrow(u128 v) {
  if (v > std::numeric_limits<unsigned long long>::max()) throw std::overflow_error("count exceeds 64 bits");
  return static_cast<unsigned long long>(v);
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_escape(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(row[i]));
    out << '\n';
  }
}

nlohmann::json table_to_json(const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return {{"table", table.name}, {"columns", table.columns}, {"rows", std::move(rows)}};
}

void write_plot_data(std::ostream& out, const Table& table, const std::vector<std::string>& columns) {
  std::vector<std::size_t> picks;
  if (columns.empty()) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) picks.push_back(i);
  } else {
    for (const auto& name : columns) {
      const auto it = std::find(table.columns.begin(), table.columns.end(), name);
      if (it == table.columns.end()) throw std::invalid_argument("plot data: no column named " + name);
      picks.push_back(static_cast<std::size_t>(it - table.columns.begin()));
    }
  }
  out << "# " << table.name << '\n' << '#';
  for (std::size_t i : picks) out << ' ' << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < picks.size(); ++k) out << (k ? " " : "") << cell_text(row[picks[k]]);
    out << '\n';
  }
}

void emit_plot_data(const Table& table, const std::filesystem::path& path, const std::vector<std::string>& columns) {
  std::ostringstream out;
  write_plot_data(out, table, columns);
  write_file_atomically(path, out.str());
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json to_json(const MomentReport& report) {
  nlohmann::json s2k = nlohmann::json::object();
  for (const auto& [k, v] : report.s2k) s2k[std::to_string(k)] = v;
  return {{"p", report.p},
          {"x", report.x},
          {"parity", to_string(report.parity)},
          {"m1", report.m1},
          {"m2", report.m2},
          {"s2k", s2k},
          {"nonvanishing", report.nonvanishing},
          {"undecided", report.undecided},
          {"cs_lower_bound", report.cs_lower_bound}};
}

MomentReport moment_report_from_json(const nlohmann::json& j) {
  MomentReport r;
  r.p = j.at("p").get<u64>();
  r.x = j.at("x").get<double>();
  r.parity = parse_parity(j.at("parity").get<std::string>());
  r.m1 = j.at("m1").get<double>();
  r.m2 = j.at("m2").get<double>();
  for (const auto& [k, v] : j.at("s2k").items()) r.s2k[static_cast<unsigned>(std::stoul(k))] = v.get<double>();
  r.nonvanishing = j.at("nonvanishing").get<std::size_t>();
  r.undecided = j.at("undecided").get<std::size_t>();
  r.cs_lower_bound = j.at("cs_lower_bound").get<double>();
  r.has_mollifier = true;
  return r;
}

Table moment_table(const std::vector<MomentReport>& reports) {
  Table t{"moment_report",
          {"p", "x", "parity", "m1", "m2", "s2", "s4", "nonvanishing", "undecided", "cs_lower_bound",
           "support_size", "m1_closed_residual", "m2_closed_residual"},
          {}};
  for (const auto& r : reports) {
    const auto s = [&](unsigned k) { return r.s2k.count(k) ? r.s2k.at(k) : std::numeric_limits<double>::quiet_NaN(); };
    t.rows.push_back({static_cast<unsigned long long>(r.p), r.x, std::string(to_string(r.parity)), r.m1, r.m2, s(1),
                      s(2), static_cast<unsigned long long>(r.nonvanishing),
                      static_cast<unsigned long long>(r.undecided), r.cs_lower_bound,
                      static_cast<unsigned long long>(r.support_size), r.closed_form_residuals.m1,
                      r.closed_form_residuals.m2});
  }
  return t;
}

Table theta_table(const std::vector<ThetaValue>& values) {
  Table t{"theta", {"j", "parity", "x", "re", "im", "abs", "error_radius", "truncation_n", "precision_bits", "decision"}, {}};
  for (const auto& v : values) {
    t.rows.push_back({static_cast<unsigned long long>(v.j.j), std::string(to_string(v.parity)), v.x, v.value.real(),
                      v.value.imag(), std::abs(v.value), v.error_radius,
                      static_cast<unsigned long long>(v.truncation_n), static_cast<long long>(v.precision_bits),
                      std::string(is_nonzero(v) == Decision::nonzero ? "nonzero" : "undecided")});
  }
  return t;
}

Table theorem1_table(const std::vector<Theorem1Row>& rows) {
  Table t{"theorem1_scan", {"p", "count", "undecided", "cs_lower_bound", "p_over_sqrt_log_p", "normalized"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({static_cast<unsigned long long>(r.p), static_cast<unsigned long long>(r.count),
                      static_cast<unsigned long long>(r.undecided), r.cs_lower_bound, r.scale, r.normalized});
  }
  return t;
}

Table cancellation_table(u64 p, const std::vector<CancellationRow>& rows) {
  Table t{"first_moment_cancellation p=" + std::to_string(p), {"N", "mean_abs", "ratio_sqrt_N"}, {}};
  for (const auto& r : rows) t.rows.push_back({static_cast<unsigned long long>(r.n), r.mean_abs, r.ratio});
  return t;
}

Table brun_table(u64 upper, const std::vector<BrunRow>& rows) {
  Table t{"brun_ratio N=" + std::to_string(upper), {"y", "ratio", "phi", "in_regime"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.y, r.ratio, static_cast<unsigned long long>(r.phi), static_cast<long long>(r.in_regime)});
  }
  return t;
}

Table frontier_table(u64 upper, const std::vector<FrontierRow>& rows) {
  Table t{"energy_frontier N=" + std::to_string(upper),
          {"family", "alpha", "normalized_energy", "y", "size", "gcd_per_element", "ratio_over_n2"},
          {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.family, r.density, r.normalized_energy, r.y, static_cast<unsigned long long>(r.size),
                      r.gcd_per_element, r.ratio_over_n2});
  }
  return t;
}

Table energy_table(const std::vector<EnergyReport>& reports) {
  Table t{"energy_report", {"set", "N", "size", "density", "S", "R", "E_cross", "E_self"}, {}};
  for (const auto& r : reports) {
    t.rows.push_back({r.set_descriptor, static_cast<unsigned long long>(r.upper),
                      static_cast<unsigned long long>(r.size), r.density, r.S, r.R,
                      r.energies_computed ? Cell(to_decimal(r.E_cross)) : Cell(std::string("")),
                      r.energies_computed ? Cell(to_decimal(r.E_self)) : Cell(std::string(""))});
  }
  return t;
}

nlohmann::json to_json(const EnergyReport& r) {
  nlohmann::json j = {{"set", r.set_descriptor}, {"N", r.upper},   {"size", r.size},
                      {"density", r.density},    {"S", r.S},       {"R", r.R}};
  if (r.energies_computed) {
    j["E_cross"] = narrow(r.E_cross);
    j["E_self"] = narrow(r.E_self);
  }
  return j;
}

nlohmann::json to_json(const ResultEnvelope& e) {
  return {{"schema_version", e.schema_version}, {"code_version", e.code_version}, {"timestamp", e.timestamp},
          {"config", e.config},                 {"payload", e.payload},           {"wall_time_ms", e.wall_time_ms},
          {"complete", e.complete}};
}

ResultEnvelope envelope_from_json(const nlohmann::json& j) {
  ResultEnvelope e;
  e.schema_version = j.at("schema_version").get<int>();
  e.code_version = j.at("code_version").get<std::string>();
  e.timestamp = j.at("timestamp").get<std::string>();
  e.config = j.at("config");
  e.payload = j.at("payload");
  e.wall_time_ms = j.at("wall_time_ms").get<long long>();
  e.complete = j.at("complete").get<bool>();
  return e;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace thml
