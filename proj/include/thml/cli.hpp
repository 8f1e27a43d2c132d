#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "thml/arith.hpp"
#include "thml/sieve_sets.hpp"

namespace thml {

enum class Command { theta, census, scan, gcdsum, energy, quadruples, sieve, verify };
enum class ParityChoice { even, odd, both };
enum class OutputFormat { text, csv, json };

const char* to_string(Command command);
const char* to_string(ParityChoice parity);
const char* to_string(OutputFormat format);

/// Validated invocation of the command-line tool.
struct RunConfig {
  Command command = Command::verify;
  std::optional<u64> p;
  std::optional<std::pair<u64, u64>> p_range;
  double x = 1;
  ParityChoice parity = ParityChoice::even;
  std::optional<double> y;  // nullopt = auto, exp(sqrt(log p)) or exp(sqrt(log N))
  SetFamily set_family = SetFamily::rough;
  std::string set_file;
  std::optional<u64> upper;  // --N
  std::optional<u64> character;  // theta --j
  std::string output;
  OutputFormat format = OutputFormat::text;
  int precision_bits = 53;
  unsigned threads = 0;  // 0 = hardware concurrency
  std::string cache_dir;
  std::string plot;

  // sieve
  std::optional<std::pair<u64, double>> phi;
  std::optional<u64> brun;
  std::optional<std::pair<u64, double>> harmonic;
  std::optional<std::pair<u64, double>> rough_export;
  std::vector<double> y_grid;
  // quadruples
  std::optional<u64> bound;
  bool fit = false;
  // energy
  bool frontier = false;
  // scan
  bool cancellation = false;
  std::vector<u64> n_grid;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Usage errors carry exit code 2 and a message naming the offending flag.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig parse_args(const std::vector<std::string>& args);
RunConfig parse_args(int argc, const char* const* argv);

/// Arguments (without program name) that parse back to the same config.
std::vector<std::string> render(const RunConfig& config);

nlohmann::json config_to_json(const RunConfig& config);

/// Executes a validated config. 0 success, 1 computational failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-code contract 0/1/2.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Precision ladder for a maximum working precision: the supported rungs up to it.
std::vector<int> ladder_up_to(int precision_bits);

}  // namespace thml
