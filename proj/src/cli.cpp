#include "thml/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "thml/char_group.hpp"
#include "thml/gcd_energy.hpp"
#include "thml/mollifier.hpp"
#include "thml/report_io.hpp"
#include "thml/self_check.hpp"
#include "thml/theta.hpp"

namespace thml {

namespace {

struct RawArgs {
  std::string p, p_range, x, parity, y, set_family, set_file, upper, character, output, format, precision, threads,
      cache_dir, plot, brun, bound, y_grid, n_grid;
  std::vector<std::string> phi, harmonic, rough;
  bool fit = false, frontier = false, cancellation = false;
};

enum OptionGroup : unsigned {
  kPrime = 1u << 0,
  kPrimeRange = 1u << 1,
  kX = 1u << 2,
  kParity = 1u << 3,
  kY = 1u << 4,
  kSet = 1u << 5,
  kPrecision = 1u << 6,
  kThreads = 1u << 7,
  kCache = 1u << 8,
  kPlot = 1u << 9,
  kCharacter = 1u << 10,
  kSieve = 1u << 11,
  kQuadruples = 1u << 12,
  kFrontier = 1u << 13,
  kCancellation = 1u << 14,
};

void add_options(CLI::App* app, RawArgs& raw, unsigned groups) {
  app->add_option("--output", raw.output, "output path (default stdout)");
  app->add_option("--format", raw.format, "csv | json (default: plain text)");
  if (groups & kPrime) app->add_option("--p", raw.p, "odd prime modulus");
  if (groups & kPrimeRange) app->add_option("--p-range", raw.p_range, "inclusive prime range A:B");
  if (groups & kX) app->add_option("--x", raw.x, "theta argument x > 0 (default 1)");
  if (groups & kParity) app->add_option("--parity", raw.parity, "even | odd | both");
  if (groups & kY) app->add_option("--y", raw.y, "sieve parameter: real >= 1 or 'auto'");
  if (groups & kSet) {
    app->add_option("--set-family", raw.set_family, "all | primes | rough | custom");
    app->add_option("--set-file", raw.set_file, "newline-delimited integers for --set-family custom");
    app->add_option("--N", raw.upper, "upper end of the integer set");
  }
  if (groups & kPrecision) app->add_option("--precision-bits", raw.precision, "top of the precision ladder (53)");
  if (groups & kThreads) app->add_option("--threads", raw.threads, "worker threads or 'auto'");
  if (groups & kCache) app->add_option("--cache-dir", raw.cache_dir, "dlog table cache (env THML_CACHE_DIR)");
  if (groups & kPlot) app->add_option("--plot", raw.plot, "also write whitespace-delimited plot data here");
  if (groups & kCharacter) app->add_option("--j", raw.character, "single character index");
  if (groups & kSieve) {
    app->add_option("--phi", raw.phi, "X Y: count of Y-rough n <= X")->expected(2);
    app->add_option("--brun", raw.brun, "N: Brun ratio scan over --y-grid");
    app->add_option("--harmonic", raw.harmonic, "N Y: sum of 1/n over Y-rough n <= N")->expected(2);
    app->add_option("--rough", raw.rough, "N Y: export the Y-rough set up to N")->expected(2);
    app->add_option("--y-grid", raw.y_grid, "comma separated y values");
  }
  if (groups & kQuadruples) {
    app->add_option("--bound", raw.bound, "count quadruples up to this bound");
    app->add_flag("--fit", raw.fit, "fit a x log x + b x over 1e4, 1e5, 1e6");
  }
  if (groups & kFrontier) app->add_flag("--frontier", raw.frontier, "energy frontier scan over set families");
  if (groups & kCancellation) {
    app->add_flag("--cancellation", raw.cancellation, "first-moment cancellation table for --p");
    app->add_option("--n-grid", raw.n_grid, "comma separated N values");
  }
}

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void usage(const std::string& flag, const std::string& message) {
  throw UsageError(flag + ": " + message);
}

u64 parse_count(const std::string& flag, const std::string& text) {
  if (text.empty()) usage(flag, "missing value");
  try {
    std::size_t used = 0;
    if (text.find_first_of("eE.") != std::string::npos) {
      const long double v = std::stold(text, &used);
      if (used != text.size() || v < 0 || v > 1.8e19 || std::floor(v) != v) usage(flag, "not a non-negative integer");
      return static_cast<u64>(v);
    }
    if (text[0] == '-' || text[0] == '+') usage(flag, "not a non-negative integer");
    const u64 v = std::stoull(text, &used);
    if (used != text.size()) usage(flag, "not a non-negative integer");
    return v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    usage(flag, "not a non-negative integer: '" + text + "'");
  }
}

double parse_real(const std::string& flag, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) usage(flag, "not a finite real: '" + text + "'");
    return v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    usage(flag, "not a real number: '" + text + "'");
  }
}

u64 parse_prime(const std::string& flag, const std::string& text) {
  const u64 p = parse_count(flag, text);
  if (p < 3 || !is_prime(p)) usage(flag, std::to_string(p) + " is not prime (an odd prime is required)");
  return p;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

std::string real_text(double v) { return format_real(v); }

RunConfig validate(Command command, const RawArgs& raw) {
  RunConfig c;
  c.command = command;
  c.output = raw.output;
  if (!raw.format.empty()) {
    if (raw.format == "csv") {
      c.format = OutputFormat::csv;
    } else if (raw.format == "json") {
      c.format = OutputFormat::json;
    } else {
      usage("--format", "must be csv or json");
    }
  }
  if (!raw.p.empty()) c.p = parse_prime("--p", raw.p);
  if (!raw.p_range.empty()) {
    const auto parts = split(raw.p_range, ':');
    if (parts.size() != 2) usage("--p-range", "expected A:B");
    const u64 lo = parse_count("--p-range", parts[0]);
    const u64 hi = parse_count("--p-range", parts[1]);
    if (lo > hi) usage("--p-range", "lower end exceeds upper end");
    if (hi < 3) usage("--p-range", "range contains no odd prime");
    c.p_range = std::make_pair(lo, hi);
  }
  if (c.p && c.p_range) usage("--p", "conflicts with --p-range");
  if (!raw.x.empty()) {
    c.x = parse_real("--x", raw.x);
    if (!(c.x > 0)) usage("--x", "must be positive");
  }
  if (!raw.parity.empty()) {
    if (raw.parity == "even") {
      c.parity = ParityChoice::even;
    } else if (raw.parity == "odd") {
      c.parity = ParityChoice::odd;
    } else if (raw.parity == "both") {
      c.parity = ParityChoice::both;
    } else {
      usage("--parity", "must be even, odd or both");
    }
  }
  if (!raw.y.empty() && raw.y != "auto") {
    c.y = parse_real("--y", raw.y);
    if (!(*c.y >= 1)) usage("--y", "must be at least 1");
  }
  if (!raw.set_family.empty()) {
    if (raw.set_family == "all") {
      c.set_family = SetFamily::all;
    } else if (raw.set_family == "primes") {
      c.set_family = SetFamily::primes;
    } else if (raw.set_family == "rough") {
      c.set_family = SetFamily::rough;
    } else if (raw.set_family == "custom") {
      c.set_family = SetFamily::custom;
    } else {
      usage("--set-family", "must be all, primes, rough or custom");
    }
  }
  c.set_file = raw.set_file;
  if (c.set_family == SetFamily::custom && c.set_file.empty()) usage("--set-family", "custom requires --set-file");
  if (c.set_family != SetFamily::custom && !c.set_file.empty()) usage("--set-file", "requires --set-family custom");
  if (!raw.upper.empty()) {
    c.upper = parse_count("--N", raw.upper);
    if (*c.upper < 1) usage("--N", "must be at least 1");
  }
  if (!raw.character.empty()) c.character = parse_count("--j", raw.character);
  if (!raw.precision.empty()) {
    c.precision_bits = static_cast<int>(parse_count("--precision-bits", raw.precision));
    if (!supported_precision(c.precision_bits)) usage("--precision-bits", "supported values are 53, 128, 256, 512");
  }
  if (!raw.threads.empty() && raw.threads != "auto") {
    c.threads = static_cast<unsigned>(parse_count("--threads", raw.threads));
    if (c.threads == 0) usage("--threads", "must be positive or 'auto'");
  }
  c.cache_dir = raw.cache_dir;
  c.plot = raw.plot;
  if (!raw.phi.empty()) c.phi = std::make_pair(parse_count("--phi", raw.phi[0]), parse_real("--phi", raw.phi[1]));
  if (!raw.brun.empty()) c.brun = parse_count("--brun", raw.brun);
  if (!raw.harmonic.empty()) {
    c.harmonic = std::make_pair(parse_count("--harmonic", raw.harmonic[0]), parse_real("--harmonic", raw.harmonic[1]));
  }
  if (!raw.rough.empty()) c.rough_export = std::make_pair(parse_count("--rough", raw.rough[0]), parse_real("--rough", raw.rough[1]));
  if (!raw.y_grid.empty()) {
    for (const auto& part : split(raw.y_grid, ',')) c.y_grid.push_back(parse_real("--y-grid", part));
  }
  if (!raw.bound.empty()) c.bound = parse_count("--bound", raw.bound);
  c.fit = raw.fit;
  c.frontier = raw.frontier;
  c.cancellation = raw.cancellation;
  if (!raw.n_grid.empty()) {
    for (const auto& part : split(raw.n_grid, ',')) c.n_grid.push_back(parse_count("--n-grid", part));
  }

  switch (command) {
    case Command::theta:
      if (!c.p) usage("--p", "theta requires a prime");
      if (c.character) {
        if (*c.character >= *c.p - 1) usage("--j", "character index must be below p - 1");
        const ParityChoice implied = *c.character % 2 == 0 ? ParityChoice::even : ParityChoice::odd;
        if (!raw.parity.empty() && c.parity != implied) usage("--parity", "conflicts with the parity of --j");
        c.parity = implied;
      }
      break;
    case Command::census:
      if (!c.p && !c.p_range) usage("--p", "census requires --p or --p-range");
      break;
    case Command::scan:
      if (c.cancellation) {
        if (!c.p) usage("--cancellation", "requires --p");
        if (c.n_grid.empty()) usage("--n-grid", "required with --cancellation");
        for (u64 n : c.n_grid) {
          if (n < 1 || n > *c.p) usage("--n-grid", "values must lie in [1, p]");
        }
      } else {
        if (!c.p_range) usage("--p-range", "scan requires a prime range");
        if (!c.n_grid.empty()) usage("--n-grid", "only valid with --cancellation");
      }
      break;
    case Command::gcdsum:
    case Command::energy:
      if (!c.upper) usage("--N", std::string(to_string(command)) + " requires --N");
      break;
    case Command::quadruples:
      if (c.fit == c.bound.has_value()) usage("--bound", "give exactly one of --bound and --fit");
      if (c.bound && *c.bound < 4) usage("--bound", "must be at least 4");
      break;
    case Command::sieve: {
      const int modes = c.phi.has_value() + c.brun.has_value() + c.harmonic.has_value() + c.rough_export.has_value();
      if (modes != 1) usage("--phi", "give exactly one of --phi, --brun, --harmonic, --rough");
      if (c.brun && c.y_grid.empty()) usage("--y-grid", "required with --brun");
      if (!c.brun && !c.y_grid.empty()) usage("--y-grid", "only valid with --brun");
      if (c.phi && (c.phi->first < 1 || c.phi->second < 0)) usage("--phi", "need X >= 1 and Y >= 0");
      if (c.harmonic && (c.harmonic->second < 2 || c.harmonic->second > static_cast<double>(c.harmonic->first))) {
        usage("--harmonic", "need 2 <= Y <= N");
      }
      break;
    }
    case Command::verify:
      break;
  }
  return c;
}

unsigned effective_threads(const RunConfig& c) {
  if (c.threads > 0) return c.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Parity> parities(ParityChoice choice) {
  switch (choice) {
    case ParityChoice::even:
      return {Parity::even};
    case ParityChoice::odd:
      return {Parity::odd};
    case ParityChoice::both:
      break;
  }
  return {Parity::even, Parity::odd};
}

std::vector<u64> primes_in(const RunConfig& c) {
  if (c.p) return {*c.p};
  std::vector<u64> out;
  for (u32 q : primes_up_to(c.p_range->second)) {
    if (q >= c.p_range->first && q >= 3) out.push_back(q);
  }
  return out;
}

std::string cache_directory(const RunConfig& c) {
  if (!c.cache_dir.empty()) return c.cache_dir;
  if (const char* env = std::getenv("THML_CACHE_DIR")) return env;
  return {};
}

CharacterGroup load_group(u64 p, const RunConfig& c) {
  const std::string dir = cache_directory(c);
  if (dir.empty()) return CharacterGroup(p);
  const std::filesystem::path path =
      std::filesystem::path(dir) / ("dlog_v1_p" + std::to_string(p) + ".bin");
  if (std::filesystem::exists(path)) {
    try {
      return CharacterGroup::load_dlog_cache(path, p);
    } catch (const std::runtime_error&) {
      // stale or corrupt; rebuilt below
    }
  }
  CharacterGroup group(p);
  std::filesystem::create_directories(dir);
  group.save_dlog_cache(path);
  return group;
}

IntegerSet config_set(const RunConfig& c) {
  const u64 n = *c.upper;
  switch (c.set_family) {
    case SetFamily::all:
      return all_integers(n);
    case SetFamily::primes:
      return primes_set(n);
    case SetFamily::rough:
      return rough_set(n, c.y.value_or(std::exp(std::sqrt(std::log(static_cast<double>(n))))));
    case SetFamily::custom:
      return load_set_file(c.set_file, n);
  }
  throw std::logic_error("unhandled set family");
}

struct Output {
  nlohmann::json payload;
  Table table;
  std::string text;  // used for plain-text scalar results
  bool complete = true;
};

Output run_theta(const RunConfig& c) {
  const CharacterGroup group = load_group(*c.p, c);
  const auto ladder = ladder_up_to(c.precision_bits);
  std::vector<ThetaValue> values;
  for (Parity parity : parities(c.parity)) {
    if (c.character) {
      values.push_back(theta_decide(group, {*c.character}, c.x, parity, ladder));
      break;
    }
    for (auto tv : theta_all(group, c.x, parity)) {
      if (is_nonzero(tv) == Decision::undecided) tv = theta_decide(group, tv.j, c.x, parity, ladder);
      values.push_back(tv);
    }
  }
  Output out;
  out.table = theta_table(values);
  out.payload = table_to_json(out.table);
  for (const auto& tv : values) out.complete = out.complete && is_nonzero(tv) == Decision::nonzero;
  return out;
}

std::optional<MollifierSpec> config_mollifier(const RunConfig& c, u64 p, Parity parity) {
  switch (c.set_family) {
    case SetFamily::rough:
      return build_mollifier(p, c.y, parity);
    case SetFamily::all:
      return build_mollifier(p, 1.0, parity);
    case SetFamily::primes: {
      auto support = primes_set(isqrt(p));
      std::vector<u64> with_one{1};
      with_one.insert(with_one.end(), support.elements().begin(), support.elements().end());
      return custom_mollifier(p, IntegerSet(isqrt(p), with_one, SetFamily::custom), parity);
    }
    case SetFamily::custom:
      return custom_mollifier(p, load_set_file(c.set_file, isqrt(p)), parity);
  }
  return std::nullopt;
}

Output run_census(const RunConfig& c) {
  const auto ladder = ladder_up_to(c.precision_bits);
  std::vector<MomentReport> reports;
  for (u64 p : primes_in(c)) {
    const CharacterGroup group = load_group(p, c);
    for (Parity parity : parities(c.parity)) {
      reports.push_back(nonvanishing_census(group, c.x, parity, config_mollifier(c, p, parity), ladder));
    }
  }
  Output out;
  out.table = moment_table(reports);
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    out.complete = out.complete && r.undecided == 0 && r.cauchy_schwarz_holds;
  }
  out.payload = list.size() == 1 ? list[0] : list;
  return out;
}

Output run_scan(const RunConfig& c) {
  Output out;
  if (c.cancellation) {
    const CharacterGroup group = load_group(*c.p, c);
    out.table = cancellation_table(*c.p, first_moment_cancellation(group, c.n_grid));
  } else {
    std::vector<Theorem1Row> rows;
    for (Parity parity : parities(c.parity)) {
      auto part = theorem1_scan(primes_in(c), c.x, parity, effective_threads(c), ladder_up_to(c.precision_bits));
      rows.insert(rows.end(), part.begin(), part.end());
    }
    for (const auto& r : rows) out.complete = out.complete && r.undecided == 0 && r.cauchy_schwarz_holds;
    out.table = theorem1_table(rows);
  }
  out.payload = table_to_json(out.table);
  return out;
}

Output run_gcdsum(const RunConfig& c) {
  const IntegerSet set = config_set(c);
  EnergyReport report = energy_report(set, false);
  Output out;
  out.table = energy_table({report});
  out.payload = to_json(report);
  out.payload["sigma_minus1_sum"] = sigma_minus1_sum(set);
  out.payload["divisor_pair_sum"] = divisor_pair_sum(set);
  return out;
}

Output run_energy(const RunConfig& c) {
  Output out;
  if (c.frontier) {
    out.table = frontier_table(*c.upper, energy_frontier_scan(*c.upper, default_frontier_grid(*c.upper)));
    out.payload = table_to_json(out.table);
    return out;
  }
  const EnergyReport report = energy_report(config_set(c), true);
  out.table = energy_table({report});
  out.payload = to_json(report);
  return out;
}

Output run_quadruples(const RunConfig& c) {
  Output out;
  if (c.bound) {
    const u64 count = quadruple_count(*c.bound);
    out.table = Table{"quadruple_count", {"x", "count"}, {{static_cast<unsigned long long>(*c.bound),
                                                           static_cast<unsigned long long>(count)}}};
    out.payload = {{"x", *c.bound}, {"count", count}};
    out.text = std::to_string(count) + "\n";
    return out;
  }
  std::vector<double> xs{1e4, 1e5, 1e6};
  std::vector<double> counts;
  out.table = Table{"quadruple_fit", {"x", "count", "count_over_x_log_x"}, {}};
  for (double x : xs) {
    const u64 count = quadruple_count(static_cast<u64>(x));
    counts.push_back(static_cast<double>(count));
    out.table.rows.push_back({static_cast<unsigned long long>(x), static_cast<unsigned long long>(count),
                              static_cast<double>(count) / (x * std::log(x))});
  }
  const LinearLogFit fit = fit_x_log_x(xs, counts);
  out.payload = table_to_json(out.table);
  out.payload["fit"] = {{"a", fit.a}, {"b", fit.b}, {"target_a", 0.375}};
  return out;
}

Output run_sieve(const RunConfig& c) {
  Output out;
  if (c.phi) {
    const u64 count = phi_count(c.phi->first, c.phi->second);
    out.table = Table{"phi", {"x", "y", "phi"},
                      {{static_cast<unsigned long long>(c.phi->first), c.phi->second,
                        static_cast<unsigned long long>(count)}}};
    out.payload = {{"x", c.phi->first}, {"y", c.phi->second}, {"phi", count}};
    out.text = std::to_string(count) + "\n";
  } else if (c.brun) {
    out.table = brun_table(*c.brun, brun_ratio_scan(*c.brun, c.y_grid));
    out.payload = table_to_json(out.table);
  } else if (c.harmonic) {
    const double value = harmonic_rough_sum(c.harmonic->first, c.harmonic->second);
    const double mertens = 1.0 / mertens_product(c.harmonic->second);
    const double envelope = std::log(static_cast<double>(c.harmonic->first)) * mertens;
    out.table = Table{"harmonic_rough_sum", {"N", "y", "sum", "log_N_times_product", "ratio"},
                      {{static_cast<unsigned long long>(c.harmonic->first), c.harmonic->second, value, envelope,
                        value / envelope}}};
    out.payload = table_to_json(out.table);
    out.text = format_real(value) + "\n";
  } else {
    const IntegerSet set = rough_set(c.rough_export->first, c.rough_export->second);
    std::ostringstream text;
    write_set(text, set);
    out.text = text.str();
    out.table = Table{"rough_set", {"n"}, {}};
    for (u64 v : set.elements()) out.table.rows.push_back({static_cast<unsigned long long>(v)});
    out.payload = {{"N", set.upper()}, {"y", c.rough_export->second}, {"elements", set.elements()}};
  }
  return out;
}

Output run_verify() {
  Output out;
  out.table = Table{"verify", {"check", "passed", "detail"}, {}};
  std::ostringstream text;
  for (const auto& r : run_self_checks()) {
    out.table.rows.push_back({r.name, static_cast<long long>(r.passed), r.detail});
    out.complete = out.complete && r.passed;
    text << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
  }
  out.text = text.str();
  out.payload = table_to_json(out.table);
  return out;
}

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::theta:
      return "theta";
    case Command::census:
      return "census";
    case Command::scan:
      return "scan";
    case Command::gcdsum:
      return "gcdsum";
    case Command::energy:
      return "energy";
    case Command::quadruples:
      return "quadruples";
    case Command::sieve:
      return "sieve";
    case Command::verify:
      return "verify";
  }
  return "?";
}

const char* to_string(ParityChoice parity) {
  switch (parity) {
    case ParityChoice::even:
      return "even";
    case ParityChoice::odd:
      return "odd";
    case ParityChoice::both:
      return "both";
  }
  return "?";
}

const char* to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::text:
      return "text";
    case OutputFormat::csv:
      return "csv";
    case OutputFormat::json:
      return "json";
  }
  return "?";
}

std::vector<int> ladder_up_to(int precision_bits) {
  std::vector<int> ladder;
  for (int bits : {53, 128, 256, 512}) {
    if (bits <= precision_bits) ladder.push_back(bits);
  }
  return ladder;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Theta functions, mollified moments and GCD-sum experiments", "thml"};
  app.require_subcommand(1, 1);
  RawArgs raw;
  const unsigned set_groups = kSet | kY;
  struct Sub {
    Command command;
    const char* help;
    unsigned groups;
  };
  const Sub subs[] = {
      {Command::theta, "theta values for one prime", kPrime | kX | kParity | kPrecision | kCache | kCharacter},
      {Command::census, "non-vanishing census and mollified moments",
       kPrime | kPrimeRange | kX | kParity | kPrecision | kCache | set_groups},
      {Command::scan, "census scan over a prime range, or first-moment cancellation",
       kPrime | kPrimeRange | kX | kParity | kPrecision | kThreads | kCache | kPlot | kCancellation},
      {Command::gcdsum, "GCD sum S(B) and ratio R(B)", set_groups},
      {Command::energy, "multiplicative energies", set_groups | kFrontier | kPlot},
      {Command::quadruples, "count m1 n1 = m2 n2 with bounded square sum", kQuadruples},
      {Command::sieve, "rough numbers and sieve ratios", kSieve | kPlot},
      {Command::verify, "quick built-in property suite", 0},
  };
  std::vector<std::pair<CLI::App*, Command>> registered;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(to_string(s.command), s.help);
    add_options(sub, raw, s.groups);
    registered.emplace_back(sub, s.command);
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const auto& [sub, command] : registered) {
      if (sub->parsed()) target = sub;
    }
    throw HelpRequested(target->help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (const auto& [sub, command] : registered) {
    if (sub->parsed()) return validate(command, raw);
  }
  throw UsageError("no command given");
}

RunConfig parse_args(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_args(args);
}

std::vector<std::string> render(const RunConfig& c) {
  std::vector<std::string> a{to_string(c.command)};
  auto push = [&](const char* flag, std::string value) {
    a.emplace_back(flag);
    a.push_back(std::move(value));
  };
  if (c.p) push("--p", std::to_string(*c.p));
  if (c.p_range) push("--p-range", std::to_string(c.p_range->first) + ":" + std::to_string(c.p_range->second));
  if (c.x != 1) push("--x", real_text(c.x));
  if (c.parity != ParityChoice::even) push("--parity", to_string(c.parity));
  if (c.y) push("--y", real_text(*c.y));
  if (c.set_family != SetFamily::rough) push("--set-family", to_string(c.set_family));
  if (!c.set_file.empty()) push("--set-file", c.set_file);
  if (c.upper) push("--N", std::to_string(*c.upper));
  if (c.character) push("--j", std::to_string(*c.character));
  if (!c.output.empty()) push("--output", c.output);
  if (c.format != OutputFormat::text) push("--format", to_string(c.format));
  if (c.precision_bits != 53) push("--precision-bits", std::to_string(c.precision_bits));
  if (c.threads != 0) push("--threads", std::to_string(c.threads));
  if (!c.cache_dir.empty()) push("--cache-dir", c.cache_dir);
  if (!c.plot.empty()) push("--plot", c.plot);
  if (c.phi) {
    a.emplace_back("--phi");
    a.push_back(std::to_string(c.phi->first));
    a.push_back(real_text(c.phi->second));
  }
  if (c.brun) push("--brun", std::to_string(*c.brun));
  if (c.harmonic) {
    a.emplace_back("--harmonic");
    a.push_back(std::to_string(c.harmonic->first));
    a.push_back(real_text(c.harmonic->second));
  }
  if (c.rough_export) {
    a.emplace_back("--rough");
    a.push_back(std::to_string(c.rough_export->first));
    a.push_back(real_text(c.rough_export->second));
  }
  auto join = [](const auto& values, auto&& fmt) {
    std::string s;
    for (const auto& v : values) s += (s.empty() ? "" : ",") + fmt(v);
    return s;
  };
  if (!c.y_grid.empty()) push("--y-grid", join(c.y_grid, [](double v) { return real_text(v); }));
  if (c.bound) push("--bound", std::to_string(*c.bound));
  if (c.fit) a.emplace_back("--fit");
  if (c.frontier) a.emplace_back("--frontier");
  if (c.cancellation) a.emplace_back("--cancellation");
  if (!c.n_grid.empty()) push("--n-grid", join(c.n_grid, [](u64 v) { return std::to_string(v); }));
  return a;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j = {{"command", to_string(c.command)},
                      {"x", c.x},
                      {"parity", to_string(c.parity)},
                      {"y", c.y ? nlohmann::json(*c.y) : nlohmann::json("auto")},
                      {"set_family", to_string(c.set_family)},
                      {"format", to_string(c.format)},
                      {"precision_bits", c.precision_bits},
                      {"threads", c.threads == 0 ? nlohmann::json("auto") : nlohmann::json(c.threads)},
                      {"argv", render(c)}};
  if (c.p) j["p"] = *c.p;
  if (c.p_range) j["p_range"] = {c.p_range->first, c.p_range->second};
  if (c.upper) j["N"] = *c.upper;
  if (!c.set_file.empty()) j["set_file"] = c.set_file;
  return j;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Output result;
  try {
    switch (config.command) {
      case Command::theta:
        result = run_theta(config);
        break;
      case Command::census:
        result = run_census(config);
        break;
      case Command::scan:
        result = run_scan(config);
        break;
      case Command::gcdsum:
        result = run_gcdsum(config);
        break;
      case Command::energy:
        result = run_energy(config);
        break;
      case Command::quadruples:
        result = run_quadruples(config);
        break;
      case Command::sieve:
        result = run_sieve(config);
        break;
      case Command::verify:
        result = run_verify();
        break;
    }
  } catch (const std::exception& e) {
    err << "thml " << to_string(config.command) << ": " << e.what() << '\n';
    return 1;
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);

  std::ostringstream body;
  switch (config.format) {
    case OutputFormat::json: {
      ResultEnvelope envelope;
      envelope.config = config_to_json(config);
      envelope.timestamp = utc_timestamp();
      envelope.payload = result.payload;
      envelope.wall_time_ms = elapsed.count();
      envelope.complete = result.complete;
      body << to_json(envelope).dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      write_csv(body, result.table);
      break;
    case OutputFormat::text:
      if (!result.text.empty()) {
        body << result.text;
      } else {
        write_plot_data(body, result.table);
      }
      break;
  }
  try {
    if (config.output.empty()) {
      out << body.str();
    } else {
      write_file_atomically(config.output, body.str());
    }
    if (!config.plot.empty()) emit_plot_data(result.table, config.plot);
  } catch (const std::exception& e) {
    err << "thml: " << e.what() << '\n';
    return 1;
  }
  if (!result.complete) {
    err << "thml " << to_string(config.command) << ": results incomplete (undecided values or failed checks)\n";
    return 1;
  }
  return 0;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const HelpRequested& help) {
    out << help.what();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  return run(config, out, err);
}

}  // namespace thml
