#include "thml/sieve_sets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "thml/compensated_sum.hpp"

namespace thml {

namespace {

u64 sieve_bound(double y) {
  if (!(y >= 0) || std::isnan(y)) throw std::invalid_argument("sieve parameter y must be non-negative");
  if (y >= 1.8e19) return ~u64{0};
  return static_cast<u64>(std::floor(y));
}

// Calls visit(n) for every y-rough n in [1, N], ascending, one segment at a time.
template <class Visit>
void for_each_rough(u64 upper, double y, Visit&& visit) {
  if (upper == 0) return;
  const u64 bound = std::min<u64>(sieve_bound(y), upper);
  const auto primes = primes_up_to(bound);
  std::vector<unsigned char> alive(kSieveSegment);
  for (u64 lo = 1; lo <= upper; lo += kSieveSegment) {
    const u64 hi = std::min<u64>(upper, lo + kSieveSegment - 1);
    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    std::fill(alive.begin(), alive.begin() + static_cast<std::ptrdiff_t>(len), 1);
    for (u32 q : primes) {
      u64 first = (lo + q - 1) / q * q;
      for (u64 m = first; m <= hi; m += q) alive[m - lo] = 0;
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (alive[i]) visit(lo + i);
    }
  }
}

}  // namespace

const char* to_string(SetFamily family) {
  switch (family) {
    case SetFamily::all:
      return "all";
    case SetFamily::primes:
      return "primes";
    case SetFamily::rough:
      return "rough";
    case SetFamily::custom:
      return "custom";
  }
  return "unknown";
}

IntegerSet::IntegerSet(u64 upper, std::vector<u64> elements, SetFamily family, std::optional<double> y)
    : upper_(upper), elements_(std::move(elements)), family_(family), y_(y) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    const u64 v = elements_[i];
    if (v < 1 || v > upper_) {
      throw std::invalid_argument("set element " + std::to_string(v) + " outside [1, " + std::to_string(upper_) + "]");
    }
    if (i > 0 && elements_[i - 1] >= v) throw std::invalid_argument("set elements must be strictly increasing");
  }
  if (family_ == SetFamily::rough && !y_) throw std::invalid_argument("rough family needs a sieve parameter");
}

bool IntegerSet::contains(u64 n) const { return std::binary_search(elements_.begin(), elements_.end(), n); }

std::string IntegerSet::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << to_string(family_) << "(N=" << upper_;
  if (y_) out << ",y=" << *y_;
  out << ",size=" << elements_.size() << ")";
  return out.str();
}

IntegerSet all_integers(u64 upper) {
  std::vector<u64> v(upper);
  for (u64 i = 0; i < upper; ++i) v[i] = i + 1;
  return {upper, std::move(v), SetFamily::all};
}

IntegerSet primes_set(u64 upper) {
  const auto primes = primes_up_to(upper);
  return {upper, std::vector<u64>(primes.begin(), primes.end()), SetFamily::primes};
}

IntegerSet rough_set(u64 upper, double y) {
  if (!(y >= 1)) throw std::invalid_argument("rough_set: y must be at least 1");
  std::vector<u64> v;
  for_each_rough(upper, y, [&](u64 n) { v.push_back(n); });
  return {upper, std::move(v), SetFamily::rough, y};
}

u64 phi_count(u64 x, double y) {
  if (!(y >= 0)) throw std::invalid_argument("phi_count: y must be non-negative");
  u64 count = 0;
  for_each_rough(x, y, [&](u64) { ++count; });
  return count;
}

double mertens_product(double y) {
  const u64 bound = sieve_bound(y);
  double product = 1;
  for (u32 q : primes_up_to(bound)) product *= static_cast<double>(q) / (q - 1.0);
  return product;
}

double brun_regime_limit(u64 upper) {
  const double log_n = std::log(static_cast<double>(upper));
  const double loglog = std::log(log_n);
  if (!(loglog > 0)) return 0;
  return std::exp(log_n / (10 * loglog));
}

std::vector<BrunRow> brun_ratio_scan(u64 upper, const std::vector<double>& y_grid) {
  const double limit = brun_regime_limit(upper);
  std::vector<BrunRow> rows;
  for (double y : y_grid) {
    BrunRow row;
    row.y = y;
    row.phi = phi_count(upper, y);
    row.ratio = static_cast<double>(row.phi) * mertens_product(y) / static_cast<double>(upper);
    row.in_regime = y >= 2 && y <= limit;
    rows.push_back(row);
  }
  return rows;
}

double harmonic_rough_sum(u64 upper, double y) {
  CompensatedSum<double> sum;
  for_each_rough(upper, y, [&](u64 n) { sum.add(1.0 / static_cast<double>(n)); });
  return sum.value();
}

void write_set(std::ostream& out, const IntegerSet& set) {
  for (u64 v : set.elements()) out << v << '\n';
}

IntegerSet read_set(std::istream& in, u64 upper) {
  std::vector<u64> v;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token[0] == '-' || token[0] == '+') {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": not a decimal integer: '" + token + "'");
    }
    v.push_back(value);
  }
  std::sort(v.begin(), v.end());
  return {upper, std::move(v), SetFamily::custom};
}

IntegerSet load_set_file(const std::filesystem::path& path, u64 upper) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open set file " + path.string());
  return read_set(in, upper);
}

}  // namespace thml
