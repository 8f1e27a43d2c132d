#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thml/arith.hpp"

namespace thml {

enum class SetFamily { all, primes, rough, custom };

const char* to_string(SetFamily family);

/// A finite subset of [1, N], strictly increasing.
class IntegerSet {
 public:
  IntegerSet() = default;
  /// Validates ordering and range; throws std::invalid_argument otherwise.
  IntegerSet(u64 upper, std::vector<u64> elements, SetFamily family, std::optional<double> y = std::nullopt);

  u64 upper() const { return upper_; }
  const std::vector<u64>& elements() const { return elements_; }
  SetFamily family() const { return family_; }
  std::optional<double> sieve_parameter() const { return y_; }

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  u64 max_element() const { return elements_.empty() ? 0 : elements_.back(); }
  double density() const { return upper_ == 0 ? 0.0 : static_cast<double>(size()) / static_cast<double>(upper_); }
  bool contains(u64 n) const;

  /// "all(N=...)", "rough(N=...,y=...)" and so on.
  std::string describe() const;

 private:
  u64 upper_ = 0;
  std::vector<u64> elements_;
  SetFamily family_ = SetFamily::custom;
  std::optional<double> y_;
};

IntegerSet all_integers(u64 upper);
IntegerSet primes_set(u64 upper);

/// n <= N whose prime factors all exceed y (1 included). Primes <= floor(y)
/// are sieved out segment by segment.
IntegerSet rough_set(u64 upper, double y);

/// Phi(x, y) = #{n <= x : P^-(n) > y}, counting only.
u64 phi_count(u64 x, double y);

/// prod_{p <= y} (1 - 1/p)^{-1}.
double mertens_product(double y);

struct BrunRow {
  double y = 0;
  u64 phi = 0;
  double ratio = 0;  // Phi(N, y) * zeta(1, y) / N
  bool in_regime = false;
};

/// Upper end y <= N^{1/(10 log log N)} of the range where the Brun
/// asymptotic is asserted.
double brun_regime_limit(u64 upper);

std::vector<BrunRow> brun_ratio_scan(u64 upper, const std::vector<double>& y_grid);

/// sum_{n <= N, P^-(n) > y} 1/n.
double harmonic_rough_sum(u64 upper, double y);

/// Newline-delimited decimal integers.
void write_set(std::ostream& out, const IntegerSet& set);
IntegerSet read_set(std::istream& in, u64 upper);
IntegerSet load_set_file(const std::filesystem::path& path, u64 upper);

inline constexpr std::size_t kSieveSegment = std::size_t{1} << 20;

}  // namespace thml
