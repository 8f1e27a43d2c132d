#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <stdexcept>
#include <vector>

#include "thml/arith.hpp"
#include "thml/compensated_sum.hpp"

namespace thml {

enum class Parity { even, odd };

const char* to_string(Parity parity);
Parity parse_parity(const std::string& text);

/// Index j of the character chi_j(n) = exp(2 pi i j dlog(n) / (p-1)).
struct CharacterIndex {
  u64 j = 0;
  friend bool operator==(CharacterIndex, CharacterIndex) = default;
};

inline Parity parity_of(CharacterIndex index) { return index.j % 2 == 0 ? Parity::even : Parity::odd; }

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::size_t required_bytes)
      : std::runtime_error(what), required_bytes_(required_bytes) {}
  std::size_t required_bytes() const { return required_bytes_; }

 private:
  std::size_t required_bytes_;
};

/// Smallest primitive root of the odd prime p.
u64 find_primitive_root(u64 p);

/// The multiplicative group (Z/pZ)^* with a dense discrete-log table.
/// Immutable after construction.
class CharacterGroup {
 public:
  static constexpr std::size_t kDefaultMemoryBudget = std::size_t{1} << 31;

  explicit CharacterGroup(u64 p, std::size_t memory_budget = kDefaultMemoryBudget);

  /// Bytes needed for the tables of modulus p.
  static std::size_t required_bytes(u64 p);

  u64 modulus() const { return p_; }
  u64 primitive_root() const { return g_; }
  u64 order() const { return p_ - 1; }
  std::size_t character_count(Parity) const { return (p_ - 1) / 2; }

  /// k with g^k = n (mod p); n must be coprime to p.
  u32 dlog(u64 n) const { return dlog_[n % p_]; }
  /// g^k mod p for k in [0, p-2].
  u32 power_of_root(u64 k) const { return powers_[k]; }
  /// exp(2 pi i k / (p-1)).
  const std::complex<double>& root_of_unity(u64 k) const { return roots_[k]; }

  std::complex<double> value(CharacterIndex index, u64 n) const;
  /// Index of the conjugate character.
  CharacterIndex conjugate(CharacterIndex index) const { return {index.j == 0 ? 0 : p_ - 1 - index.j}; }

  /// Characters of the requested parity in ascending index order.
  std::vector<CharacterIndex> characters(Parity parity) const;

  std::span<const u32> dlog_table() const { return dlog_; }

  /// Binary cache: "THML", u32 version, u64 p, then dlog(1..p-1) as LE u32.
  void save_dlog_cache(const std::filesystem::path& path) const;
  static CharacterGroup load_dlog_cache(const std::filesystem::path& path, u64 p,
                                        std::size_t memory_budget = kDefaultMemoryBudget);

 private:
  CharacterGroup() = default;
  void check_budget(std::size_t memory_budget) const;
  void build_roots();

  u64 p_ = 0;
  u64 g_ = 0;
  std::vector<u32> dlog_;    // dlog_[0] unused
  std::vector<u32> powers_;  // powers_[k] = g^k
  std::vector<std::complex<double>> roots_;
};

struct OrthogonalitySum {
  double value = 0;
  double imag_residual = 0;
};

/// sum over chi of the given parity of chi(m) conj(chi(n)), by direct summation.
OrthogonalitySum orthogonality_sum(const CharacterGroup& group, u64 m, u64 n, Parity parity);

}  // namespace thml
