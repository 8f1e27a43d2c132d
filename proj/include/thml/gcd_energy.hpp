#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "thml/sieve_sets.hpp"

namespace thml {

inline constexpr std::size_t kNaiveGcdCap = 4000;

/// S(B) = sum over m1 <= m2 in B of gcd(m1, m2) / m2, by the double loop.
double gcd_sum_naive(const IntegerSet& set, std::size_t cap = kNaiveGcdCap);

/// Same sum via gcd(a, b) = sum_{d | a, d | b} phi(d): elements are visited in
/// ascending order while a running count of earlier multiples of each d is kept.
double gcd_sum_fast(const IntegerSet& set);

/// sum_{m in B} sigma_{-1}(m).
double sigma_minus1_sum(const IntegerSet& set);

/// sum over pairs m1 | m2, both in B, of m1 / m2 (diagonal included).
double divisor_pair_sum(const IntegerSet& set);

/// R(B) = N |B|^2 / S(B).
double ratio_R(const IntegerSet& set);
double ratio_R(const IntegerSet& set, double gcd_sum);

/// Pair budget above which energies leave the product hash table: the cross
/// energy switches to a divisor-sum formula in O(max(B) log^2) time, the self
/// energy to segmented counting over the product range.
inline constexpr u64 kEnergyTablePairs = u64{1} << 20;

/// E(B, N) = #{a b = c d : a, c in B, 1 <= b, d <= N}.
u128 energy_cross(const IntegerSet& set, u64 n, u64 table_pairs = kEnergyTablePairs);

/// E(B, B) = #{a b = c d : a, b, c, d in B}.
u128 energy_self(const IntegerSet& set, u64 table_pairs = kEnergyTablePairs);

struct EnergyReport {
  std::string set_descriptor;
  u64 upper = 0;
  std::size_t size = 0;
  double S = 0;
  double R = 0;
  u128 E_cross = 0;
  u128 E_self = 0;
  double density = 0;
  bool energies_computed = false;
};

EnergyReport energy_report(const IntegerSet& set, bool with_energies = true);

/// #{(m1, n1, m2, n2) : m1 n1 = m2 n2, m1^2 + n1^2 + m2^2 + n2^2 <= x}.
u64 quadruple_count(u64 x);

struct LinearLogFit {
  double a = 0;  // coefficient of x log x
  double b = 0;  // coefficient of x
};

/// Least squares for count(x) = a x log x + b x.
LinearLogFit fit_x_log_x(const std::vector<double>& xs, const std::vector<double>& counts);

/// #{(n1, n2) in [1, x]^2 : m1 n1 = +-m2 n2 (mod p)}.
u64 congruence_count(u64 m1, u64 m2, u64 x, u64 p);

/// (1 + x gcd / m2)(1 + x m2 / (gcd p)), the shape of the congruence bound.
double congruence_bound_shape(u64 m1, u64 m2, u64 x, u64 p);

struct FrontierRow {
  std::string family;
  double y = 0;  // 0 when not a rough family
  std::size_t size = 0;
  double density = 0;
  double normalized_energy = 0;  // E(B, N) / (N |B|)
  double gcd_per_element = 0;    // S / |B|
  double ratio_over_n2 = 0;      // R / N^2
};

struct FamilyChoice {
  SetFamily family = SetFamily::all;
  double y = 0;
};

IntegerSet make_family(u64 upper, const FamilyChoice& choice);

/// Default grid: all, primes, rough(y) for y in {2, 10, 100, exp(sqrt(log N))}.
std::vector<FamilyChoice> default_frontier_grid(u64 upper);

std::vector<FrontierRow> energy_frontier_scan(u64 upper, const std::vector<FamilyChoice>& grid);

std::string to_decimal(u128 value);

}  // namespace thml
