#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "thml/char_group.hpp"
#include "thml/sieve_sets.hpp"
#include "thml/theta.hpp"

namespace thml {

/// M(chi) = sum_{m <= M} c_m conj(chi(m)), with c the indicator of the support.
struct MollifierSpec {
  u64 p = 0;
  u64 cutoff = 0;  // floor(sqrt(p))
  IntegerSet support;
  Parity parity = Parity::even;
  std::optional<double> y;  // sieve parameter, none for custom supports
};

/// exp(sqrt(log p)).
double default_sieve_parameter(u64 p);

/// Support = rough_set(floor(sqrt p), y); y = nullopt selects exp(sqrt(log p)).
MollifierSpec build_mollifier(u64 p, std::optional<double> y, Parity parity);

/// Custom support; elements must lie in [1, floor(sqrt p)].
MollifierSpec custom_mollifier(u64 p, const IntegerSet& support, Parity parity);

/// M(chi_j) for every character of the spec's parity, ascending j.
std::vector<std::complex<double>> mollifier_values(const MollifierSpec& spec, const CharacterGroup& group);

enum class MomentMethod { direct, closed };

struct MomentValue {
  double value = 0;
  double imag = 0;          // imaginary part of the character sum (should vanish)
  double error_radius = 0;  // truncation and rounding
};

MomentValue moment_M1(const MollifierSpec& spec, const CharacterGroup& group, double x, MomentMethod method);
MomentValue moment_M2(const MollifierSpec& spec, const CharacterGroup& group, double x, MomentMethod method);

/// Direct routes from an already computed family of theta values.
MomentValue moment_M1_from(const std::vector<std::complex<double>>& mollifier, const std::vector<ThetaValue>& thetas);
MomentValue moment_M2_from(const std::vector<std::complex<double>>& mollifier, const std::vector<ThetaValue>& thetas);

/// S_2k = sum over the parity class of |theta(x, chi)|^{2k}; k = 0 gives the class size.
double plain_moment(const CharacterGroup& group, double x, unsigned k, Parity parity);
double plain_moment_from(const std::vector<ThetaValue>& thetas, unsigned k);

struct ClosedFormResiduals {
  double m1 = 0;  // |M1 direct - M1 closed|
  double m2 = 0;
  double m1_tolerance = 0;  // combined error radii
  double m2_tolerance = 0;
};

struct MomentReport {
  u64 p = 0;
  double x = 1;
  Parity parity = Parity::even;
  bool has_mollifier = false;
  std::size_t support_size = 0;
  double y = 0;
  double m1 = 0;
  double m1_imag = 0;
  double m1_error = 0;
  double m2 = 0;
  double m2_error = 0;
  std::map<unsigned, double> s2k;
  std::size_t nonvanishing = 0;
  std::size_t undecided = 0;
  std::size_t characters = 0;
  double cs_lower_bound = 0;  // M1^2 / M2
  ClosedFormResiduals closed_form_residuals;
  int max_precision_used = 53;
  bool cauchy_schwarz_holds = true;
};

inline constexpr unsigned kDefaultMomentOrders[] = {1, 2};

/// Census of decided-nonzero theta values over one parity class, escalating
/// undecided values through the ladder. With a mollifier also M1, M2 and the
/// Cauchy-Schwarz lower bound M1^2 / M2.
MomentReport nonvanishing_census(const CharacterGroup& group, double x, Parity parity,
                                 const std::optional<MollifierSpec>& spec,
                                 std::span<const int> ladder = kDefaultLadder, bool with_closed_forms = true);

/// True when (count + undecided) (M2 + dM2) >= (|M1| - dM1)^2.
bool cauchy_schwarz_consistent(const MomentReport& report);

struct Theorem1Row {
  u64 p = 0;
  std::size_t count = 0;
  std::size_t undecided = 0;
  double cs_lower_bound = 0;
  double scale = 0;       // p / sqrt(log p)
  double normalized = 0;  // count sqrt(log p) / p
  bool cauchy_schwarz_holds = true;
};

/// Census with the default mollifier for every prime in the list. Rows are
/// independent, so they run on `threads` workers and come back in input order.
std::vector<Theorem1Row> theorem1_scan(const std::vector<u64>& primes, double x, Parity parity,
                                       unsigned threads = 1, std::span<const int> ladder = kDefaultLadder);

struct CancellationRow {
  u64 n = 0;
  double mean_abs = 0;  // (1/(p-1)) sum over all chi of |sum_{k <= n} chi(k)|
  double ratio = 0;     // mean_abs / sqrt(n)
};

std::vector<CancellationRow> first_moment_cancellation(const CharacterGroup& group, const std::vector<u64>& n_grid);

}  // namespace thml
