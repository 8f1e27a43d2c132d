#pragma once

#include <complex>
#include <span>
#include <vector>

#include "thml/char_group.hpp"

namespace thml {

/// theta(x, chi) = sum_{n >= 1} w(n) chi(n) exp(-pi n^2 x / p), with
/// w(n) = 1 for even and w(n) = n for odd characters.
struct ThetaValue {
  std::complex<double> value;
  double error_radius = 0;  // bound on |true - value|: tail plus rounding
  u64 truncation_n = 0;     // last summed index
  double x = 1;
  CharacterIndex j;
  Parity parity = Parity::even;
  int precision_bits = 53;
};

enum class Decision { nonzero, undecided };

/// Never reports "zero": a value inside its error radius is undecided.
inline Decision is_nonzero(const ThetaValue& tv) {
  return std::abs(tv.value) > tv.error_radius ? Decision::nonzero : Decision::undecided;
}

struct Truncation {
  u64 n0 = 0;
  double tail = 0;  // bounds sum_{n > n0}; geometric series started at the n0 term
};

/// Geometric bound on sum_{n >= n0} w(n) exp(-pi n^2 x / p); +inf if the
/// terms are not yet decreasing at n0.
double theta_tail_bound(u64 p, double x, Parity parity, u64 n0);

/// Smallest n0 whose tail bound is below relative_target times the largest summand.
Truncation choose_truncation(u64 p, double x, Parity parity, double relative_target);

/// Relative tail target for a given working precision (1e-18 for doubles).
double tail_target_for_bits(int precision_bits);

/// Precisions understood by theta_direct.
bool supported_precision(int precision_bits);

ThetaValue theta_direct(const CharacterGroup& group, CharacterIndex j, double x, Parity parity,
                        int precision_bits = 53);

/// All characters of one parity at once: residue-class accumulation
/// followed by one length-(p-1) transform. Output is in ascending j.
std::vector<ThetaValue> theta_all(const CharacterGroup& group, double x, Parity parity);

/// Re-evaluates through the precision ladder until the value is decided.
ThetaValue theta_decide(const CharacterGroup& group, CharacterIndex j, double x, Parity parity,
                        std::span<const int> ladder);

inline constexpr int kDefaultLadder[] = {53, 128, 256};

struct RootNumber {
  std::complex<double> w;
  CharacterIndex j;
  bool defined = false;
  double error_radius = 0;
};

/// W = theta(1, chi) / conj(theta(1, chi)); j = 0 is rejected.
RootNumber root_number(const CharacterGroup& group, CharacterIndex j);

struct FunctionalEquationCheck {
  bool decided = false;
  double residual = 0;
  double bound = 0;     // combined error radii of both sides
  double exponent = 0;  // 1/2 even, 3/2 odd
};

/// |theta(x, chi) - W x^{-a} theta(1/x, conj chi)|.
FunctionalEquationCheck functional_equation_residual(const CharacterGroup& group, CharacterIndex j, double x);

}  // namespace thml
