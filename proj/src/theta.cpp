#include "thml/theta.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "thml/compensated_sum.hpp"
#include "thml/fft.hpp"

namespace thml {

namespace {

namespace bmp = boost::multiprecision;
template <unsigned Bits>
using BinFloat = bmp::number<bmp::cpp_bin_float<Bits, bmp::digit_base_2>, bmp::et_off>;

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

void check_arguments(CharacterIndex j, double x, Parity parity, u64 p) {
  if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("theta: x must be a positive finite real");
  if (j.j >= p - 1) throw std::invalid_argument("theta: character index out of range");
  if (parity_of(j) != parity) {
    throw std::invalid_argument("theta: character " + std::to_string(j.j) + " is not " + to_string(parity));
  }
}

double weight(Parity parity, u64 n) { return parity == Parity::even ? 1.0 : static_cast<double>(n); }

double log_tail_bound(u64 p, double x, Parity parity, u64 n0) {
  const double c = std::numbers::pi * x / static_cast<double>(p);
  const double nd = static_cast<double>(n0);
  const double decay = std::exp(-c * (2 * nd + 1));
  const double ratio = parity == Parity::even ? decay : (nd + 1) / nd * decay;
  if (!(ratio < 1)) return std::numeric_limits<double>::infinity();
  return -c * nd * nd + std::log(weight(parity, n0)) - std::log1p(-ratio);
}

double log_max_summand(u64 p, double x, Parity parity) {
  const double c = std::numbers::pi * x / static_cast<double>(p);
  if (parity == Parity::even) return -c;
  const double peak = std::sqrt(1.0 / (2 * c));
  double best = -std::numeric_limits<double>::infinity();
  for (double n : {std::floor(peak), std::ceil(peak)}) {
    if (n < 1) n = 1;
    best = std::max(best, std::log(n) - c * n * n);
  }
  return best;
}

// Per-term relative rounding model: the exponent c n^2 carries ~4u relative
// error, exp/multiply/roots a few more ulps, compensated accumulation ~2u.
double term_rounding_factor(double c, double n) { return 32.0 + 8.0 * c * n * n; }

template <class Real>
Real pi_constant() {
  return boost::math::constants::pi<Real>();
}

template <class Real>
ThetaValue direct_sum(const CharacterGroup& group, CharacterIndex j, double x, Parity parity, int bits) {
  using std::cos;
  using std::exp;
  using std::sin;
  const u64 p = group.modulus();
  const Truncation trunc = choose_truncation(p, x, parity, tail_target_for_bits(bits));
  const double u = std::ldexp(1.0, -bits);

  const Real c = pi_constant<Real>() * Real(x) / Real(p);
  const Real two_pi_over_order = 2 * pi_constant<Real>() / Real(p - 1);
  const double c_double = std::numbers::pi * x / static_cast<double>(p);

  CompensatedSum<Real> re;
  CompensatedSum<Real> im;
  double abs_sum = 0;
  double rounding = 0;
  for (u64 n = 1; n <= trunc.n0; ++n) {
    if (n % p == 0) continue;
    const Real nr(n);
    Real magnitude = exp(-c * nr * nr);
    if (parity == Parity::odd) magnitude *= nr;
    const u64 k = mul_mod(j.j, group.dlog(n), p - 1);
    if constexpr (std::is_same_v<Real, double>) {
      const auto& root = group.root_of_unity(k);
      re.add(magnitude * root.real());
      im.add(magnitude * root.imag());
    } else {
      const Real angle = two_pi_over_order * Real(k);
      re.add(magnitude * cos(angle));
      im.add(magnitude * sin(angle));
    }
    const double mag = static_cast<double>(magnitude);
    abs_sum += mag;
    rounding += mag * term_rounding_factor(c_double, static_cast<double>(n));
  }

  ThetaValue tv;
  tv.value = {static_cast<double>(re.value()), static_cast<double>(im.value())};
  tv.error_radius = trunc.tail + u * rounding + 2 * u * abs_sum;
  if (bits > 53) tv.error_radius += 2 * kUnitRoundoff * std::abs(tv.value);  // narrowing to double
  tv.truncation_n = trunc.n0;
  tv.x = x;
  tv.j = j;
  tv.parity = parity;
  tv.precision_bits = bits;
  return tv;
}

}  // namespace

double theta_tail_bound(u64 p, double x, Parity parity, u64 n0) {
  if (n0 == 0) throw std::invalid_argument("theta_tail_bound: n0 must be positive");
  return std::exp(log_tail_bound(p, x, parity, n0));
}

Truncation choose_truncation(u64 p, double x, Parity parity, double relative_target) {
  const double log_target = std::log(relative_target) + log_max_summand(p, x, parity);
  for (u64 n0 = 1;; ++n0) {
    const double log_tail = log_tail_bound(p, x, parity, n0);
    if (log_tail < log_target) return {n0, std::exp(log_tail)};
    if (n0 > (u64{1} << 40)) throw std::runtime_error("choose_truncation: no admissible truncation");
  }
}

double tail_target_for_bits(int precision_bits) {
  return precision_bits <= 53 ? 1e-18 : std::ldexp(1.0, -precision_bits - 8);
}

bool supported_precision(int precision_bits) {
  return precision_bits == 53 || precision_bits == 128 || precision_bits == 256 || precision_bits == 512;
}

ThetaValue theta_direct(const CharacterGroup& group, CharacterIndex j, double x, Parity parity, int precision_bits) {
  check_arguments(j, x, parity, group.modulus());
  switch (precision_bits) {
    case 53:
      return direct_sum<double>(group, j, x, parity, 53);
    case 128:
      return direct_sum<BinFloat<128>>(group, j, x, parity, 128);
    case 256:
      return direct_sum<BinFloat<256>>(group, j, x, parity, 256);
    case 512:
      return direct_sum<BinFloat<512>>(group, j, x, parity, 512);
    default:
      throw std::invalid_argument("theta: unsupported precision " + std::to_string(precision_bits) +
                                  " bits (use 53, 128, 256 or 512)");
  }
}

std::vector<ThetaValue> theta_all(const CharacterGroup& group, double x, Parity parity) {
  const u64 p = group.modulus();
  check_arguments({parity == Parity::even ? 0u : 1u}, x, parity, p);
  const Truncation trunc = choose_truncation(p, x, parity, tail_target_for_bits(53));
  const double c = std::numbers::pi * x / static_cast<double>(p);
  const u64 order = p - 1;

  // W[k] = sum over n = g^k (mod p) of w(n) exp(-c n^2), ascending n.
  std::vector<CompensatedSum<double>> residue(order);
  double rounding = 0;
  double abs_sum = 0;
  for (u64 n = 1; n <= trunc.n0; ++n) {
    if (n % p == 0) continue;
    const double nd = static_cast<double>(n);
    const double t = weight(parity, n) * std::exp(-c * nd * nd);
    residue[group.dlog(n)].add(t);
    abs_sum += t;
    rounding += t * term_rounding_factor(c, nd);
  }
  std::vector<double> w(order);
  double l2 = 0;
  for (u64 k = 0; k < order; ++k) {
    w[k] = residue[k].value();
    l2 += w[k] * w[k];
  }
  l2 = std::sqrt(l2);

  const DftPlan plan(order, +1);
  const auto spectrum = plan(std::span<const double>(w));
  const double radius = trunc.tail + kUnitRoundoff * (rounding + 2 * abs_sum) + plan.error_bound(l2);

  std::vector<ThetaValue> out;
  out.reserve(order / 2);
  for (CharacterIndex j : group.characters(parity)) {
    ThetaValue tv;
    tv.value = spectrum[j.j];
    tv.error_radius = radius;
    tv.truncation_n = trunc.n0;
    tv.x = x;
    tv.j = j;
    tv.parity = parity;
    out.push_back(tv);
  }
  return out;
}

ThetaValue theta_decide(const CharacterGroup& group, CharacterIndex j, double x, Parity parity,
                        std::span<const int> ladder) {
  if (ladder.empty()) throw std::invalid_argument("theta_decide: empty precision ladder");
  ThetaValue tv;
  for (int bits : ladder) {
    tv = theta_direct(group, j, x, parity, bits);
    if (is_nonzero(tv) == Decision::nonzero) break;
  }
  return tv;
}

RootNumber root_number(const CharacterGroup& group, CharacterIndex j) {
  if (j.j == 0) throw std::invalid_argument("root_number: the trivial character has no functional equation here");
  const ThetaValue tv = theta_direct(group, j, 1.0, parity_of(j));
  RootNumber rn;
  rn.j = j;
  const double modulus = std::abs(tv.value);
  rn.defined = modulus > tv.error_radius;
  if (rn.defined) {
    rn.w = tv.value / std::conj(tv.value);
    rn.error_radius = 2 * tv.error_radius / (modulus - tv.error_radius) + 8 * kUnitRoundoff;
  }
  return rn;
}

FunctionalEquationCheck functional_equation_residual(const CharacterGroup& group, CharacterIndex j, double x) {
  if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("functional equation: x must be positive");
  const Parity parity = parity_of(j);
  FunctionalEquationCheck check;
  check.exponent = parity == Parity::even ? 0.5 : 1.5;
  const RootNumber rn = root_number(group, j);
  if (!rn.defined) return check;

  const double inv_x = 1.0 / x;
  const ThetaValue lhs = theta_direct(group, j, x, parity);
  const ThetaValue rhs = theta_direct(group, group.conjugate(j), inv_x, parity);
  const double scale = std::pow(x, -check.exponent);

  // Sensitivity of theta(y, .) to the rounding of y = 1/x.
  const u64 p = group.modulus();
  double derivative = 0;
  for (u64 n = 1; n <= rhs.truncation_n; ++n) {
    const double nd = static_cast<double>(n);
    const double cn = std::numbers::pi * nd * nd / static_cast<double>(p);
    derivative += weight(parity, n) * cn * std::exp(-cn * inv_x);
  }
  const double inv_x_error = kUnitRoundoff * inv_x;

  const auto predicted = rn.w * scale * rhs.value;
  check.decided = true;
  check.residual = std::abs(lhs.value - predicted);
  check.bound = lhs.error_radius +
                scale * (std::abs(rhs.value) * rn.error_radius + rhs.error_radius + derivative * inv_x_error) +
                8 * kUnitRoundoff * (std::abs(lhs.value) + std::abs(predicted));
  return check;
}

}  // namespace thml
