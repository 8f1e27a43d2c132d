#include "thml/mollifier.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "thml/compensated_sum.hpp"
#include "thml/fft.hpp"

namespace thml {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

double sign_of_reflection(Parity parity) { return parity == Parity::even ? 1.0 : -1.0; }

// Residue-class sums V(r) = sum_{n <= n0, n = r (p)} w(n) exp(-pi n^2 x / p),
// accumulated independently of the theta engine.
struct ResidueSums {
  std::vector<double> v;   // indexed by residue 0..p-1, v[0] = 0
  double tail = 0;         // bounds the total dropped mass over all residues
  double relative = 0;     // per-entry relative rounding bound
  double abs_total = 0;
};

ResidueSums residue_sums(u64 p, double x, Parity parity) {
  const Truncation trunc = choose_truncation(p, x, parity, tail_target_for_bits(53));
  const double c = std::numbers::pi * x / static_cast<double>(p);
  std::vector<CompensatedSum<double>> acc(p);
  double total = 0;
  for (u64 n = 1; n <= trunc.n0; ++n) {
    if (n % p == 0) continue;
    const double nd = static_cast<double>(n);
    double t = std::exp(-c * nd * nd);
    if (parity == Parity::odd) t *= nd;
    acc[n % p].add(t);
    total += t;
  }
  ResidueSums out;
  out.v.resize(p);
  for (u64 r = 0; r < p; ++r) out.v[r] = acc[r].value();
  const double n0 = static_cast<double>(trunc.n0);
  out.tail = trunc.tail;
  out.relative = kUnitRoundoff * (34.0 + 8.0 * c * n0 * n0);
  out.abs_total = total;
  return out;
}

void check_spec(const MollifierSpec& spec, const CharacterGroup& group) {
  if (spec.p != group.modulus()) throw std::invalid_argument("mollifier built for a different modulus");
}

}  // namespace

double default_sieve_parameter(u64 p) { return std::exp(std::sqrt(std::log(static_cast<double>(p)))); }

MollifierSpec build_mollifier(u64 p, std::optional<double> y, Parity parity) {
  if (!is_prime(p) || p < 3) throw std::invalid_argument("build_mollifier: modulus must be an odd prime");
  const double sieve_y = y.value_or(default_sieve_parameter(p));
  if (!(sieve_y >= 1)) throw std::invalid_argument("build_mollifier: y must be at least 1");
  MollifierSpec spec;
  spec.p = p;
  spec.cutoff = isqrt(p);
  spec.support = rough_set(spec.cutoff, sieve_y);
  spec.parity = parity;
  spec.y = sieve_y;
  return spec;
}

MollifierSpec custom_mollifier(u64 p, const IntegerSet& support, Parity parity) {
  if (!is_prime(p) || p < 3) throw std::invalid_argument("custom_mollifier: modulus must be an odd prime");
  MollifierSpec spec;
  spec.p = p;
  spec.cutoff = isqrt(p);
  if (support.max_element() > spec.cutoff) {
    throw std::invalid_argument("custom_mollifier: support exceeds floor(sqrt p) = " + std::to_string(spec.cutoff));
  }
  spec.support = IntegerSet(spec.cutoff, support.elements(), support.family(), support.sieve_parameter());
  spec.parity = parity;
  return spec;
}

std::vector<std::complex<double>> mollifier_values(const MollifierSpec& spec, const CharacterGroup& group) {
  check_spec(spec, group);
  std::vector<std::complex<double>> out;
  for (CharacterIndex j : group.characters(spec.parity)) {
    CompensatedComplexSum<double> sum;
    for (u64 m : spec.support.elements()) sum.add(std::conj(group.value(j, m)));
    out.push_back(sum.value());
  }
  return out;
}

MomentValue moment_M1_from(const std::vector<std::complex<double>>& mollifier, const std::vector<ThetaValue>& thetas) {
  if (mollifier.size() != thetas.size()) throw std::invalid_argument("moment_M1: size mismatch");
  CompensatedComplexSum<double> sum;
  double err = 0;
  double magnitude = 0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const auto term = mollifier[i] * thetas[i].value;
    sum.add(term);
    err += std::abs(mollifier[i]) * thetas[i].error_radius;
    magnitude += std::abs(term);
  }
  const auto total = sum.value();
  // M(chi) itself carries at most ~|A| u of rounding per character.
  return {total.real(), total.imag(), err + 16 * kUnitRoundoff * magnitude};
}

MomentValue moment_M2_from(const std::vector<std::complex<double>>& mollifier, const std::vector<ThetaValue>& thetas) {
  if (mollifier.size() != thetas.size()) throw std::invalid_argument("moment_M2: size mismatch");
  CompensatedSum<double> sum;
  double err = 0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double a = std::abs(mollifier[i]);
    const double t = std::abs(thetas[i].value);
    const double r = thetas[i].error_radius;
    const double term = std::norm(mollifier[i] * thetas[i].value);
    sum.add(term);
    err += a * a * (2 * t * r + r * r) + 16 * kUnitRoundoff * term;
  }
  return {sum.value(), 0.0, err};
}

MomentValue moment_M1(const MollifierSpec& spec, const CharacterGroup& group, double x, MomentMethod method) {
  check_spec(spec, group);
  if (method == MomentMethod::direct) {
    return moment_M1_from(mollifier_values(spec, group), theta_all(group, x, spec.parity));
  }
  const u64 p = group.modulus();
  const ResidueSums v = residue_sums(p, x, spec.parity);
  const double sigma = sign_of_reflection(spec.parity);
  CompensatedSum<double> sum;
  double magnitude = 0;
  for (u64 m : spec.support.elements()) {
    const u64 r = m % p;
    if (r == 0) continue;
    sum.add(v.v[r]);
    sum.add(sigma * v.v[p - r]);
    magnitude += v.v[r] + v.v[p - r];
  }
  const double half = static_cast<double>(p - 1) / 2;
  const double err = half * (v.tail + (v.relative + 4 * kUnitRoundoff) * magnitude);
  return {half * sum.value(), 0.0, err};
}

MomentValue moment_M2(const MollifierSpec& spec, const CharacterGroup& group, double x, MomentMethod method) {
  check_spec(spec, group);
  if (method == MomentMethod::direct) {
    return moment_M2_from(mollifier_values(spec, group), theta_all(group, x, spec.parity));
  }
  const u64 p = group.modulus();
  const ResidueSums v = residue_sums(p, x, spec.parity);
  const double sigma = sign_of_reflection(spec.parity);
  const auto& support = spec.support.elements();
  double vmax = 0;
  for (double t : v.v) vmax = std::max(vmax, t);

  CompensatedSum<double> sum;
  double magnitude = 0;
  for (u64 m1 : support) {
    const u64 inv_m1 = inverse_mod(m1, p);
    for (u64 m2 : support) {
      // m2 n1 = +-m1 n2: with n1 = s the partner class is t = m2 s / m1.
      const u64 ratio = mul_mod(m2 % p, inv_m1, p);
      CompensatedSum<double> inner;
      for (u64 s = 1; s < p; ++s) {
        if (v.v[s] == 0) continue;
        const u64 t = mul_mod(ratio, s, p);
        inner.add(v.v[s] * (v.v[t] + sigma * v.v[p - t]));
        magnitude += v.v[s] * (v.v[t] + v.v[p - t]);
      }
      sum.add(inner.value());
    }
  }
  const double half = static_cast<double>(p - 1) / 2;
  const double pairs = static_cast<double>(support.size()) * static_cast<double>(support.size());
  const double truncation = pairs * 2 * (2 * v.tail * (vmax + v.tail) + v.tail * v.tail);
  const double err = half * (truncation + (2 * v.relative + 8 * kUnitRoundoff) * magnitude);
  return {half * sum.value(), 0.0, err};
}

double plain_moment_from(const std::vector<ThetaValue>& thetas, unsigned k) {
  if (k == 0) return static_cast<double>(thetas.size());
  CompensatedSum<double> sum;
  for (const auto& tv : thetas) sum.add(std::pow(std::norm(tv.value), static_cast<double>(k)));
  return sum.value();
}

double plain_moment(const CharacterGroup& group, double x, unsigned k, Parity parity) {
  if (k == 0) return static_cast<double>(group.character_count(parity));
  return plain_moment_from(theta_all(group, x, parity), k);
}

bool cauchy_schwarz_consistent(const MomentReport& report) {
  if (!report.has_mollifier) return true;
  const double available = static_cast<double>(report.nonvanishing + report.undecided);
  const double m1_abs = std::hypot(report.m1, report.m1_imag);
  const double lower = std::max(0.0, m1_abs - report.m1_error);
  return available * (report.m2 + report.m2_error) >= lower * lower;
}

MomentReport nonvanishing_census(const CharacterGroup& group, double x, Parity parity,
                                 const std::optional<MollifierSpec>& spec, std::span<const int> ladder,
                                 bool with_closed_forms) {
  if (spec && spec->parity != parity) throw std::invalid_argument("census: mollifier parity mismatch");
  MomentReport report;
  report.p = group.modulus();
  report.x = x;
  report.parity = parity;

  auto thetas = theta_all(group, x, parity);
  report.characters = thetas.size();
  for (auto& tv : thetas) {
    if (is_nonzero(tv) == Decision::undecided && !ladder.empty()) {
      tv = theta_decide(group, tv.j, x, parity, ladder);
      report.max_precision_used = std::max(report.max_precision_used, tv.precision_bits);
    }
    if (is_nonzero(tv) == Decision::nonzero) {
      ++report.nonvanishing;
    } else {
      ++report.undecided;
    }
  }
  for (unsigned k : kDefaultMomentOrders) report.s2k[k] = plain_moment_from(thetas, k);

  if (spec) {
    report.has_mollifier = true;
    report.support_size = spec->support.size();
    report.y = spec->y.value_or(0);
    const auto values = mollifier_values(*spec, group);
    const MomentValue m1 = moment_M1_from(values, thetas);
    const MomentValue m2 = moment_M2_from(values, thetas);
    report.m1 = m1.value;
    report.m1_imag = m1.imag;
    report.m1_error = m1.error_radius;
    report.m2 = m2.value;
    report.m2_error = m2.error_radius;
    report.cs_lower_bound = m2.value > 0 ? (m1.value * m1.value + m1.imag * m1.imag) / m2.value : 0.0;
    if (with_closed_forms) {
      const MomentValue c1 = moment_M1(*spec, group, x, MomentMethod::closed);
      const MomentValue c2 = moment_M2(*spec, group, x, MomentMethod::closed);
      report.closed_form_residuals.m1 = std::abs(m1.value - c1.value);
      report.closed_form_residuals.m2 = std::abs(m2.value - c2.value);
      report.closed_form_residuals.m1_tolerance = m1.error_radius + c1.error_radius;
      report.closed_form_residuals.m2_tolerance = m2.error_radius + c2.error_radius;
    }
  }
  report.cauchy_schwarz_holds = cauchy_schwarz_consistent(report);
  return report;
}

std::vector<Theorem1Row> theorem1_scan(const std::vector<u64>& primes, double x, Parity parity, unsigned threads,
                                       std::span<const int> ladder) {
  std::vector<Theorem1Row> rows(primes.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < primes.size() && !failed; i = next++) {
      try {
        const u64 p = primes[i];
        const CharacterGroup group(p);
        const auto spec = build_mollifier(p, std::nullopt, parity);
        const MomentReport report = nonvanishing_census(group, x, parity, spec, ladder, false);
        Theorem1Row& row = rows[i];
        row.p = p;
        row.count = report.nonvanishing;
        row.undecided = report.undecided;
        row.cs_lower_bound = report.cs_lower_bound;
        row.scale = static_cast<double>(p) / std::sqrt(std::log(static_cast<double>(p)));
        row.normalized = static_cast<double>(report.nonvanishing) / row.scale;
        row.cauchy_schwarz_holds = report.cauchy_schwarz_holds;
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<CancellationRow> first_moment_cancellation(const CharacterGroup& group, const std::vector<u64>& n_grid) {
  const u64 p = group.modulus();
  const u64 order = p - 1;
  const DftPlan plan(order, +1);
  std::vector<CancellationRow> rows;
  for (u64 n : n_grid) {
    if (n < 1 || n > p) throw std::invalid_argument("first_moment_cancellation: need 1 <= N <= p");
    std::vector<double> indicator(order, 0.0);
    for (u64 k = 0; k < order; ++k) indicator[k] = group.power_of_root(k) <= n ? 1.0 : 0.0;
    const auto sums = plan(std::span<const double>(indicator));
    CompensatedSum<double> total;
    for (const auto& s : sums) total.add(std::abs(s));
    CancellationRow row;
    row.n = n;
    row.mean_abs = total.value() / static_cast<double>(order);
    row.ratio = row.mean_abs / std::sqrt(static_cast<double>(n));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace thml
