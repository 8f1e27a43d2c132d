// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 125).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "thml/gcd_energy.hpp"
#include "thml/mollifier.hpp"
#include "thml/sieve_sets.hpp"
#include "thml/theta.hpp"

using namespace thml;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0 = no limit
  std::function<Outcome()> body;
};

std::string printf_string(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::vector<u64> odd_primes(u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u32 q : primes_up_to(hi)) {
    if (q >= lo && q >= 3) out.push_back(q);
  }
  return out;
}

// Every census computed during the run, for the Cauchy-Schwarz criterion.
std::vector<MomentReport> g_censuses;
std::vector<Theorem1Row> g_scan_rows;

Outcome orthogonality_exactness() {
  double worst = 0;
  u64 failures = 0;
  const auto primes = odd_primes(3, 199);
  for (u64 p : primes) {
    const CharacterGroup group(p);
    for (u64 m = 1; m <= p; ++m) {
      for (u64 n = 1; n <= p; ++n) {
        for (bool even : {true, false}) {
          const auto s = orthogonality_sum(group, m, n, even ? Parity::even : Parity::odd);
          const double err = std::max(std::abs(s.value - static_cast<double>(oracle::orthogonality(p, m, n, even))),
                                      std::abs(s.imag_residual));
          worst = std::max(worst, err / static_cast<double>(p));
          failures += err >= 1e-9 * static_cast<double>(p);
        }
      }
    }
  }
  return {failures == 0, printf_string("%zu odd primes, max error/p %.2e (limit 1e-9), %llu failures", primes.size(),
                                       worst, static_cast<unsigned long long>(failures))};
}

Outcome functional_equation() {
  u64 checked = 0, failures = 0;
  double worst_ratio = 0, worst_unit = 0;
  for (u64 p : odd_primes(5, 499)) {
    const CharacterGroup group(p);
    for (u64 j = 1; j < p - 1; ++j) {
      const auto w = root_number(group, {j});
      const double unit = std::abs(std::abs(w.w) - 1);
      worst_unit = std::max(worst_unit, unit);
      failures += unit > 1e-8;
      for (double x : {0.5, 2.0}) {
        const auto fe = functional_equation_residual(group, {j}, x);
        ++checked;
        failures += !(fe.residual <= fe.bound);
        if (fe.bound > 0) worst_ratio = std::max(worst_ratio, fe.residual / fe.bound);
      }
    }
  }
  return {failures == 0,
          printf_string("%llu checks, max residual/bound %.3f, max ||W|-1| %.2e (limit 1e-8), %llu failures",
                        static_cast<unsigned long long>(checked), worst_ratio, worst_unit,
                        static_cast<unsigned long long>(failures))};
}

Outcome dual_route_moments() {
  double worst = 0;
  u64 failures = 0, checked = 0;
  auto rel = [](double a, double b) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
  };
  for (u64 p : odd_primes(3, 499)) {
    const CharacterGroup group(p);
    const u64 cutoff = isqrt(p);
    std::vector<u64> full;
    for (u64 m = 1; m <= cutoff; ++m) full.push_back(m);
    for (Parity parity : {Parity::even, Parity::odd}) {
      const std::vector<MollifierSpec> specs = {
          custom_mollifier(p, IntegerSet(cutoff, {}, SetFamily::custom), parity),
          custom_mollifier(p, IntegerSet(cutoff, {1}, SetFamily::custom), parity),
          build_mollifier(p, std::nullopt, parity),
          custom_mollifier(p, IntegerSet(cutoff, full, SetFamily::custom), parity),
      };
      for (const auto& spec : specs) {
        const double r1 = rel(moment_M1(spec, group, 1.0, MomentMethod::direct).value,
                              moment_M1(spec, group, 1.0, MomentMethod::closed).value);
        const double r2 = rel(moment_M2(spec, group, 1.0, MomentMethod::direct).value,
                              moment_M2(spec, group, 1.0, MomentMethod::closed).value);
        worst = std::max({worst, r1, r2});
        failures += (r1 > 1e-9) + (r2 > 1e-9);
        checked += 2;
      }
    }
  }
  return {failures == 0, printf_string("%llu comparisons, max relative gap %.2e (limit 1e-9)",
                                       static_cast<unsigned long long>(checked), worst)};
}

Outcome p5_fixture() {
  const CharacterGroup group(5);
  const auto spec = custom_mollifier(5, IntegerSet(2, {1}, SetFamily::custom), Parity::even);
  const auto report = nonvanishing_census(group, 1.0, Parity::even, spec);
  g_censuses.push_back(report);
  g_censuses.push_back(nonvanishing_census(group, 1.0, Parity::odd, std::nullopt));

  // independent re-derivation with the long double truncated series
  const double o0 = static_cast<double>(oracle::theta(5, 0, 1, true).real());
  const double o2 = static_cast<double>(oracle::theta(5, 2, 1, true).real());
  const auto [om1, om2] = oracle::mollified_moments(5, {1}, 1, true);
  const double ocs = static_cast<double>(om1 * om1 / om2);

  const double t0 = theta_direct(group, {0}, 1, Parity::even).value.real();
  const double t2 = theta_direct(group, {2}, 1, Parity::even).value.real();
  const double errs[] = {std::abs(t0 - o0), std::abs(t2 - o2), std::abs(report.m1 - static_cast<double>(om1)),
                         std::abs(report.m2 - static_cast<double>(om2)), std::abs(report.cs_lower_bound - ocs)};
  double worst = 0;
  for (double e : errs) worst = std::max(worst, e);
  const bool ok = worst < 1e-4 && report.cs_lower_bound <= static_cast<double>(report.nonvanishing) &&
                  report.nonvanishing == 2 && report.undecided == 0;
  // the printed fixture numbers carry hand-rounding error; report the gap
  const double printed[] = {0.61799, 0.44890, 1.066886, 0.583420, 1.9510};
  const double mine[] = {t0, t2, report.m1, report.m2, report.cs_lower_bound};
  double printed_gap = 0;
  for (int k = 0; k < 5; ++k) printed_gap = std::max(printed_gap, std::abs(mine[k] - printed[k]));
  return {ok, printf_string("theta0 %.8f theta2 %.8f M1 %.8f M2 %.8f cs %.6f <= count %zu; max gap to oracle %.1e "
                            "(limit 1e-4); gap to printed fixture %.1e",
                            t0, t2, report.m1, report.m2, report.cs_lower_bound, report.nonvanishing, worst,
                            printed_gap)};
}

Outcome theorem1_trend() {
  const auto primes = odd_primes(1000, 10000);
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  g_scan_rows = theorem1_scan(primes, 1.0, Parity::even, threads);
  double min_norm = 1e300;
  u64 below = 0, undecided = 0, floor_fail = 0;
  for (const auto& r : g_scan_rows) {
    min_norm = std::min(min_norm, r.normalized);
    below += r.normalized < 0.5;
    undecided += r.undecided;
    floor_fail += r.count < static_cast<std::size_t>(std::floor(r.cs_lower_bound));
  }
  return {below == 0 && undecided == 0 && floor_fail == 0,
          printf_string("%zu primes, min count sqrt(log p)/p %.4f (limit 0.5), undecided %llu, floor(cs) violations %llu",
                        primes.size(), min_norm, static_cast<unsigned long long>(undecided),
                        static_cast<unsigned long long>(floor_fail))};
}

Outcome quadruple_asymptotic() {
  const std::vector<double> xs{1e4, 1e5, 1e6};
  std::vector<double> counts;
  for (double x : xs) counts.push_back(static_cast<double>(quadruple_count(static_cast<u64>(x))));
  const auto fit = fit_x_log_x(xs, counts);
  return {fit.a >= 0.33 && fit.a <= 0.42,
          printf_string("counts %.0f %.0f %.0f, fitted a %.5f b %.5f (window [0.33, 0.42], target 0.375)", counts[0],
                        counts[1], counts[2], fit.a, fit.b)};
}

Outcome brun_ratio() {
  const auto rows = brun_ratio_scan(1'000'000, {10, 20, 50});
  bool ok = true;
  std::string detail;
  for (const auto& r : rows) {
    ok = ok && r.ratio >= 0.9 && r.ratio <= 1.1;
    detail += printf_string("y=%g ratio %.5f; ", r.y, r.ratio);
  }
  return {ok, detail + "window [0.9, 1.1]"};
}

Outcome gcd_dichotomy() {
  u64 pairs = 0, exceptions = 0;
  for (u64 n = 1; n <= 500; ++n) {
    for (double y : {2.0, 5.0, 10.0, std::sqrt(static_cast<double>(n))}) {
      if (y < 1) continue;
      const IntegerSet rough = rough_set(n, y);
      const auto& set = rough.elements();
      for (std::size_t a = 0; a < set.size(); ++a) {
        for (std::size_t b = a; b < set.size(); ++b) {
          ++pairs;
          if (set[b] % set[a] != 0 && static_cast<double>(binary_gcd(set[a], set[b])) >= static_cast<double>(n) / y) {
            ++exceptions;
          }
        }
      }
    }
  }
  return {exceptions == 0, printf_string("%llu pairs, %llu exceptions", static_cast<unsigned long long>(pairs),
                                         static_cast<unsigned long long>(exceptions))};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240611);
  u64 mismatches = 0;
  double worst_rel = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const u64 upper = 1 + rng() % 300;
    std::uniform_int_distribution<u64> pick(1, upper);
    const std::size_t size = 1 + rng() % std::min<u64>(upper, 60);
    std::set<u64> chosen;
    while (chosen.size() < size) chosen.insert(pick(rng));
    const IntegerSet set(upper, {chosen.begin(), chosen.end()}, SetFamily::custom);
    const u64 n = 1 + rng() % upper;

    const double ref_s = static_cast<double>(oracle::gcd_sum(set.elements()));
    const double rel = std::abs(gcd_sum_fast(set) - ref_s) / ref_s;
    worst_rel = std::max(worst_rel, rel);
    mismatches += rel > 1e-9;

    const u64 cross = oracle::energy_cross(set.elements(), n);
    const u64 self = oracle::energy_self(set.elements());
    mismatches += energy_cross(set, n) != cross;
    mismatches += energy_cross(set, n, 1) != cross;
    mismatches += energy_self(set) != self;
    mismatches += energy_self(set, 1) != self;

    const double y = 1 + static_cast<double>(rng() % 2000) / 100.0;
    mismatches += rough_set(upper, y).elements() != oracle::rough(upper, y);
  }
  return {mismatches == 0, printf_string("100 instances, %llu mismatches, max gcd-sum relative gap %.2e",
                                         static_cast<unsigned long long>(mismatches), worst_rel)};
}

Outcome frontier_ordering() {
  const u64 n = 100'000;
  const double y = std::exp(std::sqrt(std::log(static_cast<double>(n))));
  const double r_rough = ratio_R(rough_set(n, y));
  const double r_primes = ratio_R(primes_set(n));
  const double r_all = ratio_R(all_integers(n));
  return {r_rough > r_primes && r_rough > r_all,
          printf_string("R(rough y=%.2f) %.4e, R(primes) %.4e, R([1,N]) %.4e; rough > primes: %s, rough > all: %s", y,
                        r_rough, r_primes, r_all, r_rough > r_primes ? "yes" : "no", r_rough > r_all ? "yes" : "no")};
}

Outcome cauchy_schwarz_invariant() {
  // a few extra censuses with mollifiers of both parities
  for (u64 p : {101ull, 997ull, 10007ull}) {
    const CharacterGroup group(p);
    for (Parity parity : {Parity::even, Parity::odd}) {
      g_censuses.push_back(nonvanishing_census(group, 1.0, parity, build_mollifier(p, std::nullopt, parity)));
      g_censuses.push_back(nonvanishing_census(group, 0.8, parity, build_mollifier(p, 1.0, parity)));
    }
  }
  u64 violations = 0;
  for (const auto& r : g_censuses) violations += !cauchy_schwarz_consistent(r);
  for (const auto& r : g_scan_rows) violations += !r.cauchy_schwarz_holds;
  return {violations == 0, printf_string("%zu censuses, %llu violations", g_censuses.size() + g_scan_rows.size(),
                                         static_cast<unsigned long long>(violations))};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "orthogonality exactness", 30, orthogonality_exactness},
      {2, "functional equation", 120, functional_equation},
      {3, "dual-route moments", 120, dual_route_moments},
      {4, "p=5 fixture", 0, p5_fixture},
      {5, "census trend p in [1e3, 1e4]", 600, theorem1_trend},
      {6, "quadruple asymptotic", 300, quadruple_asymptotic},
      {7, "Brun ratio", 30, brun_ratio},
      {8, "gcd dichotomy", 10, gcd_dichotomy},
      {9, "oracle equivalence", 60, oracle_equivalence},
      {10, "frontier ordering", 300, frontier_ordering},
      {11, "Cauchy-Schwarz invariant", 0, cauchy_schwarz_invariant},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit_s == 0 || seconds < c.time_limit_s;
    const bool passed = outcome.passed && in_time;
    failed += !passed;
    std::string limit = c.time_limit_s > 0 ? printf_string(" < %gs", c.time_limit_s) : std::string();
    std::printf("%s %2d %-30s %s [%.2fs%s]\n", passed ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str(), seconds,
                limit.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return std::min(failed, 125);
}
