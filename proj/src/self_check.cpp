#include "thml/self_check.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "thml/char_group.hpp"
#include "thml/gcd_energy.hpp"
#include "thml/mollifier.hpp"
#include "thml/sieve_sets.hpp"
#include "thml/theta.hpp"

namespace thml {

namespace {

std::string fmt(const char* pattern, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

CheckResult orthogonality() {
  const CharacterGroup group(11);
  double worst = 0;
  for (Parity parity : {Parity::even, Parity::odd}) {
    for (u64 m = 1; m < 11; ++m) {
      for (u64 n = 1; n < 11; ++n) {
        double expected = 0;
        if (m == n) expected += 5;
        if ((m + n) % 11 == 0) expected += parity == Parity::even ? 5 : -5;
        const auto s = orthogonality_sum(group, m, n, parity);
        worst = std::max({worst, std::abs(s.value - expected), std::abs(s.imag_residual)});
      }
    }
  }
  return {"orthogonality p=11", worst < 1e-9, fmt("max deviation %.3g (limit %.0e)", worst, 1e-9)};
}

CheckResult batch_matches_direct() {
  const CharacterGroup group(101);
  double worst = 0;
  bool ok = true;
  for (Parity parity : {Parity::even, Parity::odd}) {
    for (const auto& tv : theta_all(group, 1.0, parity)) {
      const auto direct = theta_direct(group, tv.j, 1.0, parity);
      const double diff = std::abs(tv.value - direct.value);
      worst = std::max(worst, diff);
      ok = ok && diff <= tv.error_radius + direct.error_radius;
    }
  }
  return {"batch theta vs direct p=101", ok, fmt("max difference %.3g, within radii: %.0f", worst, ok)};
}

CheckResult functional_equation() {
  const CharacterGroup group(13);
  bool ok = true;
  double worst = 0;
  for (u64 j : {1, 2, 3, 4}) {
    const auto fe = functional_equation_residual(group, {j}, 0.7);
    ok = ok && fe.residual <= fe.bound;
    worst = std::max(worst, fe.residual);
  }
  return {"functional equation p=13 x=0.7", ok, fmt("max residual %.3g, within bound: %.0f", worst, ok)};
}

CheckResult moments_closed_form() {
  const CharacterGroup group(101);
  bool ok = true;
  double worst = 0;
  for (Parity parity : {Parity::even, Parity::odd}) {
    const auto spec = build_mollifier(101, std::nullopt, parity);
    const auto d1 = moment_M1(spec, group, 1.0, MomentMethod::direct);
    const auto c1 = moment_M1(spec, group, 1.0, MomentMethod::closed);
    const auto d2 = moment_M2(spec, group, 1.0, MomentMethod::direct);
    const auto c2 = moment_M2(spec, group, 1.0, MomentMethod::closed);
    const double r1 = std::abs(d1.value - c1.value);
    const double r2 = std::abs(d2.value - c2.value);
    ok = ok && r1 <= d1.error_radius + c1.error_radius && r2 <= d2.error_radius + c2.error_radius;
    worst = std::max({worst, r1, r2});
  }
  return {"mollified moments direct vs closed p=101", ok, fmt("max residual %.3g, within bound: %.0f", worst, ok)};
}

CheckResult gcd_fast_path() {
  const IntegerSet set = rough_set(600, 10);
  const double naive = gcd_sum_naive(set);
  const double fast = gcd_sum_fast(set);
  return {"gcd sum fast vs naive N=600", naive == fast, fmt("naive %.0f fast %.0f", naive, fast)};
}

CheckResult energy_brute() {
  const IntegerSet set = rough_set(120, 3);
  std::map<u64, u64> reps;
  for (u64 a : set.elements()) {
    for (u64 b : set.elements()) ++reps[a * b];
  }
  u64 brute = 0;
  for (const auto& [v, r] : reps) brute += r * r;
  const auto fast = static_cast<double>(energy_self(set));
  return {"self energy vs brute force N=120", fast == static_cast<double>(brute),
          fmt("brute %.0f computed %.0f", static_cast<double>(brute), fast)};
}

CheckResult small_counts() {
  const u64 q = quadruple_count(10);
  const u64 phi = phi_count(10, 2);
  return {"small counts", q == 5 && phi == 5,
          fmt("quadruples(10) = %.0f, phi(10, 2) = %.0f", static_cast<double>(q), static_cast<double>(phi))};
}

}  // namespace

std::vector<CheckResult> run_self_checks() {
  std::vector<CheckResult> results;
  for (auto check : {orthogonality, batch_matches_direct, functional_equation, moments_closed_form, gcd_fast_path,
                     energy_brute, small_counts}) {
    try {
      results.push_back(check());
    } catch (const std::exception& e) {
      results.push_back({"exception", false, e.what()});
    }
  }
  return results;
}

}  // namespace thml
