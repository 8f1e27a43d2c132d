#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "thml/mollifier.hpp"

using namespace thml;

namespace {

IntegerSet support(u64 p, std::vector<u64> v) { return IntegerSet(isqrt(p), std::move(v), SetFamily::custom); }

}  // namespace

TEST_CASE("mollifier supports") {
  const auto big = build_mollifier(10007, std::nullopt, Parity::even);
  CHECK(big.cutoff == 100);
  CHECK(big.support.size() == 18);
  CHECK(*big.y == doctest::Approx(std::exp(std::sqrt(std::log(10007.0)))));
  CHECK(build_mollifier(5, std::nullopt, Parity::even).support.elements() == std::vector<u64>{1});
  CHECK(build_mollifier(101, 1.0, Parity::odd).support.size() == 10);
  CHECK_THROWS(build_mollifier(100, std::nullopt, Parity::even));
  CHECK_THROWS(build_mollifier(101, 0.5, Parity::even));
  CHECK_THROWS(custom_mollifier(101, IntegerSet(20, {1, 11}, SetFamily::custom), Parity::even));
}

TEST_CASE("mollifier values") {
  const CharacterGroup group(13);
  const auto spec = custom_mollifier(13, support(13, {1, 2, 3}), Parity::odd);
  const auto values = mollifier_values(spec, group);
  REQUIRE(values.size() == 6);
  const auto dlog = oracle::dlog_table(13);
  for (std::size_t k = 0; k < values.size(); ++k) {
    const u64 j = 2 * k + 1;
    oracle::cld ref = 0;
    for (u64 m : {1, 2, 3}) ref += std::conj(oracle::character(13, dlog, j, m));
    CHECK(std::abs(values[k] - std::complex<double>(ref)) < 1e-13);
  }
}

TEST_CASE("p=5 fixture against the 40-digit reference") {
  const CharacterGroup group(5);
  const auto spec = custom_mollifier(5, support(5, {1}), Parity::even);
  for (MomentMethod method : {MomentMethod::direct, MomentMethod::closed}) {
    CHECK(moment_M1(spec, group, 1.0, method).value == doctest::Approx(1.0670622869).epsilon(1e-9));
    CHECK(moment_M2(spec, group, 1.0, method).value == doctest::Approx(0.5835924868).epsilon(1e-9));
  }
  CHECK(plain_moment(group, 1.0, 1, Parity::even) == doctest::Approx(0.5835924868).epsilon(1e-9));
  CHECK(plain_moment(group, 1.0, 2, Parity::even) == doctest::Approx(0.1865513524).epsilon(1e-9));
  CHECK(plain_moment(group, 1.0, 0, Parity::even) == 2.0);

  const auto report = nonvanishing_census(group, 1.0, Parity::even, spec);
  CHECK(report.nonvanishing == 2);
  CHECK(report.undecided == 0);
  CHECK(report.cs_lower_bound == doctest::Approx(1.9510565163).epsilon(1e-9));
  CHECK(report.cs_lower_bound <= 2);
  CHECK(report.cauchy_schwarz_holds);

  const auto odd = nonvanishing_census(group, 1.0, Parity::odd, std::nullopt);
  CHECK(odd.nonvanishing == 2);
  CHECK_FALSE(odd.has_mollifier);
}

TEST_CASE("moments match the brute-force oracle") {
  for (u64 p : {7ull, 13ull, 29ull}) {
    const CharacterGroup group(p);
    for (Parity parity : {Parity::even, Parity::odd}) {
      std::vector<u64> full;
      for (u64 m = 1; m <= isqrt(p); ++m) full.push_back(m);
      const auto spec = custom_mollifier(p, support(p, full), parity);
      const auto [m1, m2] = oracle::mollified_moments(p, full, 1.0, parity == Parity::even);
      CHECK(moment_M1(spec, group, 1.0, MomentMethod::direct).value ==
            doctest::Approx(static_cast<double>(m1)).epsilon(1e-12));
      CHECK(moment_M2(spec, group, 1.0, MomentMethod::closed).value ==
            doctest::Approx(static_cast<double>(m2)).epsilon(1e-12));
    }
  }
}

TEST_CASE("direct and closed routes agree") {
  for (u64 p : {13ull, 101ull, 257ull}) {
    const CharacterGroup group(p);
    for (Parity parity : {Parity::even, Parity::odd}) {
      for (double x : {0.7, 1.0, 1.5}) {
        for (const auto& spec : {build_mollifier(p, std::nullopt, parity), build_mollifier(p, 1.0, parity)}) {
          const auto d1 = moment_M1(spec, group, x, MomentMethod::direct);
          const auto c1 = moment_M1(spec, group, x, MomentMethod::closed);
          const auto d2 = moment_M2(spec, group, x, MomentMethod::direct);
          const auto c2 = moment_M2(spec, group, x, MomentMethod::closed);
          CHECK(std::abs(d1.value - c1.value) <= 1e-9 * std::abs(c1.value));
          CHECK(std::abs(d2.value - c2.value) <= 1e-9 * std::abs(c2.value));
          CHECK(std::abs(d1.value - c1.value) <= d1.error_radius + c1.error_radius);
          CHECK(std::abs(d1.imag) <= d1.error_radius);
        }
      }
    }
  }
}

TEST_CASE("empty mollifier") {
  const CharacterGroup group(13);
  const auto spec = custom_mollifier(13, support(13, {}), Parity::even);
  CHECK(moment_M1(spec, group, 1.0, MomentMethod::direct).value == 0.0);
  CHECK(moment_M2(spec, group, 1.0, MomentMethod::closed).value == 0.0);
  const auto report = nonvanishing_census(group, 1.0, Parity::even, spec);
  CHECK(report.cs_lower_bound == 0.0);
  CHECK(report.cauchy_schwarz_holds);
}

TEST_CASE("moments from precomputed batches") {
  const CharacterGroup group(101);
  const auto spec = build_mollifier(101, std::nullopt, Parity::odd);
  const auto thetas = theta_all(group, 1.0, Parity::odd);
  const auto mol = mollifier_values(spec, group);
  CHECK(moment_M1_from(mol, thetas).value ==
        doctest::Approx(moment_M1(spec, group, 1.0, MomentMethod::direct).value));
  CHECK(plain_moment_from(thetas, 1) == doctest::Approx(plain_moment(group, 1.0, 1, Parity::odd)));
  CHECK(plain_moment_from(thetas, 0) == 50.0);
  CHECK_THROWS(moment_M1_from(std::vector<std::complex<double>>(3), thetas));
}

TEST_CASE("cauchy-schwarz consistency check") {
  MomentReport r;
  r.has_mollifier = true;
  r.nonvanishing = 2;
  r.m1 = 1;
  r.m2 = 0.5;
  CHECK(cauchy_schwarz_consistent(r));
  r.m2 = 0.4;
  CHECK_FALSE(cauchy_schwarz_consistent(r));
  r.m2_error = 0.2;
  CHECK(cauchy_schwarz_consistent(r));
}

TEST_CASE("census scan") {
  const std::vector<u64> primes{101, 103, 107, 109, 113};
  const auto rows = theorem1_scan(primes, 1.0, Parity::even, 3);
  REQUIRE(rows.size() == primes.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].p == primes[k]);
    CHECK(rows[k].undecided == 0);
    CHECK(rows[k].count >= static_cast<std::size_t>(std::floor(rows[k].cs_lower_bound)));
    CHECK(rows[k].normalized == doctest::Approx(rows[k].count * std::sqrt(std::log(double(primes[k]))) / primes[k]));
    CHECK(rows[k].cauchy_schwarz_holds);
  }
  const auto serial = theorem1_scan(primes, 1.0, Parity::even, 1);
  for (std::size_t k = 0; k < rows.size(); ++k) CHECK(serial[k].cs_lower_bound == rows[k].cs_lower_bound);
}

TEST_CASE("first-moment cancellation") {
  const CharacterGroup five(5);
  const auto rows = first_moment_cancellation(five, {1, 2, 5});
  CHECK(rows[0].mean_abs == doctest::Approx(1.0));
  CHECK(rows[1].mean_abs == doctest::Approx((2 + 2 * std::sqrt(2.0)) / 4));
  CHECK(rows[2].mean_abs == doctest::Approx(1.0));  // only the trivial character survives a full period
  const CharacterGroup big(10007);
  const auto r = first_moment_cancellation(big, {100});
  CHECK(r[0].ratio < 1);
  CHECK_THROWS(first_moment_cancellation(five, {6}));
  CHECK_THROWS(first_moment_cancellation(five, {0}));
}
