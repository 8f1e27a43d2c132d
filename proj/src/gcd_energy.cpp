#include "thml/gcd_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "thml/compensated_sum.hpp"

namespace thml {

namespace {

constexpr std::size_t kEnergySegment = std::size_t{1} << 22;

// Open-addressing multiplicity table keyed by product (keys are >= 1, 0 marks empty).
class ProductCounter {
 public:
  explicit ProductCounter(u64 expected) {
    std::size_t capacity = 16;
    while (capacity < 2 * expected) capacity <<= 1;
    keys_.assign(capacity, 0);
    counts_.assign(capacity, 0);
    mask_ = capacity - 1;
  }

  void add(u64 key) {
    std::size_t slot = static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ull) >> 17) & mask_;
    while (keys_[slot] != 0 && keys_[slot] != key) slot = (slot + 1) & mask_;
    keys_[slot] = key;
    ++counts_[slot];
  }

  u128 sum_of_squares() const {
    u128 total = 0;
    for (u64 c : counts_) total += static_cast<u128>(c) * c;
    return total;
  }

 private:
  std::vector<u64> keys_;
  std::vector<u64> counts_;
  std::size_t mask_ = 0;
};

void require_product_range(u64 a_max, u64 b_max) {
  if (b_max != 0 && a_max > std::numeric_limits<u64>::max() / 2 / b_max) {
    throw std::overflow_error("energy: products exceed the 64-bit range");
  }
}

// E = sum_v r(v)^2 where r(v) counts (a, b) in A x B with a b = v, B given by a
// sorted list; segment by segment over the product range.
u128 segmented_energy(const std::vector<u64>& left, const std::vector<u64>& right) {
  if (left.empty() || right.empty()) return 0;
  const u64 top = left.back() * right.back();
  std::vector<u32> counts(kEnergySegment);
  std::vector<std::size_t> cursor(left.size(), 0);
  u128 total = 0;
  for (u64 lo = 1; lo <= top; lo += kEnergySegment) {
    const u64 hi = std::min<u64>(top, lo + kEnergySegment - 1);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < left.size(); ++i) {
      const u64 a = left[i];
      if (a > hi) break;
      std::size_t& k = cursor[i];
      while (k < right.size() && a * right[k] <= hi) {
        ++counts[a * right[k] - lo];
        ++k;
      }
    }
    const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    for (std::size_t i = 0; i < len; ++i) total += static_cast<u128>(counts[i]) * counts[i];
  }
  return total;
}

u128 table_energy(const std::vector<u64>& left, const std::vector<u64>& right) {
  ProductCounter counter(static_cast<u64>(left.size()) * right.size());
  for (u64 a : left) {
    for (u64 b : right) counter.add(a * b);
  }
  return counter.sum_of_squares();
}

// E(B, [1, n]) without touching the |B| n products. With a = g a', c = g c'
// coprime, ab = cd forces b = c' t, d = a' t, so
//   E = sum_{a, c in B} floor(n gcd(a, c) / max(a, c)).
// Grouping by h = g e with Moebius over e | h to remove the coprimality:
//   E = sum_h sum_{e | h} mu(e) sum_{m in B/h} (2 rank(m) - 1) floor(n / (e m)),
// where B/h = {u : h u in B} ascending and rank is the 1-based position.
u128 divisor_energy(const std::vector<u64>& set, u64 n) {
  const u64 top = set.back();
  std::vector<char> member(top + 1, 0);
  for (u64 v : set) member[v] = 1;
  const auto spf = smallest_prime_factor_table(top);
  __int128 total = 0;
  std::vector<std::pair<u64, int>> squarefree;  // (e, mu(e))
  std::vector<u64> slice;
  for (u64 h = 1; h <= top; ++h) {
    slice.clear();
    for (u64 u = 1, v = h; v <= top; ++u, v += h) {
      if (member[v]) slice.push_back(u);
    }
    if (slice.empty()) continue;
    squarefree.assign(1, {1, 1});
    for (u64 rest = h; rest > 1;) {
      const u64 q = spf[rest];
      while (rest % q == 0) rest /= q;
      const std::size_t k = squarefree.size();
      for (std::size_t i = 0; i < k; ++i) squarefree.emplace_back(squarefree[i].first * q, -squarefree[i].second);
    }
    for (const auto& [e, mu] : squarefree) {
      const u64 reach = n / e;
      if (reach == 0) continue;
      __int128 part = 0;
      for (std::size_t i = 0; i < slice.size() && slice[i] <= reach; ++i) {
        part += static_cast<__int128>(2 * i + 1) * (reach / slice[i]);
      }
      total += mu * part;
    }
  }
  return static_cast<u128>(total);
}

}  // namespace

double gcd_sum_naive(const IntegerSet& set, std::size_t cap) {
  if (set.size() > cap) {
    throw std::invalid_argument("gcd_sum_naive: set of size " + std::to_string(set.size()) + " exceeds the cap " +
                                std::to_string(cap) + "; use gcd_sum_fast");
  }
  const auto& v = set.elements();
  CompensatedSum<double> sum;
  for (std::size_t j = 0; j < v.size(); ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      sum.add(static_cast<double>(binary_gcd(v[i], v[j])) / static_cast<double>(v[j]));
    }
  }
  return sum.value();
}

double gcd_sum_fast(const IntegerSet& set) {
  if (set.empty()) return 0;
  const u64 top = set.max_element();
  const auto spf = smallest_prime_factor_table(top);
  const auto phi = totient_table(spf);
  std::vector<u32> multiples(top + 1, 0);
  std::vector<u64> divisors;
  CompensatedSum<double> sum;
  for (u64 m : set.elements()) {
    divisors_of(m, spf, divisors);
    u64 inner = 0;  // sum over earlier m1 (and m itself) of gcd(m1, m), exactly
    for (u64 d : divisors) {
      ++multiples[d];
      inner += static_cast<u64>(phi[d]) * multiples[d];
    }
    sum.add(static_cast<double>(inner) / static_cast<double>(m));
  }
  return sum.value();
}

double sigma_minus1_sum(const IntegerSet& set) {
  if (set.empty()) return 0;
  const auto spf = smallest_prime_factor_table(set.max_element());
  std::vector<u64> divisors;
  CompensatedSum<double> sum;
  for (u64 m : set.elements()) {
    divisors_of(m, spf, divisors);
    u64 sigma = 0;
    for (u64 d : divisors) sigma += d;
    sum.add(static_cast<double>(sigma) / static_cast<double>(m));
  }
  return sum.value();
}

double divisor_pair_sum(const IntegerSet& set) {
  if (set.empty()) return 0;
  const u64 top = set.max_element();
  const auto spf = smallest_prime_factor_table(top);
  std::vector<bool> member(top + 1, false);
  for (u64 m : set.elements()) member[m] = true;
  std::vector<u64> divisors;
  CompensatedSum<double> sum;
  for (u64 m : set.elements()) {
    divisors_of(m, spf, divisors);
    u64 inside = 0;
    for (u64 d : divisors) {
      if (member[d]) inside += d;
    }
    sum.add(static_cast<double>(inside) / static_cast<double>(m));
  }
  return sum.value();
}

double ratio_R(const IntegerSet& set, double gcd_sum) {
  if (set.empty()) throw std::invalid_argument("ratio_R: empty set");
  const double size = static_cast<double>(set.size());
  const double r = static_cast<double>(set.upper()) * size * size / gcd_sum;
  // S(B) >= |B| gives R <= N |B|.
  if (r > static_cast<double>(set.upper()) * size * (1 + 1e-12)) throw std::logic_error("ratio_R exceeds N |B|");
  return r;
}

double ratio_R(const IntegerSet& set) {
  if (set.empty()) throw std::invalid_argument("ratio_R: empty set");
  return ratio_R(set, gcd_sum_fast(set));
}

u128 energy_cross(const IntegerSet& set, u64 n, u64 table_pairs) {
  if (set.empty() || n == 0) return 0;
  require_product_range(set.max_element(), n);
  if (static_cast<u128>(set.size()) * n <= table_pairs) {
    std::vector<u64> range(n);
    for (u64 b = 0; b < n; ++b) range[b] = b + 1;
    return table_energy(set.elements(), range);
  }
  return divisor_energy(set.elements(), n);
}

u128 energy_self(const IntegerSet& set, u64 table_pairs) {
  if (set.empty()) return 0;
  require_product_range(set.max_element(), set.max_element());
  if (static_cast<u128>(set.size()) * set.size() <= table_pairs) return table_energy(set.elements(), set.elements());
  return segmented_energy(set.elements(), set.elements());
}

EnergyReport energy_report(const IntegerSet& set, bool with_energies) {
  EnergyReport report;
  report.set_descriptor = set.describe();
  report.upper = set.upper();
  report.size = set.size();
  report.density = set.density();
  if (set.empty()) return report;
  report.S = gcd_sum_fast(set);
  report.R = ratio_R(set, report.S);
  if (with_energies) {
    report.E_cross = energy_cross(set, set.upper());
    report.E_self = energy_self(set);
    report.energies_computed = true;
  }
  return report;
}

u64 quadruple_count(u64 x) {
  if (x < 4) throw std::invalid_argument("quadruple_count: x must be at least 4");
  // A factorization (m, n) of v has m^2 + n^2 >= 2v, and so does its partner,
  // hence only (m + n)^2 <= x can contribute.
  const u64 vmax = x / 4;
  std::vector<u64> offsets(vmax + 2, 0);
  for (u64 m = 1; (m + 1) * (m + 1) <= x; ++m) {
    for (u64 n = 1; (m + n) * (m + n) <= x; ++n) ++offsets[m * n + 1];
  }
  for (u64 v = 1; v <= vmax + 1; ++v) offsets[v] += offsets[v - 1];
  std::vector<u64> sums(offsets[vmax + 1]);
  std::vector<u64> fill(offsets.begin(), offsets.end() - 1);
  for (u64 m = 1; (m + 1) * (m + 1) <= x; ++m) {
    for (u64 n = 1; (m + n) * (m + n) <= x; ++n) sums[fill[m * n]++] = m * m + n * n;
  }
  u64 count = 0;
  for (u64 v = 1; v <= vmax; ++v) {
    auto first = sums.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
    auto last = sums.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
    if (first == last) continue;
    std::sort(first, last);
    // Two pointers over ordered pairs (s_i, s_j) with s_i + s_j <= x.
    std::ptrdiff_t hi = last - first - 1;
    for (auto it = first; it != last; ++it) {
      while (hi >= 0 && *it + first[hi] > x) --hi;
      if (hi < 0) break;
      count += static_cast<u64>(hi + 1);
    }
  }
  return count;
}

LinearLogFit fit_x_log_x(const std::vector<double>& xs, const std::vector<double>& counts) {
  if (xs.size() != counts.size() || xs.size() < 2) throw std::invalid_argument("fit_x_log_x: need >= 2 points");
  long double sxx = 0, sxy = 0, syy = 0, sxc = 0, syc = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const long double x = xs[i];
    const long double f = x * std::log(x);  // regressor for a
    const long double g = x;                // regressor for b
    sxx += f * f;
    sxy += f * g;
    syy += g * g;
    sxc += f * counts[i];
    syc += g * counts[i];
  }
  const long double det = sxx * syy - sxy * sxy;
  if (det == 0) throw std::invalid_argument("fit_x_log_x: degenerate design");
  return {static_cast<double>((sxc * syy - syc * sxy) / det), static_cast<double>((sxx * syc - sxy * sxc) / det)};
}

u64 congruence_count(u64 m1, u64 m2, u64 x, u64 p) {
  if (!is_prime(p)) throw std::invalid_argument("congruence_count: modulus is not prime");
  if (m1 < 1 || m1 > m2 || m2 >= p) throw std::invalid_argument("congruence_count: need 1 <= m1 <= m2 < p");
  if (x > p) throw std::invalid_argument("congruence_count: need x <= p");
  const u64 ratio = mul_mod(m1, inverse_mod(m2, p), p);
  u64 count = 0;
  for (u64 n1 = 1; n1 <= x; ++n1) {
    const u64 r = mul_mod(ratio, n1, p);  // n2 = +-r (mod p), n2 in [1, x] with x <= p
    if (r == 0) {
      count += (x == p) ? 1 : 0;
      continue;
    }
    if (r <= x) ++count;
    if (p - r <= x) ++count;
  }
  return count;
}

double congruence_bound_shape(u64 m1, u64 m2, u64 x, u64 p) {
  const double g = static_cast<double>(binary_gcd(m1, m2));
  const double xd = static_cast<double>(x);
  return (1 + xd * g / static_cast<double>(m2)) * (1 + xd * static_cast<double>(m2) / (g * static_cast<double>(p)));
}

IntegerSet make_family(u64 upper, const FamilyChoice& choice) {
  switch (choice.family) {
    case SetFamily::all:
      return all_integers(upper);
    case SetFamily::primes:
      return primes_set(upper);
    case SetFamily::rough:
      return rough_set(upper, choice.y);
    case SetFamily::custom:
      break;
  }
  throw std::invalid_argument("make_family: custom sets must be loaded from a file");
}

std::vector<FamilyChoice> default_frontier_grid(u64 upper) {
  const double y_star = std::exp(std::sqrt(std::log(static_cast<double>(upper))));
  return {{SetFamily::all, 0},
          {SetFamily::primes, 0},
          {SetFamily::rough, 2},
          {SetFamily::rough, 10},
          {SetFamily::rough, 100},
          {SetFamily::rough, y_star}};
}

std::vector<FrontierRow> energy_frontier_scan(u64 upper, const std::vector<FamilyChoice>& grid) {
  std::vector<FrontierRow> rows;
  for (const auto& choice : grid) {
    const IntegerSet set = make_family(upper, choice);
    FrontierRow row;
    row.family = to_string(choice.family);
    row.y = choice.family == SetFamily::rough ? choice.y : 0;
    row.size = set.size();
    row.density = set.density();
    if (!set.empty()) {
      const double n = static_cast<double>(upper);
      const double size = static_cast<double>(set.size());
      const double s = gcd_sum_fast(set);
      row.normalized_energy = static_cast<double>(energy_cross(set, upper)) / (n * size);
      row.gcd_per_element = s / size;
      row.ratio_over_n2 = ratio_R(set, s) / (n * n);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string to_decimal(u128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  return {digits.rbegin(), digits.rend()};
}

}  // namespace thml
