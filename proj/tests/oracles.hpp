#pragma once

// Brute-force reference implementations. They share nothing with the library
// beyond plain integer types, so agreement is a meaningful check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using cld = std::complex<long double>;

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<u64> primes(u64 n) {
  std::vector<u64> out;
  for (u64 k = 2; k <= n; ++k) {
    if (is_prime(k)) out.push_back(k);
  }
  return out;
}

inline u64 least_prime_factor(u64 n) {
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return d;
  }
  return n;
}

/// n <= upper whose prime factors all exceed y; 1 included.
inline std::vector<u64> rough(u64 upper, double y) {
  std::vector<u64> out;
  for (u64 n = 1; n <= upper; ++n) {
    if (n == 1 || static_cast<double>(least_prime_factor(n)) > y) out.push_back(n);
  }
  return out;
}

inline u64 smallest_generator(u64 p) {
  for (u64 g = 2;; ++g) {
    u64 v = 1, order = 0;
    do {
      v = v * g % p;
      ++order;
    } while (v != 1);
    if (order == p - 1) return g;
  }
}

/// dlog[n] for 1 <= n < p by walking powers of the generator.
inline std::vector<u64> dlog_table(u64 p) {
  std::vector<u64> dlog(p, 0);
  const u64 g = smallest_generator(p);
  u64 v = 1;
  for (u64 k = 0; k + 1 < p; ++k) {
    dlog[v] = k;
    v = v * g % p;
  }
  return dlog;
}

inline cld character(u64 p, const std::vector<u64>& dlog, u64 j, u64 n) {
  if (n % p == 0) return 0;
  const long double angle =
      2.0L * 3.14159265358979323846264338327950288L * static_cast<long double>((j * dlog[n % p]) % (p - 1)) /
      static_cast<long double>(p - 1);
  return {std::cos(angle), std::sin(angle)};
}

/// Closed-form sum over characters of one parity of chi(m) conj(chi(n)).
inline long double orthogonality(u64 p, u64 m, u64 n, bool even) {
  if (m % p == 0 || n % p == 0) return 0;
  long double v = 0;
  const long double half = static_cast<long double>(p - 1) / 2;
  if (m % p == n % p) v += half;
  if ((m + n) % p == 0) v += even ? half : -half;
  return v;
}

/// Truncated theta series in long double, summed until terms fall below 1e-30.
inline cld theta(u64 p, u64 j, long double x, bool even) {
  const auto dlog = dlog_table(p);
  const long double pi = 3.14159265358979323846264338327950288L;
  cld s = 0;
  for (u64 n = 1;; ++n) {
    const long double w = std::exp(-pi * static_cast<long double>(n * n) * x / static_cast<long double>(p)) *
                          (even ? 1.0L : static_cast<long double>(n));
    if (w < 1e-30L) break;
    s += w * character(p, dlog, j, n);
  }
  return s;
}

inline std::vector<cld> naive_dft(const std::vector<cld>& in, int sign) {
  const std::size_t n = in.size();
  std::vector<cld> out(n);
  const long double pi = 3.14159265358979323846264338327950288L;
  for (std::size_t k = 0; k < n; ++k) {
    cld s = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const long double a = sign * 2 * pi * static_cast<long double>((k * t) % n) / static_cast<long double>(n);
      s += in[t] * cld(std::cos(a), std::sin(a));
    }
    out[k] = s;
  }
  return out;
}

/// Mollified moments sum_chi M(chi) theta(chi) and sum_chi |M(chi) theta(chi)|^2.
inline std::pair<long double, long double> mollified_moments(u64 p, const std::vector<u64>& support, long double x,
                                                             bool even) {
  const auto dlog = dlog_table(p);
  long double m1 = 0, m2 = 0;
  for (u64 j = even ? 0 : 1; j < p - 1; j += 2) {
    cld mol = 0;
    for (u64 m : support) mol += std::conj(character(p, dlog, j, m));
    const cld t = theta(p, j, x, even) * mol;
    m1 += t.real();
    m2 += std::norm(t);
  }
  return {m1, m2};
}

inline long double gcd_sum(const std::vector<u64>& b) {
  long double s = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (b[i] <= b[k]) s += static_cast<long double>(std::gcd(b[i], b[k])) / static_cast<long double>(b[k]);
    }
  }
  return s;
}

inline u64 energy_cross(const std::vector<u64>& b, u64 n) {
  u64 count = 0;
  for (u64 a : b) {
    for (u64 c : b) {
      for (u64 x = 1; x <= n; ++x) {
        if ((a * x) % c == 0 && a * x / c >= 1 && a * x / c <= n) ++count;
      }
    }
  }
  return count;
}

inline u64 energy_self(const std::vector<u64>& b) {
  u64 count = 0;
  for (u64 a : b) {
    for (u64 x : b) {
      for (u64 c : b) {
        for (u64 d : b) count += a * x == c * d;
      }
    }
  }
  return count;
}

/// m1 n1 = m2 n2 with m1^2 + n1^2 + m2^2 + n2^2 <= x, all entries positive.
inline u64 quadruples(u64 x) {
  u64 count = 0;
  for (u64 m1 = 1; m1 * m1 < x; ++m1) {
    for (u64 n1 = 1; m1 * m1 + n1 * n1 < x; ++n1) {
      for (u64 m2 = 1; m1 * m1 + n1 * n1 + m2 * m2 < x; ++m2) {
        if ((m1 * n1) % m2 != 0) continue;
        const u64 n2 = m1 * n1 / m2;
        count += m1 * m1 + n1 * n1 + m2 * m2 + n2 * n2 <= x;
      }
    }
  }
  return count;
}

inline u64 congruence(u64 m1, u64 m2, u64 x, u64 p) {
  u64 count = 0;
  for (u64 a = 1; a <= x; ++a) {
    for (u64 b = 1; b <= x; ++b) {
      const u64 l = m1 * a % p, r = m2 * b % p;
      count += l == r || (l + r) % p == 0;
    }
  }
  return count;
}

}  // namespace oracle
