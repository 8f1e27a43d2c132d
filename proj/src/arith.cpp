#include "thml/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace thml {

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a proven witness set below 3.3e24.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 inverse_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) throw std::invalid_argument("inverse_mod: argument divisible by modulus");
  return pow_mod(a, p - 2, p);
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 binary_gcd(u64 a, u64 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  int shift = std::countr_zero(a | b);
  a >>= std::countr_zero(a);
  do {
    b >>= std::countr_zero(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

std::vector<u32> primes_up_to(u64 n) {
  std::vector<u32> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<u32>(i));
    for (u64 j = i * i; j <= n; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<u64> distinct_prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<u32> smallest_prime_factor_table(u64 n) {
  std::vector<u32> spf(n + 1, 0);
  for (u64 i = 2; i <= n; ++i) {
    if (spf[i] != 0) continue;
    for (u64 j = i; j <= n; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<u32>(i);
    }
  }
  return spf;
}

std::vector<u32> totient_table(const std::vector<u32>& spf) {
  std::vector<u32> phi(spf.size(), 0);
  if (phi.size() > 1) phi[1] = 1;
  for (std::size_t n = 2; n < spf.size(); ++n) {
    const u32 q = spf[n];
    const std::size_t rest = n / q;
    phi[n] = phi[rest] * (rest % q == 0 ? q : q - 1);
  }
  return phi;
}

void divisors_of(u64 m, const std::vector<u32>& spf, std::vector<u64>& out) {
  out.clear();
  out.push_back(1);
  while (m > 1) {
    const u64 q = spf[m];
    int e = 0;
    while (m % q == 0) {
      m /= q;
      ++e;
    }
    const std::size_t base = out.size();
    u64 power = 1;
    for (int k = 0; k < e; ++k) {
      power *= q;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end());
}

}  // namespace thml
