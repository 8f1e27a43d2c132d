#pragma once

#include <cstdint>
#include <vector>

namespace thml {

using u64 = std::uint64_t;
using u32 = std::uint32_t;
using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(u64 n);

/// Inverse of a modulo prime p, a not divisible by p.
u64 inverse_mod(u64 a, u64 p);

u64 isqrt(u64 n);

u64 binary_gcd(u64 a, u64 b);

/// Primes q <= n in ascending order (plain Eratosthenes).
std::vector<u32> primes_up_to(u64 n);

/// Distinct prime factors of n by trial division; n fits comfortably in 64 bits.
std::vector<u64> distinct_prime_factors(u64 n);

/// Smallest-prime-factor table on [0, n]; spf[0] = spf[1] = 0.
std::vector<u32> smallest_prime_factor_table(u64 n);

/// Euler phi on [0, n] from a smallest-prime-factor table.
std::vector<u32> totient_table(const std::vector<u32>& spf);

/// Divisors of m (ascending) using a smallest-prime-factor table covering m.
void divisors_of(u64 m, const std::vector<u32>& spf, std::vector<u64>& out);

}  // namespace thml
