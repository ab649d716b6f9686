#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include <gmpxx.h>

namespace etacheck {

using i64 = std::int64_t;

// Mathematical modulo: result in [0, m).
constexpr i64 mod_floor(i64 x, i64 m) {
  i64 r = x % m;
  return r < 0 ? r + m : r;
}

constexpr i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

constexpr i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

/// Positive divisors of n in ascending order.
std::vector<i64> divisors(i64 n);

/// Sum of divisors of n.
i64 sigma1(i64 n);

/// Prime factorisation as (p, e) pairs, ascending p.
std::vector<std::pair<i64, int>> factorize(i64 n);

bool is_prime(i64 n);

/// Euler's totient.
i64 totient(i64 n);

/// Inverse of a modulo m; requires gcd(a, m) == 1.
i64 mod_inverse(i64 a, i64 m);

i64 ipow(i64 base, unsigned e);

/// Largest e with p^e | x (x != 0).
int valuation(const mpz_class& x, unsigned long p);

}  // namespace etacheck
