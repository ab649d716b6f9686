#include "etacheck/numtheory.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace etacheck {

std::vector<i64> divisors(i64 n) {
  if (n <= 0) throw std::invalid_argument("divisors: n must be positive");
  std::vector<i64> lo, hi;
  for (i64 d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      lo.push_back(d);
      if (d != n / d) hi.push_back(n / d);
    }
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

i64 sigma1(i64 n) {
  i64 s = 0;
  for (i64 d : divisors(n)) s += d;
  return s;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

i64 totient(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

i64 mod_inverse(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, a1 = mod_floor(a, m);
  while (a1) {
    i64 q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw std::domain_error("mod_inverse: not invertible");
  return mod_floor(x, m);
}

i64 ipow(i64 base, unsigned e) {
  i64 r = 1;
  while (e--) r *= base;
  return r;
}

int valuation(const mpz_class& x, unsigned long p) {
  if (x == 0) throw std::domain_error("valuation of zero");
  mpz_class t = x;
  int v = 0;
  while (mpz_divisible_ui_p(t.get_mpz_t(), p)) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
    ++v;
  }
  return v;
}

}  // namespace etacheck
