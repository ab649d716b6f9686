#pragma once

#include <random>

#include "etacheck/eta.hpp"
#include "etacheck/series.hpp"

namespace testutil {

using namespace etacheck;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240917);
  return g;
}

inline i64 uniform(i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng()); }

// Random integer series with a nonzero leading coefficient drawn from lead.
inline Series<IntegerRing> random_int_series(i64 len, i64 val, i64 coeff_bound, bool unit_lead = false) {
  std::vector<mpz_class> c(static_cast<std::size_t>(len));
  for (auto& x : c) x = static_cast<long>(uniform(-coeff_bound, coeff_bound));
  if (unit_lead)
    c[0] = uniform(0, 1) ? 1 : -1;
  else if (c[0] == 0)
    c[0] = 1;
  return Series<IntegerRing>({}, 0, val, std::move(c));
}

inline Series<RationalRing> random_rat_series(i64 len, i64 val) {
  std::vector<mpq_class> c(static_cast<std::size_t>(len));
  for (auto& x : c) {
    x = mpq_class(static_cast<long>(uniform(-20, 20)), static_cast<unsigned long>(uniform(1, 9)));
    x.canonicalize();
  }
  if (c[0] == 0) c[0] = 1;
  return Series<RationalRing>({}, 0, val, std::move(c));
}

inline Series<ModRing> random_mod_series(const ModRing& R, i64 len, i64 val) {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(len));
  for (auto& x : c) x = static_cast<std::uint64_t>(uniform(0, static_cast<i64>(R.modulus()) - 1));
  if (c[0] % static_cast<std::uint64_t>(R.ell()) == 0) c[0] = 1;
  return Series<ModRing>(R, 0, val, std::move(c));
}

// Coefficient-wise equality to the shared truncation, also requiring the
// same truncation when exact is set.
template <class Ring>
bool same(const Series<Ring>& a, const Series<Ring>& b, bool exact = false) {
  if (exact && a.trunc() != b.trunc()) return false;
  return a.agrees_with(b);
}

// Finite product prod_{m=1}^{K} (1 - q^{d m}) truncated at trunc, by repeated
// multiplication; used only as a reference.
inline Series<IntegerRing> finite_product(i64 d, i64 trunc) {
  auto acc = Series<IntegerRing>::one({}, trunc);
  for (i64 m = 1; d * m < trunc; ++m) {
    std::vector<mpz_class> f(static_cast<std::size_t>(trunc), 0);
    f[0] = 1;
    f[static_cast<std::size_t>(d * m)] = -1;
    acc = mul(acc, Series<IntegerRing>({}, 0, 0, std::move(f)));
  }
  return acc;
}

inline EtaQuotient random_eta(i64 N, i64 bound) {
  std::map<i64, i64> m;
  for (i64 d : divisors(N)) m[d] = uniform(-bound, bound);
  return EtaQuotient(N, m);
}

}  // namespace testutil
