#pragma once

// Eta quotients prod_{d | N} eta(d tau)^{r_d} and their q-expansions.

#include <map>
#include <string>
#include <vector>

#include "etacheck/numtheory.hpp"
#include "etacheck/series.hpp"

namespace etacheck {

class EtaQuotient {
 public:
  /// The trivial quotient at level 1.
  EtaQuotient() : EtaQuotient(1, {}) {}
  /// Every key must divide level; missing divisors get exponent 0.
  EtaQuotient(i64 level, const std::map<i64, i64>& exponents);
  /// r is indexed by the divisors of level in ascending order.
  static EtaQuotient from_vector(i64 level, const std::vector<i64>& r);
  /// Parses "N:d^e,d^e,..." (a bare d means exponent 1; "N:" is trivial).
  static EtaQuotient parse(const std::string& text);

  i64 level() const { return level_; }
  /// Exponent of eta(d tau); 0 when d is not a divisor.
  i64 exponent(i64 d) const;
  const std::map<i64, i64>& exponents() const { return r_; }
  std::vector<i64> exponent_vector() const;
  std::vector<i64> divisors() const;

  /// sum_d d r_d, the exponent of the q^{1/24} prefactor.
  i64 offset24() const;
  /// sum_d r_d (twice the weight).
  i64 exponent_sum() const;
  bool is_trivial() const;

  /// Same function regarded at a multiple of the level.
  EtaQuotient lifted(i64 new_level) const;
  /// f(d tau), at level d*N.
  EtaQuotient rescaled(i64 d) const;
  EtaQuotient pow(i64 n) const;
  EtaQuotient inverse() const { return pow(-1); }

  std::string to_string() const;

  friend EtaQuotient operator*(const EtaQuotient& a, const EtaQuotient& b);
  friend bool operator==(const EtaQuotient& a, const EtaQuotient& b);
  friend bool operator<(const EtaQuotient& a, const EtaQuotient& b);

 private:
  i64 level_;
  std::map<i64, i64> r_;  // every divisor of level_ present
};

/// prod_d (q^d;q^d)^{r_d} up to q^trunc, carrying offset24 = sum d r_d.
Series<IntegerRing> eta_expand(const EtaQuotient& eq, i64 trunc);

/// The normalized expansion with integer exponents below abs_trunc.
/// Requires sum d r_d to be divisible by 24.
Series<IntegerRing> eta_series(const EtaQuotient& eq, i64 abs_trunc);

/// Integer valuation at infinity, (sum d r_d)/24; requires divisibility.
i64 eta_valuation(const EtaQuotient& eq);

}  // namespace etacheck
