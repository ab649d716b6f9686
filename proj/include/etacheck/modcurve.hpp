#pragma once

// Cusps of Gamma0(N), Newman's modularity conditions and Ligozat orders.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "etacheck/eta.hpp"
#include "etacheck/numtheory.hpp"

namespace etacheck {

/// The fraction a/c in lowest terms; c == 0 denotes infinity (a == 1).
struct Cusp {
  i64 a = 1;
  i64 c = 0;

  Cusp() = default;
  /// Reduces to lowest terms with c >= 0.
  Cusp(i64 num, i64 den);
  static Cusp infinity() { return Cusp(1, 0); }
  /// Parses "a/c", a bare integer, or "inf".
  static Cusp parse(const std::string& text);

  bool is_infinity() const { return c == 0; }
  std::string to_string() const;

  friend bool operator==(const Cusp&, const Cusp&) = default;
  /// Orders by value as a rational number, infinity last.
  friend bool operator<(const Cusp& x, const Cusp& y);
};

/// (m, n) satisfying m a1 = a + n c and c1 = m c (mod N) with gcd(m, N) = 1.
struct CuspWitness {
  i64 m;
  i64 n;
};

/// Equivalence test for x = a/c and y = a1/c1 over Gamma0(N). The witness
/// minimizes m, then n, over 0 <= m, n < N.
std::optional<CuspWitness> cusp_equivalent(const Cusp& x, const Cusp& y, i64 N);

/// One representative per class, sorted by value. Each has c | N and the
/// smallest positive numerator in its class for that denominator.
std::vector<Cusp> cusp_representatives(i64 N);

/// sum_{c | N} phi(gcd(c, N/c)).
i64 cusp_count(i64 N);

/// The representative from cusp_representatives(N) equivalent to x.
Cusp canonical_cusp(const Cusp& x, i64 N);

/// The class of infinity, represented by 1/N.
inline Cusp infinity_class(i64 N) { return Cusp(1, N); }

struct NewmanResult {
  bool valid = false;
  bool sum_zero = false;       // sum r_d = 0
  bool weighted_ok = false;    // sum d r_d = 0 (mod 24)
  bool coweighted_ok = false;  // sum (N/d) r_d = 0 (mod 24)
  bool square_ok = false;      // prod d^{|r_d|} is a square
  i64 x1 = 0;                  // -sum d r_d / 24 when integral
  i64 x2 = 0;                  // -sum (N/d) r_d / 24 when integral
  mpz_class k0 = 0;            // sqrt(prod d^{|r_d|}) when square
};

NewmanResult newman_check(const EtaQuotient& eq);

/// Ligozat's order at the cusp a/c over Gamma0(level of eq).
mpq_class eta_order_at_cusp(const EtaQuotient& eq, const Cusp& x);

/// The cusp (a + c r)/(c ell) reduced to its representative over Gamma0(target_level).
Cusp cusp_image_under_scaling(const Cusp& x, i64 r, i64 ell, i64 target_level);

struct CuspOrderVector {
  i64 level = 1;
  std::vector<std::pair<Cusp, mpq_class>> entries;

  /// Order at the class of x.
  mpq_class at(const Cusp& x) const;
  /// Plain sum of orders; zero for a modular function.
  mpq_class total() const;
  std::string to_string() const;
};

CuspOrderVector order_vector(const EtaQuotient& eq);

}  // namespace etacheck
