#pragma once

// Pole bookkeeping for U_ell and the integer system whose solutions are
// admissible generators t.

#include <optional>
#include <string>
#include <vector>

#include "etacheck/eta.hpp"
#include "etacheck/modcurve.hpp"

namespace etacheck {

/// Finite cusps of Gamma0(N) grouped by the order t must have there.
struct PoleSets {
  i64 level = 1;  // N
  i64 ell = 1;
  std::vector<Cusp> p_A;      // images hit a pole of A
  std::vector<Cusp> p_g;      // images hit the infinity class
  std::vector<Cusp> p_inv;    // added so that U_ell(1/t) stays controlled
  std::vector<Cusp> p0_prime; // order >= 0 suffices
  std::vector<Cusp> p1_prime; // order fixed at 0

  /// p_A, p_g and p_inv together: t must vanish at each of these.
  std::vector<Cusp> positive() const;
  std::string to_string() const;
};

/// Classes of Gamma0(N) reached by (x + r)/ell, r = 0..ell-1.
std::vector<Cusp> scaled_images(const Cusp& x, i64 ell, i64 N);

/// A must live at a level dividing ell*N.
PoleSets compute_pole_sets(const EtaQuotient& A, i64 ell, i64 N);

struct WSolution {
  std::vector<i64> w;  // exponents over divisors of N, ascending
  i64 x1 = 0;          // minus the order at infinity
  i64 x2 = 0;
  mpz_class x3 = 0;

  EtaQuotient quotient(i64 N) const { return EtaQuotient::from_vector(N, w); }
};

/// Every constraint of the system with x1 = n0. Empty result means w solves it.
std::vector<std::string> violations_W(i64 N, const PoleSets& ps, const std::vector<i64>& w, i64 n0);
bool check_W(i64 N, const PoleSets& ps, const std::vector<i64>& w, i64 n0);

/// Lexicographically smallest solution with |w_d| <= bound. Workers split
/// the range of the first coordinate.
std::optional<WSolution> solve_W(i64 N, const PoleSets& ps, i64 n0, i64 bound, int threads = 1);

/// All solutions in lexicographic order, at most limit of them.
std::vector<WSolution> enumerate_W(i64 N, const PoleSets& ps, i64 n0, i64 bound, std::size_t limit);

struct TSearchConfig {
  i64 max_n0 = 24;
  i64 bound = 12;
  int threads = 1;
};

/// Solves W(1), W(2), ... and returns the first solution found.
WSolution find_t(const PoleSets& ps, const TSearchConfig& cfg = {});

}  // namespace etacheck
