#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "etacheck/error.hpp"
#include "etacheck/numtheory.hpp"

namespace etacheck {

enum class RingKind { ExactInteger, ExactRational, ModPrimePower };

/// Tag describing which coefficient ring a series lives in.
struct CoeffRing {
  RingKind kind = RingKind::ExactInteger;
  i64 ell = 0;
  int B = 0;

  static CoeffRing integers() { return {RingKind::ExactInteger, 0, 0}; }
  static CoeffRing rationals() { return {RingKind::ExactRational, 0, 0}; }
  static CoeffRing mod_prime_power(i64 ell, int B);

  friend bool operator==(const CoeffRing&, const CoeffRing&) = default;
  std::string to_string() const;
};

// Ring policies. Each exposes value_type plus the handful of operations the
// series code needs; the stateless ones compare equal trivially.

struct IntegerRing {
  using value_type = mpz_class;

  CoeffRing descriptor() const { return CoeffRing::integers(); }
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(i64 x) const { return mpz_class(static_cast<long>(x)); }
  bool is_zero(const value_type& x) const { return sgn(x) == 0; }
  bool is_unit(const value_type& x) const { return x == 1 || x == -1; }
  value_type inverse(const value_type& x) const {
    if (!is_unit(x)) throw Error(ErrorKind::InvalidInput, "series", "inv", "leading coefficient is not a unit in Z");
    return x;
  }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  // acc += a*b
  void add_mul(value_type& acc, const value_type& a, const value_type& b) const {
    mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  void add_mul_si(value_type& acc, const value_type& a, i64 s) const {
    if (s >= 0)
      mpz_addmul_ui(acc.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(s));
    else
      mpz_submul_ui(acc.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(-s));
  }
  // Exact division by a small positive integer; only used where the
  // quotient is known to be integral.
  value_type div_exact_small(const value_type& a, i64 k) const {
    value_type r;
    mpz_divexact_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
  }
  bool supports_small_division(i64) const { return true; }
  std::string to_string(const value_type& x) const { return x.get_str(); }
  friend bool operator==(const IntegerRing&, const IntegerRing&) { return true; }
};

struct RationalRing {
  using value_type = mpq_class;

  CoeffRing descriptor() const { return CoeffRing::rationals(); }
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(i64 x) const { return mpq_class(static_cast<long>(x)); }
  bool is_zero(const value_type& x) const { return sgn(x) == 0; }
  bool is_unit(const value_type& x) const { return sgn(x) != 0; }
  value_type inverse(const value_type& x) const {
    if (!is_unit(x)) throw Error(ErrorKind::InvalidInput, "series", "inv", "zero leading coefficient");
    return 1 / x;
  }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  void add_mul(value_type& acc, const value_type& a, const value_type& b) const { acc += a * b; }
  void add_mul_si(value_type& acc, const value_type& a, i64 s) const { acc += a * static_cast<long>(s); }
  value_type div_exact_small(const value_type& a, i64 k) const { return a / static_cast<long>(k); }
  bool supports_small_division(i64) const { return true; }
  std::string to_string(const value_type& x) const { return x.get_str(); }
  friend bool operator==(const RationalRing&, const RationalRing&) { return true; }
};

/// Z / ell^B with canonical representatives in [0, ell^B).
class ModRing {
 public:
  using value_type = std::uint64_t;

  ModRing(i64 ell, int B);

  i64 ell() const { return ell_; }
  int B() const { return B_; }
  std::uint64_t modulus() const { return mod_; }

  CoeffRing descriptor() const { return CoeffRing::mod_prime_power(ell_, B_); }
  value_type zero() const { return 0; }
  value_type one() const { return mod_ == 1 ? 0 : 1; }
  value_type from_int(i64 x) const;
  value_type from_mpz(const mpz_class& x) const {
    return static_cast<value_type>(mpz_fdiv_ui(x.get_mpz_t(), mod_));
  }
  bool is_zero(value_type x) const { return x == 0; }
  bool is_unit(value_type x) const { return x % static_cast<std::uint64_t>(ell_) != 0; }
  value_type inverse(value_type x) const;
  value_type add(value_type a, value_type b) const {
    value_type s = a + b;
    return s >= mod_ ? s - mod_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + mod_ - b; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((static_cast<unsigned __int128>(a) * b) % mod_);
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : mod_ - a; }
  void add_mul(value_type& acc, value_type a, value_type b) const { acc = add(acc, mul(a, b)); }
  void add_mul_si(value_type& acc, value_type a, i64 s) const { acc = add(acc, mul(a, from_int(s))); }
  value_type div_exact_small(value_type a, i64 k) const { return mul(a, inverse(from_int(k))); }
  bool supports_small_division(i64 k) const { return k % ell_ != 0; }
  /// ell-adic valuation of a nonzero residue, capped at B.
  int valuation(value_type x) const;
  std::string to_string(value_type x) const { return std::to_string(x); }
  friend bool operator==(const ModRing& a, const ModRing& b) { return a.ell_ == b.ell_ && a.B_ == b.B_; }

 private:
  i64 ell_;
  int B_;
  std::uint64_t mod_;
};

}  // namespace etacheck
