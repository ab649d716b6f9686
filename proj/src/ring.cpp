#include "etacheck/ring.hpp"

#include <limits>

namespace etacheck {

CoeffRing CoeffRing::mod_prime_power(i64 ell, int B) {
  if (!is_prime(ell)) throw Error(ErrorKind::InvalidInput, "series", "CoeffRing", "ell must be prime");
  if (B < 1) throw Error(ErrorKind::InvalidInput, "series", "CoeffRing", "B must be positive");
  return {RingKind::ModPrimePower, ell, B};
}

std::string CoeffRing::to_string() const {
  switch (kind) {
    case RingKind::ExactInteger: return "Z";
    case RingKind::ExactRational: return "Q";
    case RingKind::ModPrimePower: return "Z/" + std::to_string(ell) + "^" + std::to_string(B);
  }
  return "?";
}

ModRing::ModRing(i64 ell, int B) : ell_(ell), B_(B), mod_(1) {
  CoeffRing::mod_prime_power(ell, B);  // validates
  for (int i = 0; i < B; ++i) {
    if (mod_ > (std::numeric_limits<std::uint64_t>::max() >> 2) / static_cast<std::uint64_t>(ell))
      throw Error(ErrorKind::InvalidInput, "series", "ModRing", "ell^B does not fit in 62 bits");
    mod_ *= static_cast<std::uint64_t>(ell);
  }
}

ModRing::value_type ModRing::from_int(i64 x) const {
  auto m = static_cast<i64>(mod_);
  return static_cast<value_type>(mod_floor(x, m));
}

ModRing::value_type ModRing::inverse(value_type x) const {
  if (!is_unit(x)) throw Error(ErrorKind::InvalidInput, "series", "inv", "leading coefficient is not a unit mod ell^B");
  mpz_class a(std::to_string(x)), m(std::to_string(mod_)), r;
  mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return from_mpz(r);
}

int ModRing::valuation(value_type x) const {
  if (x == 0) return B_;
  int v = 0;
  while (x % static_cast<value_type>(ell_) == 0) {
    x /= static_cast<value_type>(ell_);
    ++v;
  }
  return v;
}

}  // namespace etacheck
