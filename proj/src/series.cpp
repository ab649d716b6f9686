#include "etacheck/series.hpp"

namespace etacheck {

Series<ModRing> reduce_mod(const Series<IntegerRing>& f, const ModRing& R) {
  if (f.is_zero()) return Series<ModRing>::zero(R, f.trunc(), f.offset24());
  std::vector<ModRing::value_type> v;
  v.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) v.push_back(R.from_mpz(c));
  return Series<ModRing>(R, f.offset24(), f.valuation(), std::move(v));
}

Series<ModRing> reduce_mod(const Series<IntegerRing>& f, i64 ell, int B) { return reduce_mod(f, ModRing(ell, B)); }

Series<RationalRing> to_rational(const Series<IntegerRing>& f) {
  if (f.is_zero()) return Series<RationalRing>::zero({}, f.trunc(), f.offset24());
  std::vector<mpq_class> v;
  v.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) v.emplace_back(c);
  return Series<RationalRing>({}, f.offset24(), f.valuation(), std::move(v));
}

Series<IntegerRing> to_integer(const Series<RationalRing>& f) {
  if (f.is_zero()) return Series<IntegerRing>::zero({}, f.trunc(), f.offset24());
  std::vector<mpz_class> v;
  v.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) {
    if (c.get_den() != 1)
      throw Error(ErrorKind::ContractViolation, "series", "to_integer", "non-integral coefficient " + c.get_str());
    v.push_back(c.get_num());
  }
  return Series<IntegerRing>({}, f.offset24(), f.valuation(), std::move(v));
}

Series<IntegerRing> euler_product(i64 d, i64 trunc) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "series", "euler_product", "d must be >= 1");
  if (trunc < 0) throw Error(ErrorKind::InvalidInput, "series", "euler_product", "trunc must be >= 0");
  if (trunc == 0) return Series<IntegerRing>::zero({}, 0);
  std::vector<mpz_class> v(static_cast<std::size_t>(trunc), 0);
  // prod (1 - x^n) = sum_k (-1)^k x^{k(3k-1)/2}, k over all integers
  for (i64 k = 0;; ++k) {
    const i64 e1 = d * (k * (3 * k - 1) / 2);
    const i64 e2 = d * (k * (3 * k + 1) / 2);
    if (e1 >= trunc) break;
    const int sign = (k % 2 == 0) ? 1 : -1;
    v[static_cast<std::size_t>(e1)] = sign;
    if (k > 0 && e2 < trunc) v[static_cast<std::size_t>(e2)] = sign;
  }
  return Series<IntegerRing>({}, 0, 0, std::move(v));
}

}  // namespace etacheck
