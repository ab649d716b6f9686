#pragma once

// Truncated Laurent q-series over a coefficient ring.
//
// A Series represents q^{offset24/24} * sum_{e < trunc} c_e q^e. Coefficients
// are stored densely from the valuation (first nonzero exponent) up to the
// truncation, so coeffs().size() == trunc() - valuation(). The zero series has
// no stored coefficients and valuation() == trunc().

#include <algorithm>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <utility>
#include <vector>

#include "etacheck/error.hpp"
#include "etacheck/numtheory.hpp"
#include "etacheck/ring.hpp"

namespace etacheck {

template <class Ring>
class Series {
 public:
  using ring_type = Ring;
  using value_type = typename Ring::value_type;

  /// coeffs[i] is the coefficient of q^{start + i}; trunc = start + coeffs.size().
  Series(Ring ring, i64 offset24, i64 start, std::vector<value_type> coeffs)
      : ring_(std::move(ring)),
        offset24_(offset24),
        val_(start),
        trunc_(start + static_cast<i64>(coeffs.size())),
        c_(std::move(coeffs)) {
    canonicalize();
  }

  static Series zero(Ring ring, i64 trunc, i64 offset24 = 0) {
    return Series(std::move(ring), offset24, trunc, {});
  }

  static Series monomial(Ring ring, value_type c, i64 exponent, i64 trunc, i64 offset24 = 0) {
    if (trunc <= exponent) return zero(std::move(ring), trunc, offset24);
    std::vector<value_type> v(static_cast<std::size_t>(trunc - exponent), ring.zero());
    v[0] = std::move(c);
    return Series(std::move(ring), offset24, exponent, std::move(v));
  }

  static Series one(Ring ring, i64 trunc) {
    auto o = ring.one();
    return monomial(std::move(ring), std::move(o), 0, trunc);
  }

  const Ring& ring() const { return ring_; }
  i64 offset24() const { return offset24_; }
  i64 valuation() const { return val_; }
  i64 trunc() const { return trunc_; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<value_type>& coeffs() const { return c_; }

  /// Coefficient of q^e (relative to the offset). Requires e < trunc().
  value_type operator[](i64 e) const {
    if (e >= trunc_) throw Error(ErrorKind::ContractViolation, "series", "coeff", "exponent beyond truncation");
    if (e < val_) return ring_.zero();
    return c_[static_cast<std::size_t>(e - val_)];
  }

  const value_type& leading() const {
    if (is_zero()) throw Error(ErrorKind::InvalidInput, "series", "leading", "zero series");
    return c_.front();
  }

  /// Moves an offset divisible by 24 into the integer exponents.
  Series normalized() const {
    if (offset24_ % 24 != 0)
      throw Error(ErrorKind::InvalidInput, "series", "normalize",
                  "offset " + std::to_string(offset24_) + "/24 is not an integer exponent");
    Series r = *this;
    i64 s = offset24_ / 24;
    r.offset24_ = 0;
    r.val_ += s;
    r.trunc_ += s;
    return r;
  }

  Series truncated(i64 t) const {
    if (t >= trunc_) return *this;
    if (t <= val_) return zero(ring_, t, offset24_);
    std::vector<value_type> v(c_.begin(), c_.begin() + (t - val_));
    return Series(ring_, offset24_, val_, std::move(v));
  }

  /// Multiply by q^k.
  Series shifted(i64 k) const {
    Series r = *this;
    r.val_ += k;
    r.trunc_ += k;
    return r;
  }

  /// Coefficient-wise equality up to the shared truncation (offsets must agree).
  bool agrees_with(const Series& o) const {
    if (offset24_ != o.offset24_ || !(ring_ == o.ring_)) return false;
    i64 t = std::min(trunc_, o.trunc_);
    i64 lo = std::min(val_, o.val_);
    for (i64 e = lo; e < t; ++e)
      if ((*this)[e] != o[e]) return false;
    return true;
  }

  std::string to_string(i64 max_terms = 12) const;

 private:
  void canonicalize() {
    std::size_t k = 0;
    while (k < c_.size() && ring_.is_zero(c_[k])) ++k;
    if (k == c_.size()) {
      c_.clear();
      val_ = trunc_;
      return;
    }
    if (k) {
      c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k));
      val_ += static_cast<i64>(k);
    }
  }

  Ring ring_;
  i64 offset24_;
  i64 val_;
  i64 trunc_;
  std::vector<value_type> c_;
};

template <class Ring>
std::string Series<Ring>::to_string(i64 max_terms) const {
  std::ostringstream os;
  if (offset24_ != 0) os << "q^(" << offset24_ << "/24)*(";
  i64 shown = 0;
  bool first = true;
  for (i64 e = val_; e < trunc_ && shown < max_terms; ++e) {
    const auto& c = c_[static_cast<std::size_t>(e - val_)];
    if (ring_.is_zero(c)) continue;
    if (!first) os << " + ";
    os << ring_.to_string(c);
    if (e != 0) os << "*q^" << e;
    first = false;
    ++shown;
  }
  if (first) os << "0";
  os << " + O(q^" << trunc_ << ")";
  if (offset24_ != 0) os << ")";
  return os.str();
}

namespace detail {

template <class Ring>
void require_same_ring(const Series<Ring>& f, const Series<Ring>& g, const char* op) {
  if (!(f.ring() == g.ring()))
    throw Error(ErrorKind::InvalidInput, "series", op, "ring mismatch: " + f.ring().descriptor().to_string() +
                                                          " vs " + g.ring().descriptor().to_string());
}

// Brings g's offset to f's offset when they differ by a whole exponent.
template <class Ring>
Series<Ring> align_offset(const Series<Ring>& g, i64 target_offset24, const char* op) {
  i64 d = g.offset24() - target_offset24;
  if (d % 24 != 0)
    throw Error(ErrorKind::InvalidInput, "series", op, "offsets differ by a non-integer exponent");
  if (d == 0) return g;
  std::vector<typename Ring::value_type> v(g.coeffs());
  return Series<Ring>(g.ring(), target_offset24, g.valuation() + d / 24, std::move(v))
      .truncated(g.trunc() + d / 24);
}

}  // namespace detail

template <class Ring>
Series<Ring> add(const Series<Ring>& f, const Series<Ring>& g0) {
  detail::require_same_ring(f, g0, "add");
  auto g = detail::align_offset(g0, f.offset24(), "add");
  const Ring& R = f.ring();
  i64 t = std::min(f.trunc(), g.trunc());
  i64 lo = std::min(f.valuation(), g.valuation());
  if (lo >= t) return Series<Ring>::zero(R, t, f.offset24());
  std::vector<typename Ring::value_type> v(static_cast<std::size_t>(t - lo), R.zero());
  for (i64 e = std::max(lo, f.valuation()); e < t; ++e) v[e - lo] = f.coeffs()[e - f.valuation()];
  for (i64 e = std::max(lo, g.valuation()); e < t; ++e)
    v[e - lo] = R.add(v[e - lo], g.coeffs()[e - g.valuation()]);
  return Series<Ring>(R, f.offset24(), lo, std::move(v));
}

template <class Ring>
Series<Ring> neg(const Series<Ring>& f) {
  std::vector<typename Ring::value_type> v;
  v.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) v.push_back(f.ring().neg(c));
  if (f.is_zero()) return f;
  return Series<Ring>(f.ring(), f.offset24(), f.valuation(), std::move(v));
}

template <class Ring>
Series<Ring> sub(const Series<Ring>& f, const Series<Ring>& g) {
  return add(f, neg(g));
}

template <class Ring>
Series<Ring> scale(const typename Ring::value_type& c, const Series<Ring>& f) {
  if (f.is_zero()) return f;
  std::vector<typename Ring::value_type> v;
  v.reserve(f.coeffs().size());
  for (const auto& x : f.coeffs()) v.push_back(f.ring().mul(c, x));
  return Series<Ring>(f.ring(), f.offset24(), f.valuation(), std::move(v));
}

/// Product; truncation is min(tf + vg, tg + vf).
template <class Ring>
Series<Ring> mul(const Series<Ring>& f, const Series<Ring>& g) {
  detail::require_same_ring(f, g, "mul");
  const Ring& R = f.ring();
  i64 off = f.offset24() + g.offset24();
  i64 t = std::min(f.trunc() + g.valuation(), g.trunc() + f.valuation());
  i64 v0 = f.valuation() + g.valuation();
  if (f.is_zero() || g.is_zero() || t <= v0) return Series<Ring>::zero(R, t, off);
  auto n = static_cast<std::size_t>(t - v0);
  const auto& a = f.coeffs();
  const auto& b = g.coeffs();
  // iterate over the nonzero entries of the sparser operand
  std::vector<std::size_t> nzA, nzB;
  for (std::size_t i = 0; i < std::min(n, a.size()); ++i)
    if (!R.is_zero(a[i])) nzA.push_back(i);
  for (std::size_t i = 0; i < std::min(n, b.size()); ++i)
    if (!R.is_zero(b[i])) nzB.push_back(i);
  const bool useA = nzA.size() <= nzB.size();
  const auto& nz = useA ? nzA : nzB;
  const auto& sparse = useA ? a : b;
  const auto& dense = useA ? b : a;
  std::vector<typename Ring::value_type> out(n, R.zero());
  for (std::size_t i : nz) {
    const auto& s = sparse[i];
    const std::size_t lim = std::min(n - i, dense.size());
    for (std::size_t k = 0; k < lim; ++k) R.add_mul(out[i + k], s, dense[k]);
  }
  return Series<Ring>(R, off, v0, std::move(out));
}

/// Multiplicative inverse; the leading coefficient must be a unit.
template <class Ring>
Series<Ring> inv(const Series<Ring>& f) {
  const Ring& R = f.ring();
  if (f.is_zero()) throw Error(ErrorKind::InvalidInput, "series", "inv", "cannot invert the zero series");
  const auto& a = f.coeffs();
  auto lead_inv = R.inverse(a[0]);
  const std::size_t n = a.size();
  std::vector<std::size_t> nz;
  for (std::size_t i = 1; i < n; ++i)
    if (!R.is_zero(a[i])) nz.push_back(i);
  std::vector<typename Ring::value_type> h(n, R.zero());
  h[0] = lead_inv;
  auto neg_lead_inv = R.neg(lead_inv);
  for (std::size_t k = 1; k < n; ++k) {
    auto acc = R.zero();
    for (std::size_t i : nz) {
      if (i > k) break;
      R.add_mul(acc, a[i], h[k - i]);
    }
    h[k] = R.mul(neg_lead_inv, acc);
  }
  return Series<Ring>(R, -f.offset24(), -f.valuation(), std::move(h));
}

template <class Ring>
Series<Ring> pow(const Series<Ring>& f, i64 n) {
  const Ring& R = f.ring();
  if (n < 0) return pow(inv(f), -n);
  if (n == 0) {
    i64 rel = f.is_zero() ? 0 : f.trunc() - f.valuation();
    return Series<Ring>::one(R, rel);
  }
  if (n == 1) return f;
  if (f.is_zero()) {
    return Series<Ring>::zero(R, f.trunc() * n, f.offset24() * n);
  }
  const auto& a = f.coeffs();
  const std::size_t len = a.size();
  const i64 off = f.offset24() * n;
  const i64 v0 = f.valuation() * n;

  bool miller = !std::is_same_v<Ring, ModRing> && R.is_unit(a[0]);
  if (miller) {
    // J.C.P. Miller recurrence: k a_0 g_k = sum_{i=1}^k ((n+1) i - k) a_i g_{k-i}
    std::vector<std::size_t> nz;
    for (std::size_t i = 1; i < len; ++i)
      if (!R.is_zero(a[i])) nz.push_back(i);
    std::vector<typename Ring::value_type> g(len, R.zero());
    g[0] = R.one();
    for (i64 i = 0; i < n; ++i) g[0] = R.mul(g[0], a[0]);
    auto a0inv = R.inverse(a[0]);
    for (std::size_t k = 1; k < len; ++k) {
      auto acc = R.zero();
      for (std::size_t i : nz) {
        if (i > k) break;
        i64 w = (n + 1) * static_cast<i64>(i) - static_cast<i64>(k);
        if (w != 0) R.add_mul_si(acc, R.mul(a[i], g[k - i]), w);
      }
      g[k] = R.mul(R.div_exact_small(acc, static_cast<i64>(k)), a0inv);
    }
    return Series<Ring>(R, off, v0, std::move(g));
  }
  // binary powering on the unit-valuation part
  Series<Ring> base(R, 0, 0, std::vector<typename Ring::value_type>(a));
  Series<Ring> acc = Series<Ring>::one(R, static_cast<i64>(len));
  i64 e = n;
  while (e > 0) {
    if (e & 1) acc = mul(acc, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  std::vector<typename Ring::value_type> v(acc.coeffs());
  if (acc.is_zero()) return Series<Ring>::zero(R, v0 + static_cast<i64>(len), off);
  v.resize(static_cast<std::size_t>(static_cast<i64>(len) - acc.valuation()), R.zero());
  return Series<Ring>(R, off, v0 + acc.valuation(), std::move(v));
}

/// f(q^d): exponents, offset and truncation all scale by d.
template <class Ring>
Series<Ring> substitute_power(const Series<Ring>& f, i64 d) {
  if (d < 1) throw Error(ErrorKind::InvalidInput, "series", "substitute_power", "d must be >= 1");
  const Ring& R = f.ring();
  if (f.is_zero()) return Series<Ring>::zero(R, f.trunc() * d, f.offset24() * d);
  std::vector<typename Ring::value_type> v(f.coeffs().size() * static_cast<std::size_t>(d) -
                                               static_cast<std::size_t>(d - 1),
                                           R.zero());
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) v[i * static_cast<std::size_t>(d)] = f.coeffs()[i];
  v.resize(static_cast<std::size_t>((f.trunc() - f.valuation()) * d), R.zero());
  return Series<Ring>(R, f.offset24() * d, f.valuation() * d, std::move(v));
}

/// Reduce an exact-integer series to least positive residues mod ell^B.
Series<ModRing> reduce_mod(const Series<IntegerRing>& f, i64 ell, int B);
Series<ModRing> reduce_mod(const Series<IntegerRing>& f, const ModRing& R);

Series<RationalRing> to_rational(const Series<IntegerRing>& f);

/// Fails with ContractViolation if a coefficient has a nontrivial denominator.
Series<IntegerRing> to_integer(const Series<RationalRing>& f);

/// (q^d; q^d)_infinity to exponent trunc (exclusive), via the pentagonal number theorem.
Series<IntegerRing> euler_product(i64 d, i64 trunc);

}  // namespace etacheck
