#pragma once

// The U_ell operator, the auxiliary function A, stability exponents and the
// memoized images U_ell(A^i t^j g_k) expressed in the basis.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "etacheck/basis.hpp"
#include "etacheck/eta.hpp"
#include "etacheck/modcurve.hpp"
#include "etacheck/series.hpp"

namespace etacheck {

/// sum_{ell m < trunc} a(ell m) q^m. The series must have integer exponents;
/// the truncation becomes ceil(trunc / ell).
template <class Ring>
Series<Ring> u_ell(const Series<Ring>& f, i64 ell) {
  if (ell < 2) throw Error(ErrorKind::InvalidInput, "ujump", "u_ell", "ell must be at least 2");
  if (f.offset24() % 24 != 0)
    throw Error(ErrorKind::InvalidInput, "ujump", "u_ell", "series has a fractional exponent offset");
  const Series<Ring> g = f.offset24() == 0 ? f : f.normalized();
  const i64 t = ceil_div(g.trunc(), ell);
  if (g.is_zero()) return Series<Ring>::zero(g.ring(), t);
  const i64 v = ceil_div(g.valuation(), ell);
  if (v >= t) return Series<Ring>::zero(g.ring(), t);
  std::vector<typename Ring::value_type> c;
  c.reserve(static_cast<std::size_t>(t - v));
  for (i64 m = v; m < t; ++m) c.push_back(g[ell * m]);
  return Series<Ring>(g.ring(), 0, v, std::move(c));
}

/// G(q) = prod_{d | M} (q^d;q^d)^{r_d} with the prime ell driving the family.
struct FamilyGenerator {
  i64 M = 1;
  std::map<i64, i64> r;
  i64 ell = 5;

  EtaQuotient quotient() const { return EtaQuotient(M, r); }
  /// sum_d d r_d
  i64 weight24() const { return quotient().offset24(); }
  /// Throws unless ell is a prime > 3, every key divides M and
  /// 0 <= -sum d r_d <= 24/(ell+1).
  void validate() const;
  /// Coefficients a(n) for 0 <= n < trunc.
  Series<IntegerRing> series(i64 trunc) const;
};

/// q^{(1-ell^2) sum d r_d / 24} G(q)/G(q^{ell^2}) as an eta quotient of level ell^2 M.
EtaQuotient build_A(const FamilyGenerator& gen);

struct StabilityExponents {
  i64 m_A = 0;
  i64 m_t = 0;
  i64 m_negt = 0;
  std::vector<i64> m_k;  // index 0 is g_0 = 1 and always 0

  std::string to_string() const;
};

/// Least m >= 0 with m ord_x(t(ell tau)) + ord_x(f) >= 0 at every cusp x of
/// Gamma0(ell N) other than infinity. f must live at a level dividing ell N.
i64 minimal_power(const EtaQuotient& f, const EtaQuotient& t, i64 ell);

StabilityExponents compute_m_constants(const AlgebraBasis& b, const EtaQuotient& A, i64 ell);

/// i m_A + |j| (m_t or m_negt by the sign of j) + m_k.
i64 stability_exponent(const StabilityExponents& se, i64 i, i64 j, std::size_t k);

/// ord_x(t(ell tau)^m f) = constant + slope * m at one cusp.
struct OrderExpression {
  mpq_class constant;
  mpq_class slope;
  std::string to_string(const std::string& var) const;
  mpq_class at(i64 m) const { return constant + slope * m; }
};

/// One row per cusp of Gamma0(ell N), one column per f.
std::vector<std::pair<Cusp, std::vector<OrderExpression>>> order_table(const std::vector<EtaQuotient>& fs,
                                                                       const EtaQuotient& t, i64 ell);

/// Finite sum of c_{j,k} t^j g_k. Coefficients are exact integers, reduced
/// to [0, ell^B) when the ring is Z/ell^B.
class ModuleElement {
 public:
  using Key = std::pair<i64, std::size_t>;  // (j, k)

  ModuleElement() = default;
  explicit ModuleElement(CoeffRing ring) : ring_(ring) {}

  const CoeffRing& ring() const { return ring_; }
  const std::map<Key, mpz_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  mpz_class coefficient(i64 j, std::size_t k) const;

  /// Adds c t^j g_k (reducing when the ring is modular).
  void add_term(i64 j, std::size_t k, const mpz_class& c);
  /// this += c * o, terms of o shifted by t^shift.
  void add_scaled(const ModuleElement& o, const mpz_class& c, i64 shift = 0);
  ModuleElement shifted(i64 s) const;
  ModuleElement reduced(i64 ell, int B) const;

  i64 min_j() const;
  i64 max_j() const;
  /// Least ell-adic valuation over nonzero coefficients, capped at cap; cap for zero.
  int valuation(i64 ell, int cap) const;
  std::string to_string() const;

  /// Expansion below abs_trunc as an integer series.
  Series<IntegerRing> expand(const AlgebraBasis& b, i64 abs_trunc) const;

  friend bool operator==(const ModuleElement& x, const ModuleElement& y) {
    return x.ring_ == y.ring_ && x.terms_ == y.terms_;
  }

 private:
  CoeffRing ring_ = CoeffRing::integers();
  std::map<Key, mpz_class> terms_;
};

struct ImageKey {
  i64 i;
  i64 j;
  std::size_t k;
  friend auto operator<=>(const ImageKey&, const ImageKey&) = default;
};

/// Computes and memoizes U_ell(A^i t^j g_k) in the basis, optionally
/// persisting each image as a text file under cache_dir.
class ImageEngine {
 public:
  ImageEngine(AlgebraBasis b, EtaQuotient A, i64 ell, std::optional<std::filesystem::path> cache_dir = {});

  const AlgebraBasis& basis() const { return b_; }
  const EtaQuotient& A() const { return A_; }
  i64 ell() const { return ell_; }
  const StabilityExponents& exponents() const { return se_; }
  /// Precision past the constant term kept when reducing.
  static constexpr i64 kSlack = 16;

  /// Exact image; throws ContractViolation when reduction stalls or a
  /// coefficient is not an integer.
  std::shared_ptr<const ModuleElement> image(i64 i, i64 j, std::size_t k);
  /// The image reduced mod ell^B (memoized per B).
  std::shared_ptr<const ModuleElement> image_mod(i64 i, i64 j, std::size_t k, int B);
  /// Computes the missing images with up to threads workers.
  void prefetch(const std::vector<ImageKey>& keys, int threads);

  /// The image recomputed from scratch, bypassing memo and disk.
  ModuleElement compute(i64 i, i64 j, std::size_t k) const;
  /// A^i t^j g_k expanded below abs_trunc.
  Series<IntegerRing> source_series(i64 i, i64 j, std::size_t k, i64 abs_trunc) const;

  std::size_t memo_size() const;
  std::size_t disk_hits() const { return disk_hits_; }

  /// Replaces a memo entry; used to inject faults in tests.
  void override_image(i64 i, i64 j, std::size_t k, ModuleElement e);

 private:
  std::optional<ModuleElement> load(const ImageKey& key) const;
  void store(const ImageKey& key, const ModuleElement& e) const;
  std::filesystem::path cache_file(const ImageKey& key) const;
  EtaCombination source(i64 i, i64 j, std::size_t k) const;

  AlgebraBasis b_;
  EtaQuotient A_;
  i64 ell_;
  i64 big_level_;
  StabilityExponents se_;
  std::optional<std::filesystem::path> dir_;
  std::string fingerprint_;
  mutable std::mutex mu_;
  std::map<ImageKey, std::shared_ptr<const ModuleElement>> memo_;
  std::map<std::pair<ImageKey, int>, std::shared_ptr<const ModuleElement>> memo_mod_;
  std::size_t disk_hits_ = 0;
};

/// sum c U_ell(A^i t^j g_k) over the terms c t^j g_k of x; B = 0 keeps exact
/// integers, otherwise the images and the result are reduced mod ell^B.
ModuleElement apply_images(ImageEngine& e, const ModuleElement& x, i64 i, int B = 0);

}  // namespace etacheck
