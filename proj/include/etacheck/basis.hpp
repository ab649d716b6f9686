#pragma once

// Algebra bases <1, g_1, ..., g_v> over polynomials in t, and the greedy
// principal-part reduction deciding membership.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "etacheck/eta.hpp"
#include "etacheck/modcurve.hpp"
#include "etacheck/series.hpp"

namespace etacheck {

/// Integer combination sum c_i * E_i of eta quotients at a common level.
class EtaCombination {
 public:
  EtaCombination() = default;
  explicit EtaCombination(const EtaQuotient& e) { add(1, e); }

  void add(const mpz_class& c, const EtaQuotient& e);
  const std::vector<std::pair<mpz_class, EtaQuotient>>& terms() const { return terms_; }
  bool is_constant_one() const;

  /// Normalized expansion with integer exponents below abs_trunc.
  Series<IntegerRing> expand(i64 abs_trunc) const;
  /// Lowest valuation among the constituents (a lower bound for the sum).
  i64 min_valuation() const;

  EtaCombination operator*(const EtaCombination& o) const;
  EtaCombination operator-(const EtaCombination& o) const;
  EtaCombination operator+(const EtaCombination& o) const;
  EtaCombination pow(unsigned n) const;

  std::string to_string() const;

 private:
  std::vector<std::pair<mpz_class, EtaQuotient>> terms_;  // merged, nonzero
};

class BasisFunction {
 public:
  BasisFunction() = default;
  BasisFunction(std::string name, std::string construction, EtaCombination combo, i64 level);

  const std::string& name() const { return name_; }
  const std::string& construction() const { return construction_; }
  const EtaCombination& combination() const { return combo_; }
  i64 ord_inf() const { return ord_; }
  /// Expansion below abs_trunc, served from a shared cache when possible.
  Series<IntegerRing> series(i64 abs_trunc) const;

 private:
  struct Cache {
    std::mutex mu;
    std::optional<Series<IntegerRing>> s;
  };
  std::string name_;
  std::string construction_;
  EtaCombination combo_;
  i64 ord_ = 0;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

namespace detail {
struct ProductCache;
}

struct AlgebraBasis {
  i64 level = 1;
  BasisFunction t;
  std::vector<BasisFunction> gs;  // g_1..g_v; g_0 = 1 is implicit
  /// Expansions of t^a g_k shared by copies of this basis.
  std::shared_ptr<detail::ProductCache> products = make_product_cache();

  std::size_t v() const { return gs.size(); }
  /// |ord_inf(g_k)| for k = 0..v (0 for g_0).
  i64 pole_order(std::size_t k) const { return k == 0 ? 0 : -gs[k - 1].ord_inf(); }
  /// g_k expansion; k = 0 gives 1.
  Series<IntegerRing> g_series(std::size_t k, i64 abs_trunc) const;
  /// Stable hash of the level and every construction.
  std::string fingerprint() const;
  std::string to_string() const;
  /// t^a g_k below abs_trunc (entries at or beyond abs_trunc may be absent).
  std::shared_ptr<const Series<IntegerRing>> product(i64 a, std::size_t k, i64 abs_trunc) const;

  static std::shared_ptr<detail::ProductCache> make_product_cache();
};

/// t, G, H at level 20 with g = (G, H - G, G^2, (H - G)^2).
AlgebraBasis load_basis_n20();

/// Eta quotients used by load_basis_n20.
EtaQuotient basis_n20_T();
EtaQuotient basis_n20_G();
EtaQuotient basis_n20_H();

/// Reasons the basis conditions fail; empty when the basis is valid.
std::vector<std::string> basis_violations(const AlgebraBasis& b);
bool verify_basis(const AlgebraBasis& b);

struct BasisSearchConfig {
  i64 bound = 16;
  i64 max_order = 0;  // 0: pick 3(v+1)
  int threads = 1;
};

/// Fills each nonzero residue class mod v+1 = |ord t| with the smallest
/// pole order reachable by one eta quotient in E^inf(N) or a product of two.
AlgebraBasis construct_basis(const EtaQuotient& t, const BasisSearchConfig& cfg = {});

/// Outcome of reducing f against a basis.
struct ReductionResult {
  bool ok = false;
  /// p[k] maps a power of t to its coefficient, for k = 0..v.
  std::vector<std::map<i64, mpq_class>> p;
  /// Pole order at which no basis element applied (meaningful when !ok).
  i64 stall_order = 0;
  /// Pole orders visited, strictly decreasing.
  std::vector<i64> descent;

  bool integral() const;
};

/// Reduces f, given to truncation >= 1, to sum_k p_k(t) g_k; the residual
/// after the constant is absorbed must vanish to f's truncation.
ReductionResult mw_reduce(const Series<RationalRing>& f, const AlgebraBasis& b);

/// Re-expands sum_k p_k(t) g_k below abs_trunc.
Series<RationalRing> reconstruct(const ReductionResult& r, const AlgebraBasis& b, i64 abs_trunc);

}  // namespace etacheck
