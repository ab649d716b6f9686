#pragma once

// The ell-adic iteration L_alpha mod ell^B over the image table, the
// divisibility exponents it produces, and brute-force cross-checks.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "etacheck/ujump.hpp"

namespace etacheck {

enum class Pattern {
  EvenAlpha,   // v_{2a} >= a
  EveryAlpha,  // v_a >= a
};

std::string pattern_name(Pattern p);
Pattern parse_pattern(const std::string& s);

struct CongruenceFamilySpec {
  std::string name;  // built-in name, empty for user specs
  FamilyGenerator gen;
  i64 c = 24;  // progressions are c n = 1 mod ell^alpha
  Pattern pattern = Pattern::EvenAlpha;
  int B = 5;

  i64 level() const { return gen.ell * gen.M; }
  /// Least v_alpha the conjectured family demands.
  int required(int alpha) const;
  /// 2B for alternating patterns, B otherwise.
  int default_iterations() const;
  /// Throws InvalidInput on a malformed spec.
  void validate() const;

  std::string to_json() const;
  static CongruenceFamilySpec from_json(const std::string& text);

  friend bool operator==(const CongruenceFamilySpec&, const CongruenceFamilySpec&);
};

CongruenceFamilySpec rogers_ramanujan_spec();
CongruenceFamilySpec andrews_sellers_spec();
/// A built-in name or a path to a JSON file.
CongruenceFamilySpec load_spec(const std::string& name_or_path);

/// The level-20 basis when the spec lives at level 20 and its t fits the
/// pole sets of A; otherwise t from the W-search and a constructed basis.
AlgebraBasis choose_basis(const CongruenceFamilySpec& spec, int threads = 1);

struct StepRecord {
  int alpha = 0;
  int v = 0;
  int required = 0;
  bool pass = true;
  bool saturated = false;  // L_alpha vanished mod ell^B
  i64 j_min = 0;
  i64 j_max = 0;
  std::size_t terms = 0;
  double seconds = 0;
};

struct VerificationReport {
  CongruenceFamilySpec spec;
  int B = 0;
  int iterations = 0;
  std::vector<StepRecord> steps;  // alpha = 0..iterations
  std::vector<ModuleElement> L;   // L_alpha mod ell^B
  bool passed = false;
  std::optional<int> first_failure;

  std::vector<int> V() const;
  std::string to_text() const;
  std::string to_json(bool with_timings = true) const;
};

struct IterateOptions {
  int B = 0;           // 0: the spec's B
  int iterations = -1; // -1: 2B or B for the B in use
  int threads = 1;
  i64 j_ceiling = 64;
};

/// L_0 = 1, L_alpha = U^{(alpha-1)}(L_{alpha-1}) mod ell^B, where the
/// operator multiplies by A first when alpha is odd.
VerificationReport iterate(const CongruenceFamilySpec& spec, ImageEngine& engine, const IterateOptions& opt = {});

/// Builds basis and engine, then iterates.
VerificationReport verify(const CongruenceFamilySpec& spec, const IterateOptions& opt = {},
                          std::optional<std::filesystem::path> cache_dir = {});

/// First alpha whose v_alpha falls short of the pattern, if any.
std::optional<int> first_pattern_failure(const VerificationReport& r, const CongruenceFamilySpec& spec);
bool check_pattern(const VerificationReport& r, const CongruenceFamilySpec& spec);

/// lambda in [0, ell^alpha) with c lambda = 1 mod ell^alpha.
i64 residue_for_case(i64 c, i64 ell, int alpha);

struct OracleResult {
  bool holds = true;
  std::optional<i64> counterexample;  // least n with ell^e not dividing a(m n + j)
  mpz_class value;                    // a(m n + j) at the counterexample
};

/// Tests ell^e | a(m n + j) for 0 <= n <= n_max.
OracleResult direct_oracle(const FamilyGenerator& gen, i64 m, i64 j, i64 ell, int e, i64 n_max);

/// Power s_alpha of q in Phi_alpha = q^{s_alpha} / C(q^ell) (alpha odd) or
/// q^{s_alpha} / C(q) (alpha even).
i64 phi_shift(const CongruenceFamilySpec& spec, int alpha);

/// Phi_alpha sum_{c n = 1 mod ell^alpha} a(n) q^{floor(n / ell^alpha)} below q^n_coeffs.
Series<IntegerRing> subseries_side(const CongruenceFamilySpec& spec, int alpha, i64 n_coeffs);

struct ConsistencyResult {
  bool ok = true;
  std::optional<i64> first_mismatch;  // exponent
};

/// Compares the q-expansion of L (taken as L_alpha mod ell^B) with the
/// subseries side mod ell^B for exponents below n_coeffs.
ConsistencyResult consistency_check(const CongruenceFamilySpec& spec, const AlgebraBasis& b, const ModuleElement& L,
                                    int alpha, int B, i64 n_coeffs = 40);

}  // namespace etacheck
