#include "etacheck/verifier.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "etacheck/error.hpp"
#include "etacheck/tfinder.hpp"

namespace etacheck {

using nlohmann::json;

namespace {

[[noreturn]] void bad_spec(const std::string& what) {
  throw Error(ErrorKind::InvalidInput, "verifier", "spec", what);
}

i64 pow_checked(i64 ell, int e) {
  i64 r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (i64{1} << 62) / ell) throw Error(ErrorKind::InvalidInput, "verifier", "residue", "ell^alpha overflows");
    r *= ell;
  }
  return r;
}

}  // namespace

std::string pattern_name(Pattern p) { return p == Pattern::EvenAlpha ? "even-alpha" : "every-alpha"; }

Pattern parse_pattern(const std::string& s) {
  if (s == "even-alpha") return Pattern::EvenAlpha;
  if (s == "every-alpha") return Pattern::EveryAlpha;
  bad_spec("unknown pattern '" + s + "' (expected even-alpha or every-alpha)");
}

// Spec

int CongruenceFamilySpec::required(int alpha) const {
  if (pattern == Pattern::EveryAlpha) return alpha;
  return alpha % 2 == 0 ? alpha / 2 : 0;
}

int CongruenceFamilySpec::default_iterations() const { return pattern == Pattern::EvenAlpha ? 2 * B : B; }

void CongruenceFamilySpec::validate() const {
  if (gen.r.empty()) bad_spec("r is empty");
  try {
    gen.validate();
  } catch (const Error& e) {
    bad_spec(e.what());
  } catch (const std::exception& e) {
    bad_spec(e.what());
  }
  if (std::gcd(c, gen.ell) != 1) bad_spec("c must be prime to ell");
  if (B < 1) bad_spec("B must be at least 1");
  try {
    ModRing(gen.ell, B);
  } catch (const Error& e) {
    bad_spec(e.what());
  }
}

std::string CongruenceFamilySpec::to_json() const {
  json j;
  if (!name.empty()) j["name"] = name;
  j["M"] = gen.M;
  json r = json::object();
  for (auto [d, e] : gen.r) r[std::to_string(d)] = e;
  j["r"] = r;
  j["ell"] = gen.ell;
  j["c"] = c;
  j["pattern"] = pattern_name(pattern);
  j["B"] = B;
  return j.dump();
}

CongruenceFamilySpec CongruenceFamilySpec::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad_spec(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad_spec("spec must be a JSON object");
  static const std::vector<std::string> known = {"name", "M", "r", "ell", "c", "pattern", "B"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) bad_spec("unknown field '" + it.key() + "'");
  auto integer = [&](const char* key) -> i64 {
    if (!j.contains(key)) bad_spec(std::string("missing field '") + key + "'");
    if (!j[key].is_number_integer()) bad_spec(std::string("field '") + key + "' must be an integer");
    return j[key].get<i64>();
  };
  CongruenceFamilySpec s;
  if (j.contains("name")) {
    if (!j["name"].is_string()) bad_spec("field 'name' must be a string");
    s.name = j["name"].get<std::string>();
  }
  s.gen.M = integer("M");
  s.gen.ell = integer("ell");
  s.c = integer("c");
  s.B = j.contains("B") ? static_cast<int>(integer("B")) : 5;
  if (!j.contains("pattern") || !j["pattern"].is_string()) bad_spec("field 'pattern' must be a string");
  s.pattern = parse_pattern(j["pattern"].get<std::string>());
  if (!j.contains("r") || !j["r"].is_object()) bad_spec("field 'r' must be an object");
  for (auto it = j["r"].begin(); it != j["r"].end(); ++it) {
    i64 d;
    std::size_t used = 0;
    try {
      d = std::stoll(it.key(), &used);
    } catch (const std::exception&) {
      bad_spec("divisor '" + it.key() + "' is not an integer");
    }
    if (used != it.key().size() || d < 1) bad_spec("divisor '" + it.key() + "' is not a positive integer");
    if (!it.value().is_number_integer()) bad_spec("exponent of " + it.key() + " must be an integer");
    if (s.gen.M < 1 || s.gen.M % d != 0) bad_spec("divisor " + it.key() + " does not divide M");
    if (it.value().get<i64>() != 0) s.gen.r[d] = it.value().get<i64>();
  }
  s.validate();
  return s;
}

bool operator==(const CongruenceFamilySpec& a, const CongruenceFamilySpec& b) {
  return a.name == b.name && a.gen.M == b.gen.M && a.gen.r == b.gen.r && a.gen.ell == b.gen.ell && a.c == b.c &&
         a.pattern == b.pattern && a.B == b.B;
}

CongruenceFamilySpec rogers_ramanujan_spec() {
  return {"rogers-ramanujan", {4, {{1, -3}, {2, 5}, {4, -2}}, 5}, 24, Pattern::EvenAlpha, 5};
}

CongruenceFamilySpec andrews_sellers_spec() {
  return {"andrews-sellers", {4, {{1, -4}, {2, 5}, {4, -2}}, 5}, 12, Pattern::EveryAlpha, 5};
}

CongruenceFamilySpec load_spec(const std::string& name_or_path) {
  if (name_or_path == "rogers-ramanujan") return rogers_ramanujan_spec();
  if (name_or_path == "andrews-sellers") return andrews_sellers_spec();
  std::ifstream in(name_or_path);
  if (!in)
    bad_spec("'" + name_or_path + "' is neither a built-in spec (rogers-ramanujan, andrews-sellers) nor a readable file");
  std::stringstream ss;
  ss << in.rdbuf();
  return CongruenceFamilySpec::from_json(ss.str());
}

AlgebraBasis choose_basis(const CongruenceFamilySpec& spec, int threads) {
  spec.validate();
  const i64 N = spec.level();
  const EtaQuotient A = build_A(spec.gen);
  const PoleSets ps = compute_pole_sets(A, spec.gen.ell, N);
  if (N == 20) {
    const EtaQuotient T = basis_n20_T();
    if (check_W(N, ps, T.exponent_vector(), -eta_valuation(T))) return load_basis_n20();
  }
  TSearchConfig tc;
  tc.threads = threads;
  const WSolution w = find_t(ps, tc);
  BasisSearchConfig bc;
  bc.threads = threads;
  return construct_basis(w.quotient(N), bc);
}

// Report

std::vector<int> VerificationReport::V() const {
  std::vector<int> v;
  for (const auto& s : steps) v.push_back(s.v);
  return v;
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << "family " << (spec.name.empty() ? "(custom)" : spec.name) << ", ell = " << spec.gen.ell << ", B = " << B
     << ", iterations = " << iterations << ", pattern " << pattern_name(spec.pattern) << "\n";
  os << " alpha  v  need  terms  j-range       time\n";
  for (const auto& s : steps) {
    std::ostringstream jr;
    jr << "[" << s.j_min << "," << s.j_max << "]";
    os << std::setw(6) << s.alpha << std::setw(3) << s.v << std::setw(6) << s.required << std::setw(7) << s.terms
       << "  " << std::left << std::setw(12) << jr.str() << std::right << std::fixed << std::setprecision(3)
       << std::setw(7) << s.seconds << "s" << (s.pass ? "" : "  FAIL") << (s.saturated ? "  saturated" : "") << "\n";
  }
  os << "V = [";
  for (std::size_t i = 0; i < steps.size(); ++i) os << (i ? ", " : "") << steps[i].v;
  os << "]\n" << (passed ? "PASS" : "FAIL at alpha = " + std::to_string(first_failure.value_or(-1))) << "\n";
  return os.str();
}

std::string VerificationReport::to_json(bool with_timings) const {
  json j;
  j["spec"] = json::parse(spec.to_json());
  j["B"] = B;
  j["iterations"] = iterations;
  json V = json::array(), pass = json::array(), sat = json::array(), support = json::array(), times = json::array();
  for (const auto& s : steps) {
    V.push_back(s.v);
    pass.push_back(s.pass);
    sat.push_back(s.saturated);
    support.push_back({{"alpha", s.alpha}, {"j_min", s.j_min}, {"j_max", s.j_max}, {"terms", s.terms}});
    times.push_back(s.seconds);
  }
  j["V"] = V;
  j["pass"] = pass;
  j["saturated"] = sat;
  j["support"] = support;
  if (with_timings) j["seconds"] = times;
  j["passed"] = passed;
  j["first_failure"] = first_failure ? json(*first_failure) : json(nullptr);
  return j.dump(2);
}

// Iteration

VerificationReport iterate(const CongruenceFamilySpec& spec, ImageEngine& engine, const IterateOptions& opt) {
  spec.validate();
  if (engine.ell() != spec.gen.ell)
    throw Error(ErrorKind::InvalidInput, "verifier", "iterate", "engine and spec disagree on ell");
  VerificationReport rep;
  rep.spec = spec;
  rep.B = opt.B > 0 ? opt.B : spec.B;
  auto effective = spec;
  effective.B = rep.B;
  rep.iterations = opt.iterations >= 0 ? opt.iterations : effective.default_iterations();
  if (rep.iterations > 2 * rep.B)
    throw Error(ErrorKind::InvalidInput, "verifier", "iterate",
                "iterations must not exceed 2B = " + std::to_string(2 * rep.B));
  const i64 ell = spec.gen.ell;
  const int B = rep.B;

  ModuleElement L(CoeffRing::mod_prime_power(ell, B));
  L.add_term(0, 0, 1);
  auto record = [&](int alpha, double secs) {
    StepRecord s;
    s.alpha = alpha;
    s.v = L.valuation(ell, B);
    s.saturated = L.is_zero();
    s.required = spec.required(alpha);
    s.pass = s.v >= s.required;
    s.j_min = L.min_j();
    s.j_max = L.max_j();
    s.terms = L.size();
    s.seconds = secs;
    rep.steps.push_back(s);
    rep.L.push_back(L);
  };
  record(0, 0);

  for (int alpha = 1; alpha <= rep.iterations; ++alpha) {
    const auto t0 = std::chrono::steady_clock::now();
    const i64 i = alpha % 2 == 1 ? 1 : 0;
    std::vector<ImageKey> keys;
    for (const auto& [jk, c] : L.terms()) keys.push_back({i, jk.first, jk.second});
    engine.prefetch(keys, opt.threads);
    L = apply_images(engine, L, i, B);
    if (L.min_j() < -opt.j_ceiling || L.max_j() > opt.j_ceiling)
      throw Error(ErrorKind::ContractViolation, "verifier", "iterate",
                  "t-support [" + std::to_string(L.min_j()) + "," + std::to_string(L.max_j()) + "] at alpha = " +
                      std::to_string(alpha) + " exceeds the ceiling " + std::to_string(opt.j_ceiling));
    record(alpha, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  rep.first_failure = first_pattern_failure(rep, spec);
  rep.passed = !rep.first_failure;
  return rep;
}

VerificationReport verify(const CongruenceFamilySpec& spec, const IterateOptions& opt,
                          std::optional<std::filesystem::path> cache_dir) {
  ImageEngine engine(choose_basis(spec, opt.threads), build_A(spec.gen), spec.gen.ell, std::move(cache_dir));
  return iterate(spec, engine, opt);
}

std::optional<int> first_pattern_failure(const VerificationReport& r, const CongruenceFamilySpec& spec) {
  for (const auto& s : r.steps)
    if (s.v < spec.required(s.alpha)) return s.alpha;
  return std::nullopt;
}

bool check_pattern(const VerificationReport& r, const CongruenceFamilySpec& spec) {
  return !first_pattern_failure(r, spec);
}

// Oracles

i64 residue_for_case(i64 c, i64 ell, int alpha) {
  if (alpha < 0) throw Error(ErrorKind::InvalidInput, "verifier", "residue_for_case", "alpha must be >= 0");
  if (std::gcd(c, ell) != 1) throw Error(ErrorKind::InvalidInput, "verifier", "residue_for_case", "gcd(c, ell) != 1");
  const i64 m = pow_checked(ell, alpha);
  if (m == 1) return 0;
  return mod_inverse(mod_floor(c, m), m);
}

OracleResult direct_oracle(const FamilyGenerator& gen, i64 m, i64 j, i64 ell, int e, i64 n_max) {
  if (m < 1 || j < 0 || n_max < 0 || e < 0)
    throw Error(ErrorKind::InvalidInput, "verifier", "direct_oracle", "need m >= 1, j >= 0, e >= 0, n_max >= 0");
  const auto a = gen.series(m * n_max + j + 1);
  mpz_class pe;
  mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(ell), static_cast<unsigned long>(e));
  OracleResult r;
  for (i64 n = 0; n <= n_max; ++n) {
    const mpz_class& x = a[m * n + j];
    if (!mpz_divisible_p(x.get_mpz_t(), pe.get_mpz_t())) {
      r.holds = false;
      r.counterexample = n;
      r.value = x;
      return r;
    }
  }
  return r;
}

i64 phi_shift(const CongruenceFamilySpec& spec, int alpha) {
  const i64 ell = spec.gen.ell;
  const i64 d = eta_valuation(build_A(spec.gen));
  i64 s = 0, lam = 0, mod = 1;
  for (int a = 1; a <= alpha; ++a) {
    const i64 lam_next = residue_for_case(spec.c, ell, a);
    const i64 num = (lam_next - lam) / mod + (a % 2 == 1 ? d : 0) + s;
    if (mod_floor(num, ell) != 0)
      throw Error(ErrorKind::InvalidInput, "verifier", "phi_shift",
                  "c = " + std::to_string(spec.c) + " does not match the progressions picked out by U_ell");
    s = num / ell;
    lam = lam_next;
    mod *= ell;
  }
  return s;
}

Series<IntegerRing> subseries_side(const CongruenceFamilySpec& spec, int alpha, i64 n_coeffs) {
  const i64 ell = spec.gen.ell;
  const i64 mod = pow_checked(ell, alpha);
  const i64 lam = residue_for_case(spec.c, ell, alpha);
  const i64 s = phi_shift(spec, alpha);
  const i64 len = std::max<i64>(n_coeffs - s, 1);
  const auto a = spec.gen.series(mod * len + lam + 1);
  std::vector<mpz_class> c;
  for (i64 k = 0; k < len; ++k) c.push_back(a[mod * k + lam]);
  Series<IntegerRing> S({}, 0, 0, std::move(c));
  const auto C = spec.gen.series(len + 1);
  const auto denom = alpha % 2 == 1 ? substitute_power(C, ell) : C;
  return mul(S, inv(denom)).shifted(s);
}

ConsistencyResult consistency_check(const CongruenceFamilySpec& spec, const AlgebraBasis& b, const ModuleElement& L,
                                    int alpha, int B, i64 n_coeffs) {
  const auto lhs = reduce_mod(L.expand(b, n_coeffs), spec.gen.ell, B);
  const auto rhs = reduce_mod(subseries_side(spec, alpha, n_coeffs), spec.gen.ell, B);
  ConsistencyResult r;
  const i64 lo = std::min(lhs.valuation(), rhs.valuation());
  for (i64 n = lo; n < n_coeffs; ++n) {
    if (n >= lhs.trunc() || n >= rhs.trunc() || lhs[n] != rhs[n]) {
      r.ok = false;
      r.first_mismatch = n;
      return r;
    }
  }
  return r;
}

}  // namespace etacheck
