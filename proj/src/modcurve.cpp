#include "etacheck/modcurve.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "etacheck/error.hpp"

namespace etacheck {

Cusp::Cusp(i64 num, i64 den) {
  if (den == 0) {
    if (num == 0) throw Error(ErrorKind::InvalidInput, "modcurve", "Cusp", "0/0 is not a cusp");
    a = 1;
    c = 0;
    return;
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i64 g = gcd(num < 0 ? -num : num, den);
  a = num / g;
  c = den / g;
}

Cusp Cusp::parse(const std::string& text) {
  if (text == "inf" || text == "infinity") return infinity();
  auto slash = text.find('/');
  try {
    std::size_t p1 = 0, p2 = 0;
    if (slash == std::string::npos) {
      i64 a = std::stoll(text, &p1);
      if (p1 != text.size()) throw std::invalid_argument("trailing");
      return Cusp(a, 1);
    }
    std::string sa = text.substr(0, slash), sc = text.substr(slash + 1);
    i64 a = std::stoll(sa, &p1);
    i64 c = std::stoll(sc, &p2);
    if (p1 != sa.size() || p2 != sc.size()) throw std::invalid_argument("trailing");
    return Cusp(a, c);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "modcurve", "parse_cusp", "expected a/c but got '" + text + "'");
  }
}

std::string Cusp::to_string() const {
  if (is_infinity()) return "inf";
  if (c == 1) return std::to_string(a);
  return std::to_string(a) + "/" + std::to_string(c);
}

bool operator<(const Cusp& x, const Cusp& y) {
  if (x.is_infinity() || y.is_infinity()) return !x.is_infinity() && y.is_infinity();
  return static_cast<__int128>(x.a) * y.c < static_cast<__int128>(y.a) * x.c;
}

std::optional<CuspWitness> cusp_equivalent(const Cusp& x, const Cusp& y, i64 N) {
  if (N < 1) throw Error(ErrorKind::InvalidInput, "modcurve", "cusp_equivalent", "N must be positive");
  const i64 a = mod_floor(x.a, N), c = mod_floor(x.c, N);
  const i64 a1 = mod_floor(y.a, N), c1 = mod_floor(y.c, N);
  // n c = m a1 - a (mod N) is solvable iff g | rhs, with g = gcd(c, N)
  const i64 g = c == 0 ? N : gcd(c, N);
  const i64 Ng = N / g;
  const i64 cinv = Ng == 1 ? 0 : mod_inverse((c / g) % Ng, Ng);
  for (i64 m = 0; m < N; ++m) {
    if (gcd(m, N) != 1) continue;
    if (mod_floor(c1 - m * c, N) != 0) continue;
    i64 rhs = mod_floor(m * a1 - a, N);
    if (rhs % g != 0) continue;
    i64 n = Ng == 1 ? 0 : mod_floor((rhs / g) % Ng * cinv, Ng);
    return CuspWitness{m, n};
  }
  return std::nullopt;
}

i64 cusp_count(i64 N) {
  i64 s = 0;
  for (i64 c : divisors(N)) s += totient(gcd(c, N / c));
  return s;
}

namespace {

std::vector<Cusp> compute_representatives(i64 N) {
  std::vector<Cusp> reps;
  for (i64 c : divisors(N)) {
    const i64 want = totient(gcd(c, N / c));
    std::vector<Cusp> here;
    for (i64 a = 1; static_cast<i64>(here.size()) < want; ++a) {
      if (a > c * N + 1)
        throw Error(ErrorKind::ContractViolation, "modcurve", "cusp_representatives", "class enumeration did not close");
      if (gcd(a, c) != 1) continue;
      Cusp x(a, c);
      bool fresh = std::none_of(here.begin(), here.end(),
                                [&](const Cusp& y) { return cusp_equivalent(x, y, N).has_value(); });
      if (fresh) here.push_back(x);
    }
    reps.insert(reps.end(), here.begin(), here.end());
  }
  std::sort(reps.begin(), reps.end());
  return reps;
}

}  // namespace

std::vector<Cusp> cusp_representatives(i64 N) {
  if (N < 1) throw Error(ErrorKind::InvalidInput, "modcurve", "cusp_representatives", "N must be positive");
  static std::mutex mu;
  static std::map<i64, std::vector<Cusp>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
  }
  auto reps = compute_representatives(N);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(N, std::move(reps)).first->second;
}

Cusp canonical_cusp(const Cusp& x, i64 N) {
  const i64 g = x.c == 0 ? N : gcd(x.c, N);
  for (const Cusp& r : cusp_representatives(N))
    if (r.c == g && cusp_equivalent(x, r, N)) return r;
  throw Error(ErrorKind::ContractViolation, "modcurve", "canonical_cusp", "no representative for " + x.to_string());
}

NewmanResult newman_check(const EtaQuotient& eq) {
  NewmanResult res;
  const i64 N = eq.level();
  i64 s = 0, w = 0, cw = 0;
  std::map<i64, i64> prime_exp;
  for (auto [d, r] : eq.exponents()) {
    s += r;
    w += d * r;
    cw += (N / d) * r;
    for (auto [p, e] : factorize(d)) prime_exp[p] += e * (r < 0 ? -r : r);
  }
  res.sum_zero = s == 0;
  res.weighted_ok = mod_floor(w, 24) == 0;
  res.coweighted_ok = mod_floor(cw, 24) == 0;
  res.square_ok = true;
  mpz_class k0 = 1;
  for (auto [p, e] : prime_exp) {
    if (e % 2) {
      res.square_ok = false;
      break;
    }
    mpz_class pp;
    mpz_ui_pow_ui(pp.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e / 2));
    k0 *= pp;
  }
  if (res.weighted_ok) res.x1 = -w / 24;
  if (res.coweighted_ok) res.x2 = -cw / 24;
  if (res.square_ok) res.k0 = k0;
  res.valid = res.sum_zero && res.weighted_ok && res.coweighted_ok && res.square_ok;
  return res;
}

mpq_class eta_order_at_cusp(const EtaQuotient& eq, const Cusp& x) {
  const i64 N = eq.level();
  const i64 g = x.c == 0 ? N : gcd(x.c, N);
  i64 num = 0;  // sum r_d gcd(c,d)^2 (N/d)
  for (auto [d, r] : eq.exponents()) {
    i64 h = gcd(g, d);
    num += r * h * h * (N / d);
  }
  mpq_class q(static_cast<long>(num), static_cast<unsigned long>(24 * gcd(g * g, N)));
  q.canonicalize();
  return q;
}

Cusp cusp_image_under_scaling(const Cusp& x, i64 r, i64 ell, i64 target_level) {
  if (ell < 1) throw Error(ErrorKind::InvalidInput, "modcurve", "cusp_image_under_scaling", "ell must be positive");
  if (x.is_infinity()) return infinity_class(target_level);
  return canonical_cusp(Cusp(x.a + x.c * r, x.c * ell), target_level);
}

mpq_class CuspOrderVector::at(const Cusp& x) const {
  Cusp k = canonical_cusp(x, level);
  for (const auto& [c, v] : entries)
    if (c == k) return v;
  throw Error(ErrorKind::ContractViolation, "modcurve", "order_vector", "cusp " + x.to_string() + " missing");
}

mpq_class CuspOrderVector::total() const {
  mpq_class s = 0;
  for (const auto& e : entries) s += e.second;
  return s;
}

std::string CuspOrderVector::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [c, v] : entries) {
    if (!first) os << ", ";
    os << c.to_string() << ": " << v.get_str();
    first = false;
  }
  return os.str();
}

CuspOrderVector order_vector(const EtaQuotient& eq) {
  CuspOrderVector ov;
  ov.level = eq.level();
  for (const Cusp& c : cusp_representatives(eq.level())) ov.entries.emplace_back(c, eta_order_at_cusp(eq, c));
  return ov;
}

}  // namespace etacheck
