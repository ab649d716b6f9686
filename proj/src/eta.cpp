#include "etacheck/eta.hpp"

#include <cctype>
#include <sstream>

namespace etacheck {

namespace {

[[noreturn]] void bad(const std::string& op, const std::string& what) {
  throw Error(ErrorKind::InvalidInput, "series", op, what);
}

i64 parse_int(const std::string& s, const std::string& ctx) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    bad("parse_eta", "expected an integer in '" + ctx + "'");
  }
  if (pos != s.size()) bad("parse_eta", "trailing characters in '" + ctx + "'");
  return v;
}

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

EtaQuotient::EtaQuotient(i64 level, const std::map<i64, i64>& exponents) : level_(level) {
  if (level < 1) bad("EtaQuotient", "level must be positive");
  for (i64 d : etacheck::divisors(level)) r_[d] = 0;
  for (auto [d, e] : exponents) {
    if (d < 1 || level % d != 0)
      bad("EtaQuotient", std::to_string(d) + " does not divide the level " + std::to_string(level));
    r_[d] = e;
  }
}

EtaQuotient EtaQuotient::from_vector(i64 level, const std::vector<i64>& r) {
  auto ds = etacheck::divisors(level);
  if (ds.size() != r.size())
    bad("EtaQuotient", "expected " + std::to_string(ds.size()) + " exponents for level " + std::to_string(level));
  std::map<i64, i64> m;
  for (std::size_t i = 0; i < ds.size(); ++i) m[ds[i]] = r[i];
  return EtaQuotient(level, m);
}

EtaQuotient EtaQuotient::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) bad("parse_eta", "expected N:d^e,... but got '" + text + "'");
  i64 N = parse_int(strip(text.substr(0, colon)), text);
  std::map<i64, i64> m;
  std::string rest = text.substr(colon + 1);
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = strip(item);
    if (item.empty()) continue;
    auto caret = item.find('^');
    i64 d = parse_int(strip(item.substr(0, caret)), item);
    i64 e = caret == std::string::npos ? 1 : parse_int(strip(item.substr(caret + 1)), item);
    if (d < 1 || N < 1 || N % d != 0) bad("parse_eta", std::to_string(d) + " does not divide " + std::to_string(N));
    m[d] += e;
  }
  return EtaQuotient(N, m);
}

i64 EtaQuotient::exponent(i64 d) const {
  auto it = r_.find(d);
  return it == r_.end() ? 0 : it->second;
}

std::vector<i64> EtaQuotient::exponent_vector() const {
  std::vector<i64> v;
  for (auto [d, e] : r_) v.push_back(e);
  return v;
}

std::vector<i64> EtaQuotient::divisors() const {
  std::vector<i64> v;
  for (auto [d, e] : r_) v.push_back(d);
  return v;
}

i64 EtaQuotient::offset24() const {
  i64 s = 0;
  for (auto [d, e] : r_) s += d * e;
  return s;
}

i64 EtaQuotient::exponent_sum() const {
  i64 s = 0;
  for (auto [d, e] : r_) s += e;
  return s;
}

bool EtaQuotient::is_trivial() const {
  for (auto [d, e] : r_)
    if (e) return false;
  return true;
}

EtaQuotient EtaQuotient::lifted(i64 new_level) const {
  if (new_level < 1 || new_level % level_ != 0)
    bad("lift", std::to_string(level_) + " does not divide " + std::to_string(new_level));
  return EtaQuotient(new_level, r_);
}

EtaQuotient EtaQuotient::rescaled(i64 d) const {
  if (d < 1) bad("rescale", "factor must be positive");
  std::map<i64, i64> m;
  for (auto [k, e] : r_) m[k * d] = e;
  return EtaQuotient(level_ * d, m);
}

EtaQuotient EtaQuotient::pow(i64 n) const {
  std::map<i64, i64> m;
  for (auto [d, e] : r_) m[d] = e * n;
  return EtaQuotient(level_, m);
}

std::string EtaQuotient::to_string() const {
  std::ostringstream os;
  os << level_ << ':';
  bool first = true;
  for (auto [d, e] : r_) {
    if (!e) continue;
    if (!first) os << ',';
    os << d << '^' << e;
    first = false;
  }
  return os.str();
}

EtaQuotient operator*(const EtaQuotient& a, const EtaQuotient& b) {
  i64 L = std::lcm(a.level_, b.level_);
  std::map<i64, i64> m = a.r_;
  for (auto [d, e] : b.r_) m[d] += e;
  return EtaQuotient(L, m);
}

bool operator==(const EtaQuotient& a, const EtaQuotient& b) { return a.level_ == b.level_ && a.r_ == b.r_; }

bool operator<(const EtaQuotient& a, const EtaQuotient& b) {
  if (a.level_ != b.level_) return a.level_ < b.level_;
  return a.r_ < b.r_;
}

Series<IntegerRing> eta_expand(const EtaQuotient& eq, i64 trunc) {
  if (trunc < 0) bad("eta_expand", "truncation must be nonnegative");
  const i64 off = eq.offset24();
  if (trunc == 0) return Series<IntegerRing>::zero({}, 0, off);
  // Logarithmic derivative: n g_n = sum_{k=1}^n c_k g_{n-k} with
  // c_k = -sum_{d | k} r_d d sigma(k/d).
  const auto n = static_cast<std::size_t>(trunc);
  std::vector<i64> sig(n, 0);
  for (std::size_t a = 1; a < n; ++a)
    for (std::size_t m = a; m < n; m += a) sig[m] += static_cast<i64>(a);
  std::vector<i64> c(n, 0);
  for (auto [d, e] : eq.exponents()) {
    if (!e) continue;
    for (std::size_t k = static_cast<std::size_t>(d), j = 1; k < n; k += static_cast<std::size_t>(d), ++j)
      c[k] -= e * d * sig[j];
  }
  std::vector<std::size_t> nz;
  for (std::size_t k = 1; k < n; ++k)
    if (c[k]) nz.push_back(k);
  std::vector<mpz_class> g(n);
  g[0] = 1;
  mpz_class acc;
  for (std::size_t m = 1; m < n; ++m) {
    acc = 0;
    for (std::size_t k : nz) {
      if (k > m) break;
      const i64 ck = c[k];
      if (ck > 0)
        mpz_addmul_ui(acc.get_mpz_t(), g[m - k].get_mpz_t(), static_cast<unsigned long>(ck));
      else
        mpz_submul_ui(acc.get_mpz_t(), g[m - k].get_mpz_t(), static_cast<unsigned long>(-ck));
    }
    mpz_divexact_ui(g[m].get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(m));
  }
  return Series<IntegerRing>({}, off, 0, std::move(g));
}

i64 eta_valuation(const EtaQuotient& eq) {
  i64 off = eq.offset24();
  if (off % 24 != 0) bad("eta_valuation", "sum of d*r_d is not divisible by 24");
  return off / 24;
}

Series<IntegerRing> eta_series(const EtaQuotient& eq, i64 abs_trunc) {
  i64 v = eta_valuation(eq);
  i64 rel = abs_trunc - v;
  if (rel <= 0) return Series<IntegerRing>::zero({}, abs_trunc);
  return eta_expand(eq, rel).normalized();
}

}  // namespace etacheck
