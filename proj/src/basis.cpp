#include "etacheck/basis.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "etacheck/error.hpp"
#include "etacheck/tfinder.hpp"

namespace etacheck {

namespace detail {

struct ProductCache {
  std::mutex mu;
  std::string fingerprint;
  i64 trunc = 0;   // every stored t^a g_k is valid below this
  i64 a_max = -1;  // largest nonnegative a the expansions support
  std::optional<Series<IntegerRing>> t_series;
  std::optional<Series<IntegerRing>> t_inverse;
  std::vector<Series<IntegerRing>> g_series;
  std::map<std::pair<i64, std::size_t>, std::shared_ptr<const Series<IntegerRing>>> items;
};

}  // namespace detail

// EtaCombination

void EtaCombination::add(const mpz_class& c, const EtaQuotient& e) {
  if (c == 0) return;
  i64 L = e.level();
  for (auto& [k, q] : terms_) L = std::lcm(L, q.level());
  for (auto& [k, q] : terms_)
    if (q.level() != L) q = q.lifted(L);
  EtaQuotient el = e.level() == L ? e : e.lifted(L);
  for (auto it = terms_.begin(); it != terms_.end(); ++it)
    if (it->second == el) {
      it->first += c;
      if (it->first == 0) terms_.erase(it);
      return;
    }
  terms_.emplace_back(c, el);
  std::sort(terms_.begin(), terms_.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
}

bool EtaCombination::is_constant_one() const {
  return terms_.size() == 1 && terms_[0].first == 1 && terms_[0].second.is_trivial();
}

Series<IntegerRing> EtaCombination::expand(i64 abs_trunc) const {
  auto acc = Series<IntegerRing>::zero({}, abs_trunc);
  for (const auto& [c, e] : terms_) acc = etacheck::add(acc, scale(c, eta_series(e, abs_trunc)));
  return acc;
}

i64 EtaCombination::min_valuation() const {
  i64 v = 0;
  bool first = true;
  for (const auto& [c, e] : terms_) {
    i64 x = eta_valuation(e);
    v = first ? x : std::min(v, x);
    first = false;
  }
  return v;
}

EtaCombination EtaCombination::operator*(const EtaCombination& o) const {
  EtaCombination r;
  for (const auto& [c1, e1] : terms_)
    for (const auto& [c2, e2] : o.terms_) r.add(c1 * c2, e1 * e2);
  return r;
}

EtaCombination EtaCombination::operator+(const EtaCombination& o) const {
  EtaCombination r = *this;
  for (const auto& [c, e] : o.terms_) r.add(c, e);
  return r;
}

EtaCombination EtaCombination::operator-(const EtaCombination& o) const {
  EtaCombination r = *this;
  for (const auto& [c, e] : o.terms_) r.add(-c, e);
  return r;
}

EtaCombination EtaCombination::pow(unsigned n) const {
  EtaCombination r(EtaQuotient(1, {}));
  for (unsigned i = 0; i < n; ++i) r = r * *this;
  return r;
}

std::string EtaCombination::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [c, e] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    mpz_class a = abs(c);
    if (a != 1) os << a.get_str() << "*";
    os << "[" << e.to_string() << "]";
    first = false;
  }
  return os.str();
}

// BasisFunction

BasisFunction::BasisFunction(std::string name, std::string construction, EtaCombination combo, i64 level)
    : name_(std::move(name)), construction_(std::move(construction)), combo_(std::move(combo)) {
  for (const auto& [c, e] : combo_.terms())
    if (level % e.level() != 0)
      throw Error(ErrorKind::InvalidInput, "basis", "BasisFunction",
                  name_ + " has a constituent at level " + std::to_string(e.level()));
  ord_ = series(1).valuation();
}

Series<IntegerRing> BasisFunction::series(i64 abs_trunc) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->s || cache_->s->trunc() < abs_trunc) cache_->s = combo_.expand(abs_trunc);
  return cache_->s->truncated(abs_trunc);
}

// AlgebraBasis

Series<IntegerRing> AlgebraBasis::g_series(std::size_t k, i64 abs_trunc) const {
  if (k == 0) return Series<IntegerRing>::one({}, abs_trunc);
  if (k > gs.size()) throw Error(ErrorKind::InvalidInput, "basis", "g_series", "index out of range");
  return gs[k - 1].series(abs_trunc);
}

std::string AlgebraBasis::fingerprint() const {
  std::ostringstream os;
  os << "N=" << level << ";t=" << t.combination().to_string();
  for (const auto& g : gs) os << ";g=" << g.combination().to_string();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string AlgebraBasis::to_string() const {
  std::ostringstream os;
  os << "level " << level << "\n";
  os << "t = " << t.construction() << " = " << t.combination().to_string() << "  (ord " << t.ord_inf() << ")\n";
  for (std::size_t k = 0; k < gs.size(); ++k)
    os << "g" << k + 1 << " = " << gs[k].construction() << " = " << gs[k].combination().to_string() << "  (ord "
       << gs[k].ord_inf() << ")\n";
  return os.str();
}

std::shared_ptr<detail::ProductCache> AlgebraBasis::make_product_cache() {
  return std::make_shared<detail::ProductCache>();
}

std::shared_ptr<const Series<IntegerRing>> AlgebraBasis::product(i64 a, std::size_t k, i64 abs_trunc) const {
  if (k > gs.size()) throw Error(ErrorKind::InvalidInput, "basis", "product", "index out of range");
  auto& C = *products;
  std::lock_guard<std::mutex> lock(C.mu);
  const std::string fp = fingerprint();
  const i64 w = -t.ord_inf();
  if (C.fingerprint != fp || abs_trunc > C.trunc || a > C.a_max) {
    C.fingerprint = fp;
    C.trunc = std::max(C.trunc, abs_trunc);
    C.a_max = std::max({a, 2 * C.a_max, i64{8}});
    i64 omax = 0;
    for (std::size_t j = 0; j <= gs.size(); ++j) omax = std::max(omax, pole_order(j));
    const i64 Z = C.trunc + C.a_max * w + w;
    C.t_series = t.series(Z + omax);
    C.t_inverse = inv(*C.t_series);
    C.g_series.clear();
    for (std::size_t j = 0; j <= gs.size(); ++j) C.g_series.push_back(g_series(j, Z));
    C.items.clear();
  }
  auto key = std::make_pair(a, k);
  if (auto it = C.items.find(key); it != C.items.end()) return it->second;
  // walk from the nearest stored power towards a
  const i64 step = a >= 0 ? 1 : -1;
  if (!C.items.count({0, k})) C.items[{0, k}] = std::make_shared<const Series<IntegerRing>>(C.g_series[k]);
  i64 b = a;
  while (b != 0 && !C.items.count({b, k})) b -= step;
  auto cur = C.items[{b, k}];
  while (b != a) {
    b += step;
    cur = std::make_shared<const Series<IntegerRing>>(mul(*cur, step > 0 ? *C.t_series : *C.t_inverse));
    C.items[{b, k}] = cur;
  }
  return cur;
}

// The level 20 basis

EtaQuotient basis_n20_T() { return EtaQuotient::from_vector(20, {2, 0, 2, -2, 8, -10}); }
EtaQuotient basis_n20_G() { return EtaQuotient(20, {{4, 4}, {10, 2}, {2, -2}, {20, -4}}); }
EtaQuotient basis_n20_H() { return EtaQuotient(20, {{4, 1}, {5, 5}, {1, -1}, {20, -5}}); }

AlgebraBasis load_basis_n20() {
  EtaCombination G(basis_n20_G()), H(basis_n20_H());
  AlgebraBasis b;
  b.level = 20;
  b.t = BasisFunction("T", "T", EtaCombination(basis_n20_T()), 20);
  b.gs.emplace_back("G1", "G", G, 20);
  b.gs.emplace_back("G2", "H - G", H - G, 20);
  b.gs.emplace_back("G3", "G^2", G * G, 20);
  b.gs.emplace_back("G4", "(H - G)^2", (H - G) * (H - G), 20);
  return b;
}

std::vector<std::string> basis_violations(const AlgebraBasis& b) {
  std::vector<std::string> out;
  const i64 w = static_cast<i64>(b.v()) + 1;
  auto check_constituents = [&](const BasisFunction& f) {
    for (const auto& [c, e] : f.combination().terms()) {
      EtaQuotient el = e.level() == b.level ? e : e.lifted(b.level);
      if (!newman_check(el).valid) out.push_back(f.name() + ": constituent " + e.to_string() + " fails Newman");
      else
        for (const auto& [x, o] : order_vector(el).entries)
          if (!(x == infinity_class(b.level)) && o < 0)
            out.push_back(f.name() + ": constituent " + e.to_string() + " has a pole at " + x.to_string());
    }
  };
  if (b.t.ord_inf() != -w)
    out.push_back("|ord(t)| = " + std::to_string(-b.t.ord_inf()) + " but v+1 = " + std::to_string(w));
  check_constituents(b.t);
  std::vector<i64> seen;
  i64 prev = 0;
  for (std::size_t k = 0; k < b.gs.size(); ++k) {
    const auto& g = b.gs[k];
    check_constituents(g);
    const i64 o = -g.ord_inf();
    if (o <= 0) {
      out.push_back(g.name() + " has no pole at infinity");
      continue;
    }
    if (o <= prev) out.push_back(g.name() + ": pole orders are not strictly increasing");
    prev = o;
    const i64 res = o % w;
    if (res == 0) out.push_back(g.name() + ": pole order is divisible by v+1");
    if (std::find(seen.begin(), seen.end(), res) != seen.end())
      out.push_back(g.name() + ": residue " + std::to_string(res) + " repeats");
    seen.push_back(res);
  }
  return out;
}

bool verify_basis(const AlgebraBasis& b) { return basis_violations(b).empty(); }

AlgebraBasis construct_basis(const EtaQuotient& t, const BasisSearchConfig& cfg) {
  const i64 N = t.level();
  if (!newman_check(t).valid)
    throw Error(ErrorKind::InvalidInput, "basis", "construct_basis", "t is not a modular function on Gamma0(N)");
  const Cusp inf = infinity_class(N);
  PoleSets ps;
  ps.level = N;
  for (const auto& [x, o] : order_vector(t).entries) {
    if (x == inf) continue;
    if (o < 0) throw Error(ErrorKind::InvalidInput, "basis", "construct_basis", "t has a pole at " + x.to_string());
    ps.p0_prime.push_back(x);
  }
  const i64 w = -eta_valuation(t);
  if (w < 1) throw Error(ErrorKind::InvalidInput, "basis", "construct_basis", "t has no pole at infinity");

  AlgebraBasis b;
  b.level = N;
  b.t = BasisFunction("T", "T", EtaCombination(t), N);
  if (w == 1) return b;

  const i64 max_order = cfg.max_order > 0 ? cfg.max_order : 3 * w;
  std::map<i64, EtaQuotient> single;  // pole order -> lexicographically first quotient in E^inf(N)
  for (i64 n = 1; n <= max_order; ++n)
    if (auto s = solve_W(N, ps, n, cfg.bound, cfg.threads)) single.emplace(n, s->quotient(N));

  struct Choice {
    i64 order;
    std::string construction;
    EtaCombination combo;
  };
  std::vector<Choice> chosen;
  for (i64 res = 1; res < w; ++res) {
    std::optional<Choice> best;
    for (i64 n = res; n <= max_order && !best; n += w) {
      if (auto it = single.find(n); it != single.end()) {
        best = Choice{n, "E" + std::to_string(n), EtaCombination(it->second)};
        break;
      }
      for (auto& [n1, e1] : single) {
        if (n1 > n - n1) break;
        auto it2 = single.find(n - n1);
        if (it2 == single.end()) continue;
        std::string name = n1 == n - n1 ? "E" + std::to_string(n1) + "^2"
                                        : "E" + std::to_string(n1) + "*E" + std::to_string(n - n1);
        best = Choice{n, name, EtaCombination(e1) * EtaCombination(it2->second)};
        break;
      }
    }
    if (!best)
      throw Error(ErrorKind::SearchExhausted, "basis", "construct_basis",
                  "no function in E^inf(" + std::to_string(N) + ") or product of two with pole order = " +
                      std::to_string(res) + " mod " + std::to_string(w) + " up to " + std::to_string(max_order));
    chosen.push_back(*best);
  }
  std::sort(chosen.begin(), chosen.end(), [](const Choice& x, const Choice& y) { return x.order < y.order; });
  for (std::size_t k = 0; k < chosen.size(); ++k)
    b.gs.emplace_back("G" + std::to_string(k + 1), chosen[k].construction, chosen[k].combo, N);
  return b;
}

// Reduction

bool ReductionResult::integral() const {
  for (const auto& pk : p)
    for (const auto& [a, c] : pk)
      if (c.get_den() != 1) return false;
  return true;
}

ReductionResult mw_reduce(const Series<RationalRing>& f0, const AlgebraBasis& b) {
  const Series<RationalRing> f = f0.offset24() == 0 ? f0 : f0.normalized();
  const i64 X = f.trunc();
  if (X < 1)
    throw Error(ErrorKind::InvalidInput, "basis", "mw_reduce", "series must be known at least to the constant term");
  const i64 w = -b.t.ord_inf();
  if (w < 1) throw Error(ErrorKind::InvalidInput, "basis", "mw_reduce", "t has no pole at infinity");
  const i64 lo = std::min<i64>(f.valuation(), 0);
  std::vector<mpq_class> r(static_cast<std::size_t>(X - lo), mpq_class(0));
  for (i64 e = f.valuation(); e < X; ++e) r[static_cast<std::size_t>(e - lo)] = f[e];

  ReductionResult res;
  res.p.resize(b.v() + 1);
  mpq_class tmp;
  i64 e = lo;
  for (;;) {
    while (e < 0 && sgn(r[static_cast<std::size_t>(e - lo)]) == 0) ++e;
    if (e >= 0) break;
    const i64 m = -e;
    if (!res.descent.empty() && m >= res.descent.back())
      throw Error(ErrorKind::ContractViolation, "basis", "mw_reduce", "pole order failed to decrease");
    res.descent.push_back(m);
    std::optional<std::size_t> kk;
    for (std::size_t k = 0; k <= b.v(); ++k)
      if (b.pole_order(k) % w == m % w) kk = k;
    if (!kk || b.pole_order(*kk) > m) {
      res.stall_order = m;
      return res;
    }
    const i64 a = (m - b.pole_order(*kk)) / w;
    auto P = b.product(a, *kk, X);
    if (P->valuation() != e)
      throw Error(ErrorKind::ContractViolation, "basis", "mw_reduce", "basis product has an unexpected valuation");
    mpq_class c = r[static_cast<std::size_t>(e - lo)] / mpq_class(P->leading());
    res.p[*kk][a] += c;
    const auto& pc = P->coeffs();
    const i64 top = std::min(X, P->trunc());
    if (top < X)
      throw Error(ErrorKind::ContractViolation, "basis", "mw_reduce", "basis product expanded too short");
    for (i64 x = e; x < X; ++x) {
      const mpz_class& pv = pc[static_cast<std::size_t>(x - e)];
      if (pv == 0) continue;
      mpq_mul(tmp.get_mpq_t(), c.get_mpq_t(), mpq_class(pv).get_mpq_t());
      r[static_cast<std::size_t>(x - lo)] -= tmp;
    }
  }
  mpq_class& c0 = r[static_cast<std::size_t>(-lo)];
  if (sgn(c0) != 0) {
    res.p[0][0] += c0;
    c0 = 0;
  }
  for (auto& pk : res.p)
    for (auto it = pk.begin(); it != pk.end();) it = sgn(it->second) == 0 ? pk.erase(it) : std::next(it);
  for (i64 x = 1; x < X; ++x)
    if (sgn(r[static_cast<std::size_t>(x - lo)]) != 0)
      throw Error(ErrorKind::ContractViolation, "basis", "mw_reduce",
                  "residual is nonzero at q^" + std::to_string(x) + " after the principal part cancelled");
  res.ok = true;
  return res;
}

Series<RationalRing> reconstruct(const ReductionResult& r, const AlgebraBasis& b, i64 abs_trunc) {
  auto acc = Series<RationalRing>::zero({}, abs_trunc);
  for (std::size_t k = 0; k < r.p.size(); ++k)
    for (const auto& [a, c] : r.p[k]) {
      auto P = to_rational(*b.product(a, k, abs_trunc)).truncated(abs_trunc);
      acc = add(acc, scale(c, P));
    }
  return acc;
}

}  // namespace etacheck
