#include "etacheck/tfinder.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "etacheck/error.hpp"

namespace etacheck {

namespace {

bool contains(const std::vector<Cusp>& v, const Cusp& x) { return std::find(v.begin(), v.end(), x) != v.end(); }

void insert_sorted(std::vector<Cusp>& v, const Cusp& x) {
  if (!contains(v, x)) {
    v.push_back(x);
    std::sort(v.begin(), v.end());
  }
}

std::string join(const std::vector<Cusp>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + "}";
}

// sum_d coef_d w_d >= rhs (or == rhs)
struct LinCon {
  std::vector<i64> coef;
  i64 rhs;
  bool equality;
  std::string label;
};

struct System {
  i64 N;
  i64 n0;
  std::vector<i64> ds;
  std::vector<LinCon> cons;
  // prime factorization exponents of each divisor, for the square test
  std::vector<std::vector<std::pair<std::size_t, int>>> fac;
  std::vector<i64> primes;
};

System build_system(i64 N, const PoleSets& ps, i64 n0) {
  System s;
  s.N = N;
  s.n0 = n0;
  s.ds = divisors(N);
  auto cusp_form = [&](const Cusp& x, i64 lower, bool eq) {
    LinCon lc;
    const i64 g = gcd(x.c, N);
    for (i64 d : s.ds) {
      i64 h = gcd(g, d);
      lc.coef.push_back(h * h * (N / d));
    }
    lc.rhs = 24 * gcd(g * g, N) * lower;
    lc.equality = eq;
    lc.label = "ord at " + x.to_string() + (eq ? " = " : " >= ") + std::to_string(lower);
    s.cons.push_back(lc);
  };
  for (const Cusp& x : ps.positive()) cusp_form(x, 1, false);
  for (const Cusp& x : ps.p0_prime) cusp_form(x, 0, false);
  for (const Cusp& x : ps.p1_prime) cusp_form(x, 0, true);
  for (auto [p, e] : factorize(N)) s.primes.push_back(p);
  for (i64 d : s.ds) {
    std::vector<std::pair<std::size_t, int>> f;
    for (auto [p, e] : factorize(d))
      f.emplace_back(static_cast<std::size_t>(std::find(s.primes.begin(), s.primes.end(), p) - s.primes.begin()), e);
    s.fac.push_back(f);
  }
  return s;
}

i64 dot(const std::vector<i64>& a, const std::vector<i64>& w) {
  i64 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * w[i];
  return s;
}

bool square_ok(const System& s, const std::vector<i64>& w) {
  std::vector<i64> par(s.primes.size(), 0);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (auto [pi, e] : s.fac[i]) par[pi] += e * (w[i] < 0 ? -w[i] : w[i]);
  return std::all_of(par.begin(), par.end(), [](i64 e) { return e % 2 == 0; });
}

std::optional<WSolution> finish(const System& s, const std::vector<i64>& w) {
  i64 cw = 0, sum = 0, wt = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sum += w[i];
    wt += s.ds[i] * w[i];
    cw += (s.N / s.ds[i]) * w[i];
  }
  if (sum != 0 || wt != -24 * s.n0 || mod_floor(cw, 24) != 0) return std::nullopt;
  for (const auto& lc : s.cons) {
    i64 v = dot(lc.coef, w);
    if (lc.equality ? v != lc.rhs : v < lc.rhs) return std::nullopt;
  }
  if (!square_ok(s, w)) return std::nullopt;
  auto nm = newman_check(EtaQuotient::from_vector(s.N, w));
  WSolution sol;
  sol.w = w;
  sol.x1 = s.n0;
  sol.x2 = -cw / 24;
  sol.x3 = nm.k0;
  return sol;
}

// Depth-first search in lexicographic order over the coordinates before the
// last two, which are then fixed by the two linear equalities. visit returns
// false to stop.
class Enumerator {
 public:
  Enumerator(const System& s, i64 bound) : s_(s), bound_(bound), k_(s.ds.size()) {
    suffix_.assign(s.cons.size(), std::vector<i64>(k_ + 1, 0));
    for (std::size_t c = 0; c < s.cons.size(); ++c)
      for (std::size_t i = k_; i-- > 0;) {
        i64 a = s.cons[c].coef[i];
        suffix_[c][i] = suffix_[c][i + 1] + (a < 0 ? -a : a) * bound;
      }
  }

  // Enumerates with the first coordinate restricted to [lo, hi].
  void run(i64 lo, i64 hi, const std::function<bool(const WSolution&)>& visit) {
    visit_ = &visit;
    w_.assign(k_, 0);
    partial_.assign(s_.cons.size(), 0);
    stop_ = false;
    if (k_ < 2) {
      for (i64 v = std::max(lo, -bound_); v <= std::min(hi, bound_) && !stop_; ++v) {
        w_[0] = v;
        leaf_full();
      }
      return;
    }
    if (k_ == 2) {
      solve_last_two(0, 0);
      return;
    }
    descend(0, lo, hi);
  }

  bool stopped() const { return stop_; }

 private:
  void leaf_full() {
    if (auto sol = finish(s_, w_))
      if (!(*visit_)(*sol)) stop_ = true;
  }

  void solve_last_two(i64 S0, i64 S1) {
    const std::size_t a = k_ - 2, b = k_ - 1;
    const i64 da = s_.ds[a], db = s_.ds[b];
    const i64 num = -24 * s_.n0 - S1 + da * S0;
    if (num % (db - da) != 0) return;
    const i64 wb = num / (db - da);
    const i64 wa = -S0 - wb;
    if (wa < -bound_ || wa > bound_ || wb < -bound_ || wb > bound_) return;
    w_[a] = wa;
    w_[b] = wb;
    leaf_full();
  }

  void descend(std::size_t i, i64 lo, i64 hi) {
    if (stop_) return;
    if (i == k_ - 2) {
      i64 S0 = 0, S1 = 0;
      for (std::size_t j = 0; j < i; ++j) {
        S0 += w_[j];
        S1 += s_.ds[j] * w_[j];
      }
      solve_last_two(S0, S1);
      return;
    }
    const i64 from = i == 0 ? std::max(lo, -bound_) : -bound_;
    const i64 to = i == 0 ? std::min(hi, bound_) : bound_;
    for (i64 v = from; v <= to && !stop_; ++v) {
      w_[i] = v;
      bool ok = true;
      for (std::size_t c = 0; c < s_.cons.size() && ok; ++c) {
        const auto& lc = s_.cons[c];
        i64 p = partial_[c] + lc.coef[i] * v;
        i64 rest = suffix_[c][i + 1];
        if (lc.equality ? (p - lc.rhs > rest || lc.rhs - p > rest) : (p + rest < lc.rhs)) ok = false;
      }
      if (!ok) continue;
      for (std::size_t c = 0; c < s_.cons.size(); ++c) partial_[c] += s_.cons[c].coef[i] * v;
      descend(i + 1, lo, hi);
      for (std::size_t c = 0; c < s_.cons.size(); ++c) partial_[c] -= s_.cons[c].coef[i] * v;
    }
    w_[i] = 0;
  }

  const System& s_;
  i64 bound_;
  std::size_t k_;
  std::vector<std::vector<i64>> suffix_;
  std::vector<i64> w_;
  std::vector<i64> partial_;
  const std::function<bool(const WSolution&)>* visit_ = nullptr;
  bool stop_ = false;
};

void require_level(const PoleSets& ps, i64 N, const char* op) {
  if (ps.level != N) throw Error(ErrorKind::InvalidInput, "tfinder", op, "pole sets belong to another level");
}

}  // namespace

std::vector<Cusp> PoleSets::positive() const {
  std::vector<Cusp> v = p_A;
  for (const auto& x : p_g) insert_sorted(v, x);
  for (const auto& x : p_inv) insert_sorted(v, x);
  return v;
}

std::string PoleSets::to_string() const {
  std::ostringstream os;
  os << "P(A) = " << join(p_A) << "\nP(g) = " << join(p_g) << "\nP(1/t) = " << join(p_inv)
     << "\nP0' = " << join(p0_prime) << "\nP1' = " << join(p1_prime);
  return os.str();
}

std::vector<Cusp> scaled_images(const Cusp& x, i64 ell, i64 N) {
  std::vector<Cusp> v;
  for (i64 r = 0; r < ell; ++r) insert_sorted(v, cusp_image_under_scaling(x, r, ell, N));
  return v;
}

PoleSets compute_pole_sets(const EtaQuotient& A, i64 ell, i64 N) {
  const i64 big = ell * N;
  if (big % A.level() != 0)
    throw Error(ErrorKind::InvalidInput, "tfinder", "compute_pole_sets",
                "A has level " + std::to_string(A.level()) + ", which does not divide " + std::to_string(big));
  const auto ovA = order_vector(A.lifted(big));
  PoleSets ps;
  ps.level = N;
  ps.ell = ell;
  const Cusp inf = infinity_class(N);
  std::vector<Cusp> finite;
  for (const Cusp& x : cusp_representatives(N))
    if (!(x == inf)) finite.push_back(x);

  std::map<std::pair<i64, i64>, std::vector<Cusp>> img;  // images over Gamma0(N)
  for (const Cusp& x : cusp_representatives(N)) img[{x.a, x.c}] = scaled_images(x, ell, N);

  for (const Cusp& x : finite) {
    for (i64 r = 0; r < ell; ++r)
      if (ovA.at(cusp_image_under_scaling(x, r, ell, big)) < 0) {
        insert_sorted(ps.p_A, x);
        break;
      }
    if (contains(img[{x.a, x.c}], inf)) insert_sorted(ps.p_g, x);
  }

  // 1/t has poles on the zero set F of t, so t must also vanish wherever
  // some image lands in F; close under that rule.
  std::vector<Cusp> F = ps.p_A;
  for (const auto& x : ps.p_g) insert_sorted(F, x);
  for (bool grew = true; grew;) {
    grew = false;
    for (const Cusp& x : finite) {
      if (contains(F, x)) continue;
      const auto& im = img[{x.a, x.c}];
      if (std::any_of(im.begin(), im.end(), [&](const Cusp& y) { return contains(F, y); })) {
        insert_sorted(F, x);
        insert_sorted(ps.p_inv, x);
        grew = true;
      }
    }
  }

  // A zero of t at y is harmless when every cusp mapping onto y already
  // carries a zero of t (or is y itself).
  for (const Cusp& y : finite) {
    if (contains(F, y)) continue;
    bool harmless = true;
    for (const Cusp& x : cusp_representatives(N)) {
      if (x == y || contains(F, x)) continue;
      if (contains(img[{x.a, x.c}], y)) harmless = false;
    }
    (harmless ? ps.p0_prime : ps.p1_prime).push_back(y);
  }
  return ps;
}

std::vector<std::string> violations_W(i64 N, const PoleSets& ps, const std::vector<i64>& w, i64 n0) {
  require_level(ps, N, "check_W");
  std::vector<std::string> out;
  const auto ds = divisors(N);
  if (w.size() != ds.size()) {
    out.push_back("expected " + std::to_string(ds.size()) + " exponents");
    return out;
  }
  auto eq = EtaQuotient::from_vector(N, w);
  auto nm = newman_check(eq);
  if (!nm.sum_zero) out.push_back("sum of exponents is not 0");
  if (!nm.weighted_ok) out.push_back("sum d*w_d is not divisible by 24");
  if (!nm.coweighted_ok) out.push_back("sum (N/d)*w_d is not divisible by 24");
  if (!nm.square_ok) out.push_back("prod d^|w_d| is not a square");
  if (eta_order_at_cusp(eq, infinity_class(N)) != -n0) out.push_back("order at infinity is not -" + std::to_string(n0));
  for (const Cusp& x : ps.positive())
    if (eta_order_at_cusp(eq, x) < 1) out.push_back("order at " + x.to_string() + " is not positive");
  for (const Cusp& x : ps.p0_prime)
    if (eta_order_at_cusp(eq, x) < 0) out.push_back("order at " + x.to_string() + " is negative");
  for (const Cusp& x : ps.p1_prime)
    if (eta_order_at_cusp(eq, x) != 0) out.push_back("order at " + x.to_string() + " is not 0");
  return out;
}

bool check_W(i64 N, const PoleSets& ps, const std::vector<i64>& w, i64 n0) {
  return violations_W(N, ps, w, n0).empty();
}

std::optional<WSolution> solve_W(i64 N, const PoleSets& ps, i64 n0, i64 bound, int threads) {
  require_level(ps, N, "solve_W");
  if (bound < 1) throw Error(ErrorKind::InvalidInput, "tfinder", "solve_W", "bound must be >= 1");
  const System sys = build_system(N, ps, n0);
  if (threads <= 1 || sys.ds.size() < 3) {
    std::optional<WSolution> best;
    Enumerator en(sys, bound);
    en.run(-bound, bound, [&](const WSolution& s) {
      best = s;
      return false;
    });
    return best;
  }
  // Worker t takes first-coordinate values -bound + t, -bound + t + threads, ...
  std::mutex mu;
  std::optional<WSolution> best;
  std::atomic<i64> best_first{bound + 1};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      Enumerator en(sys, bound);
      for (i64 v = -bound + t; v <= bound; v += threads) {
        if (v >= best_first.load()) return;
        bool hit = false;
        en.run(v, v, [&](const WSolution& s) {
          std::lock_guard<std::mutex> lock(mu);
          if (!best || s.w < best->w) best = s;
          i64 cur = best_first.load();
          while (v < cur && !best_first.compare_exchange_weak(cur, v)) {
          }
          hit = true;
          return false;
        });
        if (hit) return;
      }
    });
  for (auto& th : pool) th.join();
  return best;
}

std::vector<WSolution> enumerate_W(i64 N, const PoleSets& ps, i64 n0, i64 bound, std::size_t limit) {
  require_level(ps, N, "enumerate_W");
  const System sys = build_system(N, ps, n0);
  std::vector<WSolution> out;
  if (limit == 0) return out;
  Enumerator en(sys, bound);
  en.run(-bound, bound, [&](const WSolution& s) {
    out.push_back(s);
    return out.size() < limit;
  });
  return out;
}

WSolution find_t(const PoleSets& ps, const TSearchConfig& cfg) {
  for (i64 n0 = 1; n0 <= cfg.max_n0; ++n0)
    if (auto s = solve_W(ps.level, ps, n0, cfg.bound, cfg.threads)) return *s;
  throw Error(ErrorKind::SearchExhausted, "tfinder", "find_t",
              "no admissible t with order >= -" + std::to_string(cfg.max_n0) + " and exponents within " +
                  std::to_string(cfg.bound) + "; try a larger bound or level");
}

}  // namespace etacheck
