#include "etacheck/ujump.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "etacheck/error.hpp"

namespace etacheck {

namespace {

EtaQuotient single_quotient(const BasisFunction& f, const char* op) {
  const auto& terms = f.combination().terms();
  if (terms.size() != 1 || terms[0].first != 1)
    throw Error(ErrorKind::InvalidInput, "ujump", op, f.name() + " is not a single eta quotient");
  return terms[0].second;
}

mpz_class modulus(const CoeffRing& R) {
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(R.ell), static_cast<unsigned long>(R.B));
  return m;
}

std::string term_string(const mpq_class& v, const std::string& var, bool leading) {
  std::string s;
  if (v == 0) return s;
  if (!leading) s += v < 0 ? "-" : "+";
  else if (v < 0) s += "-";
  mpq_class a = abs(v);
  if (var.empty()) return s + a.get_str();
  if (a != 1) s += a.get_str();
  return s + var;
}

}  // namespace

// FamilyGenerator / A

void FamilyGenerator::validate() const {
  if (!is_prime(ell) || ell <= 3)
    throw Error(ErrorKind::InvalidInput, "ujump", "FamilyGenerator", "ell must be a prime greater than 3");
  if (M < 1) throw Error(ErrorKind::InvalidInput, "ujump", "FamilyGenerator", "M must be positive");
  const i64 w = -quotient().offset24();
  if (w < 0 || w * (ell + 1) > 24)
    throw Error(ErrorKind::InvalidInput, "ujump", "FamilyGenerator",
                "need 0 <= -sum d*r_d <= 24/(ell+1), got -sum d*r_d = " + std::to_string(w));
}

Series<IntegerRing> FamilyGenerator::series(i64 trunc) const {
  auto s = eta_expand(quotient(), trunc);
  return Series<IntegerRing>({}, 0, s.valuation(), std::vector<mpz_class>(s.coeffs()));
}

EtaQuotient build_A(const FamilyGenerator& gen) {
  gen.validate();
  const i64 L2 = gen.ell * gen.ell;
  std::map<i64, i64> m;
  for (auto [d, e] : gen.r) {
    m[d] += e;
    m[L2 * d] -= e;
  }
  EtaQuotient A(L2 * gen.M, m);
  if (mod_floor((1 - L2) * gen.weight24(), 24) != 0)
    throw Error(ErrorKind::ContractViolation, "ujump", "build_A", "q-power of A is not an integer");
  return A;
}

// Stability exponents

std::string StabilityExponents::to_string() const {
  std::ostringstream os;
  os << "m_A = " << m_A << ", m_t = " << m_t << ", m_-t = " << m_negt << ", m_k =";
  for (std::size_t k = 1; k < m_k.size(); ++k) os << " " << m_k[k];
  return os.str();
}

i64 minimal_power(const EtaQuotient& f, const EtaQuotient& t, i64 ell) {
  const i64 L = ell * t.level();
  if (L % f.level() != 0)
    throw Error(ErrorKind::InvalidInput, "ujump", "minimal_power",
                "function at level " + std::to_string(f.level()) + " is not on Gamma0(" + std::to_string(L) + ")");
  const EtaQuotient fl = f.lifted(L), t5 = t.rescaled(ell);
  const Cusp inf = infinity_class(L);
  std::vector<std::pair<mpq_class, mpq_class>> rows;  // (ord t(ell tau), ord f)
  i64 m = 0;
  for (const Cusp& x : cusp_representatives(L)) {
    if (x == inf) continue;
    mpq_class o = eta_order_at_cusp(t5, x), fo = eta_order_at_cusp(fl, x);
    rows.emplace_back(o, fo);
    if (o > 0 && fo < 0) {
      mpq_class need = -fo / o;
      mpz_class c;
      mpz_cdiv_q(c.get_mpz_t(), need.get_num_mpz_t(), need.get_den_mpz_t());
      m = std::max(m, static_cast<i64>(c.get_si()));
    }
  }
  for (auto& [o, fo] : rows)
    if (o * m + fo < 0)
      throw Error(ErrorKind::InvalidInput, "ujump", "compute_m_constants",
                  "no power of t(ell tau) cancels the poles of " + f.to_string());
  return m;
}

StabilityExponents compute_m_constants(const AlgebraBasis& b, const EtaQuotient& A, i64 ell) {
  const EtaQuotient T = single_quotient(b.t, "compute_m_constants");
  StabilityExponents se;
  se.m_A = minimal_power(A, T, ell);
  se.m_t = minimal_power(T, T, ell);
  se.m_negt = minimal_power(T.inverse(), T, ell);
  se.m_k.push_back(0);
  for (const auto& g : b.gs) {
    i64 m = 0;
    for (const auto& [c, e] : g.combination().terms()) m = std::max(m, minimal_power(e, T, ell));
    se.m_k.push_back(m);
  }
  return se;
}

i64 stability_exponent(const StabilityExponents& se, i64 i, i64 j, std::size_t k) {
  if (i < 0 || i > 1) throw Error(ErrorKind::InvalidInput, "ujump", "stability_exponent", "i must be 0 or 1");
  if (k >= se.m_k.size()) throw Error(ErrorKind::InvalidInput, "ujump", "stability_exponent", "k out of range");
  const i64 mj = j > 0 ? j * se.m_t : -j * se.m_negt;
  return i * se.m_A + mj + se.m_k[k];
}

std::string OrderExpression::to_string(const std::string& var) const {
  if (slope == 0) return constant.get_str();
  if (constant == 0) return term_string(slope, var, true);
  return constant.get_str() + term_string(slope, var, false);
}

std::vector<std::pair<Cusp, std::vector<OrderExpression>>> order_table(const std::vector<EtaQuotient>& fs,
                                                                       const EtaQuotient& t, i64 ell) {
  const i64 L = ell * t.level();
  const EtaQuotient t5 = t.rescaled(ell);
  std::vector<std::pair<Cusp, std::vector<OrderExpression>>> rows;
  for (const Cusp& x : cusp_representatives(L)) {
    std::vector<OrderExpression> row;
    for (const auto& f : fs) row.push_back({eta_order_at_cusp(f.lifted(L), x), eta_order_at_cusp(t5, x)});
    rows.emplace_back(x, std::move(row));
  }
  return rows;
}

// ModuleElement

mpz_class ModuleElement::coefficient(i64 j, std::size_t k) const {
  auto it = terms_.find({j, k});
  return it == terms_.end() ? mpz_class(0) : it->second;
}

void ModuleElement::add_term(i64 j, std::size_t k, const mpz_class& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.try_emplace({j, k}, 0);
  it->second += c;
  if (ring_.kind == RingKind::ModPrimePower) mpz_fdiv_r(it->second.get_mpz_t(), it->second.get_mpz_t(), modulus(ring_).get_mpz_t());
  else if (ring_.kind == RingKind::ExactRational)
    throw Error(ErrorKind::InvalidInput, "ujump", "ModuleElement", "rational coefficients are not supported");
  if (it->second == 0) terms_.erase(it);
}

void ModuleElement::add_scaled(const ModuleElement& o, const mpz_class& c, i64 shift) {
  if (c == 0) return;
  const bool modular = ring_.kind == RingKind::ModPrimePower;
  const mpz_class mod = modular ? modulus(ring_) : mpz_class(0);
  mpz_class tmp;
  for (const auto& [key, v] : o.terms_) {
    auto [it, fresh] = terms_.try_emplace({key.first + shift, key.second}, 0);
    mpz_addmul(it->second.get_mpz_t(), c.get_mpz_t(), v.get_mpz_t());
    if (modular) mpz_fdiv_r(it->second.get_mpz_t(), it->second.get_mpz_t(), mod.get_mpz_t());
    if (it->second == 0) terms_.erase(it);
  }
}

ModuleElement ModuleElement::shifted(i64 s) const {
  ModuleElement r(ring_);
  for (const auto& [key, v] : terms_) r.terms_[{key.first + s, key.second}] = v;
  return r;
}

ModuleElement ModuleElement::reduced(i64 ell, int B) const {
  ModuleElement r(CoeffRing::mod_prime_power(ell, B));
  for (const auto& [key, v] : terms_) r.add_term(key.first, key.second, v);
  return r;
}

i64 ModuleElement::min_j() const {
  i64 m = 0;
  bool first = true;
  for (const auto& [key, v] : terms_) {
    m = first ? key.first : std::min(m, key.first);
    first = false;
  }
  return m;
}

i64 ModuleElement::max_j() const {
  i64 m = 0;
  bool first = true;
  for (const auto& [key, v] : terms_) {
    m = first ? key.first : std::max(m, key.first);
    first = false;
  }
  return m;
}

int ModuleElement::valuation(i64 ell, int cap) const {
  int v = cap;
  for (const auto& [key, c] : terms_) v = std::min(v, etacheck::valuation(c, static_cast<unsigned long>(ell)));
  return v;
}

std::string ModuleElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    auto [j, k] = key;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    const bool bare = abs(c) == 1 && (j || k);
    if (!bare) os << mpz_class(abs(c)).get_str();
    if (k) os << (bare ? "" : "*") << "g" << k;
    if (j) os << (bare && !k ? "" : "*") << "t^" << j;
    first = false;
  }
  return os.str();
}

Series<IntegerRing> ModuleElement::expand(const AlgebraBasis& b, i64 abs_trunc) const {
  auto acc = Series<IntegerRing>::zero({}, abs_trunc);
  for (const auto& [key, c] : terms_) acc = add(acc, scale(c, b.product(key.first, key.second, abs_trunc)->truncated(abs_trunc)));
  return acc;
}

// ImageEngine

ImageEngine::ImageEngine(AlgebraBasis b, EtaQuotient A, i64 ell, std::optional<std::filesystem::path> cache_dir)
    : b_(std::move(b)), A_(std::move(A)), ell_(ell), big_level_(ell * b_.level), dir_(std::move(cache_dir)) {
  if (big_level_ % A_.level() != 0)
    throw Error(ErrorKind::InvalidInput, "ujump", "ImageEngine",
                "A has level " + std::to_string(A_.level()) + ", expected a divisor of " + std::to_string(big_level_));
  se_ = compute_m_constants(b_, A_, ell_);
  std::string base = b_.fingerprint() + "|" + A_.lifted(big_level_).to_string() + "|" + std::to_string(ell_);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : base) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  fingerprint_ = buf;
  if (dir_) std::filesystem::create_directories(*dir_);
}

EtaCombination ImageEngine::source(i64 i, i64 j, std::size_t k) const {
  if (k > b_.v()) throw Error(ErrorKind::InvalidInput, "ujump", "u_image", "k out of range");
  const EtaQuotient T = single_quotient(b_.t, "u_image");
  EtaQuotient head = A_.pow(i).lifted(big_level_) * T.pow(j).lifted(big_level_);
  EtaCombination c(head);
  if (k == 0) return c;
  return c * b_.gs[k - 1].combination();
}

Series<IntegerRing> ImageEngine::source_series(i64 i, i64 j, std::size_t k, i64 abs_trunc) const {
  return source(i, j, k).expand(abs_trunc);
}

ModuleElement ImageEngine::compute(i64 i, i64 j, std::size_t k) const {
  const i64 m = stability_exponent(se_, i, j, k);
  const i64 w = -b_.t.ord_inf();
  const i64 S = kSlack;
  // t^m U(F) must be visible below q^S
  const auto F = source_series(i, j, k, ell_ * (S + w * m));
  const auto U = u_ell(F, ell_);
  ModuleElement out(CoeffRing::integers());
  if (U.is_zero()) return out;
  const auto tm = b_.t.combination().pow(static_cast<unsigned>(m)).expand(S - U.valuation());
  const auto f = mul(tm, U);
  if (f.trunc() < 1)
    throw Error(ErrorKind::ContractViolation, "ujump", "u_image", "truncation budget too small");
  const auto r = mw_reduce(to_rational(f), b_);
  const std::string where = "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
  if (!r.ok)
    throw Error(ErrorKind::ContractViolation, "ujump", "u_image",
                "reduction of image " + where + " stalled at pole order " + std::to_string(r.stall_order));
  if (!r.integral())
    throw Error(ErrorKind::ContractViolation, "ujump", "u_image", "image " + where + " has non-integral coefficients");
  for (std::size_t kk = 0; kk < r.p.size(); ++kk)
    for (const auto& [a, c] : r.p[kk]) out.add_term(a - m, kk, c.get_num());
  return out;
}

std::shared_ptr<const ModuleElement> ImageEngine::image(i64 i, i64 j, std::size_t k) {
  const ImageKey key{i, j, k};
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  std::optional<ModuleElement> e = load(key);
  const bool from_disk = e.has_value();
  if (!e) e = compute(i, j, k);
  auto p = std::make_shared<const ModuleElement>(std::move(*e));
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, fresh] = memo_.emplace(key, p);
  if (fresh) {
    if (from_disk) ++disk_hits_;
    else store(key, *p);
  }
  return it->second;
}

std::shared_ptr<const ModuleElement> ImageEngine::image_mod(i64 i, i64 j, std::size_t k, int B) {
  const ImageKey key{i, j, k};
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = memo_mod_.find({key, B}); it != memo_mod_.end()) return it->second;
  }
  auto red = std::make_shared<const ModuleElement>(image(i, j, k)->reduced(ell_, B));
  std::lock_guard<std::mutex> lock(mu_);
  return memo_mod_.emplace(std::make_pair(key, B), red).first->second;
}

void ImageEngine::prefetch(const std::vector<ImageKey>& keys, int threads) {
  std::vector<ImageKey> todo;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& k : keys)
      if (!memo_.count(k)) todo.push_back(k);
  }
  if (todo.empty()) return;
  if (threads <= 1 || todo.size() == 1) {
    for (const auto& k : todo) image(k.i, k.j, k.k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t n; (n = next++) < todo.size();) {
        try {
          image(todo[n].i, todo[n].j, todo[n].k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::size_t ImageEngine::memo_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return memo_.size();
}

void ImageEngine::override_image(i64 i, i64 j, std::size_t k, ModuleElement e) {
  std::lock_guard<std::mutex> lock(mu_);
  const ImageKey key{i, j, k};
  memo_[key] = std::make_shared<const ModuleElement>(std::move(e));
  for (auto it = memo_mod_.begin(); it != memo_mod_.end();)
    it = it->first.first == key ? memo_mod_.erase(it) : std::next(it);
}

std::filesystem::path ImageEngine::cache_file(const ImageKey& key) const {
  return *dir_ / ("u_" + fingerprint_ + "_" + std::to_string(key.i) + "_" + std::to_string(key.j) + "_" +
                  std::to_string(key.k) + ".txt");
}

std::optional<ModuleElement> ImageEngine::load(const ImageKey& key) const {
  if (!dir_) return std::nullopt;
  std::ifstream in(cache_file(key));
  if (!in) return std::nullopt;
  i64 level, ell, i, j, v;
  std::size_t k;
  if (!(in >> level >> ell >> i >> j >> k >> v)) return std::nullopt;
  if (level != b_.level || ell != ell_ || i != key.i || j != key.j || k != key.k || v != static_cast<i64>(b_.v()))
    return std::nullopt;
  ModuleElement e(CoeffRing::integers());
  i64 jj;
  std::size_t kk;
  std::string c;
  while (in >> jj >> kk >> c) e.add_term(jj, kk, mpz_class(c));
  if (!in.eof()) return std::nullopt;
  return e;
}

void ImageEngine::store(const ImageKey& key, const ModuleElement& e) const {
  if (!dir_) return;
  const auto path = cache_file(key);
  auto tmp = path;
  tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp);
    out << b_.level << ' ' << ell_ << ' ' << key.i << ' ' << key.j << ' ' << key.k << ' ' << b_.v() << '\n';
    for (const auto& [jk, c] : e.terms()) out << jk.first << ' ' << jk.second << ' ' << c.get_str() << '\n';
    if (!out) return;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

ModuleElement apply_images(ImageEngine& e, const ModuleElement& x, i64 i, int B) {
  ModuleElement out(B ? CoeffRing::mod_prime_power(e.ell(), B) : CoeffRing::integers());
  for (const auto& [jk, c] : x.terms()) {
    auto img = B ? e.image_mod(i, jk.first, jk.second, B) : e.image(i, jk.first, jk.second);
    out.add_scaled(*img, c);
  }
  return out;
}

}  // namespace etacheck
