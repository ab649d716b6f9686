#include "doctest.h"
#include "test_util.hpp"

using namespace etacheck;
using namespace testutil;

namespace {

Series<IntegerRing> poly(std::vector<long> c, i64 val = 0) {
  std::vector<mpz_class> v(c.begin(), c.end());
  return Series<IntegerRing>({}, 0, val, std::move(v));
}

// Reference expansion through explicit powers of inverted products.
Series<IntegerRing> eta_reference(const EtaQuotient& eq, i64 trunc) {
  auto acc = Series<IntegerRing>::monomial({}, 1, 0, trunc, eq.offset24());
  for (auto [d, e] : eq.exponents()) {
    if (!e) continue;
    auto base = finite_product(d, trunc);
    acc = mul(acc, e > 0 ? pow(base, e) : pow(inv(base), -e));
  }
  return acc;
}

}  // namespace

TEST_CASE("euler product against the finite product") {
  CHECK(same(euler_product(1, 13), poly({1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1}), true));
  CHECK(same(euler_product(1, 13), finite_product(1, 13), true));
  CHECK(same(euler_product(2, 5), poly({1, 0, -1, 0, -1}), true));
  CHECK(same(euler_product(2, 5), finite_product(2, 5), true));
  auto one4 = euler_product(4, 4);
  CHECK(one4.valuation() == 0);
  CHECK(one4.coeffs().size() == 4);
  CHECK(one4[0] == 1);
  CHECK(one4[3] == 0);
  CHECK(euler_product(3, 0).is_zero());
  for (i64 d = 1; d <= 7; ++d) CHECK(same(euler_product(d, 150), finite_product(d, 150), true));
}

TEST_CASE("eta expansions") {
  auto T = EtaQuotient::from_vector(20, {2, 0, 2, -2, 8, -10});
  auto sT = eta_series(T, 40);
  CHECK(sT.valuation() == -5);
  CHECK(sT.leading() == 1);
  CHECK(sT.trunc() == 40);

  auto H = EtaQuotient(20, {{4, 1}, {5, 5}, {1, -1}, {20, -5}});
  auto sH = eta_series(H, 30);
  CHECK(sH.valuation() == -3);
  CHECK(sH.leading() == 1);

  auto triv = eta_expand(EtaQuotient(12, {}), 10);
  CHECK(triv.offset24() == 0);
  CHECK(same(triv, Series<IntegerRing>::one({}, 10), true));

  CHECK(eta_expand(T, 10).offset24() == -120);
  CHECK_THROWS_AS(eta_series(EtaQuotient(2, {{1, 1}, {2, -1}}), 10), Error);
}

TEST_CASE("log-derivative expansion matches the inverse-power route") {
  for (int it = 0; it < 200; ++it) {
    i64 N = uniform(1, 30);
    auto eq = random_eta(N, 6);
    i64 trunc = uniform(1, 60);
    REQUIRE(same(eta_expand(eq, trunc), eta_reference(eq, trunc)));
    CHECK(eta_expand(eq, trunc).trunc() == trunc);
  }
}

TEST_CASE("eta expansion is multiplicative in the exponents") {
  for (int it = 0; it < 200; ++it) {
    i64 N = uniform(1, 40);
    auto a = random_eta(N, 8), b = random_eta(N, 8);
    i64 trunc = uniform(1, 80);
    auto lhs = mul(eta_expand(a, trunc), eta_expand(b, trunc));
    auto rhs = eta_expand(a * b, trunc);
    CHECK(lhs.offset24() == rhs.offset24());
    CHECK(same(lhs, rhs));
  }
}

TEST_CASE("basic arithmetic") {
  auto one_minus_q = poly({1, -1});
  auto geom = poly({1, 1, 1, 1, 1});
  auto p = mul(one_minus_q.truncated(5), geom);
  CHECK(same(p, Series<IntegerRing>::one({}, 5)));
  CHECK(p.trunc() == 2);  // (1 - q) is only known to order 2
  auto p2 = mul(Series<IntegerRing>({}, 0, 0, {1, -1, 0, 0, 0}), geom);
  CHECK(same(p2, Series<IntegerRing>::one({}, 5), true));

  auto f = random_int_series(20, -3, 5, true);
  auto fi = inv(f);
  CHECK(fi.valuation() == 3);
  CHECK(fi.trunc() == f.trunc() - 2 * f.valuation());
  CHECK(same(mul(f, fi), Series<IntegerRing>::one({}, 20)));
  CHECK(same(pow(f, 0), Series<IntegerRing>::one({}, 20), true));
  CHECK(pow(f, 3).trunc() == f.trunc() + 2 * f.valuation());
  CHECK(same(pow(f, 3), mul(f, mul(f, f)), true));
  CHECK(same(pow(f, -2), mul(fi, fi), true));

  CHECK_THROWS_AS(inv(poly({2, 1})), Error);
  CHECK_THROWS_AS(add(random_mod_series(ModRing(5, 3), 4, 0), random_mod_series(ModRing(5, 2), 4, 0)), Error);
}

TEST_CASE("offsets") {
  auto f = eta_expand(EtaQuotient(5, {{1, 1}}), 10);
  CHECK(f.offset24() == 1);
  CHECK(inv(f).offset24() == -1);
  CHECK(mul(f, f).offset24() == 2);
  CHECK_THROWS_AS(f.normalized(), Error);
  auto g = eta_expand(EtaQuotient(1, {{1, 24}}), 5).normalized();
  CHECK(g.offset24() == 0);
  CHECK(g.valuation() == 1);
  CHECK(g.trunc() == 6);
}

TEST_CASE("substitute_power") {
  auto q = poly({0, 1});
  auto q5 = substitute_power(q, 5);
  CHECK(q5.valuation() == 5);
  CHECK(q5.leading() == 1);
  CHECK(q5.trunc() == 10);

  // C(q) = (q;q)^{-3}(q^2;q^2)^5(q^4;q^4)^{-2}
  auto C = eta_expand(EtaQuotient(4, {{1, -3}, {2, 5}, {4, -2}}), 2);
  auto C25 = substitute_power(C, 25);
  CHECK(C25.valuation() == 0);
  CHECK(C25.trunc() == 50);
  std::vector<i64> where;
  for (i64 e = 0; e < 50; ++e)
    if (C25[e] != 0) where.push_back(e);
  CHECK(where == std::vector<i64>{0, 25});

  auto f = Series<IntegerRing>({}, -120, -5, {1, 2, 3});
  CHECK(substitute_power(f, 5).offset24() == -600);

  for (int it = 0; it < 200; ++it) {
    auto a = random_int_series(uniform(1, 15), uniform(-4, 4), 9);
    auto b = random_int_series(uniform(1, 15), uniform(-4, 4), 9);
    i64 d = uniform(1, 6);
    CHECK(same(substitute_power(mul(a, b), d), mul(substitute_power(a, d), substitute_power(b, d)), true));
  }
}

TEST_CASE("reduce_mod") {
  auto f = reduce_mod(poly({7, 26}), 5, 2);
  CHECK(f[0] == 7);
  CHECK(f[1] == 1);
  auto g = reduce_mod(poly({-1}), 5, 1);
  CHECK(g[0] == 4);
  auto h = reduce_mod(poly({625}, 3), 5, 2);
  CHECK(h.is_zero());
  CHECK(h.trunc() == 4);

  ModRing R(5, 3);
  for (int it = 0; it < 200; ++it) {
    auto a = random_int_series(uniform(1, 20), uniform(-3, 3), 1000);
    auto b = random_int_series(uniform(1, 20), uniform(-3, 3), 1000);
    CHECK(same(reduce_mod(mul(a, b), R), mul(reduce_mod(a, R), reduce_mod(b, R))));
    CHECK(same(reduce_mod(add(a, b), R), add(reduce_mod(a, R), reduce_mod(b, R)), true));
  }
}

TEST_CASE_TEMPLATE("ring laws", Ring, IntegerRing, RationalRing, ModRing) {
  auto gen = [](i64 len, i64 val) {
    if constexpr (std::is_same_v<Ring, IntegerRing>)
      return random_int_series(len, val, 50);
    else if constexpr (std::is_same_v<Ring, RationalRing>)
      return random_rat_series(len, val);
    else
      return random_mod_series(ModRing(5, 4), len, val);
  };
  for (int it = 0; it < 200; ++it) {
    auto f = gen(uniform(1, 12), uniform(-3, 3));
    auto g = gen(uniform(1, 12), uniform(-3, 3));
    auto h = gen(uniform(1, 12), uniform(-3, 3));
    CHECK(same(mul(f, g), mul(g, f), true));
    CHECK(same(mul(mul(f, g), h), mul(f, mul(g, h))));
    CHECK(same(mul(f, add(g, h)), add(mul(f, g), mul(f, h))));
    CHECK(same(sub(f, f), Series<Ring>::zero(f.ring(), f.trunc())));
    if (f.ring().is_unit(f.leading())) CHECK(same(mul(f, inv(f)), Series<Ring>::one(f.ring(), f.trunc() - f.valuation())));
  }
}

TEST_CASE("inverse of unit-leading integer series") {
  for (int it = 0; it < 200; ++it) {
    auto f = random_int_series(uniform(1, 40), uniform(-6, 6), 100, true);
    auto prod = mul(f, inv(f));
    CHECK(prod.trunc() == f.trunc() - f.valuation());
    CHECK(same(prod, Series<IntegerRing>::one({}, prod.trunc()), true));
  }
}
