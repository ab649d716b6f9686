#include "doctest.h"
#include "etacheck/basis.hpp"
#include "test_util.hpp"

using namespace etacheck;
using namespace testutil;

namespace {

const AlgebraBasis& basis() {
  static const AlgebraBasis b = load_basis_n20();
  return b;
}

Series<RationalRing> rat(const Series<IntegerRing>& f) { return to_rational(f); }

}  // namespace

TEST_CASE("level 20 basis") {
  const auto& b = basis();
  CHECK(b.t.ord_inf() == -5);
  std::vector<i64> ords;
  for (const auto& g : b.gs) ords.push_back(g.ord_inf());
  CHECK(ords == std::vector<i64>{-2, -3, -4, -6});
  CHECK(verify_basis(b));
  for (const auto& g : b.gs) CHECK(g.series(5).leading() == 1);

  auto G = eta_series(basis_n20_G(), 40), H = eta_series(basis_n20_H(), 40);
  CHECK(same(b.gs[1].series(40), sub(H, G), true));
  CHECK(same(b.gs[2].series(40), mul(G, G)));
  CHECK(same(b.gs[3].series(40), mul(sub(H, G), sub(H, G))));
}

TEST_CASE("verify_basis rejects broken bases") {
  auto dup = basis();
  dup.gs[3] = dup.gs[0];
  CHECK_FALSE(verify_basis(dup));

  auto bad_t = basis();
  bad_t.t = BasisFunction("T", "G^2", EtaCombination(basis_n20_G().pow(2)), 20);
  CHECK(bad_t.t.ord_inf() == -4);
  CHECK_FALSE(verify_basis(bad_t));

  auto unordered = basis();
  std::swap(unordered.gs[0], unordered.gs[1]);
  CHECK_FALSE(verify_basis(unordered));

  auto pole = basis();
  pole.gs[0] = BasisFunction("G1", "1/T", EtaCombination(basis_n20_T().inverse()), 20);
  CHECK_FALSE(verify_basis(pole));
}

TEST_CASE("construct_basis at level 20") {
  auto b = construct_basis(basis_n20_T());
  CHECK(verify_basis(b));
  std::vector<i64> ords;
  for (const auto& g : b.gs) ords.push_back(-g.ord_inf());
  CHECK(ords == std::vector<i64>{2, 3, 4, 6});
}

TEST_CASE("construct_basis degenerate case") {
  EtaQuotient t4(4, {{1, 8}, {4, -8}});
  REQUIRE(newman_check(t4).valid);
  auto b = construct_basis(t4);
  CHECK(b.v() == 0);
  CHECK(b.t.ord_inf() == -1);
  CHECK(verify_basis(b));
  auto r = mw_reduce(rat(add(eta_series(t4.pow(3), 10), eta_series(t4, 10))), b);
  REQUIRE(r.ok);
  CHECK(r.p[0][3] == 1);
  CHECK(r.p[0][1] == 1);
}

TEST_CASE("mw_reduce examples") {
  const auto& b = basis();
  auto one = mw_reduce(rat(Series<IntegerRing>::one({}, 10)), b);
  REQUIRE(one.ok);
  CHECK(one.p[0].size() == 1);
  CHECK(one.p[0][0] == 1);
  for (std::size_t k = 1; k <= 4; ++k) CHECK(one.p[k].empty());

  auto TG = mul(b.t.series(20), b.gs[0].series(20));
  auto r = mw_reduce(rat(TG), b);
  REQUIRE(r.ok);
  CHECK(r.p[1].size() == 1);
  CHECK(r.p[1][1] == 1);
  CHECK(r.p[0].empty());
  CHECK(r.integral());
  CHECK(r.descent == std::vector<i64>{7});

  // a simple pole at infinity is never reachable
  auto q_inv = Series<RationalRing>({}, 0, -1, {1, 0, 3, 0});
  auto bad = mw_reduce(q_inv, b);
  CHECK_FALSE(bad.ok);
  CHECK(bad.stall_order == 1);

  CHECK_THROWS_AS(mw_reduce(Series<RationalRing>({}, 0, -3, {1, 2}), b), Error);
}

TEST_CASE("mw_reduce reconstructs random combinations") {
  const auto& b = basis();
  for (int it = 0; it < 200; ++it) {
    std::vector<std::map<i64, mpq_class>> p(5);
    for (std::size_t k = 0; k < 5; ++k) {
      i64 deg = uniform(-1, 4);
      for (i64 a = 0; a <= deg; ++a) {
        mpq_class c(static_cast<long>(uniform(-9, 9)), static_cast<unsigned long>(uniform(1, 4)));
        c.canonicalize();
        if (c != 0) p[k][a] = c;
      }
    }
    const i64 X = uniform(1, 12);
    ReductionResult want;
    want.p = p;
    auto f = reconstruct(want, b, X);
    auto got = mw_reduce(f, b);
    REQUIRE(got.ok);
    CHECK(got.p == p);
    CHECK(same(reconstruct(got, b, X), f, true));
    for (std::size_t i = 1; i < got.descent.size(); ++i) CHECK(got.descent[i] < got.descent[i - 1]);
  }
}

TEST_CASE("mw_reduce detects a corrupted tail") {
  const auto& b = basis();
  auto f = to_rational(mul(b.t.series(10), b.gs[2].series(10)));
  std::vector<mpq_class> c(f.coeffs());
  c.back() += 1;
  CHECK_THROWS_AS(mw_reduce(Series<RationalRing>({}, 0, f.valuation(), c), b), Error);
}
