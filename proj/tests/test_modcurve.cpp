#include <set>

#include "doctest.h"
#include "etacheck/modcurve.hpp"
#include "test_util.hpp"

using namespace etacheck;
using namespace testutil;

namespace {

std::vector<Cusp> cusps(std::initializer_list<const char*> xs) {
  std::vector<Cusp> v;
  for (auto s : xs) v.push_back(Cusp::parse(s));
  return v;
}

// Class-level set equality: a bijection through cusp_equivalent.
bool same_classes(const std::vector<Cusp>& xs, const std::vector<Cusp>& ys, i64 N) {
  if (xs.size() != ys.size()) return false;
  for (const auto& x : xs) {
    int hits = 0;
    for (const auto& y : ys) hits += cusp_equivalent(x, y, N).has_value();
    if (hits != 1) return false;
  }
  return true;
}

const EtaQuotient kT = EtaQuotient::from_vector(20, {2, 0, 2, -2, 8, -10});
// q C(q)/C(q^25) with C = (q;q)^{-3}(q^2;q^2)^5(q^4;q^4)^{-2}
const EtaQuotient kA(100, {{1, -3}, {2, 5}, {4, -2}, {25, 3}, {50, -5}, {100, 2}});

// Applies [[alpha, beta], [N gamma, delta]] in Gamma0(N) to a/c.
Cusp act(i64 N, const Cusp& x) {
  for (;;) {
    i64 gam = uniform(-6, 6), del = uniform(-40, 40);
    i64 lower = N * gam;
    if (gcd(lower < 0 ? -lower : lower, del < 0 ? -del : del) != 1) continue;
    // alpha del - beta lower = 1
    i64 g0 = del, g1 = -lower, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (g1 != 0) {
      i64 q = floor_div(g0, g1);
      std::tie(g0, g1) = std::make_pair(g1, g0 - q * g1);
      std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
      std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
    }
    if (g0 < 0) {
      s0 = -s0;
      t0 = -t0;
    }
    i64 alpha = s0, beta = t0;
    REQUIRE(alpha * del - beta * lower == 1);
    return Cusp(alpha * x.a + beta * x.c, lower * x.a + del * x.c);
  }
}

}  // namespace

TEST_CASE("cusp representatives") {
  CHECK(cusp_representatives(1).size() == 1);
  auto c20 = cusp_representatives(20);
  CHECK(c20 == cusps({"1/20", "1/10", "1/5", "1/4", "1/2", "1"}));
  auto c100 = cusp_representatives(100);
  auto expected100 = cusps({"1/100", "1/50", "1/25", "1/20", "1/10", "3/20", "1/5", "1/4", "3/10", "7/20", "2/5",
                         "9/20", "1/2", "3/5", "7/10", "4/5", "9/10", "1"});
  CHECK(c100.size() == 18);
  CHECK(same_classes(c100, expected100, 100));
  CHECK(c100 == expected100);
  for (i64 N = 1; N <= 120; ++N) CHECK(static_cast<i64>(cusp_representatives(N).size()) == cusp_count(N));
}

TEST_CASE("cusp equivalence witnesses") {
  auto w = cusp_equivalent(Cusp(31, 50), Cusp(1, 50), 100);
  REQUIRE(w);
  CHECK(w->m == 31);
  CHECK(w->n == 0);
  auto id = cusp_equivalent(Cusp(3, 20), Cusp(3, 20), 100);
  REQUIRE(id);
  CHECK(id->m == 1);
  CHECK(id->n == 0);
  CHECK_FALSE(cusp_equivalent(Cusp(1, 4), Cusp(1, 2), 20));
  CHECK(cusp_equivalent(Cusp::infinity(), Cusp(1, 20), 20));
}

TEST_CASE("representatives are pairwise inequivalent and cover every fraction") {
  for (i64 N : {6, 12, 20, 36, 100}) {
    auto reps = cusp_representatives(N);
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (std::size_t j = i + 1; j < reps.size(); ++j) CHECK_FALSE(cusp_equivalent(reps[i], reps[j], N));
    for (i64 c : divisors(N * N))
      for (i64 a = -c; a <= 2 * c; ++a) {
        if (gcd(a < 0 ? -a : a, c) != 1) continue;
        int hits = 0;
        for (const auto& r : reps) hits += cusp_equivalent(Cusp(a, c), r, N).has_value();
        CHECK(hits == 1);
      }
  }
}

TEST_CASE("newman conditions") {
  auto r = newman_check(EtaQuotient(5, {{1, -6}, {5, 6}}));
  CHECK(r.valid);
  CHECK(r.k0 == 125);
  CHECK(newman_check(EtaQuotient(7, {})).valid);
  auto bad = newman_check(EtaQuotient(2, {{1, 1}, {2, -1}}));
  CHECK_FALSE(bad.valid);
  CHECK_FALSE(bad.weighted_ok);
  auto t = newman_check(kT);
  CHECK(t.valid);
  CHECK(t.x1 == 5);
  CHECK(newman_check(kA).valid);
}

TEST_CASE("ligozat orders") {
  CHECK(eta_order_at_cusp(kT, Cusp(1, 20)) == -5);
  CHECK(eta_order_at_cusp(kT, Cusp(1, 1)) == 2);
  CHECK(eta_order_at_cusp(kA, Cusp(1, 50)) == -5);

  auto ovT = order_vector(kT);
  std::vector<long> expectT = {-5, 1, 0, 1, 1, 2};
  REQUIRE(ovT.entries.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(ovT.entries[i].second == expectT[i]);
  CHECK(ovT.total() == 0);

  auto ovA = order_vector(kA);
  CHECK(ovA.at(Cusp(1, 100)) == 1);
  CHECK(ovA.at(Cusp(1, 50)) == -5);
  CHECK(ovA.at(Cusp(1, 25)) == 4);
  CHECK(ovA.at(Cusp(1, 4)) == -1);
  CHECK(ovA.at(Cusp(1, 2)) == 5);
  CHECK(ovA.at(Cusp(1, 1)) == -4);
  std::set<std::string> poles;
  for (auto& [c, v] : ovA.entries)
    if (v < 0) poles.insert(c.to_string());
  CHECK(poles == std::set<std::string>{"1/50", "1/4", "1"});
  CHECK(ovA.total() == 0);

  for (auto& [c, v] : order_vector(EtaQuotient(12, {})).entries) CHECK(v == 0);
}

TEST_CASE("cusp images under tau -> (tau + r)/5") {
  CHECK(cusp_image_under_scaling(Cusp(1, 10), 3, 5, 100) == Cusp(1, 50));
  CHECK(cusp_image_under_scaling(Cusp(1, 4), 1, 5, 20) == Cusp(1, 4));
  CHECK(cusp_image_under_scaling(Cusp(1, 1), 4, 5, 100) == Cusp(1, 1));

  const char* table1[6][5] = {{"1/100", "1/100", "1/100", "1/100", "1/100"},
                              {"1/50", "1/50", "1/50", "1/50", "1/50"},
                              {"1/25", "1/25", "1/25", "1/25", "1/25"},
                              {"1/20", "1/4", "9/20", "3/20", "7/20"},
                              {"1/10", "3/10", "1/2", "7/10", "9/10"},
                              {"1/5", "2/5", "3/5", "4/5", "1"}};
  const char* table2[6][5] = {{"1/20", "1/20", "1/20", "1/20", "1/20"},
                              {"1/10", "1/10", "1/10", "1/10", "1/10"},
                              {"1/5", "1/5", "1/5", "1/5", "1/5"},
                              {"1/20", "1/4", "1/20", "1/20", "1/20"},
                              {"1/10", "1/10", "1/2", "1/10", "1/10"},
                              {"1/5", "1/5", "1/5", "1/5", "1"}};
  auto c20 = cusp_representatives(20);
  for (std::size_t i = 0; i < 6; ++i)
    for (i64 r = 0; r < 5; ++r) {
      CHECK(cusp_image_under_scaling(c20[i], r, 5, 100) == Cusp::parse(table1[i][r]));
      CHECK(cusp_image_under_scaling(c20[i], r, 5, 20) == Cusp::parse(table2[i][r]));
    }
}

TEST_CASE("orders are constant on classes") {
  for (int it = 0; it < 200; ++it) {
    i64 N = uniform(1, 60);
    auto eq = random_eta(N, 6);
    auto reps = cusp_representatives(N);
    const Cusp& x = reps[static_cast<std::size_t>(uniform(0, static_cast<i64>(reps.size()) - 1))];
    Cusp y = act(N, x);
    REQUIRE(cusp_equivalent(x, y, N));
    CHECK(canonical_cusp(y, N) == x);
    CHECK(eta_order_at_cusp(eq, x) == eta_order_at_cusp(eq, y));
  }
}

TEST_CASE("order at infinity matches the series valuation") {
  const std::vector<i64> levels = {4, 6, 8, 9, 10, 12, 16, 18, 20, 24, 25, 36};
  int done = 0;
  for (int tries = 0; done < 200 && tries < 5000000; ++tries) {
    i64 N = levels[static_cast<std::size_t>(uniform(0, static_cast<i64>(levels.size()) - 1))];
    auto ds = divisors(N);
    std::vector<i64> r(ds.size());
    i64 s = 0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) s += (r[i] = uniform(-5, 5));
    r.back() = -s;
    auto eq = EtaQuotient::from_vector(N, r);
    if (!newman_check(eq).valid) continue;
    ++done;
    auto ord = eta_order_at_cusp(eq, infinity_class(N));
    REQUIRE(ord.get_den() == 1);
    i64 v = ord.get_num().get_si();
    auto f = eta_series(eq, v + 3);
    CHECK(f.valuation() == v);
    CHECK(order_vector(eq).total() == 0);
  }
  CHECK(done == 200);
}
