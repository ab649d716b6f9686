#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "etacheck/verifier.hpp"
#include "test_util.hpp"

using namespace etacheck;
using namespace testutil;

namespace {

ImageEngine& rr_engine() {
  static ImageEngine e(load_basis_n20(), build_A(rogers_ramanujan_spec().gen), 5);
  return e;
}

ImageEngine& as_engine() {
  static ImageEngine e(load_basis_n20(), build_A(andrews_sellers_spec().gen), 5);
  return e;
}

IterateOptions opts(int B, int iterations) {
  IterateOptions o;
  o.B = B;
  o.iterations = iterations;
  return o;
}

}  // namespace

TEST_CASE("residues of the progressions") {
  CHECK(residue_for_case(24, 5, 4) == 599);
  CHECK(residue_for_case(24, 5, 2) == 24);
  CHECK(residue_for_case(24, 5, 1) == 4);
  CHECK(residue_for_case(12, 5, 1) == 3);
  CHECK(residue_for_case(1, 5, 3) == 1);
  CHECK(residue_for_case(1, 7, 1) == 1);
  CHECK(residue_for_case(24, 5, 0) == 0);
  CHECK_THROWS(residue_for_case(10, 5, 1));
  for (int it = 0; it < 200; ++it) {
    const i64 ell = std::vector<i64>{5, 7, 11, 13}[static_cast<std::size_t>(uniform(0, 3))];
    const int a = static_cast<int>(uniform(1, 5));
    i64 c = uniform(1, 500);
    if (c % ell == 0) ++c;
    const i64 m = ipow(ell, static_cast<unsigned>(a));
    const i64 lam = residue_for_case(c, ell, a);
    REQUIRE(lam >= 0);
    REQUIRE(lam < m);
    REQUIRE(mod_floor(c * lam, m) == 1);
  }
}

TEST_CASE("direct oracle") {
  const auto rr = rogers_ramanujan_spec().gen;
  CHECK(direct_oracle(rr, 25, 24, 5, 1, 100).holds);
  CHECK(direct_oracle(rr, 125, 99, 5, 1, 50).holds);
  auto r = direct_oracle(rr, 125, 99, 5, 2, 50);
  CHECK_FALSE(r.holds);
  REQUIRE(r.counterexample);
  CHECK(r.value % 5 == 0);
  CHECK(r.value % 25 != 0);
  CHECK(direct_oracle(andrews_sellers_spec().gen, 5, 3, 5, 1, 200).holds);
  // a(5n) is not always divisible by 5: a(0) = 1
  auto none = direct_oracle(rr, 5, 0, 5, 1, 10);
  CHECK_FALSE(none.holds);
  CHECK(*none.counterexample == 0);
  CHECK(none.value == 1);
}

TEST_CASE("spec JSON round trip") {
  for (const auto& s : {rogers_ramanujan_spec(), andrews_sellers_spec()}) {
    auto back = CongruenceFamilySpec::from_json(s.to_json());
    CHECK(back == s);
    CHECK(back.to_json() == s.to_json());
  }
  for (int it = 0; it < 200; ++it) {
    CongruenceFamilySpec s;
    s.gen.M = std::vector<i64>{1, 2, 3, 4, 6, 12}[static_cast<std::size_t>(uniform(0, 5))];
    s.gen.ell = std::vector<i64>{5, 7, 11}[static_cast<std::size_t>(uniform(0, 2))];
    for (i64 d : divisors(s.gen.M))
      if (i64 e = uniform(-3, 3)) s.gen.r[d] = e;
    s.c = uniform(1, 99);
    if (s.c % s.gen.ell == 0) ++s.c;
    s.pattern = uniform(0, 1) ? Pattern::EvenAlpha : Pattern::EveryAlpha;
    s.B = static_cast<int>(uniform(1, 6));
    if (uniform(0, 1)) s.name = "family" + std::to_string(it);
    bool valid = true;
    try {
      s.validate();
    } catch (const Error&) {
      valid = false;
    }
    if (!valid) {
      CHECK_THROWS_AS(CongruenceFamilySpec::from_json(s.to_json()), Error);
      continue;
    }
    auto once = CongruenceFamilySpec::from_json(s.to_json());
    REQUIRE(once == s);
    REQUIRE(CongruenceFamilySpec::from_json(once.to_json()) == once);
  }
}

TEST_CASE("malformed specs") {
  const char* bad[] = {
      "", "[]", R"({"M":4,"r":{"1":-3},"ell":5,"c":24})",
      R"({"M":4,"r":{"1":-3,"2":5,"4":-2},"ell":5,"c":24,"pattern":"odd"})",
      R"({"M":4,"r":{"3":-1},"ell":5,"c":24,"pattern":"even-alpha"})",
      R"({"M":4,"r":{"x":-1},"ell":5,"c":24,"pattern":"even-alpha"})",
      R"({"M":4,"r":{"1":-3,"2":5,"4":-2},"ell":4,"c":24,"pattern":"even-alpha"})",
      R"({"M":4,"r":{"1":-3,"2":5,"4":-2},"ell":5,"c":25,"pattern":"even-alpha"})",
      R"({"M":4,"r":{"1":-3,"2":5,"4":-2},"ell":5,"c":24,"pattern":"even-alpha","B":0})",
      R"({"M":4,"r":{"1":-3,"2":5,"4":-2},"ell":5,"c":24,"pattern":"even-alpha","extra":1})",
      R"({"M":4,"r":{"1":-30},"ell":5,"c":24,"pattern":"even-alpha"})",
  };
  for (const char* s : bad) {
    INFO(s);
    try {
      CongruenceFamilySpec::from_json(s);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidInput);
    }
  }
  CHECK_THROWS_AS(load_spec("no-such-family"), Error);
  auto rr = load_spec("rogers-ramanujan");
  CHECK(rr.c == 24);
  CHECK(rr.default_iterations() == 10);
  CHECK(load_spec("andrews-sellers").default_iterations() == 5);
}

TEST_CASE("basis choice") {
  auto b = choose_basis(rogers_ramanujan_spec());
  CHECK(b.fingerprint() == load_basis_n20().fingerprint());
  auto path = std::filesystem::temp_directory_path() / "etacheck_spec.json";
  {
    auto s = andrews_sellers_spec();
    s.name.clear();
    std::ofstream(path) << s.to_json();
  }
  auto s = load_spec(path.string());
  CHECK(s.name.empty());
  CHECK(choose_basis(s).fingerprint() == load_basis_n20().fingerprint());
  std::filesystem::remove(path);
}

TEST_CASE("trivial run") {
  auto r = iterate(rogers_ramanujan_spec(), rr_engine(), opts(1, 0));
  CHECK(r.V() == std::vector<int>{0});
  CHECK(r.passed);
  CHECK(check_pattern(r, rogers_ramanujan_spec()));
  CHECK_THROWS(iterate(rogers_ramanujan_spec(), rr_engine(), opts(2, 5)));
}

TEST_CASE("Rogers-Ramanujan family") {
  const auto spec = rogers_ramanujan_spec();
  auto r = iterate(spec, rr_engine(), opts(5, 10));
  REQUIRE(r.steps.size() == 11);
  for (int a = 0; a <= 5; ++a) CHECK(r.steps[static_cast<std::size_t>(2 * a)].v == a);
  CHECK(r.passed);
  CHECK(check_pattern(r, spec));
  // 5 | a(125n+99) but not 25: the odd step stays one short
  CHECK(r.steps[3].v == 1);
  for (std::size_t a = 1; a < r.steps.size(); ++a) CHECK(r.steps[a].v >= r.steps[a - 1].v);
  CHECK(r.steps.back().saturated);

  // capping is the only difference between B and B' > B
  auto r3 = iterate(spec, rr_engine(), opts(3, 6));
  for (std::size_t a = 0; a < r3.steps.size(); ++a)
    if (r3.steps[a].v < 3) CHECK(r3.steps[a].v == r.steps[a].v);

  auto again = iterate(spec, rr_engine(), opts(5, 10));
  CHECK(again.to_json(false) == r.to_json(false));
  CHECK(r.to_text().find("PASS") != std::string::npos);
}

TEST_CASE("Andrews-Sellers family") {
  const auto spec = andrews_sellers_spec();
  auto r = iterate(spec, as_engine(), opts(3, 3));
  CHECK(r.V() == std::vector<int>{0, 1, 2, 3});
  CHECK(r.passed);
  auto stronger = spec;
  stronger.pattern = Pattern::EveryAlpha;
  // v_alpha >= alpha + 1 fails at alpha = 1 (alpha = 0 is checked by required too)
  int first = -1;
  for (const auto& s : r.steps)
    if (s.v < s.alpha + 1 && s.alpha >= 1) {
      first = s.alpha;
      break;
    }
  CHECK(first == 1);
}

TEST_CASE("corrupted image table fails the pattern") {
  ImageEngine e(load_basis_n20(), build_A(rogers_ramanujan_spec().gen), 5);
  ModuleElement one;
  one.add_term(0, 0, 1);
  // U_5(A) replaced by 1 makes L_2 = U_5(1) = 1
  e.override_image(1, 0, 0, one);
  auto r = iterate(rogers_ramanujan_spec(), e, opts(3, 6));
  CHECK_FALSE(r.passed);
  REQUIRE(r.first_failure);
  CHECK(*r.first_failure == 2);
}

TEST_CASE("j ceiling is reported") {
  IterateOptions o = opts(5, 4);
  o.j_ceiling = 1;
  try {
    iterate(rogers_ramanujan_spec(), rr_engine(), o);
    FAIL("no error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::ContractViolation);
    CHECK(std::string(err.what()).find("ceiling") != std::string::npos);
  }
}

TEST_CASE("Phi shifts") {
  CHECK(phi_shift(rogers_ramanujan_spec(), 0) == 0);
  CHECK(phi_shift(rogers_ramanujan_spec(), 1) == 1);
  CHECK(phi_shift(rogers_ramanujan_spec(), 2) == 1);
  CHECK(phi_shift(andrews_sellers_spec(), 1) == 1);
  CHECK(phi_shift(andrews_sellers_spec(), 2) == 1);
  auto wrong = rogers_ramanujan_spec();
  wrong.c = 1;
  CHECK_THROWS(phi_shift(wrong, 1));
}

TEST_CASE("basis side matches the congruence subseries") {
  for (auto spec : {rogers_ramanujan_spec(), andrews_sellers_spec()}) {
    auto& e = spec.c == 24 ? rr_engine() : as_engine();
    auto r = iterate(spec, e, opts(5, 3));
    for (int a = 1; a <= 3; ++a) {
      INFO(spec.name << " alpha=" << a);
      auto c = consistency_check(spec, e.basis(), r.L[static_cast<std::size_t>(a)], a, 5, 40);
      CHECK(c.ok);
    }
    // and a wrong element is caught
    auto c = consistency_check(spec, e.basis(), r.L[2], 1, 5, 40);
    CHECK_FALSE(c.ok);
  }
}

TEST_CASE("exact images give the exact subseries") {
  auto& e = rr_engine();
  auto L1 = *e.image(1, 0, 0);
  auto lhs = L1.expand(e.basis(), 40);
  auto rhs = subseries_side(rogers_ramanujan_spec(), 1, 40);
  CHECK(same(lhs, rhs));
}
