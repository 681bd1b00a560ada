#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "primsieve/finite_field.hpp"
#include "support/lemma_checks.hpp"

using namespace primsieve;

TEST_CASE("canonical presentation of the order-9 field") {
  FieldCtx f = build_field_q(3, 2);
  CHECK(f.p() == 3);
  CHECK(f.q() == 3);
  CHECK(f.r() == 2);
  CHECK(f.order() == 9);
  CHECK(f.ext_poly() == std::vector<unsigned>{1, 0, 1});
  CHECK(f.generator() == 4);  // [1,1]

  // primitive elements: odd discrete logs
  std::set<std::uint32_t> prim;
  for (std::uint32_t e : all_nonzero(f))
    if (std::gcd(f.dlog(e), f.order() - 1) == 1) prim.insert(e);
  CHECK(prim == std::set<std::uint32_t>{4, 5, 7, 8});
  CHECK(f.to_string(4) == "[1,1]");
  CHECK(f.parse_element("[2,1]") == 5);
  CHECK_FALSE(f.parse_element("[3,1]").has_value());
}

TEST_CASE("canonical presentations of the order-25 and order-27 fields") {
  FieldCtx f25 = build_field_q(5, 2);
  CHECK(f25.ext_poly() == std::vector<unsigned>{3, 0, 1});
  CHECK(f25.generator() == 7);  // 2 + x
  std::size_t prim25 = 0;
  for (std::uint32_t e : all_nonzero(f25))
    prim25 += std::gcd(f25.dlog(e), f25.order() - 1) == 1;
  CHECK(prim25 == 8);  // phi(24)

  FieldCtx f27 = build_field_q(3, 3);
  CHECK(f27.ext_poly() == std::vector<unsigned>{2, 2, 0, 1});
  CHECK(f27.generator() == 8);  // 2 + 2x
  std::size_t prim27 = 0;
  for (std::uint32_t e : all_nonzero(f27))
    prim27 += std::gcd(f27.dlog(e), f27.order() - 1) == 1;
  CHECK(prim27 == 12);  // phi(26)
}

TEST_CASE("subfield tables for a degree-2 tower") {
  FieldCtx f = build_field(2, 2, 2);  // F_16 over F_4
  CHECK(f.q() == 4);
  CHECK(f.base_poly() == std::vector<unsigned>{1, 1, 1});  // y^2+y+1
  CHECK(f.q_mul(2, 2) == 3);  // y^2 = y + 1
  CHECK(f.q_mul(2, 3) == 1);  // y(y+1) = 1
  for (unsigned a = 0; a < 4; ++a) {
    CHECK(f.q_add(a, a) == 0);  // characteristic 2
    for (unsigned b = 0; b < 4; ++b) {
      CHECK(f.q_add(a, b) == f.q_add(b, a));
      CHECK(f.q_mul(a, b) == f.q_mul(b, a));
    }
    if (a != 0) CHECK(f.q_mul(a, f.q_inv(a)) == 1);
  }
  CHECK_THROWS_AS(f.q_inv(0), DomainError);
}

TEST_CASE("field arithmetic and discrete logs") {
  std::mt19937_64 rng(7);
  for (const auto& spec : checks::standard_fields()) {
    FieldCtx f = build_field(spec.p, spec.k, spec.r);
    const std::uint64_t n = f.order();
    for (int i = 0; i < 50; ++i) {
      std::uint32_t a = rng() % n, b = rng() % n, c = rng() % n;
      CHECK(f.add(a, b) == f.add(b, a));
      CHECK(f.mul(a, b) == f.mul(b, a));
      CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
      if (a != 0) {
        CHECK(f.pow(a, n - 1) == 1);
        CHECK(f.exp(f.dlog(a)) == a);
      }
    }
    CHECK(f.dlog(f.generator()) == 1);
    CHECK_THROWS_AS(f.dlog(0), DomainError);
  }
}

TEST_CASE("construction validation") {
  CHECK_THROWS_AS(build_field(4, 1, 2), DomainError);   // composite p
  CHECK_THROWS_AS(build_field(3, 1, 13), ResourceError);  // 3^13 too large
  CHECK_THROWS_AS(build_field_q(6, 2), DomainError);    // not a prime power

  FieldOptions bad_poly;
  bad_poly.ext_poly = std::vector<unsigned>{2, 0, 0, 1};  // root at x = 1
  CHECK_THROWS_AS(build_field(3, 1, 3, bad_poly), DomainError);

  FieldOptions bad_gen;
  bad_gen.generator = 3;  // x with x^2+1: order 4, not 8
  bad_gen.ext_poly = std::vector<unsigned>{1, 0, 1};
  CHECK_THROWS_AS(build_field(3, 1, 2, bad_gen), DomainError);
}

TEST_CASE("characters") {
  FieldCtx f = build_field_q(3, 2);
  const std::uint64_t n1 = f.order() - 1;

  Character triv = f.character(0);
  CHECK(triv.order == 1);
  CHECK(f.chi(triv, 0) == std::complex<double>(0.0, 0.0));
  for (std::uint32_t e : all_nonzero(f))
    CHECK(std::abs(f.chi(triv, e) - 1.0) < 1e-12);

  // phi(d) characters of each order d | q^r-1
  std::map<std::uint64_t, std::size_t> by_order;
  for (std::uint64_t j = 0; j < n1; ++j) ++by_order[f.character(j).order];
  CHECK(by_order[1] == 1);
  CHECK(by_order[2] == 1);
  CHECK(by_order[4] == 2);
  CHECK(by_order[8] == 4);

  // multiplicativity in the index and orthogonality
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    std::uint64_t j1 = rng() % n1, j2 = rng() % n1;
    std::uint32_t e = 1 + rng() % n1;
    std::complex<double> lhs = f.chi(f.character(j1), e) * f.chi(f.character(j2), e);
    std::complex<double> rhs = f.chi(f.character((j1 + j2) % n1), e);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  for (std::uint64_t j = 1; j < n1; ++j) {
    std::complex<double> total =
        char_sum(f, all_nonzero(f), f.character(j));
    CHECK(std::abs(total) < 1e-9);
  }
  CHECK(true_K(f, all_nonzero(f)) < 1e-9);
}

TEST_CASE("e-free membership and counting") {
  FieldCtx f = build_field_q(3, 2);
  auto all = all_nonzero(f);
  CHECK(count_e_free(f, all, 8) == 4);  // the primitive elements
  CHECK(count_e_free(f, all, 2) == 4);  // odd discrete logs
  CHECK(count_e_free(f, all, 1) == 8);
  CHECK(is_e_free(f, f.generator(), 8));
  CHECK_FALSE(is_e_free(f, f.mul(f.generator(), f.generator()), 2));
  CHECK_THROWS_AS(is_e_free(f, 0, 2), DomainError);
  CHECK_THROWS_AS(is_e_free(f, 1, 3), DomainError);  // 3 does not divide 8
  CHECK(vinogradov_count(f, all, 8) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("character-sum expansion matches direct counting") {
  std::mt19937_64 rng(20260823);
  for (const auto& spec : checks::standard_fields()) {
    FieldCtx f = build_field(spec.p, spec.k, spec.r);
    CHECK(checks::check_expansion_identity(f, rng, 100) == 0);
  }
}

TEST_CASE("sieve inequalities across divisor partitions") {
  std::mt19937_64 rng(31337);
  for (const auto& spec : checks::standard_fields()) {
    FieldCtx f = build_field(spec.p, spec.k, spec.r);
    CHECK(checks::check_sieve_inequalities(f, rng, 3) == 0);
  }
}

TEST_CASE("threshold criterion is sound on random subsets") {
  std::mt19937_64 rng(99);
  for (const auto& spec : checks::standard_fields()) {
    FieldCtx f = build_field(spec.p, spec.k, spec.r);
    CHECK(checks::check_sieve_soundness(f, rng, 100) == 0);
  }
}
