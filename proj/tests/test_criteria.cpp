#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>

#include "primsieve/criteria.hpp"
#include "primsieve/fixtures.hpp"

using namespace primsieve;

namespace {

const FactorFixtureFile& fixtures() {
  static FactorFixtureFile fx = [] {
    const char* env = std::getenv("PRIMSIEVE_FIXTURES");
    REQUIRE(env != nullptr);
    return FactorFixtureFile::parse(env);
  }();
  return fx;
}

const Factorization& order_of(unsigned q, unsigned r) {
  const Factorization* f = fixtures().find(q, r);
  REQUIRE(f != nullptr);
  return *f;
}

}  // namespace

TEST_CASE("sieve threshold reductions") {
  // base 2*3*5, all in the core: T = W - 1 = 7
  Factorization base = factorize(30);
  SieveConfig cfg = make_config(base, 0, 0);
  CHECK(sieve_threshold(cfg) == mpq_class(7));

  // s2 = 0: T = W(k)(s1 + 2 delta - 1)/delta - 1
  SieveConfig cfg2 = make_config(base, 1, 0);  // p = {5}, k = 2*3
  mpq_class delta = 1 - mpq_class(1, 5);
  mpq_class expect = mpq_class(4) * (1 + 2 * delta - 1) / delta - 1;
  CHECK(sieve_threshold(cfg2) == expect);
}

TEST_CASE("sieve threshold hand-evaluated split") {
  // rad = 2*3*5 with k = 2, p = {5}, l = {3}
  SieveConfig cfg;
  cfg.rad = 30;
  cfg.core = {2};
  cfg.sieved = {5};
  cfg.modified = {3};
  cfg.delta = mpq_class(4, 5);
  cfg.epsilon = mpq_class(1, 3);
  cfg.rho_core = mpq_class(1, 2);
  cfg.w_core = 2;
  REQUIRE(cfg.valid());
  // ((1/2)*2*(1 + 2*(4/5) - 1) + 1 - (4/5)(1/2) - 1/3) / ((4/5)(1/2) - 1/3)
  CHECK(sieve_threshold(cfg) == mpq_class(28));
}

TEST_CASE("invalid config rejected") {
  SieveConfig cfg;
  cfg.rad = 30;
  cfg.core = {};
  cfg.sieved = {};
  cfg.modified = {2, 3, 5};
  cfg.delta = 1;
  cfg.epsilon = mpq_class(1, 2) + mpq_class(1, 3) + mpq_class(1, 5);
  cfg.rho_core = 1;
  cfg.w_core = 1;
  CHECK_FALSE(cfg.valid());
  CHECK_THROWS_AS(sieve_threshold(cfg), DomainError);
}

TEST_CASE("make_config largest-prime assignment") {
  Factorization base = factorize(2 * 3 * 5 * 7 * 11);
  SieveConfig cfg = make_config(base, 2, 1);
  REQUIRE(cfg.modified.size() == 1);
  CHECK(cfg.modified[0] == 11);
  REQUIRE(cfg.sieved.size() == 2);
  CHECK(cfg.sieved[0] == 5);
  CHECK(cfg.sieved[1] == 7);
  CHECK(cfg.core == std::vector<mpz_class>{2, 3});
  CHECK(cfg.delta == 1 - mpq_class(1, 5) - mpq_class(1, 7));
  CHECK(cfg.epsilon == mpq_class(1, 11));
}

TEST_CASE("choose_config prefers fewer moved primes on ties") {
  Factorization base = factorize(2);
  SieveConfig cfg = choose_config(base);
  CHECK(cfg.sieved.empty());
  CHECK(cfg.modified.empty());
  CHECK(sieve_threshold(cfg) == mpq_class(1));
}

TEST_CASE("choose_config matches exhaustive search on small radicals") {
  for (unsigned long rad : {78ul, 30ul, 2310ul, 1155ul}) {
    Factorization base = factorize(rad);
    mpq_class heuristic = sieve_threshold(choose_config(base));
    mpq_class best = sieve_threshold(choose_config(base, true));
    CHECK(best <= heuristic);
    // the largest-prime heuristic happens to be optimal on these
    CHECK(best == heuristic);
  }
}

TEST_CASE("generic prime config") {
  PrimeTable pt;
  GenericConfig g0 = generic_prime_config(5, 0, 0, pt);
  REQUIRE(g0.valid);
  CHECK(g0.threshold == mpq_class(31));  // 2^5 - 1

  GenericConfig g1 = generic_prime_config(5, 2, 0, pt);
  CHECK(g1.delta == 1 - mpq_class(1, 7) - mpq_class(1, 11));
  CHECK(g1.epsilon == 0);

  GenericConfig g2 = generic_prime_config(5, 1, 1, pt);
  CHECK(g2.delta == 1 - mpq_class(1, 7));
  CHECK(g2.epsilon == mpq_class(1, 11));

  CHECK_THROWS_AS(generic_prime_config(3, 2, 2, pt), DomainError);
}

TEST_CASE("character bounds") {
  CharBound even34 = char_bound(CharBoundKind::even_r, 3, 4);
  CHECK(even34.sq_int == 768);  // 4*(q-1)^{3r/2}*q^{r/4} = 4*64*3
  CHECK(even34.sq_surd == 0);

  CHECK_THROWS_AS(char_bound(CharBoundKind::even_r, 3, 5), DomainError);

  // r = 0 mod 4 makes the ceiling exponent exact
  CharBound katz = char_bound(CharBoundKind::katz_ceiling, 5, 8);
  CHECK(katz.k_used == 6);
  mpz_class expect = 3 * pow_ui(mpz_class(4), 8) * pow_ui(mpz_class(5), 6);
  CHECK(katz.sq_int == expect);
  CHECK(katz.sq_surd == 0);
}

TEST_CASE("optimal-k bound never exceeds the ceiling bound") {
  for (unsigned q : {3u, 4u, 5u, 7u, 8u, 9u}) {
    for (unsigned r = 2; r <= 24; ++r) {
      CharBound ceil = char_bound(CharBoundKind::katz_ceiling, q, r);
      CharBound opt = char_bound(CharBoundKind::katz_optimal_k, q, r);
      double vc = ceil.sq_int.get_d() + ceil.sq_surd.get_d() * std::sqrt((double)q);
      double vo = opt.sq_int.get_d() + opt.sq_surd.get_d() * std::sqrt((double)q);
      CHECK(vo <= vc * (1 + 1e-12));
    }
  }
}

TEST_CASE("exact scaled-bound comparison") {
  // 10 > 1 * (3 + 2*sqrt(2)) ~ 5.828
  CHECK(exceeds_scaled_bound(10, 1, 3, 2, 2));
  // 5 < 3 + 2*sqrt(2) is false at 5.828...
  CHECK_FALSE(exceeds_scaled_bound(5, 1, 3, 2, 2));
  // surd-free path
  CHECK(exceeds_scaled_bound(4, 1, 3, 0, 2));
  CHECK_FALSE(exceeds_scaled_bound(3, 1, 3, 0, 2));
}

TEST_CASE("hypersieve eliminations match the published rows") {
  CHECK(hypersieve_check(9, 13, order_of(9, 13)).verdict == Verdict::eliminated);
  ClassificationRecord even = hypersieve_check(9, 14, order_of(9, 14));
  CHECK(even.verdict == Verdict::eliminated);
  CHECK(even.criterion == "hypersieve_even");
  CHECK(hypersieve_check(8, 20, order_of(8, 20)).verdict ==
        Verdict::possible_exception);
}

TEST_CASE("even-r inequality holds for (8,18) by two routes") {
  // omega(8^18-1) = 6; s = 4 moved primes give T ~ 19.85 and the exact
  // comparison (q-1)^r > 16 T^4 q^{r/2} succeeds
  const Factorization& f = order_of(8, 18);
  REQUIRE(f.omega() == 6);
  int s = -1;
  CHECK(hypersieve_even(8, 18, f, &s));
  CHECK(s == 4);
  // floating re-derivation: (q-1)^{r/2}/q^{r/4} vs 4T^2
  double lhs = std::pow(7.0, 9.0) / std::pow(8.0, 4.5);
  double delta = 1 - 1.0 / 87211 - 1.0 / 262657 - 1.0 / 73 - 1.0 / 19;
  double t = std::pow(2.0, 2) * ((4 - 1) / delta + 2) - 1;
  CHECK(lhs > 4 * t * t);
}

TEST_CASE("Fernandes-Reis criterion 1") {
  CHECK(fr_criterion1(9, 2, 32));   // 64 > 81 - 32
  CHECK_FALSE(fr_criterion1(5, 2, 8));  // 16 > 17 fails
  CHECK(fr_criterion1(4, 2, 8));    // 9 > 8
}

TEST_CASE("Fernandes-Reis criterion 2") {
  CHECK(fr_criterion2(7, 13, order_of(7, 13).omega()));
  for (unsigned r = 2; r <= 35; ++r)
    CHECK_FALSE(fr_criterion2(5, r, order_of(5, r).omega()));
}

TEST_CASE("classification pipeline") {
  ClassificationRecord a = classify(9, 21, order_of(9, 21));
  CHECK(a.verdict == Verdict::eliminated);
  CHECK(a.criterion == "hypersieve");

  CHECK(classify(5, 30, order_of(5, 30)).verdict ==
        Verdict::possible_exception);

  ClassificationRecord g = classify(3, 3, order_of(3, 3), true);
  CHECK(g.verdict == Verdict::genuine_exception);

  CHECK_THROWS_AS(classify(3, 3, order_of(3, 2)), DomainError);
}

TEST_CASE("reduction identities on random factorizations") {
  std::mt19937_64 rng(42);
  const unsigned long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
  for (int trial = 0; trial < 100; ++trial) {
    unsigned count = 1 + rng() % 6;
    std::vector<unsigned long> pick(std::begin(primes), std::end(primes));
    std::shuffle(pick.begin(), pick.end(), rng);
    pick.resize(count);
    std::sort(pick.begin(), pick.end());
    mpz_class n = 1;
    std::vector<PrimeFactor> pf;
    for (unsigned long p : pick) {
      n *= p;
      pf.push_back({mpz_class(p), 1});
    }
    Factorization base(n, pf);

    SieveConfig unsieved = make_config(base, 0, 0);
    CHECK(sieve_threshold(unsieved) == base.w() - 1);

    unsigned s1 = rng() % (count + 1);
    SieveConfig ps = make_config(base, s1, 0);
    if (ps.valid()) {
      mpq_class w_k(ps.w_core);
      mpq_class expect = w_k * (mpq_class(s1) + 2 * ps.delta - 1) / ps.delta - 1;
      CHECK(sieve_threshold(ps) == expect);
    }
  }
}
