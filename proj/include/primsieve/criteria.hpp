#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primsieve/numtheory.hpp"

namespace primsieve {

// A partition rad(q^r-1) = k * prod p_i * prod l_j with the derived
// exact rationals.
struct SieveConfig {
  mpz_class rad;
  std::vector<mpz_class> core;      // primes of k
  std::vector<mpz_class> sieved;    // p_i
  std::vector<mpz_class> modified;  // l_j
  mpq_class delta;                  // 1 - sum 1/p_i
  mpq_class epsilon;                // sum 1/l_j
  mpq_class rho_core;               // phi(k)/k
  mpz_class w_core;                 // 2^omega(k)

  bool valid() const { return delta * rho_core > epsilon; }
};

// Largest-prime assignment: the l_j are the s2 largest primes of rad,
// the p_i the next s1 largest, the rest is the core.
SieveConfig make_config(const Factorization& base, std::size_t s1,
                        std::size_t s2);

// The threshold multiplier T of the sieve criterion: |A| > T*K(q,r)
// forces a primitive element. Exact rational.
mpq_class sieve_threshold(const SieveConfig& config);

// Minimizes sieve_threshold over (s1, s2) pairs with the largest-prime
// assignment; ties broken by smaller s1+s2, then smaller s2. With
// exhaustive=true (omega <= 8 only) every 3-way partition is searched.
SieveConfig choose_config(const Factorization& base, bool exhaustive = false);

// Threshold construction for unknown factorizations: the l's and p's are
// consecutive primes ending at the omega_r-th, and rho(k) is replaced by
// the conservative lower bound prod_{i<=omega_r-s1-s2}(1-1/p_i).
struct GenericConfig {
  mpq_class delta;
  mpq_class epsilon;
  mpq_class rho_lower;
  mpz_class w;  // 2^{omega_r - s1 - s2}
  bool valid = false;
  mpq_class threshold;  // meaningful only when valid
};
GenericConfig generic_prime_config(std::size_t omega_r, std::size_t s1,
                                   std::size_t s2, PrimeTable& primes);

enum class CharBoundKind { katz_ceiling, katz_optimal_k, even_r };

// K(q,r)^2 represented exactly as sq_int + sq_surd * sqrt(q).
struct CharBound {
  CharBoundKind kind;
  unsigned q = 0;
  unsigned r = 0;
  mpz_class sq_int;
  mpz_class sq_surd;
  unsigned k_used = 0;  // for the katz kinds
};

CharBound char_bound(CharBoundKind kind, unsigned q, unsigned r);

// Exact sign test for x > t^2 * (a + b*sqrt(q)), all quantities rational.
bool exceeds_scaled_bound(const mpq_class& x, const mpq_class& t_sq,
                          const mpz_class& a, const mpz_class& b, unsigned q);

enum class Verdict { eliminated, possible_exception, genuine_exception };

struct ClassificationRecord {
  unsigned q = 0;
  unsigned r = 0;
  Verdict verdict = Verdict::possible_exception;
  std::string criterion;  // hypersieve | hypersieve_even | fr1 | fr2
  int s_used = -1;
  std::optional<CharBoundKind> bound_kind;
  std::string notes;
};

// Inequality (|G_A| side vs the character bound) for the largest-s-primes
// rule, s = 0..omega. Uses the optimal-k bound; for even r the even-r
// bound is tried as well.
ClassificationRecord hypersieve_check(unsigned q, unsigned r,
                                      const Factorization& base);

// The two branches separately (the table artifacts need them split).
bool hypersieve_general(unsigned q, unsigned r, const Factorization& base,
                        int* s_out = nullptr);
bool hypersieve_even(unsigned q, unsigned r, const Factorization& base,
                     int* s_out = nullptr);

bool fr_criterion1(unsigned q, unsigned r, const mpz_class& phi_of_order);
bool fr_criterion2(unsigned q, unsigned r, std::size_t omega_r);

// Applies hypersieve_check, fr_criterion1, fr_criterion2 in order.
// order_fact must be the complete factorization of q^r-1.
// genuine_certificate upgrades a surviving pair to genuine_exception
// (the hyperplane search supplies it).
ClassificationRecord classify(unsigned q, unsigned r,
                              const Factorization& order_fact,
                              bool genuine_certificate = false);

mpz_class pow_ui(const mpz_class& base, unsigned long e);

}  // namespace primsieve
