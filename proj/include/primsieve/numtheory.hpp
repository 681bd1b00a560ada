#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace primsieve {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PrimeFactor {
  mpz_class p;
  unsigned e = 1;
};

// A positive integer with its complete prime factorization.
class Factorization {
 public:
  Factorization() : n_(1) {}
  // Validates: factors sorted strictly increasing, exponents >= 1,
  // every p prime, and the product reassembles n exactly.
  Factorization(mpz_class n, std::vector<PrimeFactor> factors);

  const mpz_class& n() const { return n_; }
  const std::vector<PrimeFactor>& factors() const { return factors_; }

  std::size_t omega() const { return factors_.size(); }
  mpz_class rad() const;
  mpz_class w() const;    // 2^omega = number of squarefree divisors
  mpz_class phi() const;  // Euler totient, exact
  // Moebius function of a divisor d of n; 0 when d is not squarefree.
  int mu(const mpz_class& d) const;

 private:
  mpz_class n_;
  std::vector<PrimeFactor> factors_;
};

// Thrown when the factoring budget runs out. `cofactor` is the composite
// part that resisted; `found` holds everything split off so far.
class IncompleteFactorization : public std::runtime_error {
 public:
  IncompleteFactorization(mpz_class cofactor, std::vector<PrimeFactor> found);
  mpz_class cofactor;
  std::vector<PrimeFactor> found;
};

struct FactorBudget {
  std::uint64_t trial_limit = 1'000'000;
  std::uint64_t rho_iterations = 20'000'000;
  // Reads PRIMSIEVE_EFFORT (integer scale, default 1) and multiplies
  // rho_iterations by it.
  static FactorBudget from_env();
};

// Deterministic Miller-Rabin below 2^64, 40-round strong probable-prime
// testing above.
bool is_prime(const mpz_class& n);

Factorization factorize(const mpz_class& n,
                        const std::vector<mpz_class>& hints = {},
                        const FactorBudget& budget = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Extendable segmented sieve with prefix data over the generated primes.
// Thread-safe: extension is internally synchronized.
class PrimeTable {
 public:
  // dense prefix arrays (doubles) cover the first kDenseCap primes; the
  // omega sweeps never need more.
  static constexpr std::uint64_t kDenseCap = 200'000;

  explicit PrimeTable(std::uint64_t max_primes = 16'100'000);

  std::uint64_t nth_prime(std::uint64_t i);  // 1-based
  std::uint64_t count() const;
  void ensure_count(std::uint64_t n);

  // Compensated double prefix sums, dense range only (t <= kDenseCap).
  double recip_prefix_mid(std::uint64_t t);
  double log_primorial(std::uint64_t t);

  // Certified bracket of sum_{i<=t} 1/p_i via directed rounding,
  // width <= 1e-9. Memoized per t.
  Interval recip_prefix(std::uint64_t t);

 private:
  void extend_unlocked(std::uint64_t target_count);

  std::uint64_t max_primes_;
  std::vector<std::uint32_t> primes_;
  std::uint64_t sieved_to_ = 0;
  std::vector<double> recip_dense_;  // recip_dense_[i] = sum of first i
  std::vector<double> logp_dense_;
  double recip_comp_ = 0.0;  // Kahan carries for the dense prefixes
  double logp_comp_ = 0.0;
  std::map<std::uint64_t, Interval> recip_memo_;
  mutable std::mutex mu_;
};

// Explicit Mertens-type upper bound on sum_{p<=n} 1/p:
// log log n + 0.26150 + 4/log(n+1) + 2/(n log n).
double mertens_upper(double n);

// Rosser-Schoenfeld bounds on pi(x).
double pi_lower(double x);  // requires x >= 59
double pi_upper(double x);  // requires x > 1

}  // namespace primsieve
