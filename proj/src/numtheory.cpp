#include "primsieve/numtheory.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace primsieve {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((__uint128_t)a * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for all n < 2^64.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  if (mpz_fits_ulong_p(n.get_mpz_t())) {
    return miller_rabin_u64(mpz_get_ui(n.get_mpz_t()));
  }
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

Factorization::Factorization(mpz_class n, std::vector<PrimeFactor> factors)
    : n_(std::move(n)), factors_(std::move(factors)) {
  if (n_ < 1) throw DomainError("Factorization: n must be positive");
  mpz_class prod = 1;
  const mpz_class* prev = nullptr;
  for (const auto& f : factors_) {
    if (f.e < 1) throw DomainError("Factorization: exponent must be >= 1");
    if (prev && !(*prev < f.p))
      throw DomainError("Factorization: primes must be strictly increasing");
    if (!is_prime(f.p))
      throw DomainError("Factorization: composite factor " + f.p.get_str());
    mpz_class pe;
    mpz_pow_ui(pe.get_mpz_t(), f.p.get_mpz_t(), f.e);
    prod *= pe;
    prev = &f.p;
  }
  if (prod != n_)
    throw DomainError("Factorization: product mismatch for " + n_.get_str());
}

mpz_class Factorization::rad() const {
  mpz_class r = 1;
  for (const auto& f : factors_) r *= f.p;
  return r;
}

mpz_class Factorization::w() const {
  mpz_class w = 1;
  mpz_mul_2exp(w.get_mpz_t(), w.get_mpz_t(), factors_.size());
  return w;
}

mpz_class Factorization::phi() const {
  mpz_class phi = n_;
  for (const auto& f : factors_) {
    phi /= f.p;
    phi *= f.p - 1;
  }
  return phi;
}

int Factorization::mu(const mpz_class& d) const {
  if (d < 1 || !mpz_divisible_p(n_.get_mpz_t(), d.get_mpz_t()))
    throw DomainError("mu: argument must divide n");
  mpz_class rest = d;
  int sign = 1;
  for (const auto& f : factors_) {
    if (mpz_divisible_p(rest.get_mpz_t(), f.p.get_mpz_t())) {
      rest /= f.p;
      if (mpz_divisible_p(rest.get_mpz_t(), f.p.get_mpz_t())) return 0;
      sign = -sign;
    }
  }
  return sign;  // rest == 1 here since d | n
}

IncompleteFactorization::IncompleteFactorization(mpz_class c,
                                                 std::vector<PrimeFactor> f)
    : std::runtime_error("factorization incomplete, composite cofactor " +
                         c.get_str()),
      cofactor(std::move(c)),
      found(std::move(f)) {}

FactorBudget FactorBudget::from_env() {
  FactorBudget b;
  if (const char* s = std::getenv("PRIMSIEVE_EFFORT")) {
    long scale = std::atol(s);
    if (scale > 0) b.rho_iterations *= static_cast<std::uint64_t>(scale);
  }
  return b;
}

namespace {

// Pollard-Brent rho. Returns a nontrivial factor or 0 when the iteration
// budget is exhausted. `budget` is decremented in place.
mpz_class pollard_brent(const mpz_class& n, std::uint64_t& budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(mpz_class(n % 1000000007));
  while (budget > 0) {
    mpz_class y = rng.get_z_range(n - 3) + 2;
    mpz_class c = rng.get_z_range(n - 1) + 1;
    mpz_class x, ys, g = 1, q = 1;
    const unsigned long m = 128;
    unsigned long r = 1;
    while (g == 1 && budget > 0) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
      for (unsigned long k = 0; k < r && g == 1; k += m) {
        ys = y;
        unsigned long lim = std::min(m, r - k);
        if (lim > budget) lim = static_cast<unsigned long>(budget);
        for (unsigned long i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          mpz_class d = x - y;
          if (d < 0) d = -d;
          q = q * d % n;
        }
        budget -= lim;
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        if (lim < std::min(m, r - k)) break;  // budget ran dry mid-block
      }
      r *= 2;
    }
    if (g == n) {
      // backtrack to recover the factor lost to batching
      do {
        ys = (ys * ys + c) % n;
        mpz_class d = x - ys;
        if (d < 0) d = -d;
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n && g > 1) return g;
  }
  return 0;
}

}  // namespace

Factorization factorize(const mpz_class& n, const std::vector<mpz_class>& hints,
                        const FactorBudget& budget) {
  if (n < 1) throw DomainError("factorize: n must be positive");
  std::vector<PrimeFactor> found;
  mpz_class rest = n;

  auto push = [&found](const mpz_class& p, unsigned e) {
    for (auto& f : found) {
      if (f.p == p) {
        f.e += e;
        return;
      }
    }
    found.push_back({p, e});
  };

  for (const auto& h : hints) {
    if (h < 2 || !is_prime(h)) continue;
    unsigned e = 0;
    while (mpz_divisible_p(rest.get_mpz_t(), h.get_mpz_t())) {
      rest /= h;
      ++e;
    }
    if (e > 0) push(h, e);
  }

  // trial division, 2/3 then the 6k+-1 wheel
  auto strip = [&](std::uint64_t d) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), d);
      ++e;
    }
    if (e > 0) push(mpz_class(static_cast<unsigned long>(d)), e);
  };
  strip(2);
  strip(3);
  for (std::uint64_t d = 5; d <= budget.trial_limit; d += 6) {
    if (mpz_cmp_ui(rest.get_mpz_t(), 1) == 0) break;
    if (mpz_fits_ulong_p(rest.get_mpz_t()) &&
        d * d > mpz_get_ui(rest.get_mpz_t()))
      break;
    strip(d);
    strip(d + 2);
  }

  std::uint64_t rho_budget = budget.rho_iterations;
  std::vector<mpz_class> stack;
  if (rest > 1) stack.push_back(rest);
  while (!stack.empty()) {
    mpz_class m = stack.back();
    stack.pop_back();
    if (is_prime(m)) {
      push(m, 1);
      continue;
    }
    mpz_class root;
    if (mpz_perfect_square_p(m.get_mpz_t())) {
      mpz_sqrt(root.get_mpz_t(), m.get_mpz_t());
      stack.push_back(root);
      stack.push_back(root);
      continue;
    }
    mpz_class g = pollard_brent(m, rho_budget);
    if (g == 0) {
      std::sort(found.begin(), found.end(),
                [](const PrimeFactor& a, const PrimeFactor& b) {
                  return a.p < b.p;
                });
      throw IncompleteFactorization(m, std::move(found));
    }
    stack.push_back(g);
    stack.push_back(m / g);
  }

  std::sort(found.begin(), found.end(),
            [](const PrimeFactor& a, const PrimeFactor& b) {
              return a.p < b.p;
            });
  return Factorization(n, std::move(found));
}

PrimeTable::PrimeTable(std::uint64_t max_primes) : max_primes_(max_primes) {
  primes_.reserve(1 << 16);
  recip_dense_.reserve(kDenseCap + 1);
  logp_dense_.reserve(kDenseCap + 1);
  recip_dense_.push_back(0.0);
  logp_dense_.push_back(0.0);
}

void PrimeTable::extend_unlocked(std::uint64_t target_count) {
  if (target_count > max_primes_)
    throw ResourceError("PrimeTable: requested prime index " +
                        std::to_string(target_count) +
                        " exceeds the budget of " +
                        std::to_string(max_primes_));
  while (primes_.size() < target_count) {
    double nd = static_cast<double>(std::max<std::uint64_t>(target_count, 16));
    double est = nd * (std::log(nd) + std::log(std::log(nd))) * 1.1 + 64.0;
    std::uint64_t new_limit =
        std::max<std::uint64_t>(sieved_to_ * 2, static_cast<std::uint64_t>(est));
    new_limit = std::max<std::uint64_t>(new_limit, 1024);

    // base primes up to sqrt(new_limit) by a plain sieve
    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt((double)new_limit)) + 2;
    std::vector<std::uint8_t> base(root + 1, 1);
    std::vector<std::uint32_t> base_primes;
    for (std::uint64_t i = 2; i <= root; ++i) {
      if (!base[i]) continue;
      base_primes.push_back(static_cast<std::uint32_t>(i));
      for (std::uint64_t j = i * i; j <= root; j += i) base[j] = 0;
    }

    const std::uint64_t seg_size = 1 << 22;
    std::vector<std::uint8_t> seg;
    std::uint64_t start = std::max<std::uint64_t>(sieved_to_, 2);
    for (std::uint64_t lo = start; lo < new_limit; lo += seg_size) {
      std::uint64_t hi = std::min(lo + seg_size, new_limit);
      seg.assign(hi - lo, 1);
      for (std::uint32_t p : base_primes) {
        std::uint64_t p64 = p;
        if (p64 * p64 >= hi) break;
        std::uint64_t first = std::max(p64 * p64, (lo + p64 - 1) / p64 * p64);
        for (std::uint64_t j = first; j < hi; j += p64) seg[j - lo] = 0;
      }
      for (std::uint64_t v = lo; v < hi; ++v) {
        if (!seg[v - lo]) continue;
        primes_.push_back(static_cast<std::uint32_t>(v));
        if (recip_dense_.size() <= kDenseCap) {
          double y = 1.0 / static_cast<double>(v) - recip_comp_;
          double t = recip_dense_.back() + y;
          recip_comp_ = (t - recip_dense_.back()) - y;
          recip_dense_.push_back(t);
          double ly = std::log(static_cast<double>(v)) - logp_comp_;
          double lt = logp_dense_.back() + ly;
          logp_comp_ = (lt - logp_dense_.back()) - ly;
          logp_dense_.push_back(lt);
        }
      }
    }
    sieved_to_ = new_limit;
  }
}

void PrimeTable::ensure_count(std::uint64_t n) {
  std::lock_guard<std::mutex> lock(mu_);
  if (primes_.size() < n) extend_unlocked(n);
}

std::uint64_t PrimeTable::nth_prime(std::uint64_t i) {
  if (i < 1) throw DomainError("nth_prime: index is 1-based");
  ensure_count(i);
  std::lock_guard<std::mutex> lock(mu_);
  return primes_[i - 1];
}

std::uint64_t PrimeTable::count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return primes_.size();
}

double PrimeTable::recip_prefix_mid(std::uint64_t t) {
  if (t > kDenseCap)
    throw ResourceError("recip_prefix_mid: beyond the dense prefix range");
  ensure_count(t);
  std::lock_guard<std::mutex> lock(mu_);
  return recip_dense_[t];
}

double PrimeTable::log_primorial(std::uint64_t t) {
  if (t > kDenseCap)
    throw ResourceError("log_primorial: beyond the dense prefix range");
  ensure_count(t);
  std::lock_guard<std::mutex> lock(mu_);
  return logp_dense_[t];
}

Interval PrimeTable::recip_prefix(std::uint64_t t) {
  if (t == 0) return {0.0, 0.0};
  ensure_count(t);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = recip_memo_.find(t);
  if (it != recip_memo_.end()) return it->second;

  mpfr_t lo, hi, term;
  mpfr_init2(lo, 96);
  mpfr_init2(hi, 96);
  mpfr_init2(term, 96);
  mpfr_set_zero(lo, 0);
  mpfr_set_zero(hi, 0);
  mpfr_set_zero(term, 0);
  for (std::uint64_t i = 0; i < t; ++i) {
    mpfr_set_ui(term, primes_[i], MPFR_RNDN);
    mpfr_ui_div(term, 1, term, MPFR_RNDD);
    mpfr_add(lo, lo, term, MPFR_RNDD);
  }
  for (std::uint64_t i = 0; i < t; ++i) {
    mpfr_set_ui(term, primes_[i], MPFR_RNDN);
    mpfr_ui_div(term, 1, term, MPFR_RNDU);
    mpfr_add(hi, hi, term, MPFR_RNDU);
  }
  Interval out{mpfr_get_d(lo, MPFR_RNDD), mpfr_get_d(hi, MPFR_RNDU)};
  mpfr_clear(lo);
  mpfr_clear(hi);
  mpfr_clear(term);
  recip_memo_[t] = out;
  return out;
}

double mertens_upper(double n) {
  if (n < 2) throw DomainError("mertens_upper: n must be >= 2");
  const double M_hi = 0.26150;
  double ln = std::log(n);
  return std::log(ln) + M_hi + 4.0 / std::log(n + 1.0) + 2.0 / (n * ln);
}

double pi_lower(double x) {
  if (x < 59) throw DomainError("pi_lower: valid for x >= 59 only");
  double lx = std::log(x);
  return x / lx * (1.0 + 1.0 / (2.0 * lx));
}

double pi_upper(double x) {
  if (x <= 1) throw DomainError("pi_upper: valid for x > 1 only");
  double lx = std::log(x);
  return x / lx * (1.0 + 3.0 / (2.0 * lx));
}

}  // namespace primsieve
