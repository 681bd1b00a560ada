#include "primsieve/criteria.hpp"

#include <algorithm>
#include <tuple>

namespace primsieve {

mpz_class pow_ui(const mpz_class& base, unsigned long e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

namespace {

// sign of a + b*sqrt(q)
int quad_sign(const mpz_class& a, const mpz_class& b, unsigned q) {
  if (a >= 0 && b >= 0) return (a > 0 || b > 0) ? 1 : 0;
  if (a <= 0 && b <= 0) return (a < 0 || b < 0) ? -1 : 0;
  mpz_class lhs = a * a, rhs = b * b * q;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;
  return (a > 0) == (c > 0) ? 1 : -1;
}

std::vector<mpz_class> prime_list(const Factorization& base) {
  std::vector<mpz_class> out;
  out.reserve(base.omega());
  for (const auto& f : base.factors()) out.push_back(f.p);
  return out;  // ascending
}

mpq_class recip_sum(const std::vector<mpz_class>& ps) {
  mpq_class s = 0;
  for (const auto& p : ps) s += mpq_class(1, p);
  return s;
}

}  // namespace

SieveConfig make_config(const Factorization& base, std::size_t s1,
                        std::size_t s2) {
  auto primes = prime_list(base);
  const std::size_t omega = primes.size();
  if (s1 + s2 > omega)
    throw DomainError("make_config: s1 + s2 exceeds omega");
  SieveConfig c;
  c.rad = base.rad();
  c.modified.assign(primes.end() - s2, primes.end());
  c.sieved.assign(primes.end() - s2 - s1, primes.end() - s2);
  c.core.assign(primes.begin(), primes.end() - s2 - s1);
  c.delta = 1 - recip_sum(c.sieved);
  c.epsilon = recip_sum(c.modified);
  c.rho_core = 1;
  for (const auto& p : c.core) c.rho_core *= mpq_class(p - 1, p);
  c.rho_core.canonicalize();
  c.w_core = 1;
  mpz_mul_2exp(c.w_core.get_mpz_t(), c.w_core.get_mpz_t(), c.core.size());
  return c;
}

mpq_class sieve_threshold(const SieveConfig& config) {
  if (!config.valid())
    throw DomainError("sieve_threshold: invalid config, delta*rho(k) <= eps");
  mpq_class rho = config.rho_core;
  mpq_class w(config.w_core);
  mpq_class s1(static_cast<unsigned long>(config.sieved.size()));
  mpq_class s2(static_cast<unsigned long>(config.modified.size()));
  mpq_class num = rho * w * (s1 + 2 * config.delta - 1) + s2 -
                  config.delta * rho - config.epsilon;
  mpq_class den = config.delta * rho - config.epsilon;
  mpq_class t = num / den;
  t.canonicalize();
  return t;
}

namespace {

SieveConfig exhaustive_choose(const Factorization& base) {
  auto primes = prime_list(base);
  const std::size_t omega = primes.size();
  if (omega > 8)
    throw DomainError("choose_config: exhaustive search capped at omega <= 8");
  std::size_t total = 1;
  for (std::size_t i = 0; i < omega; ++i) total *= 3;
  bool have = false;
  SieveConfig best;
  mpq_class best_t;
  for (std::size_t code = 0; code < total; ++code) {
    SieveConfig c;
    c.rad = base.rad();
    std::size_t x = code;
    for (std::size_t i = 0; i < omega; ++i, x /= 3) {
      switch (x % 3) {
        case 0: c.core.push_back(primes[i]); break;
        case 1: c.sieved.push_back(primes[i]); break;
        default: c.modified.push_back(primes[i]); break;
      }
    }
    c.delta = 1 - recip_sum(c.sieved);
    c.epsilon = recip_sum(c.modified);
    c.rho_core = 1;
    for (const auto& p : c.core) c.rho_core *= mpq_class(p - 1, p);
    c.rho_core.canonicalize();
    c.w_core = 1;
    mpz_mul_2exp(c.w_core.get_mpz_t(), c.w_core.get_mpz_t(), c.core.size());
    if (!c.valid()) continue;
    mpq_class t = sieve_threshold(c);
    auto size_key = c.sieved.size() + c.modified.size();
    if (!have || t < best_t ||
        (t == best_t &&
         std::make_pair(size_key, c.modified.size()) <
             std::make_pair(best.sieved.size() + best.modified.size(),
                            best.modified.size()))) {
      have = true;
      best = c;
      best_t = t;
    }
  }
  return best;
}

}  // namespace

SieveConfig choose_config(const Factorization& base, bool exhaustive) {
  if (exhaustive) return exhaustive_choose(base);
  const std::size_t omega = base.omega();
  bool have = false;
  SieveConfig best;
  mpq_class best_t;
  for (std::size_t s2 = 0; s2 <= omega; ++s2) {
    for (std::size_t s1 = 0; s1 + s2 <= omega; ++s1) {
      SieveConfig c = make_config(base, s1, s2);
      if (!c.valid()) continue;
      mpq_class t = sieve_threshold(c);
      if (!have || t < best_t ||
          (t == best_t &&
           std::make_pair(s1 + s2, s2) <
               std::make_pair(best.sieved.size() + best.modified.size(),
                              best.modified.size()))) {
        have = true;
        best = c;
        best_t = t;
      }
    }
  }
  return best;  // (0,0) is always valid, so `best` is set
}

GenericConfig generic_prime_config(std::size_t omega_r, std::size_t s1,
                                   std::size_t s2, PrimeTable& primes) {
  if (s1 + s2 > omega_r)
    throw DomainError("generic_prime_config: s1 + s2 exceeds omega_r");
  GenericConfig g;
  primes.ensure_count(omega_r);
  // l's occupy the top s2 prime indices, p's the s1 below them
  g.epsilon = 0;
  for (std::size_t j = 0; j < s2; ++j)
    g.epsilon += mpq_class(1, static_cast<unsigned long>(
                                  primes.nth_prime(omega_r - j)));
  g.delta = 1;
  for (std::size_t i = 0; i < s1; ++i)
    g.delta -= mpq_class(1, static_cast<unsigned long>(
                                primes.nth_prime(omega_r - s2 - i)));
  g.rho_lower = 1;
  for (std::size_t i = 1; i + s1 + s2 <= omega_r; ++i) {
    unsigned long p = primes.nth_prime(i);
    g.rho_lower *= mpq_class(p - 1, p);
  }
  g.rho_lower.canonicalize();
  g.w = 1;
  mpz_mul_2exp(g.w.get_mpz_t(), g.w.get_mpz_t(), omega_r - s1 - s2);
  g.valid = g.delta * g.rho_lower > g.epsilon;
  if (g.valid) {
    mpq_class num = g.rho_lower * mpq_class(g.w) *
                        (mpq_class(static_cast<unsigned long>(s1)) +
                         2 * g.delta - 1) +
                    mpq_class(static_cast<unsigned long>(s2)) -
                    g.delta * g.rho_lower - g.epsilon;
    g.threshold = num / (g.delta * g.rho_lower - g.epsilon);
    g.threshold.canonicalize();
  }
  return g;
}

CharBound char_bound(CharBoundKind kind, unsigned q, unsigned r) {
  if (r < 2) throw DomainError("char_bound: r must be >= 2");
  CharBound b;
  b.kind = kind;
  b.q = q;
  b.r = r;
  const mpz_class qz = q;
  const mpz_class qm1 = q - 1;
  switch (kind) {
    case CharBoundKind::katz_ceiling: {
      b.k_used = (3 * r + 3) / 4;  // ceil(3r/4)
      b.sq_int = 3 * pow_ui(qm1, r) * pow_ui(qz, b.k_used);
      b.sq_surd = 0;
      break;
    }
    case CharBoundKind::katz_optimal_k: {
      // minimize 2q^{3r/2-k} + q^k over k = 1..r, exactly in Z[sqrt(q)]
      auto value = [&](unsigned k) -> std::pair<mpz_class, mpz_class> {
        unsigned x = 3 * r - 2 * k;  // 2*(3r/2 - k)
        if (x % 2 == 0) return {2 * pow_ui(qz, x / 2) + pow_ui(qz, k), 0};
        return {pow_ui(qz, k), 2 * pow_ui(qz, (x - 1) / 2)};
      };
      unsigned best_k = 1;
      auto best = value(1);
      for (unsigned k = 2; k <= r; ++k) {
        auto v = value(k);
        if (quad_sign(best.first - v.first, best.second - v.second, q) > 0) {
          best = v;
          best_k = k;
        }
      }
      mpz_class scale = pow_ui(qm1, r);
      b.k_used = best_k;
      b.sq_int = scale * best.first;
      b.sq_surd = scale * best.second;
      break;
    }
    case CharBoundKind::even_r: {
      if (r % 2 != 0)
        throw DomainError("char_bound: even_r bound needs even r");
      mpz_class head = 4 * pow_ui(qm1, 3 * r / 2);
      if (r % 4 == 0) {
        b.sq_int = head * pow_ui(qz, r / 4);
        b.sq_surd = 0;
      } else {
        b.sq_int = 0;
        b.sq_surd = head * pow_ui(qz, (r - 2) / 4);
      }
      break;
    }
  }
  return b;
}

bool exceeds_scaled_bound(const mpq_class& x, const mpq_class& t_sq,
                          const mpz_class& a, const mpz_class& b, unsigned q) {
  mpq_class l = x - t_sq * mpq_class(a);
  if (l <= 0) return false;
  if (b == 0) return true;
  return l * l > t_sq * t_sq * mpq_class(b * b) * q;
}

namespace {

bool hypersieve_branch(unsigned q, unsigned r, const Factorization& base,
                       const CharBound& bound, int* s_out) {
  auto primes = prime_list(base);
  const std::size_t omega = primes.size();
  const mpq_class lhs(pow_ui(mpz_class(q - 1), 2 * r));
  mpq_class tail = 0;  // sum of 1/p over the s largest primes
  for (std::size_t s = 0; s <= omega; ++s) {
    if (s > 0) tail += mpq_class(1, primes[omega - s]);
    mpq_class delta = 1 - tail;
    if (delta <= 0) break;
    mpq_class w(pow_ui(2, omega - s));
    mpq_class t = w * ((mpq_class(static_cast<unsigned long>(s)) - 1) / delta +
                       2) -
                  1;
    if (exceeds_scaled_bound(lhs, t * t, bound.sq_int, bound.sq_surd, q)) {
      if (s_out) *s_out = static_cast<int>(s);
      return true;
    }
  }
  return false;
}

}  // namespace

bool hypersieve_general(unsigned q, unsigned r, const Factorization& base,
                        int* s_out) {
  return hypersieve_branch(q, r, base,
                           char_bound(CharBoundKind::katz_optimal_k, q, r),
                           s_out);
}

bool hypersieve_even(unsigned q, unsigned r, const Factorization& base,
                     int* s_out) {
  if (r % 2 != 0) return false;
  return hypersieve_branch(q, r, base,
                           char_bound(CharBoundKind::even_r, q, r), s_out);
}

ClassificationRecord hypersieve_check(unsigned q, unsigned r,
                                      const Factorization& base) {
  ClassificationRecord rec;
  rec.q = q;
  rec.r = r;
  int s = -1;
  if (hypersieve_general(q, r, base, &s)) {
    rec.verdict = Verdict::eliminated;
    rec.criterion = "hypersieve";
    rec.s_used = s;
    rec.bound_kind = CharBoundKind::katz_optimal_k;
    return rec;
  }
  if (hypersieve_even(q, r, base, &s)) {
    rec.verdict = Verdict::eliminated;
    rec.criterion = "hypersieve_even";
    rec.s_used = s;
    rec.bound_kind = CharBoundKind::even_r;
    return rec;
  }
  rec.verdict = Verdict::possible_exception;
  return rec;
}

bool fr_criterion1(unsigned q, unsigned r, const mpz_class& phi_of_order) {
  return pow_ui(mpz_class(q - 1), r) > pow_ui(mpz_class(q), r) - phi_of_order;
}

bool fr_criterion2(unsigned q, unsigned r, std::size_t omega_r) {
  // alpha(q,r) = sum_{i<r} C(r,i) q^{min(i, r/2)}, r/2 taken literally:
  // odd r contributes q^{(r-1)/2} * sqrt(q) terms for 2i > r.
  const mpz_class qz = q;
  mpz_class a = 0, b = 0;
  for (unsigned i = 0; i < r; ++i) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), r, i);
    if (2 * i <= r)
      a += binom * pow_ui(qz, i);
    else if (r % 2 == 0)
      a += binom * pow_ui(qz, r / 2);
    else
      b += binom * pow_ui(qz, (r - 1) / 2);
  }
  mpq_class w(pow_ui(2, omega_r));
  return exceeds_scaled_bound(mpq_class(pow_ui(mpz_class(q - 1), r)), w, a, b,
                              q);
}

ClassificationRecord classify(unsigned q, unsigned r,
                              const Factorization& order_fact,
                              bool genuine_certificate) {
  mpz_class order = pow_ui(mpz_class(q), r) - 1;
  if (order_fact.n() != order)
    throw DomainError("classify: factorization is not of q^r-1 for q=" +
                      std::to_string(q) + " r=" + std::to_string(r));
  ClassificationRecord rec = hypersieve_check(q, r, order_fact);
  if (rec.verdict == Verdict::eliminated) return rec;
  if (fr_criterion1(q, r, order_fact.phi())) {
    rec.verdict = Verdict::eliminated;
    rec.criterion = "fr1";
    return rec;
  }
  if (fr_criterion2(q, r, order_fact.omega())) {
    rec.verdict = Verdict::eliminated;
    rec.criterion = "fr2";
    return rec;
  }
  rec.verdict = genuine_certificate ? Verdict::genuine_exception
                                    : Verdict::possible_exception;
  return rec;
}

}  // namespace primsieve
