#include "primsieve/omega_bounds.hpp"

#include <cmath>

namespace primsieve {

namespace {

constexpr double kGuard = 1e-9;

const std::uint64_t kTSet[] = {2, 3, 4, 5, 6, 7, 8, 9, 10, 33, 41};

// log(e^L - 1), stable for large L
double log_em1(double l) {
  if (l > 50.0) return l;
  return l + std::log1p(-std::exp(-l));
}

double robin_omega(unsigned q, double r) {
  return 0.96 * r * std::log2((double)q) /
         (std::log(r) + std::log(std::log((double)q)));
}

}  // namespace

BoundProfile BoundProfile::for_q(unsigned q) {
  if (q < 3) throw DomainError("BoundProfile: q must be >= 3");
  BoundProfile p;
  p.q = q;
  double lq = std::log((double)q);
  double lqm1 = std::log((double)(q - 1));
  if (q == 3) {
    p.track = Track::even_r;
    p.c = 0.0;
    p.k_denominator = 0.5 * lqm1 - 0.25 * lq;
    p.k_shift = 0.0;
    p.r_const = 4.0;
  } else {
    p.track = Track::general;
    p.c = lqm1 / lq - 0.75;
    p.k_denominator = lqm1 - 0.75 * lq;
    p.k_shift = lq;
    p.r_const = 3.0;
    if (p.k_denominator <= 0)
      throw DomainError("BoundProfile: general track needs q >= 4");
  }
  return p;
}

CheckOmegaResult check_omega(unsigned q, std::uint64_t omega, std::uint64_t t,
                             PrimeTable& primes) {
  if (t > omega) throw DomainError("check_omega: need t <= omega");
  BoundProfile prof = BoundProfile::for_q(q);
  double s = static_cast<double>(omega - t);
  double delta =
      1.0 - (primes.recip_prefix_mid(omega) - primes.recip_prefix_mid(t));
  if (delta <= 0) throw DomainError("check_omega: delta(omega) <= 0");
  double arg = (s - 1.0) / delta + 2.0;
  if (arg <= 0) throw DomainError("check_omega: degenerate threshold");
  double inner = static_cast<double>(t) * std::log(2.0) + std::log(arg);
  double big_r = std::log(prof.r_const) + 2.0 * log_em1(inner);
  double k = (big_r + prof.k_shift) / prof.k_denominator;
  double b = 0.96 * k * std::log2((double)q) /
             (std::log(k) + std::log(std::log((double)q)));
  CheckOmegaResult res;
  res.k_of_r = k;
  res.b_of_k = b;
  res.delta = delta;
  res.eliminated =
      static_cast<double>(omega) >= b + kGuard * std::max(1.0, std::fabs(b));
  return res;
}

std::uint64_t naive_prime_limit(unsigned q, PrimeTable& primes) {
  if (q != 5 && q != 7 && q != 8 && q != 9)
    throw DomainError("naive_prime_limit: defined for q in {5,7,8,9}");
  BoundProfile prof = BoundProfile::for_q(q);
  const double l4 = std::log(4.0), l3 = std::log(3.0),
               lq = std::log((double)q);
  for (std::uint64_t n = 1; n <= PrimeTable::kDenseCap; ++n) {
    if (prof.c * primes.log_primorial(n) - lq > l3 + (double)n * l4 &&
        prof.c * std::log((double)primes.nth_prime(n)) > l4)
      return n;
  }
  throw ResourceError("naive_prime_limit: no N within the dense prime range");
}

bool crude_inequality_holds(unsigned q, double r) {
  double lq = std::log((double)q);
  double lqm1 = std::log((double)(q - 1));
  if (q == 4) {
    double lhs = 1.92 * lq / (std::log(r) + std::log(lq));
    double rhs = -std::log(3.0 * q) / r + (lqm1 - 0.75 * lq);
    return lhs < rhs;
  }
  if (q == 3) {
    double lhs = 0.96 * lq / (std::log(r) + std::log(lq));
    double rhs = -std::log(2.0) / r + 0.25 * lqm1 - 0.125 * lq;
    return lhs < rhs;
  }
  throw DomainError("crude_inequality_holds: q must be 3 or 4");
}

CrudeBound crude_r_bound(unsigned q) {
  CrudeBound b;
  if (q == 4) {
    b.r_limit = 3.07e19;
    b.omega_limit = 1.31e18;
  } else if (q == 3) {
    b.r_limit = 4.972e12;
    b.omega_limit = 2.58e11;
  } else {
    throw DomainError("crude_r_bound: q must be 3 or 4");
  }
  if (!crude_inequality_holds(q, b.r_limit) ||
      robin_omega(q, b.r_limit) > b.omega_limit)
    throw DomainError("crude_r_bound: stored threshold failed re-verification");
  return b;
}

LeapState leap(unsigned q, std::uint64_t omega0, std::uint64_t t, double m,
               PrimeTable& primes,
               std::optional<double> prefix_upper_at_omega0) {
  if (m <= 0 || t > omega0) throw DomainError("leap: need 0 < m, t <= omega0");
  BoundProfile prof = BoundProfile::for_q(q);
  const double s_min = (prof.track == Track::even_r) ? 15.0 : 19.0;
  const double kr_min = (prof.track == Track::even_r) ? 7.0 : 6.0;
  const double kR_min = (prof.track == Track::even_r) ? 3.0 : 2.0;

  LeapState st;
  st.q = q;
  st.omega0 = omega0;
  st.t = t;
  st.m = m;

  Interval pre_t = primes.recip_prefix(t);
  double upper0;
  double lower0 = 0.0;
  bool have_lower0 = false;
  if (prefix_upper_at_omega0) {
    upper0 = *prefix_upper_at_omega0;
  } else {
    Interval pre0 = primes.recip_prefix(omega0);
    upper0 = pre0.hi;
    lower0 = pre0.lo;
    have_lower0 = true;
  }
  st.delta_omega0_lower = 1.0 - upper0 + pre_t.lo;
  if (!(st.delta_omega0_lower > m))
    throw DomainError("leap: side condition delta(omega0) > m failed");

  double s = static_cast<double>(omega0 - t);
  if (s < s_min)
    throw DomainError("leap: side condition s(omega0) >= " +
                      std::to_string((int)s_min) + " failed");

  const double l2 = std::log(2.0);
  st.r_omega0 =
      std::log(prof.r_const) + 2.0 * ((double)t * l2 + std::log((s - 1.0) / m + 2.0));
  st.k_r = (st.r_omega0 + prof.k_shift) / prof.k_denominator;
  if (st.k_r < kr_min)
    throw DomainError("leap: side condition (K o r)(omega0) >= " +
                      std::to_string((int)kr_min) + " failed");
  st.b_k_r = 0.96 * st.k_r * std::log2((double)q) /
             (std::log(st.k_r) + std::log(std::log((double)q)));
  if (!((double)omega0 >= st.b_k_r))
    throw DomainError("leap: side condition omega0 >= (B o K o r)(omega0) failed");

  // lower bound (K o R)(omega0); delta <= 1 always, certified delta upper
  // bound when the prefix interval is available
  double delta_hi = 1.0;
  if (have_lower0) delta_hi = std::min(1.0, 1.0 - lower0 + pre_t.hi);
  double inner = (double)t * l2 + std::log((s - 1.0) / delta_hi + 2.0);
  double big_r_lower = std::log(prof.r_const) + 2.0 * log_em1(inner);
  st.k_R_lower = (big_r_lower + prof.k_shift) / prof.k_denominator;
  if (st.k_R_lower < kR_min)
    throw DomainError("leap: side condition (K o R)(omega0) >= " +
                      std::to_string((int)kR_min) + " failed");

  // largest n with mertens_upper(n) < (1 - m) + certified lower prefix sum
  double target = (1.0 - m) + pre_t.lo;
  double lo = 59.0, hi = 1e30;
  if (!(mertens_upper(lo) < target))
    throw DomainError("leap: no Mertens cutoff reaches the target");
  for (int i = 0; i < 200; ++i) {
    double mid = std::sqrt(lo * hi);
    if (mertens_upper(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  st.n_chosen = lo;
  st.omega1 = static_cast<std::uint64_t>(std::floor(pi_lower(lo)));
  st.prefix_upper_at_omega1 = mertens_upper(lo);
  if (st.omega1 <= omega0)
    throw DomainError("leap: certified omega1 does not exceed omega0");
  return st;
}

std::uint64_t omega_ceiling(unsigned q, PrimeTable& primes) {
  switch (q) {
    case 5:
    case 7:
    case 8:
    case 9:
      return naive_prime_limit(q, primes) - 1;
    case 4: {
      CrudeBound crude = crude_r_bound(4);
      LeapState l1 = leap(4, 100'000, 30'000, 0.05, primes);
      LeapState l2 = leap(4, l1.omega1, 15'000'000, 0.05, primes,
                          l1.prefix_upper_at_omega1);
      if ((double)l2.omega1 < crude.omega_limit)
        throw DomainError("omega_ceiling: q=4 leap chain falls short");
      return 100'000;
    }
    case 3: {
      CrudeBound crude = crude_r_bound(3);
      LeapState l1 = leap(3, 100'000, 30'000, 0.01, primes);
      if ((double)l1.omega1 < crude.omega_limit)
        throw DomainError("omega_ceiling: q=3 leap falls short");
      return 100'000;
    }
    default:
      throw DomainError("omega_ceiling: unsupported q");
  }
}

SweepResult table2_sweep(unsigned q, PrimeTable& primes) {
  const std::uint64_t ceiling = omega_ceiling(q, primes);
  auto eliminated = [&](std::uint64_t omega, std::uint64_t t) -> bool {
    if (t > omega) return false;
    try {
      return check_omega(q, omega, t, primes).eliminated;
    } catch (const DomainError&) {
      return false;
    }
  };

  std::uint64_t omega_star = 2;
  for (std::uint64_t omega = ceiling; omega >= 2; --omega) {
    bool any = false;
    for (std::uint64_t t : kTSet) {
      if (eliminated(omega, t)) {
        any = true;
        break;
      }
    }
    if (!any) {
      omega_star = omega + 1;
      break;
    }
  }

  // pick the t whose run ends at the threshold. On the general track this
  // is the smallest t eliminating omega_star itself, and omega0 is the
  // value below it. On the even-r track it is the smallest t whose run
  // starts just above omega_star, so omega0 is omega_star.
  std::uint64_t t_star = 0;
  std::uint64_t omega0 = 0;
  if (q == 3) {
    for (std::uint64_t t : kTSet) {
      if (eliminated(omega_star + 1, t) && !eliminated(omega_star, t)) {
        t_star = t;
        break;
      }
    }
    omega0 = omega_star;
  } else {
    for (std::uint64_t t : kTSet) {
      if (eliminated(omega_star, t)) {
        t_star = t;
        break;
      }
    }
    omega0 = omega_star - 1;
  }
  if (t_star == 0)
    throw DomainError("table2_sweep: no t starts a run at omega_star");

  CheckOmegaResult at0 = check_omega(q, omega0, t_star, primes);
  SweepResult res;
  res.omega_threshold = omega_star;
  res.even_only = (q == 3);
  res.t_used = t_star;
  res.omega0_used = omega0;
  res.k_of_r = at0.k_of_r;
  res.r_threshold = static_cast<std::uint64_t>(std::floor(at0.k_of_r)) + 1;
  if (res.even_only && res.r_threshold % 2 != 0) ++res.r_threshold;
  return res;
}

}  // namespace primsieve
