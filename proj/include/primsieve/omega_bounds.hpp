#pragma once

#include <cstdint>
#include <optional>

#include "primsieve/numtheory.hpp"

namespace primsieve {

enum class Track { general, even_r };

// Per-q constants of the omega-elimination pipeline. q = 3 runs on the
// even-r track, q >= 4 on the general track.
struct BoundProfile {
  unsigned q = 0;
  Track track = Track::general;
  double c = 0.0;            // log_q(q-1) - 3/4 (general track)
  double k_denominator = 0;  // log(q-1) - (3/4)log q, or half/quarter form
  double k_shift = 0.0;      // + log q on the general track, 0 on even_r
  double r_const = 0.0;      // 3 (general) or 4 (even_r) inside R

  static BoundProfile for_q(unsigned q);
};

struct CheckOmegaResult {
  bool eliminated = false;
  double k_of_r = 0.0;  // (K o R)(omega), the induced r-threshold
  double b_of_k = 0.0;
  double delta = 0.0;
};

// The omega-elimination criterion: eliminated iff omega >= (B o K o R)(omega)
// with a 1e-9 relative guard band (near-ties report not-eliminated).
CheckOmegaResult check_omega(unsigned q, std::uint64_t omega, std::uint64_t t,
                             PrimeTable& primes);

// Smallest N with (1/q)(p_1...p_N)^c > 3*4^N and p_N^c > 4; valid for
// q in {5,7,8,9}.
std::uint64_t naive_prime_limit(unsigned q, PrimeTable& primes);

struct CrudeBound {
  double r_limit = 0.0;
  double omega_limit = 0.0;
};

// The unsieved crude thresholds for q = 4 (general) and q = 3 (even r).
CrudeBound crude_r_bound(unsigned q);
// The defining inequality behind crude_r_bound, exposed so the thresholds
// can be re-verified (holds at r_limit, fails at r_limit/10).
bool crude_inequality_holds(unsigned q, double r);

struct LeapState {
  unsigned q = 0;
  std::uint64_t omega0 = 0;
  std::uint64_t t = 0;
  double m = 0.0;
  double delta_omega0_lower = 0.0;  // certified
  double r_omega0 = 0.0;            // the m-substituted variant
  double k_r = 0.0;
  double b_k_r = 0.0;
  double k_R_lower = 0.0;
  double n_chosen = 0.0;  // Mertens cutoff
  std::uint64_t omega1 = 0;
  double prefix_upper_at_omega1 = 0.0;  // feeds the next leap
};

// One leap: starting from an eliminated omega0 with delta(omega0) > m,
// certifies elimination of all omega in (omega0, omega1]. When omega0 is
// beyond the sieve budget, prefix_upper_at_omega0 (an upper bound on
// sum_{i<=omega0} 1/p_i, e.g. from the previous leap) must be supplied.
LeapState leap(unsigned q, std::uint64_t omega0, std::uint64_t t, double m,
               PrimeTable& primes,
               std::optional<double> prefix_upper_at_omega0 = std::nullopt);

// Certified ceiling on omega_r when G_A lacks a primitive element:
// Table-1 style limits for q in {5,7,8,9}, crude bound + leap chain
// down to 1e5 for q in {3,4}.
std::uint64_t omega_ceiling(unsigned q, PrimeTable& primes);

struct SweepResult {
  std::uint64_t omega_threshold = 0;
  std::uint64_t r_threshold = 0;
  bool even_only = false;
  std::uint64_t t_used = 0;
  std::uint64_t omega0_used = 0;
  double k_of_r = 0.0;
};

// Downward scan reproducing the published omega/r thresholds.
SweepResult table2_sweep(unsigned q, PrimeTable& primes);

}  // namespace primsieve
