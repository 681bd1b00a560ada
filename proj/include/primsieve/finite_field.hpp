#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primsieve/numtheory.hpp"

namespace primsieve {

// Explicit small finite fields F_{q^r} (q = p^k) with full discrete-log
// tables. Elements are codes in [0, q^r): the base-q digits are the
// coefficients over F_q in the power basis of the extension polynomial,
// and each F_q digit is itself a base-p coefficient code.
class FieldCtx;

struct FieldOptions {
  // monic, ascending coefficients, degree k over F_p
  std::optional<std::vector<unsigned>> base_poly;
  // monic, ascending coefficients (F_q codes), degree r over F_q
  std::optional<std::vector<unsigned>> ext_poly;
  std::optional<std::uint32_t> generator;  // element code hint
  std::uint64_t seed = 0;
};

struct Character {
  std::uint64_t j = 0;      // index into the dual of the cyclic group
  std::uint64_t order = 1;  // (q^r-1)/gcd(j, q^r-1)
};

class FieldCtx {
 public:
  static constexpr std::uint64_t kSizeCeiling = 531441;  // 3^12

  FieldCtx(unsigned p, unsigned k, unsigned r, const FieldOptions& opts = {});

  unsigned p() const { return p_; }
  unsigned k() const { return k_; }
  unsigned r() const { return r_; }
  unsigned q() const { return q_; }
  std::uint64_t order() const { return n_; }  // q^r
  std::uint32_t generator() const { return gen_; }
  const Factorization& order_fact() const { return order_fact_; }
  const std::vector<unsigned>& base_poly() const { return base_poly_; }
  const std::vector<unsigned>& ext_poly() const { return ext_poly_; }

  // F_q arithmetic on subfield codes
  unsigned q_add(unsigned a, unsigned b) const { return q_add_[a * q_ + b]; }
  unsigned q_mul(unsigned a, unsigned b) const { return q_mul_[a * q_ + b]; }
  unsigned q_neg(unsigned a) const { return q_neg_[a]; }
  unsigned q_inv(unsigned a) const;

  // field element arithmetic on codes
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  unsigned coeff(std::uint32_t elem, unsigned i) const;  // F_q digit i

  std::uint64_t dlog(std::uint32_t elem) const;  // elem != 0
  std::uint32_t exp(std::uint64_t t) const;      // g^t

  Character character(std::uint64_t j) const;
  std::complex<double> chi(const Character& c, std::uint32_t elem) const;

  std::string to_string(std::uint32_t elem) const;  // "[c0,c1,...]" F_q codes
  std::optional<std::uint32_t> parse_element(const std::string& s) const;

 private:
  unsigned p_, k_, r_, q_;
  std::uint64_t n_;
  std::vector<unsigned> base_poly_, ext_poly_;
  std::vector<unsigned> q_add_, q_mul_, q_neg_, q_inv_;
  std::uint32_t gen_ = 0;
  std::vector<std::uint32_t> exp_, dlog_;
  Factorization order_fact_{mpz_class(1), {}};

  void build_subfield_tables();
  void pick_ext_poly(const FieldOptions& opts);
  void pick_generator(const FieldOptions& opts);
};

// true iff no prime of e divides dlog(elem); elem must be nonzero,
// e must divide q^r - 1
bool is_e_free(const FieldCtx& ctx, std::uint32_t elem, std::uint64_t e);

// exact count over the subset by direct testing; zero never counts
std::uint64_t count_e_free(const FieldCtx& ctx,
                           const std::vector<std::uint32_t>& subset,
                           std::uint64_t e);

// sum of chi over the subset, chi(0) = 0, compensated summation
std::complex<double> char_sum(const FieldCtx& ctx,
                              const std::vector<std::uint32_t>& subset,
                              const Character& chr);

// the character-sum expansion of the e-free count; must land within 1e-6
// of count_e_free. The subset must avoid 0.
double vinogradov_count(const FieldCtx& ctx,
                        const std::vector<std::uint32_t>& subset,
                        std::uint64_t e);

// max |char_sum| over all nontrivial characters
double true_K(const FieldCtx& ctx, const std::vector<std::uint32_t>& subset);

std::vector<std::uint32_t> all_nonzero(const FieldCtx& ctx);

inline FieldCtx build_field(unsigned p, unsigned k, unsigned r,
                            const FieldOptions& opts = {}) {
  return FieldCtx(p, k, r, opts);
}

// q given as a prime power; the three canonical presentations for
// (3,2), (5,2), (3,3) are applied automatically unless opts overrides them
FieldCtx build_field_q(unsigned q, unsigned r, FieldOptions opts = {});

}  // namespace primsieve
