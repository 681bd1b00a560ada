#include "primsieve/finite_field.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <numbers>
#include <sstream>

namespace primsieve {

namespace {

using Poly = std::vector<unsigned>;

// coefficient-field view backed by flat q*q tables
struct Coef {
  unsigned q;
  const std::vector<unsigned>*add, *mul, *neg;
  unsigned a(unsigned x, unsigned y) const { return (*add)[x * q + y]; }
  unsigned m(unsigned x, unsigned y) const { return (*mul)[x * q + y]; }
  unsigned n(unsigned x) const { return (*neg)[x]; }
};

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int deg(const Poly& f) { return (int)f.size() - 1; }  // zero poly: -1

Poly poly_mul(const Coef& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = F.a(c[i + j], F.m(a[i], b[j]));
  trim(c);
  return c;
}

// remainder mod a monic modulus
Poly poly_mod(const Coef& F, Poly a, const Poly& m) {
  while (deg(a) >= deg(m)) {
    unsigned lead = a.back();
    size_t shift = a.size() - m.size();
    if (lead != 0)
      for (size_t i = 0; i < m.size(); ++i)
        a[shift + i] = F.a(a[shift + i], F.n(F.m(lead, m[i])));
    a.pop_back();
    trim(a);
  }
  return a;
}

Poly poly_sub(const Coef& F, Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = F.a(a[i], F.n(b[i]));
  trim(a);
  return a;
}

Poly poly_powmod(const Coef& F, Poly base, std::uint64_t e, const Poly& m) {
  Poly r{1};
  base = poly_mod(F, std::move(base), m);
  while (e) {
    if (e & 1) r = poly_mod(F, poly_mul(F, r, base), m);
    base = poly_mod(F, poly_mul(F, base, base), m);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(const Coef& F, Poly a, Poly b) {
  // coefficients need no inversion until the end since we only compare
  // degrees; make divisors monic on the fly instead
  while (!b.empty()) {
    // scale b monic: find inverse of lead by scan
    unsigned lead = b.back(), inv = 1;
    for (unsigned x = 1; x < F.q; ++x)
      if (F.m(lead, x) == 1) {
        inv = x;
        break;
      }
    for (auto& c : b) c = F.m(c, inv);
    Poly r = poly_mod(F, std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin's test; m monic of degree n over the q-element coefficient field
bool poly_irreducible(const Coef& F, const Poly& m) {
  int n = deg(m);
  if (n < 1) return false;
  if (n == 1) return true;
  std::uint64_t q = F.q;
  std::vector<int> rprimes;
  int t = n;
  for (int d = 2; d * d <= t; ++d)
    while (t % d == 0) {
      if (rprimes.empty() || rprimes.back() != d) rprimes.push_back(d);
      t /= d;
    }
  if (t > 1) rprimes.push_back(t);
  const Poly x{0, 1};
  std::uint64_t qn = 1;
  for (int i = 0; i < n; ++i) qn *= q;
  for (int rp : rprimes) {
    std::uint64_t e = 1;
    for (int i = 0; i < n / rp; ++i) e *= q;
    Poly g = poly_gcd(F, poly_sub(F, poly_powmod(F, x, e, m), x), m);
    if (deg(g) != 0) return false;
  }
  return poly_sub(F, poly_powmod(F, x, qn, m), x).empty();
}

}  // namespace

FieldCtx::FieldCtx(unsigned p, unsigned k, unsigned r, const FieldOptions& opts)
    : p_(p), k_(k), r_(r) {
  if (!is_prime(mpz_class(p))) throw DomainError("FieldCtx: p must be prime");
  if (k < 1 || r < 1) throw DomainError("FieldCtx: need k >= 1, r >= 1");
  double qd = std::pow((double)p, (double)k);
  if (qd > 1024) throw DomainError("FieldCtx: subfield q too large for tables");
  q_ = 1;
  for (unsigned i = 0; i < k; ++i) q_ *= p;
  double nd = std::pow((double)q_, (double)r);
  if (nd > (double)kSizeCeiling)
    throw ResourceError("FieldCtx: q^r exceeds the enumeration ceiling");
  n_ = 1;
  for (unsigned i = 0; i < r; ++i) n_ *= q_;

  if (opts.base_poly) {
    base_poly_ = *opts.base_poly;
    if (base_poly_.size() != k + 1 || base_poly_.back() != 1)
      throw DomainError("FieldCtx: base_poly must be monic of degree k");
    for (unsigned c : base_poly_)
      if (c >= p) throw DomainError("FieldCtx: base_poly coefficient out of range");
  }
  build_subfield_tables();
  pick_ext_poly(opts);

  order_fact_ = factorize(mpz_class((unsigned long)(n_ - 1)));
  pick_generator(opts);

  // dlog table + bijection certificate
  exp_.assign(n_ - 1, 0);
  dlog_.assign(n_, UINT32_MAX);
  std::uint32_t cur = 1;
  for (std::uint64_t t = 0; t + 1 < n_; ++t) {
    exp_[t] = cur;
    if (dlog_[cur] != UINT32_MAX)
      throw DomainError("FieldCtx: generator certificate failed (cycle)");
    dlog_[cur] = (std::uint32_t)t;
    cur = mul(cur, gen_);
  }
  if (cur != 1) throw DomainError("FieldCtx: g^(q^r-1) != 1");
  for (std::uint64_t e = 1; e < n_; ++e)
    if (dlog_[e] == UINT32_MAX)
      throw DomainError("FieldCtx: dlog is not a bijection");
}

void FieldCtx::build_subfield_tables() {
  if (k_ == 1) {
    if (base_poly_.empty()) base_poly_ = {0, 1};
    q_add_.resize(q_ * q_);
    q_mul_.resize(q_ * q_);
    q_neg_.resize(q_);
    for (unsigned a = 0; a < q_; ++a) {
      q_neg_[a] = (q_ - a) % q_;
      for (unsigned b = 0; b < q_; ++b) {
        q_add_[a * q_ + b] = (a + b) % q_;
        q_mul_[a * q_ + b] = (a * b) % q_;
      }
    }
  } else {
    // F_p tables for the constructor field
    std::vector<unsigned> padd(p_ * p_), pmul(p_ * p_), pneg(p_);
    for (unsigned a = 0; a < p_; ++a) {
      pneg[a] = (p_ - a) % p_;
      for (unsigned b = 0; b < p_; ++b) {
        padd[a * p_ + b] = (a + b) % p_;
        pmul[a * p_ + b] = (a * b) % p_;
      }
    }
    Coef fp{p_, &padd, &pmul, &pneg};
    if (base_poly_.empty()) {
      for (unsigned code = 0;; ++code) {
        if (code >= q_) throw DomainError("FieldCtx: no irreducible base_poly");
        Poly cand(k_ + 1, 0);
        cand[k_] = 1;
        unsigned c = code;
        for (unsigned i = 0; i < k_; ++i, c /= p_) cand[i] = c % p_;
        if (poly_irreducible(fp, cand)) {
          base_poly_ = cand;
          break;
        }
      }
    } else {
      if (!poly_irreducible(fp, base_poly_))
        throw DomainError("FieldCtx: supplied base_poly is reducible");
    }
    // build q x q tables by polynomial arithmetic mod base_poly
    auto decode = [&](unsigned code) {
      Poly f(k_, 0);
      for (unsigned i = 0; i < k_; ++i, code /= p_) f[i] = code % p_;
      trim(f);
      return f;
    };
    auto encode = [&](const Poly& f) {
      unsigned code = 0, mult = 1;
      for (unsigned i = 0; i < k_; ++i, mult *= p_)
        code += (i < f.size() ? f[i] : 0) * mult;
      return code;
    };
    q_add_.resize(q_ * q_);
    q_mul_.resize(q_ * q_);
    q_neg_.resize(q_);
    for (unsigned a = 0; a < q_; ++a) {
      Poly fa = decode(a);
      Poly na = fa;
      for (auto& c : na) c = fp.n(c);
      q_neg_[a] = encode(na);
      for (unsigned b = 0; b < q_; ++b) {
        Poly fb = decode(b);
        Poly s = fa;
        if (s.size() < fb.size()) s.resize(fb.size(), 0);
        for (size_t i = 0; i < fb.size(); ++i) s[i] = fp.a(s[i], fb[i]);
        q_add_[a * q_ + b] = encode(s);
        q_mul_[a * q_ + b] = encode(poly_mod(fp, poly_mul(fp, fa, fb), base_poly_));
      }
    }
  }
  q_inv_.assign(q_, 0);
  for (unsigned a = 1; a < q_; ++a)
    for (unsigned b = 1; b < q_; ++b)
      if (q_mul_[a * q_ + b] == 1) {
        q_inv_[a] = b;
        break;
      }
}

unsigned FieldCtx::q_inv(unsigned a) const {
  if (a == 0 || a >= q_) throw DomainError("q_inv: not a unit");
  return q_inv_[a];
}

void FieldCtx::pick_ext_poly(const FieldOptions& opts) {
  Coef fq{q_, &q_add_, &q_mul_, &q_neg_};
  if (r_ == 1) {
    ext_poly_ = opts.ext_poly ? *opts.ext_poly : Poly{0, 1};
    if (ext_poly_.size() != 2 || ext_poly_.back() != 1)
      throw DomainError("FieldCtx: ext_poly must be monic of degree r");
    return;
  }
  if (opts.ext_poly) {
    ext_poly_ = *opts.ext_poly;
    if (ext_poly_.size() != r_ + 1 || ext_poly_.back() != 1)
      throw DomainError("FieldCtx: ext_poly must be monic of degree r");
    for (unsigned c : ext_poly_)
      if (c >= q_) throw DomainError("FieldCtx: ext_poly coefficient out of range");
    if (!poly_irreducible(fq, ext_poly_))
      throw DomainError("FieldCtx: supplied ext_poly is reducible");
    return;
  }
  std::uint64_t start = opts.seed % n_;
  for (std::uint64_t i = 0; i < n_; ++i) {
    std::uint64_t code = (start + i) % n_;
    Poly cand(r_ + 1, 0);
    cand[r_] = 1;
    std::uint64_t c = code;
    for (unsigned d = 0; d < r_; ++d, c /= q_) cand[d] = (unsigned)(c % q_);
    if (poly_irreducible(fq, cand)) {
      ext_poly_ = cand;
      return;
    }
  }
  throw DomainError("FieldCtx: no irreducible ext_poly found");
}

std::uint32_t FieldCtx::add(std::uint32_t a, std::uint32_t b) const {
  std::uint32_t out = 0, mult = 1;
  for (unsigned i = 0; i < r_; ++i, mult *= q_) {
    out += q_add(a % q_, b % q_) * mult;
    a /= q_;
    b /= q_;
  }
  return out;
}

std::uint32_t FieldCtx::mul(std::uint32_t a, std::uint32_t b) const {
  if (r_ == 1) return q_mul(a, b);
  Coef fq{q_, &q_add_, &q_mul_, &q_neg_};
  Poly fa(r_), fb(r_);
  std::uint32_t ta = a, tb = b;
  for (unsigned i = 0; i < r_; ++i, ta /= q_, tb /= q_) {
    fa[i] = ta % q_;
    fb[i] = tb % q_;
  }
  trim(fa);
  trim(fb);
  Poly prod = poly_mod(fq, poly_mul(fq, fa, fb), ext_poly_);
  std::uint32_t out = 0, mult = 1;
  for (unsigned i = 0; i < r_; ++i, mult *= q_)
    out += (i < prod.size() ? prod[i] : 0) * mult;
  return out;
}

std::uint32_t FieldCtx::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

unsigned FieldCtx::coeff(std::uint32_t elem, unsigned i) const {
  for (unsigned j = 0; j < i; ++j) elem /= q_;
  return elem % q_;
}

void FieldCtx::pick_generator(const FieldOptions& opts) {
  auto primitive = [&](std::uint32_t g) {
    if (g == 0) return false;
    if (pow(g, n_ - 1) != 1) return false;
    for (const auto& pf : order_fact_.factors()) {
      unsigned long pl = pf.p.get_ui();
      if (pow(g, (n_ - 1) / pl) == 1) return false;
    }
    return true;
  };
  if (opts.generator) {
    if (!primitive(*opts.generator))
      throw DomainError("FieldCtx: supplied generator is not primitive");
    gen_ = *opts.generator;
    return;
  }
  std::uint64_t start = opts.seed % (n_ - 1);
  for (std::uint64_t i = 0; i < n_ - 1; ++i) {
    std::uint32_t g = (std::uint32_t)(1 + (start + i) % (n_ - 1));
    if (primitive(g)) {
      gen_ = g;
      return;
    }
  }
  throw DomainError("FieldCtx: no generator found");
}

std::uint64_t FieldCtx::dlog(std::uint32_t elem) const {
  if (elem == 0 || elem >= n_) throw DomainError("dlog: element must be nonzero");
  return dlog_[elem];
}

std::uint32_t FieldCtx::exp(std::uint64_t t) const { return exp_[t % (n_ - 1)]; }

Character FieldCtx::character(std::uint64_t j) const {
  std::uint64_t nm1 = n_ - 1;
  j %= nm1;
  std::uint64_t g = std::gcd(j, nm1);
  return Character{j, nm1 / g};
}

std::complex<double> FieldCtx::chi(const Character& c, std::uint32_t elem) const {
  if (elem == 0) return {0.0, 0.0};
  std::uint64_t nm1 = n_ - 1;
  std::uint64_t t = dlog_[elem];
  std::uint64_t a = (std::uint64_t)((unsigned __int128)c.j * t % nm1);
  double angle = 2.0 * std::numbers::pi * (double)a / (double)nm1;
  return std::polar(1.0, angle);
}

std::string FieldCtx::to_string(std::uint32_t elem) const {
  std::ostringstream os;
  os << '[';
  for (unsigned i = 0; i < r_; ++i) {
    if (i) os << ',';
    os << coeff(elem, i);
  }
  os << ']';
  return os.str();
}

std::optional<std::uint32_t> FieldCtx::parse_element(const std::string& s) const {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
  std::uint32_t out = 0, mult = 1;
  std::istringstream is(s.substr(1, s.size() - 2));
  std::string tok;
  unsigned count = 0;
  while (std::getline(is, tok, ',')) {
    char* end = nullptr;
    unsigned long v = std::strtoul(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0' || v >= q_ || count >= r_)
      return std::nullopt;
    out += (std::uint32_t)v * mult;
    mult *= q_;
    ++count;
  }
  if (count != r_) return std::nullopt;
  return out;
}

bool is_e_free(const FieldCtx& ctx, std::uint32_t elem, std::uint64_t e) {
  if (elem == 0) throw DomainError("is_e_free: element must be nonzero");
  std::uint64_t nm1 = ctx.order() - 1;
  if (e == 0 || nm1 % e != 0) throw DomainError("is_e_free: e must divide q^r-1");
  std::uint64_t t = ctx.dlog(elem);
  std::uint64_t rest = e;
  for (std::uint64_t d = 2; d * d <= rest; ++d)
    if (rest % d == 0) {
      if (t % d == 0) return false;
      while (rest % d == 0) rest /= d;
    }
  if (rest > 1 && t % rest == 0) return false;
  return true;
}

std::uint64_t count_e_free(const FieldCtx& ctx,
                           const std::vector<std::uint32_t>& subset,
                           std::uint64_t e) {
  std::uint64_t nm1 = ctx.order() - 1;
  if (e == 0 || nm1 % e != 0)
    throw DomainError("count_e_free: e must divide q^r-1");
  std::uint64_t n = 0;
  for (std::uint32_t el : subset)
    if (el != 0 && is_e_free(ctx, el, e)) ++n;
  return n;
}

std::complex<double> char_sum(const FieldCtx& ctx,
                              const std::vector<std::uint32_t>& subset,
                              const Character& chr) {
  double re = 0, im = 0, cre = 0, cim = 0;  // Kahan
  for (std::uint32_t el : subset) {
    std::complex<double> v = ctx.chi(chr, el);
    double y = v.real() - cre, t = re + y;
    cre = (t - re) - y;
    re = t;
    y = v.imag() - cim;
    t = im + y;
    cim = (t - im) - y;
    im = t;
  }
  return {re, im};
}

double vinogradov_count(const FieldCtx& ctx,
                        const std::vector<std::uint32_t>& subset,
                        std::uint64_t e) {
  std::uint64_t nm1 = ctx.order() - 1;
  if (e == 0 || nm1 % e != 0)
    throw DomainError("vinogradov_count: e must divide q^r-1");
  for (std::uint32_t el : subset)
    if (el == 0) throw DomainError("vinogradov_count: subset must avoid 0");
  std::vector<std::uint64_t> eprimes;
  std::uint64_t rest = e;
  for (std::uint64_t d = 2; d * d <= rest; ++d)
    if (rest % d == 0) {
      eprimes.push_back(d);
      while (rest % d == 0) rest /= d;
    }
  if (rest > 1) eprimes.push_back(rest);
  double rho = 1.0;
  for (std::uint64_t p : eprimes) rho *= 1.0 - 1.0 / (double)p;

  double total = (double)subset.size();
  size_t np = eprimes.size();
  for (size_t mask = 1; mask < (size_t(1) << np); ++mask) {
    std::uint64_t d = 1;
    double phi_d = 1.0;
    int mu = 1;
    for (size_t i = 0; i < np; ++i)
      if (mask & (size_t(1) << i)) {
        d *= eprimes[i];
        phi_d *= (double)(eprimes[i] - 1);
        mu = -mu;
      }
    std::complex<double> inner{0, 0};
    std::uint64_t step = nm1 / d;
    for (std::uint64_t m = 1; m < d; ++m) {
      if (std::gcd(m, d) != 1) continue;
      inner += char_sum(ctx, subset, ctx.character(m * step));
    }
    total += (double)mu / phi_d * inner.real();
  }
  return rho * total;
}

double true_K(const FieldCtx& ctx, const std::vector<std::uint32_t>& subset) {
  std::uint64_t nm1 = ctx.order() - 1;
  double best = 0.0;
  for (std::uint64_t j = 1; j < nm1; ++j) {
    double v = std::abs(char_sum(ctx, subset, ctx.character(j)));
    if (v > best) best = v;
  }
  return best;
}

FieldCtx build_field_q(unsigned q, unsigned r, FieldOptions opts) {
  unsigned p = 0, k = 0;
  for (unsigned cand = 2; cand <= q; ++cand) {
    if (!is_prime(mpz_class(cand))) continue;
    unsigned pw = cand, deg = 1;
    while (pw < q) {
      pw *= cand;
      ++deg;
    }
    if (pw == q) {
      p = cand;
      k = deg;
      break;
    }
  }
  if (p == 0) throw DomainError("build_field_q: q is not a prime power");
  if (!opts.ext_poly && !opts.generator) {
    if (q == 3 && r == 2) {
      opts.ext_poly = std::vector<unsigned>{1, 0, 1};  // x^2 - 2
      opts.generator = 4;                              // 1+x
    } else if (q == 5 && r == 2) {
      opts.ext_poly = std::vector<unsigned>{3, 0, 1};  // x^2 - 2
      opts.generator = 7;                              // 2+x
    } else if (q == 3 && r == 3) {
      opts.ext_poly = std::vector<unsigned>{2, 2, 0, 1};  // x^3 + 2x + 2
      opts.generator = 8;                                 // 2+2x
    }
  }
  return FieldCtx(p, k, r, opts);
}

std::vector<std::uint32_t> all_nonzero(const FieldCtx& ctx) {
  std::vector<std::uint32_t> out;
  out.reserve(ctx.order() - 1);
  for (std::uint64_t e = 1; e < ctx.order(); ++e)
    out.push_back((std::uint32_t)e);
  return out;
}

}  // namespace primsieve
