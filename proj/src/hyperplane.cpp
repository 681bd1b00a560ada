#include "primsieve/hyperplane.hpp"

#include <algorithm>
#include <sstream>

namespace primsieve {

namespace {

// rank of an r x r matrix over F_q by elimination with the ctx tables
unsigned matrix_rank(const FieldCtx& ctx,
                     std::vector<std::vector<unsigned>> m) {
  unsigned r = (unsigned)m.size();
  unsigned rank = 0;
  for (unsigned col = 0; col < r && rank < r; ++col) {
    unsigned pivot = rank;
    while (pivot < r && m[pivot][col] == 0) ++pivot;
    if (pivot == r) continue;
    std::swap(m[rank], m[pivot]);
    unsigned inv = ctx.q_inv(m[rank][col]);
    for (auto& c : m[rank]) c = ctx.q_mul(c, inv);
    for (unsigned row = 0; row < r; ++row) {
      if (row == rank || m[row][col] == 0) continue;
      unsigned f = ctx.q_neg(m[row][col]);
      for (unsigned j = 0; j < r; ++j)
        m[row][j] = ctx.q_add(m[row][j], ctx.q_mul(f, m[rank][j]));
    }
    ++rank;
  }
  return rank;
}

unsigned eval_functional(const FieldCtx& ctx, const std::vector<unsigned>& row,
                         std::uint32_t elem) {
  unsigned acc = 0;
  for (unsigned j = 0; j < ctx.r(); ++j)
    acc = ctx.q_add(acc, ctx.q_mul(row[j], ctx.coeff(elem, j)));
  return acc;
}

void check_shape(const FieldCtx& ctx, const HyperplaneSet& hset) {
  unsigned r = ctx.r();
  if (hset.functionals.size() != r || hset.offsets.size() != r)
    throw DomainError("HyperplaneSet: expected r functionals and r offsets");
  for (const auto& row : hset.functionals) {
    if (row.size() != r)
      throw DomainError("HyperplaneSet: functional row has wrong length");
    for (unsigned c : row)
      if (c >= ctx.q()) throw DomainError("HyperplaneSet: code out of range");
  }
  for (unsigned c : hset.offsets)
    if (c >= ctx.q()) throw DomainError("HyperplaneSet: offset out of range");
}

}  // namespace

bool general_position(const FieldCtx& ctx, const HyperplaneSet& hset) {
  check_shape(ctx, hset);
  return matrix_rank(ctx, hset.functionals) == ctx.r();
}

bool on_hyperplane(const FieldCtx& ctx, const HyperplaneSet& hset, unsigned i,
                   std::uint32_t elem) {
  return eval_functional(ctx, hset.functionals.at(i), elem) == hset.offsets.at(i);
}

std::vector<std::uint32_t> make_g_a(const FieldCtx& ctx,
                                    const HyperplaneSet& hset) {
  if (!general_position(ctx, hset))
    throw DomainError("make_g_a: hyperplanes not in general position");
  std::vector<std::uint32_t> out;
  for (std::uint64_t e = 0; e < ctx.order(); ++e) {
    bool on = false;
    for (unsigned i = 0; i < ctx.r() && !on; ++i)
      on = on_hyperplane(ctx, hset, i, (std::uint32_t)e);
    if (!on) out.push_back((std::uint32_t)e);
  }
  std::uint64_t expect = 1;
  for (unsigned i = 0; i < ctx.r(); ++i) expect *= ctx.q() - 1;
  if (out.size() != expect)
    throw DomainError("make_g_a: |G_A| != (q-1)^r");
  return out;
}

bool verify_certificate(const FieldCtx& ctx, const ExceptionCertificate& cert) {
  if (cert.q != ctx.q() || cert.r != ctx.r()) return false;
  if (!general_position(ctx, cert.hset)) return false;
  std::uint64_t nm1 = ctx.order() - 1;
  std::size_t listed = 0;
  for (std::uint64_t e = 1; e < ctx.order(); ++e) {
    if (!is_e_free(ctx, (std::uint32_t)e, nm1)) continue;
    bool on = false;
    for (unsigned i = 0; i < ctx.r() && !on; ++i)
      on = on_hyperplane(ctx, cert.hset, i, (std::uint32_t)e);
    if (!on) return false;
    ++listed;
  }
  if (listed != cert.covered.size()) return false;
  for (const auto& [elem, idx] : cert.covered) {
    if (idx >= ctx.r()) return false;
    if (!on_hyperplane(ctx, cert.hset, idx, elem)) return false;
    if (!is_e_free(ctx, elem, nm1)) return false;
  }
  return true;
}

std::string serialize_certificate(const FieldCtx& ctx,
                                  const ExceptionCertificate& cert) {
  std::ostringstream os;
  os << cert.q << ' ' << cert.r << " |";
  for (const auto& row : cert.hset.functionals)
    for (unsigned c : row) os << ' ' << c;
  os << " |";
  for (unsigned c : cert.hset.offsets) os << ' ' << c;
  os << " | covered:";
  for (const auto& [elem, idx] : cert.covered)
    os << ' ' << ctx.to_string(elem) << "->H" << (idx + 1);
  return os.str();
}

std::vector<ExceptionCertificate> exhaustive_exception_search(
    const FieldCtx& ctx) {
  if (ctx.order() > 729)
    throw ResourceError("exhaustive_exception_search: q^r > 3^6");
  const unsigned q = ctx.q(), r = ctx.r();
  const std::uint64_t n = ctx.order(), nm1 = n - 1;

  std::vector<std::uint32_t> prims;
  for (std::uint64_t e = 1; e < n; ++e)
    if (is_e_free(ctx, (std::uint32_t)e, nm1)) prims.push_back((std::uint32_t)e);

  // projective representatives: nonzero rows with first nonzero entry 1
  std::vector<std::vector<unsigned>> points;
  for (std::uint64_t code = 1; code < n; ++code) {
    std::vector<unsigned> row(r);
    std::uint64_t c = code;
    for (unsigned i = 0; i < r; ++i, c /= q) row[i] = (unsigned)(c % q);
    unsigned first = 0;
    while (row[first] == 0) ++first;
    if (row[first] == 1) points.push_back(std::move(row));
  }

  std::vector<ExceptionCertificate> found;
  std::vector<unsigned> chosen;

  // precomputed functional values at the primitive elements, row per depth
  std::vector<std::vector<unsigned>> vals(r, std::vector<unsigned>(prims.size()));

  auto try_offsets = [&]() {
    std::vector<unsigned> off(r, 0);
    while (true) {
      bool all_covered = true;
      std::vector<std::pair<std::uint32_t, unsigned>> covered;
      covered.reserve(prims.size());
      for (std::size_t pi = 0; pi < prims.size() && all_covered; ++pi) {
        bool on = false;
        for (unsigned i = 0; i < r; ++i)
          if (vals[i][pi] == off[i]) {
            covered.emplace_back(prims[pi], i);
            on = true;
            break;
          }
        all_covered = on;
      }
      if (all_covered) {
        ExceptionCertificate cert;
        cert.q = q;
        cert.r = r;
        for (unsigned i : chosen) cert.hset.functionals.push_back(points[i]);
        cert.hset.offsets = off;
        cert.covered = std::move(covered);
        found.push_back(std::move(cert));
      }
      unsigned d = 0;
      while (d < r && ++off[d] == q) off[d++] = 0;
      if (d == r) break;
    }
  };

  // depth-first over increasing point indices, pruning dependent prefixes
  auto rec = [&](auto&& self, unsigned depth, unsigned start) -> void {
    if (depth == r) {
      try_offsets();
      return;
    }
    for (unsigned i = start; i < points.size(); ++i) {
      chosen.push_back(i);
      std::vector<std::vector<unsigned>> m;
      for (unsigned j : chosen) m.push_back(points[j]);
      if (matrix_rank(ctx, m) == depth + 1) {
        for (std::size_t pi = 0; pi < prims.size(); ++pi)
          vals[depth][pi] = eval_functional(ctx, points[i], prims[pi]);
        self(self, depth + 1, i + 1);
      }
      chosen.pop_back();
    }
  };
  rec(rec, 0, 0);
  return found;
}

std::vector<ConstructionReport> verify_known_constructions() {
  struct Fixture {
    unsigned p, k, r;
    std::vector<unsigned> ext_poly;
    std::uint32_t gen;
    HyperplaneSet hset;
  };
  // F_9 = F_3[x]/(x^2-2): H1 = span(1+x), H2 = span(1+2x)
  // F_25 = F_5[x]/(x^2-2): H1 = span(2+x), H2 = span(3+x)
  // F_27 = F_3[x]/(x^3+2x+2): H1 = 2x^2 + <1,x>, H2 = 2x + <1,x^2>,
  //                           H3 = x^2+1 + <x^2,1+x>
  const Fixture fixtures[] = {
      {3, 1, 2, {1, 0, 1}, 4, {{{1, 2}, {1, 1}}, {0, 0}}},
      {5, 1, 2, {3, 0, 1}, 7, {{{1, 3}, {1, 2}}, {0, 0}}},
      {3, 1, 3, {2, 2, 0, 1}, 8, {{{0, 0, 1}, {0, 1, 0}, {1, 2, 0}}, {2, 2, 1}}},
  };
  std::vector<ConstructionReport> out;
  for (const auto& fx : fixtures) {
    FieldOptions opts;
    opts.ext_poly = fx.ext_poly;
    opts.generator = fx.gen;
    FieldCtx ctx(fx.p, fx.k, fx.r, opts);
    ConstructionReport rep;
    rep.q = ctx.q();
    rep.r = ctx.r();
    rep.cert.q = ctx.q();
    rep.cert.r = ctx.r();
    rep.cert.hset = fx.hset;
    std::uint64_t nm1 = ctx.order() - 1;
    bool ok = general_position(ctx, fx.hset);
    for (std::uint64_t e = 1; e < ctx.order() && ok; ++e) {
      if (!is_e_free(ctx, (std::uint32_t)e, nm1)) continue;
      ++rep.primitive_count;
      bool on = false;
      for (unsigned i = 0; i < ctx.r() && !on; ++i)
        if (on_hyperplane(ctx, fx.hset, i, (std::uint32_t)e)) {
          rep.cert.covered.emplace_back((std::uint32_t)e, i);
          on = true;
        }
      ok = on;
    }
    rep.ok = ok && verify_certificate(ctx, rep.cert);
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace primsieve
