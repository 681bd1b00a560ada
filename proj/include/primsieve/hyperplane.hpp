#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "primsieve/finite_field.hpp"

namespace primsieve {

// r affine hyperplanes C_i = {v : L_i(v) = offset_i} of F_{q^r} viewed as
// F_q^r in the power basis; row i of functionals is L_i.
struct HyperplaneSet {
  std::vector<std::vector<unsigned>> functionals;  // r rows of r F_q codes
  std::vector<unsigned> offsets;                   // r F_q codes
};

// general position: the functional matrix is invertible over F_q
bool general_position(const FieldCtx& ctx, const HyperplaneSet& hset);

bool on_hyperplane(const FieldCtx& ctx, const HyperplaneSet& hset, unsigned i,
                   std::uint32_t elem);

// G_A = field \ union of the C_i; throws on general-position violation,
// verifies |G_A| = (q-1)^r
std::vector<std::uint32_t> make_g_a(const FieldCtx& ctx,
                                    const HyperplaneSet& hset);

// a hyperplane set whose union covers every primitive element, together
// with the covering assignment (primitive element -> hyperplane index)
struct ExceptionCertificate {
  unsigned q = 0;
  unsigned r = 0;
  HyperplaneSet hset;
  std::vector<std::pair<std::uint32_t, unsigned>> covered;
};

// re-runs the covering check from the stored matrix and offsets
bool verify_certificate(const FieldCtx& ctx, const ExceptionCertificate& cert);

// `q r | matrix row-major | offsets | covered: elem->H_i ...`
std::string serialize_certificate(const FieldCtx& ctx,
                                  const ExceptionCertificate& cert);

// every general-position hyperplane set, up to row scaling and permutation,
// whose G_A contains no primitive element. Empty result certifies that
// (q, r) is not a genuine exception. Requires q^r <= 3^6.
std::vector<ExceptionCertificate> exhaustive_exception_search(
    const FieldCtx& ctx);

struct ConstructionReport {
  unsigned q = 0;
  unsigned r = 0;
  bool ok = false;
  std::size_t primitive_count = 0;
  ExceptionCertificate cert;
};

// the three fixed exception constructions for (3,2), (5,2), (3,3) in their
// canonical polynomial presentations, checked from scratch
std::vector<ConstructionReport> verify_known_constructions();

}  // namespace primsieve
