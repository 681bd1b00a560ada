#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "primsieve/hyperplane.hpp"
#include "support/lemma_checks.hpp"

using namespace primsieve;

namespace {

std::set<std::uint32_t> primitives(const FieldCtx& ctx) {
  std::set<std::uint32_t> out;
  for (std::uint32_t e : all_nonzero(ctx))
    if (std::gcd(ctx.dlog(e), ctx.order() - 1) == 1) out.insert(e);
  return out;
}

}  // namespace

TEST_CASE("the three fixed exception constructions") {
  auto reports = verify_known_constructions();
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].q == 3);
  CHECK(reports[0].r == 2);
  CHECK(reports[0].primitive_count == 4);
  CHECK(reports[1].q == 5);
  CHECK(reports[1].r == 2);
  CHECK(reports[1].primitive_count == 8);
  CHECK(reports[2].q == 3);
  CHECK(reports[2].r == 3);
  CHECK(reports[2].primitive_count == 12);
  for (const auto& rep : reports) CHECK(rep.ok);
}

TEST_CASE("order-9 construction covers the primitive powers in pairs") {
  FieldCtx f = build_field_q(3, 2);
  HyperplaneSet h;
  h.functionals = {{1, 2}, {1, 1}};
  h.offsets = {0, 0};
  REQUIRE(general_position(f, h));

  // g, g^5 land on the first hyperplane; g^3, g^7 on the second
  std::uint32_t g = f.generator();
  CHECK(on_hyperplane(f, h, 0, g));
  CHECK(on_hyperplane(f, h, 0, f.pow(g, 5)));
  CHECK(on_hyperplane(f, h, 1, f.pow(g, 3)));
  CHECK(on_hyperplane(f, h, 1, f.pow(g, 7)));

  auto g_a = make_g_a(f, h);
  CHECK(g_a.size() == 4);
  for (std::uint32_t e : g_a)
    CHECK(std::gcd(f.dlog(e), f.order() - 1) != 1);
}

TEST_CASE("coordinate hyperplanes") {
  FieldCtx f = build_field_q(5, 2);
  HyperplaneSet h;
  h.functionals = {{1, 0}, {0, 1}};
  h.offsets = {0, 0};
  auto g_a = make_g_a(f, h);
  CHECK(g_a.size() == 16);
  for (std::uint32_t e : g_a) {
    CHECK(f.coeff(e, 0) != 0);
    CHECK(f.coeff(e, 1) != 0);
  }
}

TEST_CASE("general position detection") {
  FieldCtx f = build_field_q(3, 2);
  HyperplaneSet h;
  h.functionals = {{1, 2}, {2, 1}};  // 2*(1,2) = (2,1) over F_3
  h.offsets = {0, 1};
  CHECK_FALSE(general_position(f, h));
  CHECK_THROWS_AS(make_g_a(f, h), DomainError);

  HyperplaneSet bad;
  bad.functionals = {{1, 2}};
  bad.offsets = {0};
  CHECK_THROWS_AS(general_position(f, bad), DomainError);
}

TEST_CASE("exhaustive searches on the genuine and eliminated pairs") {
  auto c32 = exhaustive_exception_search(build_field_q(3, 2));
  CHECK(c32.size() >= 1);
  auto c52 = exhaustive_exception_search(build_field_q(5, 2));
  CHECK(c52.size() >= 1);
  auto c33 = exhaustive_exception_search(build_field_q(3, 3));
  CHECK(c33.size() >= 1);

  // (4,2) is eliminated, so no covering hyperplane set can exist
  FieldCtx f42 = build_field_q(4, 2);
  CHECK(classify(4, 2, factorize(15)).verdict == Verdict::eliminated);
  CHECK(exhaustive_exception_search(f42).empty());

  CHECK_THROWS_AS(exhaustive_exception_search(build_field(3, 1, 7)),
                  ResourceError);
}

TEST_CASE("certificates verify and serialize") {
  FieldCtx f = build_field_q(3, 2);
  auto certs = exhaustive_exception_search(f);
  REQUIRE_FALSE(certs.empty());
  const auto prim = primitives(f);
  for (const auto& cert : certs) {
    CHECK(verify_certificate(f, cert));
    std::set<std::uint32_t> covered;
    for (auto [elem, idx] : cert.covered) {
      CHECK(on_hyperplane(f, cert.hset, idx, elem));
      covered.insert(elem);
    }
    CHECK(covered == prim);
  }

  std::string text = serialize_certificate(f, certs[0]);
  CHECK(text.substr(0, 4) == "3 2 ");
  CHECK(text.find("covered:") != std::string::npos);

  ExceptionCertificate tampered = certs[0];
  tampered.hset.offsets[0] = (tampered.hset.offsets[0] + 1) % 3;
  CHECK_FALSE(verify_certificate(f, tampered));
}

TEST_CASE("random hyperplane sets satisfy the character-sum bounds") {
  std::mt19937_64 rng(424242);
  for (const auto& spec : checks::standard_fields()) {
    FieldCtx f = build_field(spec.p, spec.k, spec.r);
    CHECK(checks::check_hyperplane_bounds(f, rng, 50) == 0);
  }
}
