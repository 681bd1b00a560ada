#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>

#include "primsieve/fixtures.hpp"
#include "primsieve/tables.hpp"

using namespace primsieve;

namespace {

const std::string& fixture_path() {
  static std::string path = [] {
    const char* env = std::getenv("PRIMSIEVE_FIXTURES");
    REQUIRE(env != nullptr);
    return std::string(env);
  }();
  return path;
}

}  // namespace

TEST_CASE("parsing fixture lines") {
  FactorFixtureFile f = FactorFixtureFile::parse_text(
      "# comment\n"
      "5 4 2^4 3 13\n"
      "\n"
      "3 2 2^3   # trailing comment\n");
  CHECK(f.size() == 2);
  const Factorization* e54 = f.find(5, 4);
  REQUIRE(e54 != nullptr);
  CHECK(e54->n() == 624);
  CHECK(e54->omega() == 3);
  const Factorization* e32 = f.find(3, 2);
  REQUIRE(e32 != nullptr);
  CHECK(e32->n() == 8);
  CHECK(f.find(7, 2) == nullptr);
}

TEST_CASE("parse errors carry line numbers and name the entry") {
  auto expect_error = [](const std::string& text, int line,
                         const std::string& needle) {
    bool threw = false;
    try {
      FactorFixtureFile::parse_text(text);
    } catch (const FixtureError& err) {
      threw = true;
      CHECK(err.line == line);
      CHECK(std::string(err.what()).find(needle) != std::string::npos);
    }
    CHECK(threw);
  };

  // 14 is not prime; the message must identify (q, r)
  expect_error("5 4 2^4 3 14\n", 1, "(5,4)");
  // product mismatch
  expect_error("5 4 2^4 3 17\n", 1, "(5,4)");
  // duplicate key, reported on the second line
  expect_error("3 2 2^3\n3 2 2^3\n", 2, "duplicate");
  // malformed tokens
  expect_error("x 4 2^4\n", 1, "");
  expect_error("5\n", 1, "");
}

TEST_CASE("round trip through serialize") {
  FactorFixtureFile f = FactorFixtureFile::parse_text("5 4 2^4 3 13\n3 2 2^3\n");
  std::string text = f.serialize();
  // sorted by (q, r), exponent 1 omitted
  CHECK(text == "3 2 2^3\n5 4 2^4 3 13\n");
  FactorFixtureFile g = FactorFixtureFile::parse_text(text);
  CHECK(g.serialize() == text);
  CHECK(g.size() == f.size());
}

TEST_CASE("insert validates") {
  FactorFixtureFile f;
  f.insert(5, 4, factorize(624));
  CHECK(f.size() == 1);
  CHECK_THROWS_AS(f.insert(5, 4, factorize(624)), FixtureError);  // duplicate
  CHECK_THROWS_AS(f.insert(5, 3, factorize(624)), FixtureError);  // wrong n
}

TEST_CASE("the bundled corpus loads completely") {
  FactorFixtureFile f = FactorFixtureFile::parse(fixture_path());
  CHECK(f.size() == 309);
  // spot-check coverage at the extreme ends of each q range
  for (auto [q, r] : {std::pair(3u, 40u), {4u, 40u}, {5u, 103u}, {7u, 51u},
                      {8u, 43u}, {9u, 38u}}) {
    CAPTURE(q);
    CAPTURE(r);
    CHECK(f.find(q, r) != nullptr);
  }
  CHECK_THROWS_AS(FactorFixtureFile::parse("/nonexistent/fixtures.txt"),
                  FixtureError);
}

TEST_CASE("order_factorization prefers fixtures, falls back to factoring") {
  FactorFixtureFile f = FactorFixtureFile::parse_text("5 4 2^4 3 13\n");
  Factorization hit = order_factorization(5, 4, &f);
  CHECK(hit.n() == 624);
  // no fixture: direct factoring
  Factorization direct = order_factorization(9, 4, &f);
  CHECK(direct.n() == 6560);
  CHECK(direct.omega() == 3);  // 2^5 * 5 * 41
}

TEST_CASE("table artifacts") {
  PrimeTable primes;
  FactorFixtureFile fx = FactorFixtureFile::parse(fixture_path());

  TableArtifact t1 = make_table("1", nullptr, primes);
  CHECK(t1.data.at("version") == kArtifactVersion);
  const auto& rows = t1.data.at("rows");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].at("q") == 5);
  CHECK(rows[0].at("limit") == 61367);
  CHECK(rows[1].at("limit") == 1316);
  CHECK(rows[2].at("limit") == 756);
  CHECK(rows[3].at("limit") == 541);

  TableArtifact t5 = make_table("5", &fx, primes);
  bool found_q8 = false;
  for (const auto& row : t5.data.at("rows")) {
    if (row.at("q") != 8) continue;
    found_q8 = true;
    std::vector<unsigned> expect{2, 3, 4, 5, 7, 9, 11, 13, 17, 18, 19};
    CHECK(row.at("eliminated").get<std::vector<unsigned>>() == expect);
    CHECK(row.at("missing").empty());
  }
  CHECK(found_q8);

  // deterministic rendering
  CHECK(t5.to_json() == make_table("5", &fx, primes).to_json());
  CHECK(t5.to_tsv() == make_table("5", &fx, primes).to_tsv());

  // tsv layout: header from the row keys, arrays comma-joined
  std::string tsv = t1.to_tsv();
  CHECK(tsv.substr(0, tsv.find('\n')) == "q\tlimit");
  CHECK(tsv.find("5\t61367") != std::string::npos);

  CHECK_THROWS_AS(make_table("6", &fx, primes), DomainError);
}
