#include "primsieve/tables.hpp"

#include <algorithm>
#include <sstream>

#include "primsieve/criteria.hpp"
#include "primsieve/hyperplane.hpp"
#include "primsieve/omega_bounds.hpp"

namespace primsieve {

namespace {

using json = nlohmann::ordered_json;

// ranges of r actually checked per q; these are inputs of the published
// tables, not derivable from the criteria themselves
struct Checked {
  unsigned q, lo, hi;
};
const Checked kChecked3[] = {
    {4, 2, 390}, {5, 2, 103}, {7, 2, 51}, {8, 2, 43}, {9, 2, 38}};
const Checked kChecked4[] = {{3, 4, 268}, {4, 2, 210}, {5, 2, 48},
                             {7, 2, 24},  {8, 2, 20},  {9, 2, 18}};
const Checked kChecked5[] = {
    {4, 2, 135}, {5, 2, 35}, {7, 2, 20}, {8, 2, 20}, {9, 2, 15}};

std::vector<unsigned> checked5_q3() {
  std::vector<unsigned> rs;
  for (unsigned r = 2; r <= 120; r += 2) rs.push_back(r);
  rs.push_back(144);
  return rs;
}

// fixture-first factorization; q in {3,4} never falls back to direct
// factoring (the published data there came from an external database)
std::optional<Factorization> try_order_fact(unsigned q, unsigned r,
                                            const FactorFixtureFile* fixtures) {
  if (fixtures) {
    const Factorization* hit = fixtures->find(q, r);
    if (hit) return *hit;
  }
  if (q == 3 || q == 4) return std::nullopt;
  try {
    return order_factorization(q, r, nullptr);
  } catch (const IncompleteFactorization&) {
    return std::nullopt;
  }
}

json table1(PrimeTable& primes) {
  json rows = json::array();
  for (unsigned q : {5u, 7u, 8u, 9u})
    rows.push_back({{"q", q}, {"limit", naive_prime_limit(q, primes)}});
  return rows;
}

json table2(PrimeTable& primes) {
  json rows = json::array();
  for (unsigned q : {3u, 4u, 5u, 7u, 8u, 9u}) {
    SweepResult s = table2_sweep(q, primes);
    rows.push_back({{"q", q},
                    {"omega_threshold", s.omega_threshold},
                    {"r_threshold", s.r_threshold},
                    {"even_only", s.even_only},
                    {"t_used", s.t_used},
                    {"omega0_used", s.omega0_used}});
  }
  return rows;
}

json hypersieve_table(const FactorFixtureFile* fixtures, bool even_branch) {
  json rows = json::array();
  auto span = even_branch ? std::pair(std::begin(kChecked4), std::end(kChecked4))
                          : std::pair(std::begin(kChecked3), std::end(kChecked3));
  for (auto it = span.first; it != span.second; ++it) {
    const Checked& c = *it;
    std::vector<unsigned> eliminated, missing;
    std::vector<int> s_used;
    unsigned step = even_branch ? 2 : 1;
    unsigned lo = c.lo;
    if (even_branch && lo % 2) ++lo;
    for (unsigned r = lo; r <= c.hi; r += step) {
      auto fact = try_order_fact(c.q, r, fixtures);
      if (!fact) {
        missing.push_back(r);
        continue;
      }
      int s = -1;
      bool elim = even_branch ? hypersieve_even(c.q, r, *fact, &s)
                              : hypersieve_general(c.q, r, *fact, &s);
      if (elim) {
        eliminated.push_back(r);
        s_used.push_back(s);
      }
    }
    rows.push_back({{"q", c.q},
                    {"r_min", c.lo},
                    {"r_max", c.hi},
                    {"eliminated", eliminated},
                    {"s_used", s_used},
                    {"missing", missing}});
  }
  return rows;
}

json table5(const FactorFixtureFile* fixtures) {
  json rows = json::array();
  auto run = [&](unsigned q, const std::vector<unsigned>& rs, unsigned lo,
                 unsigned hi) {
    std::vector<unsigned> eliminated, missing;
    std::vector<std::string> criterion;
    for (unsigned r : rs) {
      auto fact = try_order_fact(q, r, fixtures);
      if (!fact) {
        missing.push_back(r);
        continue;
      }
      if (fr_criterion1(q, r, fact->phi())) {
        eliminated.push_back(r);
        criterion.push_back("fr1");
      } else if (fr_criterion2(q, r, fact->omega())) {
        eliminated.push_back(r);
        criterion.push_back("fr2");
      }
    }
    rows.push_back({{"q", q},
                    {"r_min", lo},
                    {"r_max", hi},
                    {"eliminated", eliminated},
                    {"criterion", criterion},
                    {"missing", missing}});
  };
  run(3, checked5_q3(), 2, 144);
  for (const Checked& c : kChecked5) {
    std::vector<unsigned> rs;
    for (unsigned r = c.lo; r <= c.hi; ++r) rs.push_back(r);
    run(c.q, rs, c.lo, c.hi);
  }
  return rows;
}

json table_main(const FactorFixtureFile* fixtures, PrimeTable& primes) {
  const std::pair<unsigned, unsigned> genuine_pairs[] = {{3, 2}, {5, 2}, {3, 3}};
  json rows = json::array();
  for (unsigned q : {3u, 4u, 5u, 7u, 8u, 9u}) {
    SweepResult sweep = table2_sweep(q, primes);
    std::vector<unsigned> possible, genuine, missing;
    unsigned step = sweep.even_only ? 2 : 1;
    for (unsigned r = 2; r < sweep.r_threshold; r += step) {
      auto fact = try_order_fact(q, r, fixtures);
      if (!fact) {
        missing.push_back(r);
        continue;
      }
      ClassificationRecord rec = classify(q, r, *fact);
      if (rec.verdict == Verdict::eliminated) continue;
      possible.push_back(r);
    }
    // the genuine pairs include odd r for q = 3, which the even-only scan
    // never visits; list them straight from the certificate fixtures
    for (auto [gq, gr] : genuine_pairs)
      if (gq == q && gr < sweep.r_threshold) genuine.push_back(gr);
    std::sort(genuine.begin(), genuine.end());
    rows.push_back({{"q", q},
                    {"r_threshold", sweep.r_threshold},
                    {"even_only", sweep.even_only},
                    {"all_odd_r_possible", sweep.even_only},
                    {"possible", possible},
                    {"genuine", genuine},
                    {"missing", missing}});
  }
  return rows;
}

std::string cell_to_string(const json& v) {
  if (v.is_array()) {
    std::ostringstream os;
    bool first = true;
    for (const auto& e : v) {
      if (!first) os << ',';
      first = false;
      os << cell_to_string(e);
    }
    return os.str();
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string TableArtifact::to_json() const { return data.dump(2) + "\n"; }

std::string TableArtifact::to_tsv() const {
  std::ostringstream os;
  const json& rows = data.at("rows");
  if (rows.empty()) return "";
  bool first = true;
  for (const auto& [key, val] : rows[0].items()) {
    (void)val;
    if (!first) os << '\t';
    first = false;
    os << key;
  }
  os << '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& [key, val] : row.items()) {
      (void)key;
      if (!first) os << '\t';
      first = false;
      os << cell_to_string(val);
    }
    os << '\n';
  }
  return os.str();
}

TableArtifact make_table(const std::string& id,
                         const FactorFixtureFile* fixtures,
                         PrimeTable& primes) {
  json rows;
  if (id == "1")
    rows = table1(primes);
  else if (id == "2")
    rows = table2(primes);
  else if (id == "3")
    rows = hypersieve_table(fixtures, false);
  else if (id == "4")
    rows = hypersieve_table(fixtures, true);
  else if (id == "5")
    rows = table5(fixtures);
  else if (id == "main")
    rows = table_main(fixtures, primes);
  else
    throw DomainError("make_table: unknown table id `" + id + "`");
  TableArtifact art;
  art.id = id;
  art.data = {{"table", id}, {"version", kArtifactVersion}, {"rows", rows}};
  return art;
}

}  // namespace primsieve
