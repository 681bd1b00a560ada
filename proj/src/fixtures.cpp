#include "primsieve/fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace primsieve {

namespace {

mpz_class pow_qr(unsigned q, unsigned r) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), q, r);
  return out;
}

}  // namespace

FactorFixtureFile FactorFixtureFile::parse(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError(0, "cannot open fixture file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

FactorFixtureFile FactorFixtureFile::parse_text(const std::string& text) {
  FactorFixtureFile out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() < 3)
      throw FixtureError(lineno, "expected `q r p1[^e1] ...`");
    unsigned long q, r;
    try {
      std::size_t used;
      q = std::stoul(toks[0], &used);
      if (used != toks[0].size()) throw std::invalid_argument(toks[0]);
      r = std::stoul(toks[1], &used);
      if (used != toks[1].size()) throw std::invalid_argument(toks[1]);
    } catch (const std::exception&) {
      throw FixtureError(lineno, "bad q or r field");
    }
    if (q < 2 || r < 1) throw FixtureError(lineno, "need q >= 2, r >= 1");

    std::map<mpz_class, unsigned> primes;
    for (std::size_t i = 2; i < toks.size(); ++i) {
      const std::string& t = toks[i];
      auto caret = t.find('^');
      std::string pstr = t.substr(0, caret);
      unsigned long e = 1;
      if (caret != std::string::npos) {
        try {
          std::size_t used;
          e = std::stoul(t.substr(caret + 1), &used);
          if (used != t.size() - caret - 1 || e == 0)
            throw std::invalid_argument(t);
        } catch (const std::exception&) {
          throw FixtureError(lineno, "bad exponent in `" + t + "`");
        }
      }
      mpz_class p;
      if (pstr.empty() || mpz_set_str(p.get_mpz_t(), pstr.c_str(), 10) != 0 ||
          p < 2)
        throw FixtureError(lineno, "bad prime token `" + t + "`");
      primes[p] += (unsigned)e;
    }

    std::vector<PrimeFactor> factors;
    for (const auto& [p, e] : primes) {
      if (!is_prime(p))
        throw FixtureError(lineno, "entry (" + std::to_string(q) + "," +
                                       std::to_string(r) + "): composite factor " +
                                       p.get_str());
      factors.push_back({p, e});
    }
    mpz_class target = pow_qr((unsigned)q, (unsigned)r) - 1;
    mpz_class prod = 1;
    for (const auto& f : factors)
      for (unsigned i = 0; i < f.e; ++i) prod *= f.p;
    if (prod != target)
      throw FixtureError(lineno, "entry (" + std::to_string(q) + "," +
                                     std::to_string(r) +
                                     "): product mismatch, got " + prod.get_str() +
                                     " expected " + target.get_str());
    Key key{(unsigned)q, (unsigned)r};
    if (out.entries_.count(key))
      throw FixtureError(lineno, "duplicate entry (" + std::to_string(q) + "," +
                                     std::to_string(r) + ")");
    out.entries_.emplace(key, Factorization(target, std::move(factors)));
  }
  return out;
}

const Factorization* FactorFixtureFile::find(unsigned q, unsigned r) const {
  auto it = entries_.find({q, r});
  return it == entries_.end() ? nullptr : &it->second;
}

void FactorFixtureFile::insert(unsigned q, unsigned r, Factorization fact) {
  if (fact.n() != pow_qr(q, r) - 1)
    throw FixtureError(0, "insert: factorization does not match q^r - 1");
  if (!entries_.emplace(Key{q, r}, std::move(fact)).second)
    throw FixtureError(0, "insert: duplicate entry (" + std::to_string(q) + "," +
                              std::to_string(r) + ")");
}

std::string FactorFixtureFile::serialize() const {
  std::ostringstream os;
  for (const auto& [key, fact] : entries_) {
    os << key.first << ' ' << key.second;
    for (const auto& f : fact.factors()) {
      os << ' ' << f.p.get_str();
      if (f.e > 1) os << '^' << f.e;
    }
    os << '\n';
  }
  return os.str();
}

Factorization order_factorization(unsigned q, unsigned r,
                                  const FactorFixtureFile* fixtures,
                                  const FactorBudget& budget) {
  if (fixtures) {
    const Factorization* hit = fixtures->find(q, r);
    if (hit) return *hit;
  }
  return factorize(pow_qr(q, r) - 1, {}, budget);
}

}  // namespace primsieve
