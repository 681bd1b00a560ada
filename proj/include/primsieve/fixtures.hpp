#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "primsieve/numtheory.hpp"

namespace primsieve {

struct FixtureError : std::runtime_error {
  int line;  // 1-based; 0 when not tied to a line
  FixtureError(int line_, const std::string& what)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what
                                     : what),
        line(line_) {}
};

// factorizations of q^r - 1 keyed by (q, r), re-validated on load:
// every factor prime-certified, product checked against q^r - 1,
// duplicate keys rejected
class FactorFixtureFile {
 public:
  using Key = std::pair<unsigned, unsigned>;

  static FactorFixtureFile parse(const std::string& path);
  static FactorFixtureFile parse_text(const std::string& text);

  const Factorization* find(unsigned q, unsigned r) const;
  void insert(unsigned q, unsigned r, Factorization fact);  // validates
  std::size_t size() const { return entries_.size(); }
  const std::map<Key, Factorization>& entries() const { return entries_; }

  // one line per entry, `q r p1[^e1] p2[^e2] ...`, sorted by (q, r)
  std::string serialize() const;

 private:
  std::map<Key, Factorization> entries_;
};

// factorization of q^r - 1: fixture lookup first, then direct factoring
// within the budget. Throws IncompleteFactorization when neither works.
Factorization order_factorization(unsigned q, unsigned r,
                                  const FactorFixtureFile* fixtures,
                                  const FactorBudget& budget =
                                      FactorBudget::from_env());

}  // namespace primsieve
