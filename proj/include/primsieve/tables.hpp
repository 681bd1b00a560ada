#pragma once

#include <json.hpp>
#include <string>

#include "primsieve/fixtures.hpp"
#include "primsieve/numtheory.hpp"

namespace primsieve {

inline constexpr const char* kArtifactVersion = "1";

// One regenerated table. `data` holds {"table", "version", "rows": [...]}
// with flat row objects; rendering is deterministic for fixed inputs.
struct TableArtifact {
  std::string id;
  nlohmann::ordered_json data;

  std::string to_json() const;
  std::string to_tsv() const;
};

// id in {"1","2","3","4","5","main"}; fixtures may be null (tables 1 and 2
// never need them, the others degrade to missing-entry reports)
TableArtifact make_table(const std::string& id,
                         const FactorFixtureFile* fixtures, PrimeTable& primes);

}  // namespace primsieve
