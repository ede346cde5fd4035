#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "ranlab/rng.hpp"

namespace ranlab {

// Canonical form: nlohmann::json::dump() emits object keys sorted and
// numbers in shortest round-trip decimal, so the hash is stable under key
// reordering and formatting differences in the source file.
inline std::string canonical_json(const nlohmann::json& j) { return j.dump(); }

inline std::string config_hash(const nlohmann::json& j) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_json(j))));
  return std::string(buf);
}

}  // namespace ranlab
