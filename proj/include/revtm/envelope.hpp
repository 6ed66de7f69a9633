#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "revtm/depth.hpp"
#include "revtm/machine.hpp"
#include "revtm/prefix.hpp"
#include "revtm/reversibility.hpp"

namespace revtm {

inline constexpr const char* kToolName = "revtm";
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

Json to_json(const Budget& b);
Json to_json(const PrefixRunResult& r);
Json to_json(const ComplexityRecord& r);
Json to_json(const DepthRecord& r);
Json to_json(const GrowthTable& t);
Json to_json(const ValidationReport& r, const Machine& m);
Json to_json(const Configuration& c, const Machine& m);

/// One output line: tool, version, universal digest, budget, kind, payload, wall time.
struct Envelope {
  std::string kind;
  Json payload;
  std::optional<Budget> budget;
  std::string digest;  // empty when no universal machine was involved
  double wall_ms = 0;

  Json to_json() const;
  std::string line() const { return to_json().dump(); }
};

}  // namespace revtm
