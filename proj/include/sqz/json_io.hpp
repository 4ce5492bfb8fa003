#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "sqz/canonical.hpp"
#include "sqz/domains.hpp"
#include "sqz/modulus.hpp"
#include "sqz/partition.hpp"
#include "sqz/squeezing.hpp"

namespace sqz {

using Json = nlohmann::ordered_json;

// Parse with line/column reporting on malformed input.
Json parse_json_text(const std::string& text);

// Domain specification: {"type": "annulus" | "slit_disk" | "ring" | "disk" |
// "moebius_annulus" | "threefold_example", ...}. The schema is documented in
// docs/domain_schema.md and validated here.
struct DomainSpec {
  std::string type;
  std::optional<RingDomain> ring;          // annulus / ring / moebius_annulus
  std::optional<SlitDiskDomain> slit_disk;
  std::optional<Circle> disk;              // simply connected
  std::optional<ThreefoldExample> threefold;
  Json canonical;  // normalized form (drives cache keys and reports)
};

DomainSpec parse_domain(const Json& j);
// Accepts a file path, inline JSON, or the shorthand "annulus:R".
DomainSpec load_domain_arg(const std::string& arg);

BarrierSet parse_barriers(const Json& j);
BarrierSet load_barriers_arg(const std::string& arg);
Json barriers_to_json(const BarrierSet& b);

Json to_json(const ModulusResult& r);
Json to_json(const ReducedModuleResult& r);
Json to_json(const SqueezeReport& r);
Json to_json(const CanonicalMapResult& r);
Json to_json(const PartitionResult& r, const OptimizeDiagnostics* diag = nullptr);
Json to_json(const ExtremalityCertificate& c);

}  // namespace sqz
