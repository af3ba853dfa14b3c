#pragma once
// JSON documents: a versioned envelope {version, kind, payload} around the library types.

#include "sc/balance.hpp"
#include "sc/optimize.hpp"

#include <json.hpp>

#include <string>

namespace sc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kDocVersion = "1";

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);
Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j);
Json simplex_to_json(const Simplex& s);
Simplex simplex_from_json(const Json& j);

Json chain_to_json(const StressedChain& c);
StressedChain chain_from_json(const Json& j);
Json force_system_to_json(const ForceSystem& f);
ForceSystem force_system_from_json(const Json& j);
Json ground_structure_to_json(const GroundStructure& g);
GroundStructure ground_structure_from_json(const Json& j);
Json truss_solution_to_json(const TrussSolution& t);
TrussSolution truss_solution_from_json(const Json& j);

/// kind is one of force_system, stressed_chain, ground_structure, truss_solution, report.
Json make_document(const std::string& kind, Json payload);
/// Checks version and kind; returns the payload. Throws SchemaError.
const Json& document_payload(const Json& doc, const std::string& expected_kind);
std::string document_kind(const Json& doc);

/// Parses text; malformed input raises SchemaError.
Json parse_json(const std::string& text);
/// Serialises with shortest round-trip number formatting (at most 17 significant digits).
std::string dump_json(const Json& j);

}  // namespace sc
