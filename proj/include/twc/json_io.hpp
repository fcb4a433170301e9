#ifndef TWC_JSON_IO_HPP
#define TWC_JSON_IO_HPP

#include "twc/deformations.hpp"
#include "twc/senlattice.hpp"

#include <json.hpp>

#include <variant>

namespace twc::io {

using json = nlohmann::json;

/// Thrown when a payload fails structural validation against the shipped
/// schemas (CLI exit code 2).
class schema_error : public std::runtime_error {
public:
    explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

// Rationals travel as strings "p/q" so nothing is ever rounded.
json to_json(const Rat& r);
Rat rat_from_json(const json& j);
json to_json(const DualNum& d);
DualNum dual_from_json(const json& j);

json to_json(const Poly<Rat>& p);
json to_json(const Poly<DualNum>& p);

FieldShapePtr field_from_json(const json& j);
json to_json(const FieldShape& shape);

/// Character literal {"gens": {label: exp}} against a known shape. Inline
/// declarations ({"gens": {...}, "weights": {...}, "uval": "p/q"}) are folded
/// into the shape by collect_inline_generators before parsing.
Character char_from_json(const json& j, const FieldShapePtr& shape);
json to_json(const Character& c);

/// Returns a shape extended by the single-unknown-label declarations found in
/// the character literal array.
FieldShapePtr collect_inline_generators(FieldShapePtr shape, const json& params);

TriangModule module_from_json(const json& j);
json to_json(const TriangModule& d);

Program program_from_json(const json& j);

using LatticeVariant = std::variant<SenLattice<Rat>, SenLattice<DualNum>>;
LatticeVariant lattice_from_json(const json& j);
json to_json(const SenLattice<Rat>& lat);
json to_json(const SenLattice<DualNum>& lat);

CrysModule crys_from_json(const json& j);
json to_json(const CrysModule& m);

ExtClassModel ext_class_from_json(const json& j, const TriangModule& base);

json to_json(const SlopeReport& r);
json to_json(const CohProfile& p);
json to_json(const RegularityFlags& f);
json to_json(const GateReport& r);
json to_json(const WallReport& r);
json to_json(const ProgramWallReport& r);
json to_json(const IntertwineReport& r);
json to_json(const PullbackConsistencyReport& r);

/// Report envelopes; provenance lists the theorem gates a command consulted.
json ok_report(json result, std::vector<std::string> provenance);
json error_report(const std::string& code, const std::string& message);

// small helpers shared with the CLI
const json& require_field(const json& j, const char* key);
int require_int(const json& j, const char* key);

}  // namespace twc::io

#endif
