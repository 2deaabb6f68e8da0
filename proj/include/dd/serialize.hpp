#pragma once

#include <json.hpp>

#include <string>

#include "dd/fraisse.hpp"

namespace dd {

using Json = nlohmann::json;

Json to_json(const PLPath& p);
PLPath path_from_json(const Json& j);

Json to_json(const PathFamily& f);
PathFamily family_from_json(const Json& j);

Json to_json(const PLMeasure& m);
PLMeasure measure_from_json(const Json& j);
DiffuseMeasure diffuse_from_json(const Json& j);

// Morphism wire format: rational strings, paths with multiplicities, and a
// structural conjugator descriptor (rebuildable deterministically).
Json to_json(const DiagMorphism& m);

Json to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

Json sequence_descriptor(const Sequence& s);

std::string dump_json(const Json& j);
Json parse_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace dd
