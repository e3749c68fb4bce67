#pragma once

// JSON encodings of the domain types. Floats round-trip exactly.
//
//   frame      {"n": int, "k": int, "vectors": [[k floats] x n]}
//   subspace   {"n": int, "k": int, "basis":   [[n floats] x k]}
//   profile    {"n": int, "k": int, "c": [n floats]}
//   ellipsoid  {"k": int, "matrix": [[k floats] x k]}
//   polytope   {"k": int, "vrep": [[k floats]...]} or {"k", "hrep": ...}

#include <string>

#include "json.hpp"

#include "jlvol/ellipsoids.hpp"
#include "jlvol/experiments.hpp"
#include "jlvol/frames.hpp"
#include "jlvol/majorization.hpp"
#include "jlvol/polytopes.hpp"

namespace jlvol::io {

using nlohmann::json;

json to_json(const FrameSet& f);
json to_json(const Subspace& s);
json to_json(const NormProfile& p);
json to_json(const Ellipsoid& e);
json to_json(const Polytope& p);
json to_json(const ConjectureSummary& s);
json to_json(const ExperimentReport& r);

// Parsers throw StructuralError on missing keys, wrong shapes or a
// mismatch between the declared n, k and the data.
FrameSet frame_from_json(const json& j);
Subspace subspace_from_json(const json& j);
NormProfile profile_from_json(const json& j);
Ellipsoid ellipsoid_from_json(const json& j);
Polytope polytope_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace jlvol::io
