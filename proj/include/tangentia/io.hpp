#pragma once

// JSON and CSV forms of arrangements, quadrics and solution sets.
//
// arrangement: {"n": 3, "spheres": [{"center": [x, ...], "radius": r}, ...]}
// solutions:   {"n": 3, "patch": [[re, im], ...], "records": [{"p_re": [...],
//               "p_im": [...], "v_re": [...], "v_im": [...], "real": bool,
//               "residual": r, "multiplicity": m}, ...], ...}
// quadrics:    {"n": 3, "quadrics": [[[q00, q01, ...], ...], ...]}

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tangentia/closed_form.hpp"
#include "tangentia/core.hpp"
#include "tangentia/formulation.hpp"
#include "tangentia/solver.hpp"

namespace tangentia::io {

using Json = nlohmann::ordered_json;

// Parse and schema errors are raised as InvalidArgument.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

SphereArrangement arrangement_from_json(const Json& j);
Json arrangement_to_json(const SphereArrangement& arr);

Json solutions_to_json(const SolutionSet& s, int n);
// Records and patch only; statuses and config are not round-tripped.
SolutionSet solutions_from_json(const Json& j);

std::vector<ProjectiveQuadric> quadrics_from_json(const Json& j);
Json quadrics_to_json(const std::vector<ProjectiveQuadric>& q);
Json quadric_solutions_to_json(const QuadricSolutionSet& s);

// One row per record: index,real,multiplicity,residual,p_re...,p_im...,v_re...,v_im...
std::string solutions_to_csv(const SolutionSet& s);
// a,r,on_discriminant,all_real,count_real
std::string region_to_csv(const std::vector<RegionClassification>& rows);
Json region_to_json(const std::vector<RegionClassification>& rows);

}  // namespace tangentia::io
