#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "concentra/cayley.hpp"
#include "concentra/concentration.hpp"
#include "concentra/euclidean.hpp"
#include "concentra/graph_tree.hpp"
#include "concentra/hadamard.hpp"

namespace concentra::cli {

using nlohmann::json;

// Reads a JSON document; "-" is standard input.
json load_json(const std::string& path);

// {"points":[ids], "dist":[[...]], "weights":[...]} or with
// "coords":[[...]] and "metric":"euclidean"|"l1"|"linf" in place of "dist"
// (also accepted nested as "dist":{"coords":..., "metric":...}).
// Missing weights mean the uniform probability measure.
FiniteMMSpace parse_mmspace(const json& j);
json mmspace_to_json(const FiniteMMSpace& space);

bool is_line_measure(const json& j);
// {"positions":[...], "weights":[...]} or {"atoms":[{"position":x,"mass":w}]}.
RealMeasure1D parse_line_measure(const json& j);

PointCloudMeasure parse_point_cloud(const json& j);

struct GraphInput {
    MetricGraph graph;
    std::vector<GraphAtom> atoms;
};

// {"vertices": n | [names], "edges":[{"u":..,"v":..,"len":..}],
//  "atoms":[{"edge":i,"offset":t,"mass":w} | {"vertex":v,"mass":w}]}
GraphInput parse_graph(const json& j);
GraphPoint parse_graph_point(const json& j);

ModelSpace parse_model(const json& j);
// Spatial coordinates (lifted on H^k) or full ambient coordinates.
Eigen::VectorXd parse_model_point(const ModelSpace& space, const json& j);
ModelMeasure parse_model_measure(const ModelSpace& space, const json& j);

// {"generators":[[perm]...], "cap":512}
GeneratedGroup parse_generated_group(const json& j);

struct ActionInput {
    std::optional<GeneratedGroup> generated;
    std::optional<FiniteAction> finite;
    std::optional<ModelAction> model;
    std::optional<MetricGraph> graph;
    std::size_t x = 0;
    std::optional<Eigen::VectorXd> model_x;
};

// {"group": {...}, "space": mm-space | {"model":..,"dim":k} | graph points,
//  "maps" | "generator_maps" | "isometries", "x": index or coordinates}
ActionInput parse_action(const json& j);

json to_json(const CertifiedValue& v);
json to_json(const Eigen::VectorXd& v);

}  // namespace concentra::cli
