#include "io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>

namespace concentra::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::invalid_input, what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

double number(const json& j, const char* what) {
    if (!j.is_number()) bad(std::string(what) + " must be a number");
    return j.get<double>();
}

std::size_t index_of(const json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0) bad(std::string(what) + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

std::vector<double> numbers(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(number(v, what));
    return out;
}

std::vector<std::vector<double>> matrix(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array of arrays");
    std::vector<std::vector<double>> out;
    for (const auto& row : j) out.push_back(numbers(row, what));
    return out;
}

std::vector<std::size_t> indices(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array");
    std::vector<std::size_t> out;
    for (const auto& v : j) out.push_back(index_of(v, what));
    return out;
}

std::vector<double> uniform_weights(std::size_t n) { return std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0); }

std::vector<std::vector<double>> coordinate_distances(const std::vector<std::vector<double>>& coords,
                                                      const std::string& metric) {
    const std::size_t n = coords.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (coords[i].size() != coords.front().size()) bad("coordinates have different dimensions");
        for (std::size_t j = 0; j < i; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < coords[i].size(); ++k) {
                const double diff = std::fabs(coords[i][k] - coords[j][k]);
                if (metric == "euclidean") acc += diff * diff;
                else if (metric == "l1") acc += diff;
                else if (metric == "linf") acc = std::max(acc, diff);
                else bad("unknown metric \"" + metric + "\"");
            }
            d[i][j] = d[j][i] = metric == "euclidean" ? std::sqrt(acc) : acc;
        }
    }
    return d;
}

Permutation permutation(const json& j) {
    if (!j.is_array()) throw Error(ErrorCode::not_a_permutation, "permutation must be an array");
    Permutation p;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw Error(ErrorCode::not_a_permutation, "permutation entries must be nonnegative integers");
        p.push_back(v.get<std::size_t>());
    }
    return p;
}

std::vector<std::size_t> invert_map(const std::vector<std::size_t>& m) {
    std::vector<std::size_t> out(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] >= m.size() || out[m[i]] != m.size()) throw Error(ErrorCode::invalid_action, "generator map is not a bijection");
        out[m[i]] = i;
    }
    return out;
}

// Element maps of a generated group from one map per generator.
std::vector<std::vector<std::size_t>> compose_generator_maps(const GeneratedGroup& g,
                                                             const std::vector<std::vector<std::size_t>>& gen_maps,
                                                             std::size_t points) {
    if (gen_maps.size() != g.generators.size()) bad("one generator map per generator required");
    std::vector<std::optional<std::vector<std::size_t>>> of_move(g.size());
    for (std::size_t j = 0; j < gen_maps.size(); ++j) {
        if (gen_maps[j].size() != points) throw Error(ErrorCode::invalid_action, "map size mismatch");
        const std::size_t e = g.generators[j];
        if (!of_move[e]) of_move[e] = gen_maps[j];
        const std::size_t inv = g.group.inverse(e);
        if (!of_move[inv]) of_move[inv] = invert_map(gen_maps[j]);
    }
    std::vector<std::vector<std::size_t>> maps(g.size());
    maps[0].resize(points);
    for (std::size_t x = 0; x < points; ++x) maps[0][x] = x;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const auto& step = *of_move[g.step[i]];
        const auto& prev = maps[g.parent[i]];
        maps[i].resize(points);
        for (std::size_t x = 0; x < points; ++x) maps[i][x] = step[prev[x]];
    }
    return maps;
}

ModelIsometry parse_isometry(const ModelSpace& space, const json& j) {
    if (j.contains("rotate")) {
        const auto& r = j.at("rotate");
        const auto axes = indices(field(r, "axes"), "rotation axes");
        if (axes.size() != 2) bad("rotation needs two axes");
        return rotation(space, axes[0], axes[1], number(field(r, "angle"), "rotation angle"));
    }
    if (j.contains("translate")) {
        const auto& t = j.at("translate");
        return translation(space, index_of(field(t, "axis"), "translation axis"), number(field(t, "distance"), "distance"));
    }
    if (j.contains("reflect")) return reflection(space, index_of(field(j.at("reflect"), "axis"), "reflection axis"));
    const auto lin = matrix(field(j, "linear"), "linear part");
    const auto n = static_cast<Eigen::Index>(space.ambient_dim());
    if (static_cast<Eigen::Index>(lin.size()) != n) bad("linear part has the wrong size");
    ModelIsometry g = identity_isometry(space);
    for (Eigen::Index r = 0; r < n; ++r) {
        if (static_cast<Eigen::Index>(lin[static_cast<std::size_t>(r)].size()) != n) bad("linear part has the wrong size");
        for (Eigen::Index c = 0; c < n; ++c) g.linear(r, c) = lin[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    if (j.contains("translation")) {
        const auto t = numbers(j.at("translation"), "translation");
        if (static_cast<Eigen::Index>(t.size()) != n) bad("translation has the wrong size");
        for (Eigen::Index r = 0; r < n; ++r) g.translation(r) = t[static_cast<std::size_t>(r)];
    }
    return g;
}

struct GroupInput {
    FiniteMetricGroup group;
    std::optional<GeneratedGroup> generated;
};

GroupInput parse_group(const json& j) {
    if (j.contains("cyclic")) return {cyclic_group(index_of(j.at("cyclic"), "cyclic order")), std::nullopt};
    if (j.contains("trivial")) return {FiniteMetricGroup::trivial(), std::nullopt};
    if (j.contains("table")) {
        std::vector<std::vector<std::size_t>> table;
        for (const auto& row : field(j, "table")) table.push_back(indices(row, "table row"));
        const json metric = j.value("metric", json("word"));
        if (metric.is_string()) {
            if (metric.get<std::string>() != "word") bad("group metric must be \"word\" or a matrix");
            return {FiniteMetricGroup::with_word_metric(std::move(table), indices(field(j, "generators"), "generators")),
                    std::nullopt};
        }
        return {FiniteMetricGroup(std::move(table), matrix(metric, "group metric")), std::nullopt};
    }
    auto g = parse_generated_group(j);
    FiniteMetricGroup group = g.group;
    return {std::move(group), std::move(g)};
}

}  // namespace

json load_json(const std::string& path) {
    try {
        if (path == "-") return json::parse(std::cin);
        std::ifstream in(path);
        if (!in) bad("cannot open " + path);
        return json::parse(in);
    } catch (const json::exception& e) {
        bad(std::string("malformed JSON: ") + e.what());
    }
}

FiniteMMSpace parse_mmspace(const json& j) {
    RawMMSpace raw;
    const json* coords = nullptr;
    std::string metric = "euclidean";
    if (j.contains("dist") && j.at("dist").is_object()) {
        coords = &field(j.at("dist"), "coords");
        metric = j.at("dist").value("metric", metric);
    } else if (j.contains("coords")) {
        coords = &j.at("coords");
        metric = j.value("metric", metric);
    }
    raw.dist = coords ? coordinate_distances(matrix(*coords, "coords"), metric) : matrix(field(j, "dist"), "dist");
    const std::size_t n = raw.dist.size();
    raw.weights = j.contains("weights") ? numbers(j.at("weights"), "weights") : uniform_weights(n);
    if (j.contains("points")) {
        for (const auto& p : j.at("points")) raw.point_ids.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    }
    raw.metric_strict = j.value("metric_strict", false);
    return validate_mmspace(raw);
}

json mmspace_to_json(const FiniteMMSpace& space) {
    json out;
    std::vector<std::vector<double>> d(space.size(), std::vector<double>(space.size()));
    for (std::size_t i = 0; i < space.size(); ++i)
        for (std::size_t k = 0; k < space.size(); ++k) d[i][k] = space.dist(i, k);
    if (!space.point_ids().empty()) out["points"] = space.point_ids();
    out["dist"] = d;
    out["weights"] = space.weights();
    return out;
}

bool is_line_measure(const json& j) { return j.is_object() && (j.contains("positions") || j.contains("atoms")); }

RealMeasure1D parse_line_measure(const json& j) {
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms")) atoms.push_back({number(field(a, "position"), "position"), number(field(a, "mass"), "mass")});
    } else {
        const auto pos = numbers(field(j, "positions"), "positions");
        const auto w = j.contains("weights") ? numbers(j.at("weights"), "weights") : uniform_weights(pos.size());
        if (w.size() != pos.size()) bad("one weight per position required");
        for (std::size_t i = 0; i < pos.size(); ++i) atoms.push_back({pos[i], w[i]});
    }
    if (atoms.empty()) throw Error(ErrorCode::empty_measure, "measure has no atoms");
    for (const auto& a : atoms)
        if (!std::isfinite(a.position) || !std::isfinite(a.mass) || a.mass < 0.0) bad("atoms must be finite with nonnegative mass");
    return RealMeasure1D(std::move(atoms));
}

PointCloudMeasure parse_point_cloud(const json& j) {
    auto coords = matrix(field(j, "coords"), "coords");
    auto w = j.contains("weights") ? numbers(j.at("weights"), "weights") : uniform_weights(coords.size());
    return PointCloudMeasure(std::move(coords), std::move(w));
}

GraphPoint parse_graph_point(const json& j) {
    if (j.contains("vertex")) return GraphPoint::at_vertex(index_of(j.at("vertex"), "vertex"));
    return GraphPoint::on_edge(index_of(field(j, "edge"), "edge"), number(field(j, "offset"), "offset"));
}

GraphInput parse_graph(const json& j) {
    const json& v = field(j, "vertices");
    std::vector<std::string> names;
    std::size_t n = 0;
    if (v.is_array()) {
        for (const auto& name : v) names.push_back(name.is_string() ? name.get<std::string>() : name.dump());
        n = names.size();
    } else {
        n = index_of(v, "vertices");
    }
    auto vertex = [&](const json& e) -> std::size_t {
        if (e.is_string()) {
            const auto it = std::find(names.begin(), names.end(), e.get<std::string>());
            if (it == names.end()) bad("unknown vertex " + e.get<std::string>());
            return static_cast<std::size_t>(it - names.begin());
        }
        return index_of(e, "edge endpoint");
    };
    std::vector<GraphEdge> edges;
    for (const auto& e : field(j, "edges")) edges.push_back({vertex(field(e, "u")), vertex(field(e, "v")), number(field(e, "len"), "len")});
    GraphInput out{MetricGraph(n, std::move(edges)), {}};
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms")) {
            GraphPoint p = a.contains("vertex") && a.at("vertex").is_string() ? GraphPoint::at_vertex(vertex(a.at("vertex")))
                                                                               : parse_graph_point(a);
            out.atoms.push_back({p, number(field(a, "mass"), "mass")});
        }
    }
    return out;
}

ModelSpace parse_model(const json& j) {
    const std::string model = field(j, "model").get<std::string>();
    const std::size_t dim = index_of(field(j, "dim"), "dim");
    if (model == "euclidean") return ModelSpace::euclidean(dim);
    if (model == "hyperboloid" || model == "hyperbolic") return ModelSpace::hyperbolic(dim);
    bad("model must be \"euclidean\" or \"hyperboloid\"");
}

Eigen::VectorXd parse_model_point(const ModelSpace& space, const json& j) {
    const auto c = numbers(j, "point");
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
    if (c.size() == space.dim()) return space.lift(v);
    space.check_point(v);
    return v;
}

ModelMeasure parse_model_measure(const ModelSpace& space, const json& j) {
    ModelMeasure nu;
    for (const auto& p : field(j, "points")) nu.points.push_back(parse_model_point(space, p));
    nu.weights = j.contains("weights") ? numbers(j.at("weights"), "weights") : uniform_weights(nu.points.size());
    return nu;
}

GeneratedGroup parse_generated_group(const json& j) {
    std::vector<Permutation> gens;
    for (const auto& p : field(j, "generators")) gens.push_back(permutation(p));
    return generate_group(gens, j.contains("cap") ? index_of(j.at("cap"), "cap") : default_group_cap);
}

ActionInput parse_action(const json& j) {
    ActionInput out;
    auto group = parse_group(field(j, "group"));
    out.generated = group.generated;
    const json& space = field(j, "space");

    if (space.contains("model")) {
        const ModelSpace model = parse_model(space);
        std::vector<ModelIsometry> isos;
        for (const auto& g : field(j, "isometries")) isos.push_back(parse_isometry(model, g));
        if (out.generated && isos.size() == out.generated->generators.size() && isos.size() != out.generated->size()) {
            out.model = cayley_model_action(*out.generated, model, isos);
        } else {
            if (isos.size() != group.group.size()) bad("one isometry per group element (or per generator) required");
            out.model = ModelAction{model, group.group, std::move(isos)};
        }
        out.model_x = parse_model_point(model, field(j, "x"));
        return out;
    }

    FiniteMMSpace points_space;
    if (space.contains("graph")) {
        const auto g = parse_graph(space.at("graph"));
        std::vector<GraphPoint> pts;
        for (const auto& p : field(space, "points")) pts.push_back(parse_graph_point(p));
        const auto w = space.contains("weights") ? numbers(space.at("weights"), "weights") : uniform_weights(pts.size());
        points_space = g.graph.point_space(pts, w);
        out.graph = g.graph;
    } else {
        points_space = parse_mmspace(space);
    }
    std::vector<std::vector<std::size_t>> maps;
    if (j.contains("maps")) {
        for (const auto& m : j.at("maps")) maps.push_back(indices(m, "map"));
    } else {
        if (!out.generated) bad("\"generator_maps\" requires a group given by permutation generators");
        std::vector<std::vector<std::size_t>> gen_maps;
        for (const auto& m : field(j, "generator_maps")) gen_maps.push_back(indices(m, "generator map"));
        maps = compose_generator_maps(*out.generated, gen_maps, points_space.size());
    }
    out.finite = FiniteAction(group.group, std::move(points_space), std::move(maps));
    out.x = j.contains("x") ? index_of(j.at("x"), "x") : 0;
    if (out.x >= out.finite->space().size()) bad("x is out of range");
    return out;
}

json to_json(const CertifiedValue& v) {
    json out{{"lower", v.lower}, {"upper", v.upper}, {"exact", v.exact}, {"method", std::string(to_string(v.method))}};
    if (v.exact) out["value"] = v.lower;
    if (!v.witness.description.empty()) out["witness"] = v.witness.description;
    if (!v.witness.set_a.empty()) out["set_a"] = v.witness.set_a;
    if (!v.witness.set_b.empty()) out["set_b"] = v.witness.set_b;
    return out;
}

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace concentra::cli
