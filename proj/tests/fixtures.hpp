#pragma once
// Small hand-built actions used across the test executables.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "concentra/graph_tree.hpp"
#include "concentra/hadamard.hpp"
#include "concentra/group_action.hpp"
#include "oracle.hpp"

namespace fixtures {

using namespace concentra;

inline FiniteMetricGroup z2() { return cyclic_group(2); }

// Z2 swapping the line points 0 and 2, fixing 1.
inline FiniteAction z2_swap_line() {
    auto x = FiniteMMSpace::from_line({0.0, 1.0, 2.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    return FiniteAction(z2(), x, {{0, 1, 2}, {2, 1, 0}});
}

// Z_n rotating n points of a circle of radius r; rotation k maps point i to i + k.
inline FiniteAction cyclic_rotation(std::size_t n, double r = 1.0) {
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back({r * std::cos(t), r * std::sin(t)});
    }
    auto x = FiniteMMSpace::from_points(pts, std::vector<double>(n, 1.0 / static_cast<double>(n)));
    std::vector<std::vector<std::size_t>> maps(n, std::vector<std::size_t>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) maps[k][i] = (i + k) % n;
    return FiniteAction(cyclic_group(n), x, maps);
}

inline FiniteAction trivial_action(std::size_t points = 3) {
    std::vector<double> pos;
    for (std::size_t i = 0; i < points; ++i) pos.push_back(static_cast<double>(i));
    auto x = FiniteMMSpace::from_line(pos, std::vector<double>(points, 1.0 / static_cast<double>(points)));
    std::vector<std::size_t> id(points);
    for (std::size_t i = 0; i < points; ++i) id[i] = i;
    return FiniteAction(FiniteMetricGroup::trivial(), x, {id});
}

// Z_n acting on a union of cyclic orbits whose sizes divide n, placed at
// random positions in the plane (the action is not isometric in general).
inline FiniteAction random_cyclic_action(std::mt19937_64& rng, std::size_t n, std::size_t max_points) {
    std::vector<std::size_t> divisors;
    for (std::size_t d = 1; d <= n; ++d)
        if (n % d == 0 && d <= max_points) divisors.push_back(d);
    std::vector<std::size_t> start;
    std::vector<std::size_t> size;
    std::size_t total = 0;
    do {
        const std::size_t d = divisors[rng() % divisors.size()];
        if (total + d > max_points) break;
        start.push_back(total);
        size.push_back(d);
        total += d;
    } while (rng() % 3 != 0);
    if (total == 0) {
        start.push_back(0);
        size.push_back(1);
        total = 1;
    }
    std::vector<std::vector<double>> pts(total, std::vector<double>(2));
    for (auto& p : pts)
        for (auto& c : p) c = std::floor(oracle::uniform(rng, 0.0, 6.0) * 2.0) / 2.0;
    auto x = FiniteMMSpace::from_points(pts, std::vector<double>(total, 1.0 / static_cast<double>(total)));
    std::vector<std::vector<std::size_t>> maps(n, std::vector<std::size_t>(total));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t o = 0; o < start.size(); ++o)
            for (std::size_t i = 0; i < size[o]; ++i) maps[k][start[o] + i] = start[o] + (i + k) % size[o];
    return FiniteAction(cyclic_group(n), x, maps);
}

inline FiniteMMSpace unit_grid(std::size_t w, std::size_t h) {
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < h; ++j) pts.push_back({static_cast<double>(i), static_cast<double>(j)});
    return FiniteMMSpace::from_points(pts, std::vector<double>(pts.size(), 1.0 / static_cast<double>(pts.size())));
}

// Z2 reflecting the points +-1, ..., +-half of the line through 0.
inline FiniteAction mirrored_line(std::size_t half) {
    std::vector<double> pos;
    for (std::size_t i = 1; i <= half; ++i) {
        pos.push_back(static_cast<double>(i));
        pos.push_back(-static_cast<double>(i));
    }
    std::vector<std::size_t> id(pos.size());
    std::vector<std::size_t> flip(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        id[i] = i;
        flip[i] = i ^ 1U;
    }
    auto x = FiniteMMSpace::from_line(pos, std::vector<double>(pos.size(), 1.0 / static_cast<double>(pos.size())));
    return FiniteAction(z2(), x, {id, flip});
}

// Z4 rotating the integer points of the closed disk of the given radius.
inline FiniteAction rotated_disk(int radius) {
    std::vector<std::vector<double>> pts;
    std::vector<std::pair<int, int>> ij;
    for (int i = -radius; i <= radius; ++i)
        for (int j = -radius; j <= radius; ++j)
            if (i * i + j * j <= radius * radius) {
                ij.emplace_back(i, j);
                pts.push_back({static_cast<double>(i), static_cast<double>(j)});
            }
    auto find = [&](int a, int b) {
        return static_cast<std::size_t>(std::find(ij.begin(), ij.end(), std::make_pair(a, b)) - ij.begin());
    };
    std::vector<std::vector<std::size_t>> maps(4, std::vector<std::size_t>(ij.size()));
    for (std::size_t p = 0; p < ij.size(); ++p) {
        auto [a, b] = ij[p];
        for (std::size_t k = 0; k < 4; ++k) {
            maps[k][p] = find(a, b);
            const int t = a;
            a = -b;
            b = t;
        }
    }
    auto x = FiniteMMSpace::from_points(pts, std::vector<double>(pts.size(), 1.0 / static_cast<double>(pts.size())));
    return FiniteAction(cyclic_group(4), x, maps);
}

struct GraphInstance {
    MetricGraph graph;
    std::vector<GraphAtom> atoms;
};

// Connected graph with loops and multi-edges; atoms cluster around one edge
// point with a few strays. Masses sum to 1.
inline GraphInstance random_graph(std::mt19937_64& rng, std::size_t max_vertices, std::size_t max_edges,
                                  std::size_t max_atoms, bool tree = false) {
    const std::size_t nv = (tree ? 2 : 1) + rng() % (tree ? max_vertices - 1 : max_vertices);
    auto length = [&] { return std::round(oracle::uniform(rng, 0.5, 3.0) * 4.0) / 4.0; };
    std::vector<GraphEdge> edges;
    for (std::size_t v = 1; v < nv; ++v) edges.push_back({rng() % v, v, length()});
    if (!tree) {
        const std::size_t extra = rng() % (max_edges - edges.size() + 1);
        for (std::size_t k = 0; k < extra; ++k) edges.push_back({rng() % nv, rng() % nv, length()});
        if (edges.empty()) edges.push_back({0, 0, length()});
    }
    MetricGraph graph(nv, edges);
    const std::size_t hub = rng() % edges.size();
    const double hub_at = oracle::uniform(rng, 0.0, edges[hub].length);
    const double spread = oracle::uniform(rng, 0.0, 0.6);
    const std::size_t count = 1 + rng() % max_atoms;
    std::vector<GraphAtom> atoms;
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        GraphAtom a;
        if (rng() % 4 != 0) {
            const double at = std::clamp(hub_at + oracle::uniform(rng, -spread, spread), 0.0, edges[hub].length);
            a.point = GraphPoint::on_edge(hub, at);
            a.mass = oracle::uniform(rng, 0.5, 1.5);
        } else if (rng() % 3 == 0) {
            a.point = GraphPoint::at_vertex(rng() % nv);
            a.mass = oracle::uniform(rng, 0.01, 0.3);
        } else {
            const std::size_t e = rng() % edges.size();
            a.point = GraphPoint::on_edge(e, oracle::uniform(rng, 0.0, edges[e].length));
            a.mass = oracle::uniform(rng, 0.01, 0.3);
        }
        total += a.mass;
        atoms.push_back(a);
    }
    for (auto& a : atoms) a.mass /= total;
    return {std::move(graph), std::move(atoms)};
}

inline std::vector<std::vector<double>> oracle_distances(const MetricGraph& g, const std::vector<GraphPoint>& points) {
    std::vector<oracle::MarkedEdge> edges;
    for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.length});
    std::vector<oracle::Mark> marks;
    for (const auto& p : points) marks.push_back({p.edge == no_index ? SIZE_MAX : p.edge, p.offset, p.vertex});
    return oracle::graph_distances(g.vertex_count(), edges, marks);
}

// Z_n rotating the (0, 1) plane of a model space.
inline concentra::ModelAction rotation_action(const concentra::ModelSpace& space, std::size_t n) {
    std::vector<concentra::ModelIsometry> isos;
    for (std::size_t k = 0; k < n; ++k) isos.push_back(concentra::rotation(space, 0, 1, 2.0 * M_PI * k / n));
    return {space, concentra::cyclic_group(n), isos};
}

// Point at geodesic distance r from the origin along spatial axis 0.
inline Eigen::VectorXd model_point(const concentra::ModelSpace& space, double r) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.dim()));
    v(0) = r;
    return space.from_polar(v);
}

inline Eigen::VectorXd random_model_point(std::mt19937_64& rng, const concentra::ModelSpace& space, double radius) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(space.dim()));
    for (auto& c : v) c = oracle::uniform(rng, -1.0, 1.0);
    return space.from_polar(v * (radius / std::max(1.0, v.norm())));
}

inline concentra::ModelMeasure random_model_measure(std::mt19937_64& rng, const concentra::ModelSpace& space,
                                                    std::size_t atoms, double radius) {
    concentra::ModelMeasure nu;
    for (std::size_t i = 0; i < atoms; ++i) {
        nu.points.push_back(random_model_point(rng, space, radius));
        nu.weights.push_back(oracle::uniform(rng, 0.05, 1.0));
    }
    return nu;
}

}  // namespace fixtures
