#include "instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace concentra::cli {

Rng derived_rng(std::uint64_t seed, std::uint64_t family, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(family), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t below(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::vector<double> random_weights(Rng& rng, std::size_t n, bool allow_zero) {
    std::vector<double> w(n);
    for (auto& v : w) v = (allow_zero && uniform(rng) < 0.15) ? 0.0 : 0.05 + uniform(rng);
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (total == 0.0) {
        w[0] = 1.0;
        total = 1.0;
    }
    for (auto& v : w) v /= total;
    return w;
}

namespace {

std::vector<std::vector<double>> random_points(Rng& rng, std::size_t n, std::size_t k, bool lattice) {
    std::vector<std::vector<double>> pts(n, std::vector<double>(k));
    for (auto& p : pts)
        for (auto& c : p) c = lattice ? std::floor(uniform(rng, 0.0, 5.0)) : uniform(rng, 0.0, 4.0);
    return pts;
}

}  // namespace

FiniteMMSpace random_metric_space(Rng& rng, std::size_t n) {
    const std::size_t k = 1 + below(rng, 3);
    const bool lattice = rng() % 2 == 0;
    return FiniteMMSpace::from_points(random_points(rng, n, k, lattice), random_weights(rng, n, true));
}

FiniteMMSpace random_line_space(Rng& rng, std::size_t n) {
    std::vector<double> pos;
    for (const auto& p : random_points(rng, n, 1, rng() % 2 == 0)) pos.push_back(p[0]);
    return FiniteMMSpace::from_line(pos, random_weights(rng, n, true));
}

FiniteMMSpace random_space(Rng& rng, std::size_t n) {
    if (rng() % 4 != 0) return random_metric_space(rng, n);
    RawMMSpace raw;
    raw.dist.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) raw.dist[i][j] = raw.dist[j][i] = std::round(uniform(rng, 0.5, 6.0) * 4.0) / 4.0;
    raw.weights = random_weights(rng, n, true);
    return validate_mmspace(raw);
}

PointCloudMeasure random_cloud(Rng& rng, std::size_t n, std::size_t k) {
    return PointCloudMeasure(random_points(rng, n, k, rng() % 3 == 0), random_weights(rng, n, false));
}

GraphInstance random_graph(Rng& rng, std::size_t max_vertices, std::size_t max_edges, std::size_t max_atoms, bool tree) {
    const std::size_t nv = (tree ? 2 : 1) + below(rng, tree ? max_vertices - 1 : max_vertices);
    auto length = [&] { return std::round(uniform(rng, 0.5, 3.0) * 4.0) / 4.0; };
    std::vector<GraphEdge> edges;
    for (std::size_t v = 1; v < nv; ++v) edges.push_back({below(rng, v), v, length()});
    if (!tree) {
        const std::size_t extra = below(rng, max_edges - edges.size() + 1);
        for (std::size_t k = 0; k < extra; ++k) edges.push_back({below(rng, nv), below(rng, nv), length()});
        if (edges.empty()) edges.push_back({0, 0, length()});
    }
    MetricGraph graph(nv, edges);
    const std::size_t hub = below(rng, edges.size());
    const double hub_at = uniform(rng, 0.0, edges[hub].length);
    const double spread = uniform(rng, 0.0, 0.6);
    const std::size_t count = 1 + below(rng, max_atoms);
    std::vector<GraphAtom> atoms;
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        GraphAtom a;
        if (rng() % 4 != 0) {
            a.point = GraphPoint::on_edge(hub, std::clamp(hub_at + uniform(rng, -spread, spread), 0.0, edges[hub].length));
            a.mass = uniform(rng, 0.5, 1.5);
        } else if (rng() % 3 == 0) {
            a.point = GraphPoint::at_vertex(below(rng, nv));
            a.mass = uniform(rng, 0.01, 0.3);
        } else {
            const std::size_t e = below(rng, edges.size());
            a.point = GraphPoint::on_edge(e, uniform(rng, 0.0, edges[e].length));
            a.mass = uniform(rng, 0.01, 0.3);
        }
        total += a.mass;
        atoms.push_back(a);
    }
    for (auto& a : atoms) a.mass /= total;
    return {std::move(graph), std::move(atoms)};
}

ActionInstance random_permutation_action(Rng& rng, std::size_t max_group, std::size_t max_points) {
    for (;;) {
        const std::size_t n = 2 + below(rng, max_points - 1);
        std::vector<Permutation> gens(1 + below(rng, 2));
        for (auto& p : gens) {
            p.resize(n);
            std::iota(p.begin(), p.end(), std::size_t{0});
            // Short cycles on a random subset keep the generated group small.
            const std::size_t moved = 2 + below(rng, std::min<std::size_t>(n - 1, 4));
            std::vector<std::size_t> pick(n);
            std::iota(pick.begin(), pick.end(), std::size_t{0});
            std::shuffle(pick.begin(), pick.end(), rng);
            for (std::size_t i = 0; i < moved; ++i) p[pick[i]] = pick[(i + 1) % moved];
        }
        std::optional<GeneratedGroup> g;
        try {
            g = generate_group(gens, max_group);
        } catch (const Error&) {
            continue;
        }
        auto space = FiniteMMSpace::from_points(random_points(rng, n, 2, rng() % 2 == 0), random_weights(rng, n, false));
        FiniteAction action(g->group, std::move(space), g->elements);
        const std::size_t x = below(rng, n);
        return {std::move(*g), std::move(action), x};
    }
}

ModelAction rotation_action(const ModelSpace& space, std::size_t n) {
    std::vector<ModelIsometry> isos;
    for (std::size_t k = 0; k < n; ++k)
        isos.push_back(rotation(space, 0, 1, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n)));
    return {space, cyclic_group(n), std::move(isos)};
}

Eigen::VectorXd model_point(const ModelSpace& space, double r) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.dim()));
    v(0) = r;
    return space.from_polar(v);
}

ModelMeasure random_model_measure(Rng& rng, const ModelSpace& space, std::size_t atoms, double radius) {
    ModelMeasure nu;
    for (std::size_t i = 0; i < atoms; ++i) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(space.dim()));
        for (auto& c : v) c = uniform(rng, -1.0, 1.0);
        nu.points.push_back(space.from_polar(v * (radius / std::max(1.0, v.norm()))));
        nu.weights.push_back(uniform(rng, 0.05, 1.0));
    }
    return nu;
}

}  // namespace concentra::cli
