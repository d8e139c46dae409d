#include "concentra/graph_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <queue>
#include <utility>

namespace concentra {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
const double pi_over_root2 = M_PI / std::sqrt(2.0);

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

double sep_upper(const FiniteMMSpace& space, double k1, double k2, std::size_t limit) {
    return separation(space, k1, k2, limit).upper;
}

}  // namespace

MetricGraph::MetricGraph(std::size_t vertex_count, std::vector<GraphEdge> edges)
    : n_(vertex_count), edges_(std::move(edges)), a_(inf) {
    if (n_ == 0) throw Error(ErrorCode::invalid_input, "graph without vertices");
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& edge = edges_[e];
        if (edge.u >= n_ || edge.v >= n_) throw Error(ErrorCode::invalid_input, fmt("edge %g has an unknown endpoint", static_cast<double>(e)));
        if (!(edge.length > 0.0) || !std::isfinite(edge.length)) {
            throw Error(ErrorCode::nonpositive_radius, fmt("edge %g has length %g", static_cast<double>(e), edge.length));
        }
        if (edge.u != edge.v) a_ = std::min(a_, edge.length);
    }

    vd_.assign(n_ * n_, inf);
    via_.assign(n_ * n_, no_index);
    std::vector<std::vector<std::size_t>> incident(n_);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (edges_[e].u == edges_[e].v) continue;
        incident[edges_[e].u].push_back(e);
        incident[edges_[e].v].push_back(e);
    }
    using Item = std::pair<double, std::size_t>;
    for (std::size_t s = 0; s < n_; ++s) {
        double* dist = &vd_[s * n_];
        std::size_t* via = &via_[s * n_];
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        dist[s] = 0.0;
        queue.emplace(0.0, s);
        while (!queue.empty()) {
            const auto [d, v] = queue.top();
            queue.pop();
            if (d > dist[v]) continue;
            for (std::size_t e : incident[v]) {
                const std::size_t w = edges_[e].u == v ? edges_[e].v : edges_[e].u;
                const double nd = d + edges_[e].length;
                if (nd < dist[w]) {
                    dist[w] = nd;
                    via[w] = e;
                    queue.emplace(nd, w);
                }
            }
        }
        for (std::size_t v = 0; v < n_; ++v) {
            if (dist[v] == inf) throw Error(ErrorCode::disconnected_graph, fmt("vertex %g is unreachable", static_cast<double>(v)));
        }
    }
    // Symmetrize against rounding from different summation orders.
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = a + 1; b < n_; ++b) vd_[b * n_ + a] = vd_[a * n_ + b];
}

bool MetricGraph::is_tree() const noexcept {
    if (edges_.size() + 1 != n_) return false;
    return std::none_of(edges_.begin(), edges_.end(), [](const GraphEdge& e) { return e.u == e.v; });
}

void MetricGraph::check(const GraphPoint& p) const {
    if (p.edge == no_index) {
        if (p.vertex >= n_) throw Error(ErrorCode::invalid_input, "graph point names no vertex");
        return;
    }
    if (p.edge >= edges_.size()) throw Error(ErrorCode::invalid_input, "graph point names an unknown edge");
    if (!(p.offset >= 0.0 && p.offset <= edges_[p.edge].length)) {
        throw Error(ErrorCode::invalid_input, fmt("offset %g outside [0, %g]", p.offset, edges_[p.edge].length));
    }
}

GraphPoint MetricGraph::canonical(GraphPoint p) const {
    check(p);
    if (p.edge == no_index) return GraphPoint::at_vertex(p.vertex);
    const auto& e = edges_[p.edge];
    if (p.offset == 0.0) return GraphPoint::at_vertex(e.u);
    if (p.offset == e.length) return GraphPoint::at_vertex(e.v);
    return p;
}

std::vector<MetricGraph::End> MetricGraph::ends(const GraphPoint& p) const {
    if (p.edge == no_index) return {{p.vertex, 0.0}};
    const auto& e = edges_[p.edge];
    if (e.u == e.v) return {{e.u, std::min(p.offset, e.length - p.offset)}};
    return {{e.u, p.offset}, {e.v, e.length - p.offset}};
}

double MetricGraph::direct(const GraphPoint& p, const GraphPoint& q) const {
    if (p.edge == no_index || p.edge != q.edge) return inf;
    const double gap = std::abs(p.offset - q.offset);
    const auto& e = edges_[p.edge];
    return e.u == e.v ? std::min(gap, e.length - gap) : gap;
}

double MetricGraph::distance(GraphPoint p, GraphPoint q) const {
    p = canonical(p);
    q = canonical(q);
    double best = direct(p, q);
    for (const End& a : ends(p))
        for (const End& b : ends(q)) best = std::min(best, a.dist + vertex_distance(a.vertex, b.vertex) + b.dist);
    return best;
}

GraphPoint MetricGraph::point_along(GraphPoint p, GraphPoint q, double t) const {
    p = canonical(p);
    q = canonical(q);
    const double total = distance(p, q);
    t = std::clamp(t, 0.0, total);
    if (direct(p, q) <= total) {
        const auto& e = edges_[p.edge];
        double step = q.offset - p.offset;
        if (e.u == e.v && std::abs(step) > e.length / 2) step = step > 0 ? step - e.length : step + e.length;
        double at = p.offset + (step >= 0 ? t : -t);
        if (at < 0) at += e.length;
        if (at > e.length) at -= e.length;
        return canonical(GraphPoint::on_edge(p.edge, at));
    }
    End from{0, inf};
    End to{0, inf};
    double best = inf;
    for (const End& a : ends(p))
        for (const End& b : ends(q)) {
            const double d = a.dist + vertex_distance(a.vertex, b.vertex) + b.dist;
            if (d < best) {
                best = d;
                from = a;
                to = b;
            }
        }
    // Leaving p along its edge.
    if (t <= from.dist && p.edge != no_index) {
        const auto& e = edges_[p.edge];
        double at;
        if (e.u == e.v) {
            at = p.offset <= e.length / 2 ? p.offset - t : p.offset + t;
        } else {
            at = from.vertex == e.u ? p.offset - t : p.offset + t;
        }
        return canonical(GraphPoint::on_edge(p.edge, std::clamp(at, 0.0, e.length)));
    }
    t -= from.dist;
    // Vertex path from.vertex -> to.vertex, recovered backwards.
    std::vector<std::size_t> path{to.vertex};
    while (path.back() != from.vertex) {
        const auto& e = edges_[via_[from.vertex * n_ + path.back()]];
        path.push_back(e.u == path.back() ? e.v : e.u);
    }
    std::reverse(path.begin(), path.end());
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const std::size_t e_id = via_[from.vertex * n_ + path[i + 1]];
        const auto& e = edges_[e_id];
        if (t <= e.length) {
            const double at = e.u == path[i] ? t : e.length - t;
            return canonical(GraphPoint::on_edge(e_id, at));
        }
        t -= e.length;
    }
    if (q.edge == no_index) return q;
    const auto& e = edges_[q.edge];
    double at;
    if (e.u == e.v) {
        at = q.offset <= e.length / 2 ? t : e.length - t;
    } else {
        at = to.vertex == e.u ? t : e.length - t;
    }
    return canonical(GraphPoint::on_edge(q.edge, std::clamp(at, 0.0, e.length)));
}

FiniteMMSpace MetricGraph::point_space(const std::vector<GraphPoint>& points, const std::vector<double>& weights) const {
    RawMMSpace raw;
    const std::size_t n = points.size();
    raw.dist.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) raw.dist[i][j] = raw.dist[j][i] = distance(points[i], points[j]);
    raw.weights = weights;
    return validate_mmspace(raw);
}

FiniteMMSpace MetricGraph::atom_space(const std::vector<GraphAtom>& atoms) const {
    std::vector<GraphPoint> points;
    std::vector<double> weights;
    for (const auto& a : atoms) {
        points.push_back(a.point);
        weights.push_back(a.mass);
    }
    return point_space(points, weights);
}

double circle_arc(double circumference, double s, double t) {
    double gap = std::fmod(std::abs(s - t), circumference);
    return std::min(gap, circumference - gap);
}

double circle_chord(double circumference, double s, double t) {
    return circumference / M_PI * std::sin(M_PI * circle_arc(circumference, s, t) / circumference);
}

CircleBound circle_bound(const RealMeasure1D& nu, double circumference, double kappa, std::size_t exact_limit) {
    if (!(circumference > 0.0) || !std::isfinite(circumference)) throw Error(ErrorCode::nonpositive_radius, "circumference");
    const auto& atoms = nu.atoms();
    RawMMSpace raw;
    raw.dist.assign(atoms.size(), std::vector<double>(atoms.size(), 0.0));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        raw.weights.push_back(atoms[i].mass);
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            raw.dist[i][j] = raw.dist[j][i] = circle_arc(circumference, atoms[i].position, atoms[j].position);
        }
    }
    const FiniteMMSpace space = validate_mmspace(raw);
    CircleBound out;
    out.sep = separation(space, kappa / 4, kappa / 4, exact_limit);
    out.bound = pi_over_root2 * out.sep.upper;
    if (kappa < space.total_mass()) {
        out.partial_diameter = partial_diameter(space, kappa, exact_limit);
    } else {
        out.partial_diameter = CertifiedValue::exact_value(0.0, Method::formula, {"deficit covers the mass", {}, {}});
    }
    out.holds = out.partial_diameter.lower <= out.bound + metric_tol;
    return out;
}

GraphBound graph_pdiam_bound(const MetricGraph& graph, const std::vector<GraphAtom>& atoms, double a, double kappa,
                             double kappa_prime, std::size_t exact_limit) {
    const FiniteMMSpace space = graph.atom_space(atoms);
    const double m = space.total_mass();
    if (!(kappa > 0.0) || !(kappa_prime > 0.0)) throw Error(ErrorCode::nonpositive_kappa, fmt("kappa=%g, kappa'=%g", kappa, kappa_prime));
    if (kappa >= m) throw Error(ErrorCode::deficit_exceeds_mass, fmt("kappa=%g, m=%g", kappa, m));
    if (!(a > 0.0)) throw Error(ErrorCode::nonpositive_radius, fmt("a=%g", a));

    GraphBound out;
    auto fail = [&](const std::string& clause) {
        if (!out.diagnostics.empty()) out.diagnostics += "; ";
        out.diagnostics += clause;
    };
    if (!(kappa_prime < kappa)) fail(fmt("kappa' = %g is not below kappa = %g", kappa_prime, kappa));
    if (!(a < graph.min_edge_length())) fail(fmt("a = %g is not below a_Gamma = %g", a, graph.min_edge_length()));
    const double s1 = 2.0 * sep_upper(space, kappa / 3, kappa / 3, exact_limit);
    const double s2 = 4.0 * sep_upper(space, (m - kappa) / 3, kappa_prime, exact_limit);
    if (!(s1 < a)) fail(fmt("2 Sep(kappa/3, kappa/3) = %g is not below a = %g", s1, a));
    if (!(s2 < a)) fail(fmt("4 Sep((m-kappa)/3, kappa') = %g is not below a = %g", s2, a));
    if (!out.diagnostics.empty()) return out;

    out.hypothesis_ok = true;
    out.vertex_term = a / 2 + 2.0 * sep_upper(space, kappa / 3, kappa, exact_limit);
    const double q = (kappa - kappa_prime) / 4;
    out.circle_term = pi_over_root2 * sep_upper(space, q, q, exact_limit);
    out.bound = std::max(out.vertex_term, out.circle_term);
    out.partial_diameter = partial_diameter(space, kappa, exact_limit);
    out.holds = out.partial_diameter.lower <= out.bound + metric_tol;
    return out;
}

GraphOrbitBound graph_orbit_bound(const MetricGraph& graph, const FiniteAction& action, std::size_t x, double a,
                                  double kappa, double kappa_prime, std::size_t exact_limit) {
    if (!(kappa > 0.0 && kappa < 0.5)) throw Error(ErrorCode::invalid_input, fmt("kappa=%g outside (0, 1/2)", kappa));
    if (!(kappa_prime > 0.0)) throw Error(ErrorCode::nonpositive_kappa, fmt("kappa'=%g", kappa_prime));
    const ModulusFunction omega = omega_modulus(action, x);
    auto term = [&](double k1, double k2) { return orbit_separation_bound(action, omega, k1, k2, exact_limit).upper; };

    std::string clause;
    if (!(kappa_prime < kappa)) clause = fmt("kappa' = %g is not below kappa = %g", kappa_prime, kappa);
    else if (!(a > 0.0 && a < graph.min_edge_length())) clause = fmt("a = %g is not in (0, a_Gamma = %g)", a, graph.min_edge_length());
    else {
        const double h = std::max(2.0 * term(kappa / 3, kappa / 3), 4.0 * term((1.0 - kappa) / 3, kappa_prime));
        if (!(h < a)) clause = fmt("omega-separation term %g is not below a = %g", h, a);
    }
    if (!clause.empty()) throw HypothesisError(clause);

    GraphOrbitBound out;
    const double q = (kappa - kappa_prime) / 4;
    out.s = std::max(a / 2 + 2.0 * term(kappa / 3, kappa), pi_over_root2 * term(q, q));
    const ModulusFunction rho = rho_modulus(action);
    out.bound = out.s + rho(out.s);

    const FiniteMMSpace nu = orbit_measure(action, x);
    const CertifiedValue heavy = partial_diameter(nu, kappa, exact_limit);
    const OrbitCertificate cert = subset_certificate(action, x, heavy.witness.set_a);
    out.z = cert.x0;
    out.actual = cert.actual;
    out.holds = out.actual <= out.bound + metric_tol;
    return out;
}

TreeCapture tree_capture(const MetricGraph& tree, const std::vector<GraphAtom>& atoms, double kappa,
                         std::size_t exact_limit) {
    if (!tree.is_tree()) throw Error(ErrorCode::not_a_tree, "graph has a cycle or a loop");
    const FiniteMMSpace space = tree.atom_space(atoms);
    const double m = space.total_mass();
    if (!(kappa > 0.0)) throw Error(ErrorCode::nonpositive_kappa, fmt("kappa=%g", kappa));
    if (kappa >= m) throw Error(ErrorCode::deficit_exceeds_mass, fmt("kappa=%g, m=%g", kappa, m));

    // The smallest ball around a subset of a tree is centred at the midpoint
    // of its farthest pair, so midpoints of atom pairs are enough.
    std::vector<GraphPoint> candidates;
    for (std::size_t v = 0; v < tree.vertex_count(); ++v) candidates.push_back(GraphPoint::at_vertex(v));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!(atoms[i].mass > 0.0)) continue;
        for (std::size_t j = i; j < atoms.size(); ++j) {
            if (!(atoms[j].mass > 0.0)) continue;
            candidates.push_back(tree.point_along(atoms[i].point, atoms[j].point, space.dist(i, j) / 2));
        }
    }
    TreeCapture out;
    out.radius = inf;
    std::vector<std::pair<double, double>> reach(atoms.size());
    for (const GraphPoint& c : candidates) {
        for (std::size_t i = 0; i < atoms.size(); ++i) reach[i] = {tree.distance(c, atoms[i].point), atoms[i].mass};
        std::sort(reach.begin(), reach.end());
        double mass = 0.0;
        for (const auto& [d, w] : reach) {
            mass += w;
            if (mass >= m - kappa - mass_tol) {
                if (d < out.radius) {
                    out.radius = d;
                    out.center = c;
                }
                break;
            }
        }
    }
    out.sep = sep_upper(space, kappa / 2, m / 3, exact_limit);
    out.holds = out.radius <= out.sep + metric_tol;
    return out;
}

}  // namespace concentra
