#pragma once

#include <limits>
#include <string>
#include <vector>

#include "concentra/concentration.hpp"
#include "concentra/group_action.hpp"

namespace concentra {

inline constexpr std::size_t no_index = std::numeric_limits<std::size_t>::max();

struct GraphEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    double length = 1.0;
};

// A vertex (edge == no_index) or a point of an edge at `offset` from edge.u.
struct GraphPoint {
    std::size_t edge = no_index;
    double offset = 0.0;
    std::size_t vertex = no_index;

    static GraphPoint at_vertex(std::size_t v) { return {no_index, 0.0, v}; }
    static GraphPoint on_edge(std::size_t e, double t) { return {e, t, no_index}; }
};

struct GraphAtom {
    GraphPoint point;
    double mass = 0.0;
};

class MetricGraph {
public:
    MetricGraph(std::size_t vertex_count, std::vector<GraphEdge> edges);

    std::size_t vertex_count() const noexcept { return n_; }
    const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
    // Shortest edge between distinct vertices; +inf when only loops exist.
    double min_edge_length() const noexcept { return a_; }
    bool is_tree() const noexcept;

    double vertex_distance(std::size_t a, std::size_t b) const { return vd_[a * n_ + b]; }
    GraphPoint canonical(GraphPoint p) const;
    double distance(GraphPoint p, GraphPoint q) const;
    // Point at distance t from p on a shortest path towards q.
    GraphPoint point_along(GraphPoint p, GraphPoint q, double t) const;

    FiniteMMSpace point_space(const std::vector<GraphPoint>& points, const std::vector<double>& weights) const;
    FiniteMMSpace atom_space(const std::vector<GraphAtom>& atoms) const;

private:
    struct End {
        std::size_t vertex;
        double dist;
    };
    std::vector<End> ends(const GraphPoint& p) const;
    double direct(const GraphPoint& p, const GraphPoint& q) const;
    void check(const GraphPoint& p) const;

    std::size_t n_;
    std::vector<GraphEdge> edges_;
    std::vector<double> vd_;
    std::vector<std::size_t> via_;  // via_[s * n + v]: edge entering v on a shortest path from s
    double a_;
};

// Chord and arc length between two positions on a circle of circumference L.
double circle_arc(double circumference, double s, double t);
double circle_chord(double circumference, double s, double t);

struct CircleBound {
    CertifiedValue sep;              // Sep(nu; kappa/4, kappa/4)
    double bound = 0.0;              // pi / sqrt(2) * sep
    CertifiedValue partial_diameter; // diam(nu, m - kappa)
    bool holds = false;
};

// Atoms are arc positions on a circle of the given circumference.
CircleBound circle_bound(const RealMeasure1D& nu, double circumference, double kappa,
                         std::size_t exact_limit = default_exact_limit);

struct GraphBound {
    bool hypothesis_ok = false;
    std::string diagnostics;
    double bound = 0.0;
    double vertex_term = 0.0;  // a/2 + 2 Sep(kappa/3, kappa)
    double circle_term = 0.0;  // pi/sqrt(2) Sep((kappa-kappa')/4, .)
    CertifiedValue partial_diameter;
    bool holds = false;
};

GraphBound graph_pdiam_bound(const MetricGraph& graph, const std::vector<GraphAtom>& atoms, double a, double kappa,
                             double kappa_prime, std::size_t exact_limit = default_exact_limit);

struct GraphOrbitBound {
    double s = 0.0;
    double bound = 0.0;  // s + rho(s)
    std::size_t z = 0;
    double actual = 0.0;
    bool holds = false;
};

// The action's space must consist of points of `graph` with graph distances.
GraphOrbitBound graph_orbit_bound(const MetricGraph& graph, const FiniteAction& action, std::size_t x, double a,
                                  double kappa, double kappa_prime, std::size_t exact_limit = default_exact_limit);

struct TreeCapture {
    GraphPoint center;
    double radius = 0.0;
    double sep = 0.0;  // Sep(nu; kappa/2, m/3)
    bool holds = false;
};

TreeCapture tree_capture(const MetricGraph& tree, const std::vector<GraphAtom>& atoms, double kappa,
                         std::size_t exact_limit = default_exact_limit);

}  // namespace concentra
