#include "doctest.h"

#include <cmath>
#include <random>

#include "concentra/graph_tree.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace concentra;

namespace {

std::vector<GraphPoint> points_of(const std::vector<GraphAtom>& atoms) {
    std::vector<GraphPoint> out;
    for (const auto& a : atoms) out.push_back(a.point);
    return out;
}

}  // namespace

TEST_CASE("graph distances on small graphs") {
    const MetricGraph edge(2, {{0, 1, 10.0}});
    CHECK(edge.distance(GraphPoint::on_edge(0, 2.0), GraphPoint::on_edge(0, 7.5)) == doctest::Approx(5.5));
    CHECK(edge.distance(GraphPoint::on_edge(0, 0.0), GraphPoint::at_vertex(0)) == 0.0);
    CHECK(edge.min_edge_length() == 10.0);

    // A parallel short edge shortcuts the long one.
    const MetricGraph multi(2, {{0, 1, 10.0}, {0, 1, 1.0}});
    CHECK(multi.distance(GraphPoint::on_edge(0, 1.0), GraphPoint::on_edge(0, 9.0)) == doctest::Approx(3.0));

    const MetricGraph loop(1, {{0, 0, 6.0}});
    CHECK(loop.distance(GraphPoint::on_edge(0, 0.0), GraphPoint::on_edge(0, 3.0)) == doctest::Approx(3.0));
    CHECK(loop.distance(GraphPoint::on_edge(0, 1.0), GraphPoint::on_edge(0, 5.5)) == doctest::Approx(1.5));
    CHECK(loop.min_edge_length() == std::numeric_limits<double>::infinity());

    const MetricGraph path(3, {{0, 1, 1.0}, {1, 2, 2.0}});
    CHECK(path.distance(GraphPoint::on_edge(0, 0.5), GraphPoint::on_edge(1, 1.0)) == doctest::Approx(1.5));
    CHECK(path.is_tree());
    CHECK_FALSE(loop.is_tree());

    CHECK_THROWS_AS(MetricGraph(3, {{0, 1, 1.0}}), Error);
    CHECK_THROWS_AS(MetricGraph(2, {{0, 1, 0.0}}), Error);
    CHECK_THROWS_AS(edge.distance(GraphPoint::on_edge(0, 11.0), GraphPoint::at_vertex(0)), Error);
    try {
        MetricGraph(3, {{0, 1, 1.0}});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::disconnected_graph);
    }
}

TEST_CASE("graph distances match a subdivided Floyd-Warshall") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = fixtures::random_graph(rng, 8, 12, 12);
        const auto pts = points_of(inst.atoms);
        const auto ref = fixtures::oracle_distances(inst.graph, pts);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < pts.size(); ++j) {
                CHECK(inst.graph.distance(pts[i], pts[j]) == doctest::Approx(ref[i][j]).epsilon(1e-12));
                for (std::size_t k = 0; k < pts.size(); ++k) {
                    CHECK(inst.graph.distance(pts[i], pts[k]) <=
                          inst.graph.distance(pts[i], pts[j]) + inst.graph.distance(pts[j], pts[k]) + 1e-9);
                }
            }
    }
}

TEST_CASE("points along shortest paths") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = fixtures::random_graph(rng, 8, 12, 12);
        const auto& g = inst.graph;
        const auto pts = points_of(inst.atoms);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < pts.size(); ++j) {
                const double d = g.distance(pts[i], pts[j]);
                const double t = oracle::uniform(rng, 0.0, d);
                const GraphPoint mid = g.point_along(pts[i], pts[j], t);
                CHECK(g.distance(pts[i], mid) == doctest::Approx(t).epsilon(1e-9));
                CHECK(g.distance(mid, pts[j]) == doctest::Approx(d - t).epsilon(1e-9));
            }
    }
}

TEST_CASE("chord and arc") {
    const double l = 2.0 * M_PI;
    CHECK(circle_arc(l, 0.0, M_PI) == doctest::Approx(M_PI));
    CHECK(circle_chord(l, 0.0, M_PI) == doctest::Approx(2.0));
    std::mt19937_64 rng(9);
    for (int i = 0; i < 2000; ++i) {
        const double len = oracle::uniform(rng, 0.1, 20.0);
        const double s = oracle::uniform(rng, 0.0, len);
        const double t = oracle::uniform(rng, 0.0, len);
        const double chord = circle_chord(len, s, t);
        const double arc = circle_arc(len, s, t);
        CHECK(chord <= arc + 1e-12);
        CHECK(arc <= M_PI / 2 * chord + 1e-12);
    }
}

TEST_CASE("circle bound") {
    std::vector<Atom> eight;
    for (int i = 0; i < 8; ++i) eight.push_back({2.0 * M_PI * i / 8.0, 1.0 / 8});
    const auto c = circle_bound(RealMeasure1D(eight), 2.0 * M_PI, 0.5);
    CHECK(c.sep.value() == doctest::Approx(M_PI));
    CHECK(c.bound == doctest::Approx(M_PI * M_PI / std::sqrt(2.0)));
    CHECK(c.bound == doctest::Approx(6.979).epsilon(1e-3));
    CHECK(c.partial_diameter.value() == doctest::Approx(3.0 * M_PI / 4.0));
    CHECK(c.holds);

    const auto single = circle_bound(RealMeasure1D({{1.0, 1.0}}), 5.0, 0.3);
    CHECK(single.partial_diameter.value() == 0.0);
    CHECK(single.holds);

    const auto anti = circle_bound(RealMeasure1D({{0.0, 0.5}, {M_PI, 0.5}}), 2.0 * M_PI, 0.5);
    CHECK(anti.partial_diameter.value() == 0.0);
    CHECK(anti.bound >= 0.0);

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const double len = oracle::uniform(rng, 1.0, 10.0);
        std::vector<Atom> atoms;
        const std::size_t n = 1 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i) atoms.push_back({oracle::uniform(rng, 0.0, len), oracle::uniform(rng, 0.05, 1.0)});
        const RealMeasure1D nu(atoms);
        const auto r = circle_bound(nu, len, oracle::uniform(rng, 0.05, 0.95) * nu.total_mass());
        CHECK(r.holds);
    }
}

TEST_CASE("graph partial-diameter bound examples") {
    const MetricGraph edge(2, {{0, 1, 10.0}});
    const std::vector<GraphAtom> atoms{{GraphPoint::on_edge(0, 4.5), 1.0 / 3},
                                       {GraphPoint::on_edge(0, 5.0), 1.0 / 3},
                                       {GraphPoint::on_edge(0, 5.5), 1.0 / 3}};
    const auto b = graph_pdiam_bound(edge, atoms, 8.0, 0.9, 0.3);
    REQUIRE(b.hypothesis_ok);
    CHECK(b.vertex_term == doctest::Approx(4.0));
    CHECK(b.circle_term == doctest::Approx(M_PI / std::sqrt(2.0)));
    CHECK(b.bound == doctest::Approx(4.0));
    CHECK(b.partial_diameter.value() == 0.0);
    CHECK(b.holds);

    const auto bad = graph_pdiam_bound(edge, atoms, 11.0, 0.9, 0.3);
    CHECK_FALSE(bad.hypothesis_ok);
    CHECK(bad.diagnostics.find("a_Gamma") != std::string::npos);
    CHECK_FALSE(graph_pdiam_bound(edge, atoms, 8.0, 0.3, 0.5).hypothesis_ok);

    const auto point = graph_pdiam_bound(edge, {{GraphPoint::on_edge(0, 3.0), 1.0}}, 5.0, 0.5, 0.1);
    REQUIRE(point.hypothesis_ok);
    CHECK(point.partial_diameter.value() == 0.0);
    CHECK(point.bound >= 0.0);

    // A loop discretized uniformly: only the circle case can apply.
    const MetricGraph loop(1, {{0, 0, 12.0}});
    std::vector<GraphAtom> ring;
    for (int i = 0; i < 12; ++i) ring.push_back({GraphPoint::on_edge(0, i), 1.0 / 12});
    const auto r = graph_pdiam_bound(loop, ring, 100.0, 0.6, 0.2);
    REQUIRE(r.hypothesis_ok);
    CHECK(r.holds);
}

TEST_CASE("graph partial-diameter bound on random graphs") {
    std::mt19937_64 rng(19);
    int passing = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = fixtures::random_graph(rng, 8, 12, 12);
        const double kappa = oracle::uniform(rng, 0.1, 0.9);
        const double kappa_prime = kappa * oracle::uniform(rng, 0.05, 0.95);
        const double a = inst.graph.min_edge_length() == std::numeric_limits<double>::infinity()
                             ? oracle::uniform(rng, 0.5, 5.0)
                             : inst.graph.min_edge_length() * oracle::uniform(rng, 0.3, 0.999);
        const auto b = graph_pdiam_bound(inst.graph, inst.atoms, a, kappa, kappa_prime);
        if (!b.hypothesis_ok) continue;
        ++passing;
        CHECK(b.partial_diameter.lower <= b.bound + 1e-9);
        CHECK(oracle::pdiam(inst.graph.atom_space(inst.atoms), kappa) <= b.bound + 1e-9);
    }
    CHECK(passing >= 20);
}

TEST_CASE("tree capture") {
    const MetricGraph star(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    const std::vector<GraphAtom> leaves{{GraphPoint::at_vertex(1), 1.0 / 3},
                                        {GraphPoint::at_vertex(2), 1.0 / 3},
                                        {GraphPoint::at_vertex(3), 1.0 / 3}};
    const auto s = tree_capture(star, leaves, 1.0 / 3);
    CHECK(s.radius == doctest::Approx(1.0));
    CHECK(star.distance(s.center, GraphPoint::at_vertex(0)) == doctest::Approx(0.0));
    CHECK(s.sep == doctest::Approx(2.0));
    CHECK(s.holds);

    const auto p = tree_capture(star, {{GraphPoint::on_edge(1, 0.3), 1.0}}, 0.5);
    CHECK(p.radius == 0.0);

    const MetricGraph path(2, {{0, 1, 10.0}});
    const std::vector<GraphAtom> ends{{GraphPoint::on_edge(0, 0.5), 0.2},
                                      {GraphPoint::on_edge(0, 1.0), 0.2},
                                      {GraphPoint::on_edge(0, 9.0), 0.3},
                                      {GraphPoint::on_edge(0, 9.5), 0.3}};
    const auto c = tree_capture(path, ends, 0.45);
    CHECK(c.radius == doctest::Approx(0.25));
    CHECK(path.distance(c.center, GraphPoint::on_edge(0, 9.25)) == doctest::Approx(0.0));
    CHECK(c.holds);

    CHECK_THROWS_AS(tree_capture(MetricGraph(1, {{0, 0, 1.0}}), {{GraphPoint::at_vertex(0), 1.0}}, 0.5), Error);

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = fixtures::random_graph(rng, 8, 12, 10, true);
        const double kappa = oracle::uniform(rng, 0.05, 0.95);
        const auto t = tree_capture(inst.graph, inst.atoms, kappa);
        const auto space = inst.graph.atom_space(inst.atoms);
        CHECK(t.holds);
        CHECK(t.radius <= oracle::sep(space, kappa / 2, 1.0 / 3) + 1e-9);
        // On a tree the smallest capturing ball has half the partial diameter.
        CHECK(t.radius == doctest::Approx(oracle::pdiam(space, kappa) / 2).epsilon(1e-9));
    }
}

TEST_CASE("graph orbit bounds") {
    // Reflection of a single edge of length 10.
    const MetricGraph edge(2, {{0, 1, 10.0}});
    const std::vector<GraphPoint> pts{GraphPoint::on_edge(0, 4.5), GraphPoint::on_edge(0, 5.5),
                                      GraphPoint::on_edge(0, 2.0), GraphPoint::on_edge(0, 8.0)};
    const FiniteAction flip(fixtures::z2(), edge.point_space(pts, {0.25, 0.25, 0.25, 0.25}), {{0, 1, 2, 3}, {1, 0, 3, 2}});
    const auto r = graph_orbit_bound(edge, flip, 0, 6.0, 0.3, 0.1);
    CHECK(r.s == doctest::Approx(5.0));
    CHECK(r.actual == doctest::Approx(1.0));
    CHECK(r.holds);
    CHECK_THROWS_AS(graph_orbit_bound(edge, flip, 0, 3.0, 0.3, 0.1), HypothesisError);
    CHECK_THROWS_AS(graph_orbit_bound(edge, flip, 0, 6.0, 0.6, 0.1), Error);

    // Trivial group on a path.
    const MetricGraph path(3, {{0, 1, 1.0}, {1, 2, 2.0}});
    const FiniteAction triv(FiniteMetricGroup::trivial(), path.point_space({GraphPoint::at_vertex(2)}, {1.0}), {{0}});
    const auto t = graph_orbit_bound(path, triv, 0, 0.5, 0.2, 0.1);
    CHECK(t.actual == 0.0);
    CHECK(t.holds);

    // Z_n rotating the marked points of a loop.
    for (std::size_t n : {3, 5, 8}) {
        const MetricGraph loop(1, {{0, 0, static_cast<double>(n)}});
        std::vector<GraphPoint> ring;
        for (std::size_t i = 0; i < n; ++i) ring.push_back(GraphPoint::on_edge(0, static_cast<double>(i)));
        std::vector<std::vector<std::size_t>> maps(n, std::vector<std::size_t>(n));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) maps[k][i] = (i + k) % n;
        const FiniteAction rot(cyclic_group(n), loop.point_space(ring, std::vector<double>(n, 1.0 / n)), maps);
        const auto o = graph_orbit_bound(loop, rot, 0, 1000.0, 0.4, 0.2);
        CHECK(o.holds);
        CHECK(o.actual == doctest::Approx(std::floor(n / 2.0)));
    }
}
