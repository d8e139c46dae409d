#pragma once
// Seeded random instances shared by the verify suite and the acceptance runner.

#include <cstdint>
#include <random>
#include <vector>

#include "concentra/cayley.hpp"
#include "concentra/euclidean.hpp"
#include "concentra/graph_tree.hpp"
#include "concentra/hadamard.hpp"

namespace concentra::cli {

using Rng = std::mt19937_64;

// Independent stream for instance `index` of a named family.
Rng derived_rng(std::uint64_t seed, std::uint64_t family, std::uint64_t index);

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
std::size_t below(Rng& rng, std::size_t n);

// Normalized random weights; some may be zero when allow_zero is set.
std::vector<double> random_weights(Rng& rng, std::size_t n, bool allow_zero);

// Mixture of line, lattice and planar clouds plus non-metric matrices.
FiniteMMSpace random_space(Rng& rng, std::size_t n);
// Weighted points of the real line, on a lattice half of the time.
FiniteMMSpace random_line_space(Rng& rng, std::size_t n);
// Metric spaces only (point clouds).
FiniteMMSpace random_metric_space(Rng& rng, std::size_t n);
PointCloudMeasure random_cloud(Rng& rng, std::size_t n, std::size_t k);

struct GraphInstance {
    MetricGraph graph;
    std::vector<GraphAtom> atoms;
};

// Connected graph with loops and multi-edges; most atoms cluster near one
// edge point. Masses sum to 1.
GraphInstance random_graph(Rng& rng, std::size_t max_vertices, std::size_t max_edges, std::size_t max_atoms,
                           bool tree = false);

struct ActionInstance {
    GeneratedGroup group;
    FiniteAction action;
    std::size_t x = 0;
};

// Permutation group generated by one or two random permutations of a planar
// point set, acting on it by index maps.
ActionInstance random_permutation_action(Rng& rng, std::size_t max_group, std::size_t max_points);

// Z_n rotating the (0, 1) plane.
ModelAction rotation_action(const ModelSpace& space, std::size_t n);
// Point at distance r from the origin along spatial axis 0.
Eigen::VectorXd model_point(const ModelSpace& space, double r);
ModelMeasure random_model_measure(Rng& rng, const ModelSpace& space, std::size_t atoms, double radius);

}  // namespace concentra::cli
