#pragma once

#include <vector>

#include <Eigen/Dense>

#include "concentra/group_action.hpp"
#include "concentra/hadamard.hpp"

namespace concentra {

using Permutation = std::vector<std::size_t>;

inline constexpr std::size_t default_group_cap = 512;

// Finite group generated by permutations; products compose right to left,
// (a b)(i) = a(b(i)). Element 0 is the identity.
struct GeneratedGroup {
    std::vector<Permutation> elements;
    std::vector<std::size_t> generators;  // element index of each given generator
    std::vector<std::size_t> s;           // symmetric generating set, identity excluded
    FiniteMetricGroup group;              // multiplication table with the word metric of s
    // BFS tree: elements[i] = elements[step[i]] * elements[parent[i]], i > 0.
    std::vector<std::size_t> parent;
    std::vector<std::size_t> step;

    std::size_t size() const noexcept { return elements.size(); }
    double word_distance(std::size_t a, std::size_t b) const { return group.dist(a, b); }
};

GeneratedGroup generate_group(const std::vector<Permutation>& generators, std::size_t cap = default_group_cap);

struct SymmetricEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns
    std::size_t sweeps = 0;
};

// Cyclic Jacobi; stops when the off-diagonal norm is <= tol * |A|_F.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, double tol = 1e-12, std::size_t max_sweeps = 100);

// L = #S I - A with A(g, s g) counted once per s in S.
Eigen::MatrixXd cayley_laplacian(const GeneratedGroup& g, const std::vector<std::size_t>& s);

struct SpectralData {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors;
    double lambda1 = 0.0;         // smallest nonzero eigenvalue
};

// Spectrum of the Cayley graph for `s` (default: the generating set).
// Throws Disconnected when s does not generate.
SpectralData lambda1(const GeneratedGroup& g);
SpectralData lambda1(const GeneratedGroup& g, const std::vector<std::size_t>& s);

// sum over ordered adjacent pairs (f(g) - f(s g))^2 / (2 sum f(g)^2).
double rayleigh_quotient(const GeneratedGroup& g, const std::vector<std::size_t>& s, const Eigen::VectorXd& f);

// Model action whose element isometries are products of the generator
// isometries along the BFS words.
ModelAction cayley_model_action(const GeneratedGroup& g, const ModelSpace& space,
                                const std::vector<ModelIsometry>& generator_isometries);

struct CayleyCradBound {
    double omega1 = 0.0;   // omega_x(1) for the word metric
    double lambda1 = 0.0;
    std::size_t s_count = 0;
    double bound = 0.0;    // omega_x(1) sqrt(k #S / (2 kappa lambda1))
    double actual_crad = 0.0;
    bool holds = false;
};

// The action's group must be g.group (as built by cayley_model_action).
CayleyCradBound cayley_crad_bound(const GeneratedGroup& g, const ModelAction& action, const Eigen::VectorXd& x,
                                  double kappa);

struct CayleyOrbitBound {
    double radius = 0.0;             // omega_x(1) sqrt(k #S / lambda1)
    double center_bound = 0.0;       // radius + rho(+radius)
    double orbit_point_bound = 0.0;  // min{2R + rho(+2R), 2R + 2 rho(+R)}
    Eigen::VectorXd center;
    double actual_center = 0.0;
    Eigen::VectorXd z;
    double actual_orbit_point = 0.0;
    bool holds = false;
};

CayleyOrbitBound cayley_orbit_bound(const GeneratedGroup& g, const ModelAction& action, const Eigen::VectorXd& x);

}  // namespace concentra
