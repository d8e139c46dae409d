#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "concentra/concentration.hpp"

namespace concentra {

// Finite group given by its multiplication table, with a metric and the
// uniform Haar measure.
class FiniteMetricGroup {
public:
    FiniteMetricGroup(std::vector<std::vector<std::size_t>> table, std::vector<std::vector<double>> dist,
                      bool require_right_invariant = false);

    // Word metric of the symmetric closure of `generators` (element indices),
    // right invariant: d(g, h) = |h g^-1|.
    static FiniteMetricGroup with_word_metric(std::vector<std::vector<std::size_t>> table,
                                              const std::vector<std::size_t>& generators);
    static FiniteMetricGroup trivial();

    std::size_t size() const noexcept { return n_; }
    std::size_t identity() const noexcept { return identity_; }
    std::size_t multiply(std::size_t a, std::size_t b) const { return table_[a * n_ + b]; }
    std::size_t inverse(std::size_t a) const { return inverse_[a]; }
    double dist(std::size_t a, std::size_t b) const { return haar_.dist(a, b); }
    bool is_right_invariant(double tol = 1e-9) const;

    // (G, d_G, mu_G) as an mm-space.
    const FiniteMMSpace& as_mmspace() const noexcept { return haar_; }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> table_;
    std::vector<std::size_t> inverse_;
    std::size_t identity_ = 0;
    FiniteMMSpace haar_;
};

// Action of a finite metric group on a finite mm-space by index maps;
// maps[g][x] = g x.
class FiniteAction {
public:
    FiniteAction(FiniteMetricGroup group, FiniteMMSpace space, std::vector<std::vector<std::size_t>> maps);

    const FiniteMetricGroup& group() const noexcept { return group_; }
    const FiniteMMSpace& space() const noexcept { return space_; }
    std::size_t apply(std::size_t g, std::size_t x) const { return maps_[g][x]; }
    const std::vector<std::vector<std::size_t>>& maps() const noexcept { return maps_; }

    std::vector<std::size_t> orbit(std::size_t x) const;
    // max_g d(x, g x)
    double displacement(std::size_t x) const;

private:
    FiniteMetricGroup group_;
    FiniteMMSpace space_;
    std::vector<std::vector<std::size_t>> maps_;
};

// nu_{G,x} carried by the points of the space (zero weight off the orbit).
FiniteMMSpace orbit_measure(const FiniteAction& action, std::size_t x);

// Nondecreasing step function f(eta) = max{v_i : b_i <= eta}.
class ModulusFunction {
public:
    ModulusFunction() = default;
    explicit ModulusFunction(std::vector<std::pair<double, double>> samples);

    double operator()(double eta) const;
    // lim_{eta' -> eta+} f(eta'); equal to f(eta) for these step functions.
    double right_limit(double eta) const { return (*this)(eta); }

    const std::vector<double>& breakpoints() const noexcept { return breaks_; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
};

// omega_x^{-1}(r) = min{d_G(g, g') : d_X(g x, g' x) >= r}, +inf if none.
class InverseModulus {
public:
    InverseModulus() = default;
    explicit InverseModulus(std::vector<std::pair<double, double>> pairs);
    double operator()(double r) const;

private:
    std::vector<double> reach_;
    std::vector<double> suffix_min_;
};

struct Moduli {
    ModulusFunction rho;
    ModulusFunction omega;
    InverseModulus omega_inv;
};

ModulusFunction rho_modulus(const FiniteAction& action);
ModulusFunction omega_modulus(const FiniteAction& action, std::size_t x);
InverseModulus omega_inverse(const FiniteAction& action, std::size_t x);
Moduli moduli(const FiniteAction& action, std::size_t x);

// omega_x(+Sep(G; k1, k2)), an upper bound for Sep(nu_{G,x}; k1, k2).
CertifiedValue orbit_separation_bound(const FiniteAction& action, const ModulusFunction& omega, double kappa1,
                                      double kappa2, std::size_t exact_limit = default_exact_limit);

struct OrbitCertificate {
    std::string mode;
    std::size_t x0 = 0;
    double bound = 0.0;   // orbit-point bound
    double actual = 0.0;  // max_g d(x0, g x0)
    bool holds = false;
    // Ball mode only: center y with its displacement bound.
    std::optional<std::size_t> center;
    double center_bound = 0.0;
    double center_actual = 0.0;
    // Limit mode only: diameters on the kappa grid.
    std::vector<double> grid_diameters;
};

// Ball hypothesis nu_{G,x}(B(y, delta)) > 1/2; y searched when not given.
OrbitCertificate ball_certificate(const FiniteAction& action, std::size_t x, double delta,
                                  std::optional<std::size_t> y = std::nullopt);
// Subset hypothesis nu_{G,x}(A) > 1/2.
OrbitCertificate subset_certificate(const FiniteAction& action, std::size_t x, const std::vector<std::size_t>& set);
// Limit of diam(nu_{G,x}, 1 - kappa) as kappa -> 1/2 on the grid 1/2 - 2^-j.
OrbitCertificate limit_certificate(const FiniteAction& action, std::size_t x,
                                   std::size_t exact_limit = default_exact_limit);

struct HolderModulus {
    double c1 = 1.0;
    double alpha = 1.0;
};

struct GroupProfile {
    double c2 = 1.0;
    double c3 = 1.0;
    double beta = 1.0;
};

struct PushforwardBound {
    double bound = 0.0;
    double omega_inv = 0.0;
    double group_term = 0.0;              // alpha_G(omega_x^{-1}(r)) or its upper bound
    std::optional<double> holder_term;    // closed form when a Holder modulus is given
    bool exact_group_alpha = false;
};

// Upper bound for alpha_{(X, nu_{G,x})}(r).
PushforwardBound pushforward_concentration_bound(const FiniteAction& action, std::size_t x, double r,
                                                 std::optional<HolderModulus> holder = std::nullopt,
                                                 std::optional<GroupProfile> profile = std::nullopt,
                                                 std::size_t exact_limit = default_exact_limit);

// Cyclic group Z_n with the word metric of {1, -1}; element k is rotation by k.
FiniteMetricGroup cyclic_group(std::size_t n);

}  // namespace concentra
