#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "concentra/concentration.hpp"
#include "concentra/group_action.hpp"

namespace concentra {

// N(delta): fewest subsets of diameter <= delta covering every point.
// Exact up to `exact_limit` points (capped at 20).
CertifiedValue covering_number(const FiniteMMSpace& space, double delta, std::size_t exact_limit = 14);

// C(r1, r2): largest r1-separated (pairwise >= r1) subset of a closed r2-ball.
// Exact when every ball has at most `ball_limit` points (capped at 64).
CertifiedValue packing_constant(const FiniteMMSpace& space, double r1, double r2, std::size_t ball_limit = 20);

// Largest subset with pairwise distance > delta, greedy from the lowest index.
std::vector<std::size_t> greedy_separated_set(const FiniteMMSpace& space, double delta);

// sup over x, r of nu(B(x, 2r)) / nu(B(x, r)); requires full support.
double measured_doubling_constant(const FiniteMMSpace& space);

struct DoublingProfile {
    enum class Mode { explicit_constant, explicit_function, doubling_measure, measured };

    Mode mode = Mode::measured;
    double constant = 1.0;  // explicit C, or the measure-doubling constant
    std::function<double(double, double)> function;
    std::optional<double> scale_cap;  // R1

    static DoublingProfile explicit_c(double c);
    static DoublingProfile from_function(std::function<double(double, double)> f);
    static DoublingProfile doubling_measure(double c);
    static DoublingProfile measured_packing();

    // Certified upper bound for C(r1, r2) on `space`.
    double upper(const FiniteMMSpace& space, double r1, double r2) const;
};

struct CaptureTrace {
    std::vector<std::size_t> net;                   // {xi_alpha}
    std::size_t alpha0 = 0;
    std::size_t k = 0;
    double packing_bound = 0.0;                     // C(r0, 5 r0)
    std::vector<std::vector<std::size_t>> families; // J_1..J_k
    std::size_t chosen = 0;
    double family_mass = 0.0;                       // nu(union B(xi, r0))
    double doubled_mass = 0.0;                      // nu(union B(xi, 2 r0))
    double center_mass = 0.0;                       // nu(B(xi_gamma, 2 r0))
    std::array<double, 3> sep_upper{};
};

struct CaptureResult {
    bool hypothesis_ok = false;
    std::string diagnostics;
    std::size_t x0 = 0;
    double captured_mass = 0.0;  // nu(B(x0, 3 r0))
    CaptureTrace trace;
};

// Ball of radius 3 r0 carrying mass >= m - kappa; the measure is the weights
// of `space`. `sep_upper` overrides the three separation terms with externally
// certified upper bounds.
CaptureResult ball_capture(const FiniteMMSpace& space, double r0, double kappa, const DoublingProfile& profile,
                           std::size_t exact_limit = default_exact_limit,
                           std::optional<std::array<double, 3>> sep_upper = std::nullopt);

struct DoublingFormula {
    double ratio_lb = 0.0;  // C^{log2(r1/r2) - 2}
    double c_upper = 0.0;   // C^{2 + log2((r1 + 2 r2) / r1)}
};

DoublingFormula doubling_formula_bounds(double c, double r1, double r2);

// max of the three capture-hypothesis separation terms with C(1, 5) bounded
// through a measure-doubling constant.
double doubling_capture_radius(const FiniteMMSpace& space, double kappa, double doubling_c,
                               std::size_t exact_limit = default_exact_limit);

struct DoublingOrbitBound {
    double r0 = 0.0;
    std::array<double, 3> terms{};  // omega_x(+Sep(G; .)) terms
    std::size_t z = 0;              // center of the capture ball
    double center_bound = 0.0;      // 3r + rho(3r)
    double center_actual = 0.0;
    std::size_t orbit_point = 0;
    double bound = 0.0;             // min{6r + rho(6r), 6r + 2 rho(3r)}
    double actual = 0.0;
    bool holds = false;
};

DoublingOrbitBound doubling_orbit_bound(const FiniteAction& action, std::size_t x, double kappa,
                                        const DoublingProfile& profile,
                                        std::size_t exact_limit = default_exact_limit);

struct CompactOrbitBound {
    double covering = 0.0;      // N(delta), upper estimate
    double sep_term = 0.0;      // omega_x(+Sep(G; 1/(2N), 1/(2N)))
    double r = 0.0;             // sep_term + 2 delta
    double bound = 0.0;         // r + rho(r)
    std::size_t z = 0;
    double actual = 0.0;
    double witness_diameter = 0.0;
    bool holds = false;
};

CompactOrbitBound compact_orbit_bound(const FiniteAction& action, std::size_t x, double delta,
                                      std::size_t exact_limit = default_exact_limit);

// Sep(nu; kappa / N, kappa / N) + 2 delta, an upper bound for diam(nu, m - kappa).
double covering_separation_bound(const FiniteMMSpace& space, double kappa, double delta,
                                 std::size_t exact_limit = default_exact_limit);

}  // namespace concentra
