#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "concentra/core.hpp"

namespace concentra {

inline constexpr std::size_t default_exact_limit = 18;
// Hard ceiling for the exact searches (64-bit subset masks).
inline constexpr std::size_t max_exact_limit = 40;

enum class Method { exhaustive, branch_and_bound, heuristic, formula };

std::string_view to_string(Method method);

struct Witness {
    std::string description;
    std::vector<std::size_t> set_a;
    std::vector<std::size_t> set_b;
};

// Certified enclosure [lower, upper] of an extremal quantity.
struct CertifiedValue {
    double lower = 0.0;
    double upper = 0.0;
    bool exact = false;
    Witness witness;
    Method method = Method::exhaustive;

    double value() const { return exact ? lower : 0.5 * (lower + upper); }
    bool contains(double v, double tol = 1e-9) const {
        return v >= lower - tol && v <= upper + tol;
    }

    static CertifiedValue exact_value(double v, Method method, Witness witness = {});
};

// diam(nu, m - kappa): smallest diameter of a set carrying mass >= m - kappa.
CertifiedValue partial_diameter(const FiniteMMSpace& space, double kappa,
                                std::size_t exact_limit = default_exact_limit);
CertifiedValue partial_diameter(const RealMeasure1D& measure, double kappa);

// Sep(X; k1, k2): sup of d(A, B) over mass(A) >= k1, mass(B) >= k2.
CertifiedValue separation(const FiniteMMSpace& space, double kappa1, double kappa2,
                          std::size_t exact_limit = default_exact_limit);
CertifiedValue separation(const RealMeasure1D& measure, double kappa1, double kappa2,
                          std::size_t exact_limit = default_exact_limit);

struct ConcentrationValue {
    CertifiedValue value;
    bool rescaled = false;  // input mass was not 1 and was normalized
};

// alpha_X(r) for the normalized measure.
ConcentrationValue concentration_function(const FiniteMMSpace& space, double r,
                                          std::size_t exact_limit = default_exact_limit);

struct MedianInterval {
    double low = 0.0;
    double high = 0.0;
    double representative = 0.0;
};

MedianInterval median(const RealMeasure1D& measure);

// Mass of {|f - m| >= eps} under the pushforward measure.
double deviation_mass(const RealMeasure1D& measure, double m, double eps);

enum class ProbeKind { point_distance, set_distance, mcshane_random, custom };

struct ProbeFunction {
    std::vector<double> values;
    double lipschitz_constant = 0.0;
    ProbeKind provenance = ProbeKind::custom;
};

// Computes the Lipschitz constant exhaustively over all pairs.
ProbeFunction make_probe(const FiniteMMSpace& space, std::vector<double> values, ProbeKind kind);

// Rescales a probe so its Lipschitz constant is at most 1.
ProbeFunction contract_probe(ProbeFunction probe);

ProbeFunction point_distance_probe(const FiniteMMSpace& space, std::size_t center);
ProbeFunction set_distance_probe(const FiniteMMSpace& space, const std::vector<std::size_t>& set);
std::vector<ProbeFunction> mcshane_probes(const FiniteMMSpace& space, std::size_t count,
                                          std::uint64_t seed);

struct ObsDiamOptions {
    std::size_t n_probes = 64;
    std::uint64_t seed = 0;
    std::size_t exact_limit = default_exact_limit;
    // Extra deficits at which separation witnesses are turned into probes,
    // in addition to the default grid.
    std::vector<double> witness_kappas;
};

struct ObsDiamResult {
    CertifiedValue value;
    std::vector<ProbeFunction> probes;
};

// ObsDiam_R(X; -kappa) enclosed between the best probe and Sep(X; kappa/2, kappa/2).
ObsDiamResult obs_diameter_interval(const FiniteMMSpace& space, double kappa,
                                    const ObsDiamOptions& options = {});

}  // namespace concentra
