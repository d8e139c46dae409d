#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "concentra/concentration.hpp"

namespace concentra::cli {

enum class Family { hypercube, discrete_torus, cycle, subgroup_chain, random_mm };

Family parse_family(const std::string& name);
std::string_view to_string(Family family);

struct SweepSpec {
    Family family = Family::hypercube;
    std::size_t min_size = 4;
    std::size_t max_size = 10;
    std::vector<double> kappas{0.1};
    std::optional<std::uint64_t> seed;
    // Full-space columns (Sep, alpha, ObsDiam) only up to this many points.
    std::size_t full_limit = 128;
    std::size_t exact_limit = default_exact_limit;
    std::size_t probes = 16;
};

// Largest size accepted for each family.
std::size_t max_family_size(Family family);

inline const std::vector<double> sweep_radii{0.1, 0.25, 0.5};

// One row per (instance, kappa); empty optional = not computed.
struct SweepRow {
    std::size_t n = 0;
    std::size_t points = 0;
    double kappa = 0.0;
    std::vector<std::optional<double>> values;  // aligned with sweep_columns()
};

const std::vector<std::string>& sweep_columns();

// Throws SpecTooLarge when the sizes exceed the family caps.
std::vector<SweepRow> levy_sweep(const SweepSpec& spec);

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);
std::string sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows);

// Exact Sep of the normalized coordinate sum on the n-cube at (kappa, kappa).
double hypercube_coordinate_sep(std::size_t n, double kappa);

}  // namespace concentra::cli
