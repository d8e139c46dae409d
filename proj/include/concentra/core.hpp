#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "concentra/error.hpp"

namespace concentra {

// Slack for mass comparisons and for the triangle inequality check.
inline constexpr double mass_tol = 1e-12;
inline constexpr double metric_tol = 1e-9;

struct RawMMSpace {
    std::vector<std::string> point_ids;
    std::vector<std::vector<double>> dist;
    std::vector<double> weights;
    bool metric_strict = false;
};

// Finite metric measure space: distance matrix plus point masses.
// Immutable once built; construct through validate_mmspace or the helpers.
class FiniteMMSpace {
public:
    std::size_t size() const noexcept { return n_; }
    double dist(std::size_t i, std::size_t j) const noexcept { return dist_[i * n_ + j]; }
    const double* row(std::size_t i) const noexcept { return dist_.data() + i * n_; }
    double weight(std::size_t i) const noexcept { return weights_[i]; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double total_mass() const noexcept { return total_mass_; }
    const std::vector<std::string>& point_ids() const noexcept { return ids_; }

    // True when the triangle inequality holds within metric_tol.
    bool is_metric() const noexcept { return metric_; }

    double diameter() const;
    double support_diameter() const;
    std::vector<std::size_t> support() const;

    // Same points and distances, new weights.
    FiniteMMSpace with_weights(std::vector<double> weights) const;
    FiniteMMSpace normalized() const;
    FiniteMMSpace subspace(std::span<const std::size_t> indices) const;

    static FiniteMMSpace from_points(const std::vector<std::vector<double>>& coords,
                                     std::vector<double> weights);
    static FiniteMMSpace from_line(const std::vector<double>& positions, std::vector<double> weights);
    static FiniteMMSpace uniform(std::vector<std::vector<double>> dist);

private:
    friend FiniteMMSpace validate_mmspace(const RawMMSpace& raw);
    friend FiniteMMSpace make_unchecked(std::size_t n, std::vector<double> dist,
                                        std::vector<double> weights, std::vector<std::string> ids);

    std::size_t n_ = 0;
    std::vector<double> dist_;
    std::vector<double> weights_;
    std::vector<std::string> ids_;
    double total_mass_ = 0.0;
    bool metric_ = false;
};

// Returns a validated space or throws Error listing every violated invariant.
FiniteMMSpace validate_mmspace(const RawMMSpace& raw);

// Internal construction from a flat matrix already known to be valid
// (symmetric, zero diagonal, finite, nonnegative); checks weights only.
FiniteMMSpace make_unchecked(std::size_t n, std::vector<double> dist, std::vector<double> weights,
                             std::vector<std::string> ids = {});

struct Atom {
    double position = 0.0;
    double mass = 0.0;
};

// Finitely supported measure on the real line. Atoms are sorted and
// coinciding positions merged.
class RealMeasure1D {
public:
    RealMeasure1D() = default;
    explicit RealMeasure1D(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double total_mass() const noexcept { return total_mass_; }

    FiniteMMSpace as_mmspace() const;

private:
    std::vector<Atom> atoms_;
    double total_mass_ = 0.0;
};

class SubsetMask {
public:
    SubsetMask() = default;
    SubsetMask(const FiniteMMSpace& space, std::span<const std::size_t> members);
    static SubsetMask from_bits(const FiniteMMSpace& space, std::vector<bool> bits);

    bool contains(std::size_t i) const { return i < bits_.size() && bits_[i]; }
    std::size_t universe_size() const noexcept { return bits_.size(); }
    std::size_t count() const;
    bool empty() const { return count() == 0; }
    double mass() const noexcept { return mass_; }
    std::vector<std::size_t> members() const;
    const std::vector<bool>& bits() const noexcept { return bits_; }

private:
    std::vector<bool> bits_;
    double mass_ = 0.0;
};

RealMeasure1D pushforward(const FiniteMMSpace& space, std::span<const double> values);

// Open neighborhood {y : d(A, y) < r}.
SubsetMask neighborhood(const FiniteMMSpace& space, const SubsetMask& set, double r);

double set_distance(const FiniteMMSpace& space, const SubsetMask& a, const SubsetMask& b);

// Mass of the closed ball B(center, r).
double ball_mass(const FiniteMMSpace& space, std::size_t center, double r);

}  // namespace concentra
