#pragma once

#include <vector>

#include "concentra/concentration.hpp"

namespace concentra {

// Weighted point cloud in R^k.
class PointCloudMeasure {
public:
    PointCloudMeasure(std::vector<std::vector<double>> coords, std::vector<double> weights);

    std::size_t size() const noexcept { return coords_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<std::vector<double>>& coords() const noexcept { return coords_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double total_mass() const noexcept { return space_.total_mass(); }

    const FiniteMMSpace& as_mmspace() const noexcept { return space_; }
    RealMeasure1D projection(std::size_t axis) const;

private:
    std::vector<std::vector<double>> coords_;
    std::vector<double> weights_;
    std::size_t dim_ = 0;
    FiniteMMSpace space_;
};

struct ProjectionBound {
    CertifiedValue bound;                // sqrt(k) * max_i diam(pr_i nu, m - kappa/k)
    std::vector<double> axis_diameters;  // exact 1-D partial diameters
};

ProjectionBound projection_bound(const PointCloudMeasure& nu, double kappa);

}  // namespace concentra
