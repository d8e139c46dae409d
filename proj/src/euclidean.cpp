#include "concentra/euclidean.hpp"

#include <algorithm>
#include <cmath>

namespace concentra {

namespace {

constexpr std::size_t max_dim = 16;

const std::vector<std::vector<double>>& checked(const std::vector<std::vector<double>>& coords) {
    if (coords.empty()) throw Error(ErrorCode::empty_measure, "point cloud");
    const std::size_t k = coords.front().size();
    if (k == 0 || k > max_dim) throw Error(ErrorCode::invalid_input, "dimension must be in 1..16");
    return coords;
}

}  // namespace

PointCloudMeasure::PointCloudMeasure(std::vector<std::vector<double>> coords, std::vector<double> weights)
    : coords_(std::move(coords)),
      weights_(std::move(weights)),
      dim_(checked(coords_).front().size()),
      space_(FiniteMMSpace::from_points(coords_, weights_)) {}

RealMeasure1D PointCloudMeasure::projection(std::size_t axis) const {
    if (axis >= dim_) throw Error(ErrorCode::invalid_input, "axis out of range");
    std::vector<double> values(size());
    for (std::size_t i = 0; i < size(); ++i) values[i] = coords_[i][axis];
    return pushforward(space_, values);
}

ProjectionBound projection_bound(const PointCloudMeasure& nu, double kappa) {
    const double m = nu.total_mass();
    if (!(kappa > 0.0)) throw Error(ErrorCode::nonpositive_kappa, "");
    if (kappa >= m) throw Error(ErrorCode::deficit_exceeds_mass, "");
    const double k = static_cast<double>(nu.dim());
    ProjectionBound out;
    double worst = 0.0;
    for (std::size_t axis = 0; axis < nu.dim(); ++axis) {
        const double d = partial_diameter(nu.projection(axis), kappa / k).lower;
        out.axis_diameters.push_back(d);
        worst = std::max(worst, d);
    }
    out.bound = CertifiedValue::exact_value(std::sqrt(k) * worst, Method::formula,
                                            {"sqrt(k) times the widest axis window", {}, {}});
    return out;
}

}  // namespace concentra
