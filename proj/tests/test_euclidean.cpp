#include "doctest.h"

#include <cmath>
#include <random>

#include "concentra/euclidean.hpp"
#include "oracle.hpp"

using namespace concentra;

TEST_CASE("projection bound on the unit square corners") {
    const PointCloudMeasure nu({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {0.25, 0.25, 0.25, 0.25});
    const auto b = projection_bound(nu, 1e-9);
    CHECK(b.bound.lower == doctest::Approx(std::sqrt(2.0)));
    CHECK(partial_diameter(nu.as_mmspace(), 1e-9).lower == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("projection bound degenerate and embedded cases") {
    const PointCloudMeasure point({{2, 3}, {2, 3}}, {0.5, 0.5});
    CHECK(projection_bound(point, 0.5).bound.lower == 0.0);

    const PointCloudMeasure p3({{0, 0}, {1, 0}, {3, 0}}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    const auto b = projection_bound(p3, 1.0 / 3);
    // kappa / k = 1/6 < 1/3 leaves the full x-range.
    CHECK(b.axis_diameters[0] == 3.0);
    CHECK(b.axis_diameters[1] == 0.0);
    CHECK(b.bound.lower == doctest::Approx(3.0 * std::sqrt(2.0)));
    CHECK_THROWS_AS(projection_bound(p3, 1.0), Error);
    CHECK_THROWS_AS(PointCloudMeasure({{}}, {1.0}), Error);
}

TEST_CASE("partial diameter never exceeds the projection bound") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + rng() % 12;
        const std::size_t k = 1 + rng() % 3;
        std::vector<std::vector<double>> pts(n, std::vector<double>(k));
        for (auto& p : pts)
            for (auto& c : p) c = oracle::uniform(rng, -2.0, 2.0);
        const PointCloudMeasure nu(pts, oracle::random_weights(rng, n, true));
        const double kappa = oracle::uniform(rng, 0.01, 0.9) * nu.total_mass();
        CHECK(partial_diameter(nu.as_mmspace(), kappa).lower <= projection_bound(nu, kappa).bound.lower + 1e-12);
    }
}

TEST_CASE("partial diameter is invariant under rotations") {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + rng() % 8;
        std::vector<std::vector<double>> pts(n, std::vector<double>(2));
        for (auto& p : pts)
            for (auto& c : p) c = oracle::uniform(rng, -2.0, 2.0);
        const double th = oracle::uniform(rng, 0.0, 6.0);
        auto rotated = pts;
        for (auto& p : rotated) p = {std::cos(th) * p[0] - std::sin(th) * p[1], std::sin(th) * p[0] + std::cos(th) * p[1]};
        const auto w = oracle::random_weights(rng, n, false);
        const double kappa = oracle::uniform(rng, 0.01, 0.9);
        const double a = partial_diameter(PointCloudMeasure(pts, w).as_mmspace(), kappa).lower;
        const double b = partial_diameter(PointCloudMeasure(rotated, w).as_mmspace(), kappa).lower;
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
}
