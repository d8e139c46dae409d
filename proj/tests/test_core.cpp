#include "doctest.h"

#include <random>

#include "concentra/core.hpp"
#include "oracle.hpp"

using namespace concentra;

namespace {

FiniteMMSpace p3() { return FiniteMMSpace::from_line({0.0, 1.0, 3.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3}); }

ErrorCode code_of(const RawMMSpace& raw) {
    try {
        validate_mmspace(raw);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::invalid_input;
}

}  // namespace

TEST_CASE("validate accepts the two-point space and a singleton") {
    RawMMSpace two{{"x1", "x2"}, {{0, 1}, {1, 0}}, {0.5, 0.5}, true};
    const auto x = validate_mmspace(two);
    CHECK(x.size() == 2);
    CHECK(x.total_mass() == doctest::Approx(1.0));
    CHECK(x.is_metric());
    CHECK(x.point_ids()[1] == "x2");

    const auto s = validate_mmspace(RawMMSpace{{}, {{0}}, {1}, false});
    CHECK(s.size() == 1);
    CHECK(s.diameter() == 0.0);
}

TEST_CASE("validate reports each kind of violation") {
    CHECK(code_of({{}, {{0, 1}, {2, 0}}, {0.5, 0.5}, false}) == ErrorCode::asymmetric_matrix);
    CHECK(code_of({{}, {{0, -1}, {-1, 0}}, {0.5, 0.5}, false}) == ErrorCode::negative_entry);
    CHECK(code_of({{}, {{1, 1}, {1, 0}}, {0.5, 0.5}, false}) == ErrorCode::nonzero_diagonal);
    CHECK(code_of({{}, {{0, 1}, {1, 0}}, {0.0, 0.0}, false}) == ErrorCode::zero_total_mass);
    CHECK(code_of({{}, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, {1, 1, 1}, true}) == ErrorCode::triangle_violation);
    CHECK_THROWS_AS(validate_mmspace({{}, {{0, 1}, {1}}, {1, 1}, false}), Error);

    // Without the strict flag the same matrix is accepted but not flagged metric.
    const auto loose = validate_mmspace({{}, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, {1, 1, 1}, false});
    CHECK_FALSE(loose.is_metric());
}

TEST_CASE("validate lists every violation") {
    try {
        validate_mmspace({{}, {{1, 2}, {-3, 0}}, {-1.0, 2.0}, false});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.details().size() >= 4);
    }
}

TEST_CASE("validate accepts exactly the valid matrices under random perturbation") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 5;
        auto x = oracle::random_cloud(rng, n, 2);
        RawMMSpace raw;
        raw.metric_strict = true;
        raw.weights = x.weights();
        raw.dist.assign(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) raw.dist[i][j] = x.dist(i, j);
        CHECK_NOTHROW(validate_mmspace(raw));
        const std::size_t i = rng() % n;
        std::size_t j = rng() % n;
        if (j == i) j = (i + 1) % n;
        switch (rng() % 4) {
            case 0: raw.dist[i][j] += 0.5; CHECK(code_of(raw) == ErrorCode::asymmetric_matrix); break;
            case 1: raw.dist[i][i] = 0.25; CHECK(code_of(raw) == ErrorCode::nonzero_diagonal); break;
            case 2: raw.dist[i][j] = raw.dist[j][i] = -1.0; CHECK(code_of(raw) == ErrorCode::negative_entry); break;
            default: raw.weights.assign(n, 0.0); CHECK(code_of(raw) == ErrorCode::zero_total_mass); break;
        }
    }
}

TEST_CASE("pushforward merges atoms and preserves mass") {
    const auto x = p3();
    const std::vector<double> f{0.0, 1.0, 3.0};
    const auto nu = pushforward(x, f);
    REQUIRE(nu.size() == 3);
    CHECK(nu.atoms()[2].mass == doctest::Approx(1.0 / 3));
    CHECK(nu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> c{2.0, 2.0, 2.0};
    const auto point = pushforward(x, c);
    REQUIRE(point.size() == 1);
    CHECK(point.atoms()[0].mass == doctest::Approx(1.0));

    const auto two = validate_mmspace({{}, {{0, 1}, {1, 0}}, {0.5, 0.5}, false});
    const std::vector<double> g{0.0, 1.0};
    const auto nu2 = pushforward(two, g);
    CHECK(nu2.atoms()[0].position == 0.0);
    CHECK(nu2.atoms()[1].mass == 0.5);

    const std::vector<double> bad{0.0, NAN, 1.0};
    CHECK_THROWS_AS(pushforward(x, bad), Error);
}

TEST_CASE("pushforward mass is preserved on random spaces") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        const auto x = oracle::random_space(rng, 1 + rng() % 10);
        std::vector<double> f(x.size());
        for (auto& v : f) v = std::floor(oracle::uniform(rng, 0.0, 3.0));
        CHECK(std::fabs(pushforward(x, f).total_mass() - x.total_mass()) <= 1e-12);
    }
}

TEST_CASE("open neighborhoods") {
    const auto x = p3();
    const std::vector<std::size_t> a0{0};
    const auto n1 = neighborhood(x, SubsetMask(x, a0), 1.5);
    CHECK(n1.members() == std::vector<std::size_t>{0, 1});
    const std::vector<std::size_t> a1{1};
    CHECK(neighborhood(x, SubsetMask(x, a1), 1.0).members() == std::vector<std::size_t>{1});
    CHECK(neighborhood(x, SubsetMask(x, a1), 3.5).count() == 3);
    CHECK_THROWS_AS(neighborhood(x, SubsetMask(x, std::vector<std::size_t>{}), 1.0), Error);
}

TEST_CASE("neighborhood is monotone in r and in A") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        const auto x = oracle::random_space(rng, 2 + rng() % 8);
        std::vector<std::size_t> small{rng() % x.size()};
        std::vector<std::size_t> big = small;
        big.push_back(rng() % x.size());
        const double r1 = oracle::uniform(rng, 0.1, 3.0);
        const double r2 = r1 + oracle::uniform(rng, 0.0, 2.0);
        const auto a = neighborhood(x, SubsetMask(x, small), r1);
        const auto b = neighborhood(x, SubsetMask(x, small), r2);
        const auto c = neighborhood(x, SubsetMask(x, big), r1);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK((!a.contains(i) || b.contains(i)));
            CHECK((!a.contains(i) || c.contains(i)));
        }
        for (auto i : small) CHECK(a.contains(i));
    }
}

TEST_CASE("subset masks cache mass and set distance") {
    const auto x = p3();
    const std::vector<std::size_t> a{0};
    const std::vector<std::size_t> b{2, 2};
    const SubsetMask ma(x, a);
    const SubsetMask mb(x, b);
    CHECK(mb.mass() == doctest::Approx(1.0 / 3));
    CHECK(set_distance(x, ma, mb) == 3.0);
    CHECK(ball_mass(x, 1, 1.0) == doctest::Approx(2.0 / 3));
}

TEST_CASE("real measures sort and merge atoms") {
    const RealMeasure1D nu({{3.0, 0.2}, {1.0, 0.3}, {3.0, 0.1}});
    REQUIRE(nu.size() == 2);
    CHECK(nu.atoms()[0].position == 1.0);
    CHECK(nu.atoms()[1].mass == doctest::Approx(0.3));
    CHECK_THROWS_AS(RealMeasure1D({{0.0, -1.0}}), Error);
}
