#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <deque>
#include <map>
#include <random>

#include "concentra/cayley.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace concentra;

namespace {

Permutation cycle_perm(std::size_t n) {
    Permutation p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (i + 1) % n;
    return p;
}

std::size_t find_element(const GeneratedGroup& g, const Permutation& p) {
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.elements[i] == p) return i;
    return g.size();
}

// Z_n by a rotation of the (0, 1) plane, as a Cayley action.
struct CyclicSetup {
    GeneratedGroup group;
    ModelAction action;
};

CyclicSetup cyclic_setup(const ModelSpace& space, std::size_t n) {
    auto g = generate_group({cycle_perm(n)});
    auto a = cayley_model_action(g, space, {rotation(space, 0, 1, 2.0 * M_PI / n)});
    return {std::move(g), std::move(a)};
}

// Word lengths by BFS directly on permutations.
std::map<Permutation, int> oracle_word_lengths(const std::vector<Permutation>& gens, std::size_t degree) {
    Permutation id(degree);
    for (std::size_t i = 0; i < degree; ++i) id[i] = i;
    std::vector<Permutation> moves;
    for (const auto& p : gens) {
        moves.push_back(p);
        Permutation inv(degree);
        for (std::size_t i = 0; i < degree; ++i) inv[p[i]] = i;
        moves.push_back(inv);
    }
    std::map<Permutation, int> len{{id, 0}};
    std::deque<Permutation> queue{id};
    while (!queue.empty()) {
        const Permutation cur = queue.front();
        queue.pop_front();
        for (const auto& m : moves) {
            Permutation next(degree);
            for (std::size_t i = 0; i < degree; ++i) next[i] = m[cur[i]];
            if (!len.count(next)) {
                len[next] = len[cur] + 1;
                queue.push_back(next);
            }
        }
    }
    return len;
}

}  // namespace

TEST_CASE("group generation") {
    const auto z4 = generate_group({cycle_perm(4)});
    CHECK(z4.size() == 4);
    CHECK(z4.s.size() == 2);
    std::vector<double> dists;
    for (std::size_t a = 0; a < 4; ++a) dists.push_back(z4.word_distance(0, a));
    std::sort(dists.begin(), dists.end());
    CHECK(dists == std::vector<double>{0, 1, 1, 2});

    const auto trivial = generate_group({});
    CHECK(trivial.size() == 1);
    CHECK(trivial.s.empty());

    const auto s3 = generate_group({{1, 0, 2}, {0, 2, 1}});
    CHECK(s3.size() == 6);
    CHECK(s3.s.size() == 2);  // transpositions are involutions

    try {
        generate_group({{0, 0, 1}});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::not_a_permutation);
    }
    CHECK_THROWS_AS(generate_group({{1, 0}, {0, 2, 1}}), Error);
    try {
        generate_group({{1, 0, 2, 3, 4, 5}, {1, 2, 3, 4, 5, 0}});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::group_too_large);
    }
    CHECK(generate_group({{1, 0, 2, 3, 4, 5}, {1, 2, 3, 4, 5, 0}}, 720).size() == 720);
}

TEST_CASE("word metric matches BFS on permutations") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t degree = 2 + oracle::index(rng, 4);
        std::vector<Permutation> gens;
        const std::size_t count = 1 + oracle::index(rng, 2);
        for (std::size_t j = 0; j < count; ++j) {
            Permutation p(degree);
            for (std::size_t i = 0; i < degree; ++i) p[i] = i;
            std::shuffle(p.begin(), p.end(), rng);
            gens.push_back(p);
        }
        const auto g = generate_group(gens);
        const auto len = oracle_word_lengths(gens, degree);
        REQUIRE(len.size() == g.size());
        for (std::size_t a = 0; a < g.size(); ++a) {
            CHECK(g.word_distance(0, a) == len.at(g.elements[a]));
            for (std::size_t b = 0; b < g.size(); ++b) {
                CHECK(g.elements[g.group.multiply(a, b)] ==
                      [&] {
                          Permutation c(degree);
                          for (std::size_t i = 0; i < degree; ++i) c[i] = g.elements[a][g.elements[b][i]];
                          return c;
                      }());
            }
        }
        for (std::size_t i = 1; i < g.size(); ++i)
            CHECK(g.group.multiply(g.step[i], g.parent[i]) == i);
    }
}

TEST_CASE("Jacobi eigensolver against a library solver") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<Eigen::Index>(1 + oracle::index(rng, 30));
        Eigen::MatrixXd a(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = oracle::uniform(rng, -2.0, 2.0);
        const auto mine = jacobi_eigen(a);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
        for (Eigen::Index i = 0; i < n; ++i) {
            CHECK(mine.values(i) == doctest::Approx(ref.eigenvalues()(i)).epsilon(1e-10).scale(1.0));
            const Eigen::VectorXd v = mine.vectors.col(i);
            CHECK((a * v - mine.values(i) * v).norm() <= 1e-8 * v.norm());
            CHECK(v.norm() == doctest::Approx(1.0));
        }
    }
    Eigen::MatrixXd skew = Eigen::MatrixXd::Identity(2, 2);
    skew(0, 1) = 1.0;
    CHECK_THROWS_AS(jacobi_eigen(skew), Error);
}

TEST_CASE("spectral gap of Cayley graphs") {
    for (std::size_t n = 3; n <= 32; ++n) {
        const auto g = generate_group({cycle_perm(n)});
        const auto sp = lambda1(g);
        CHECK(std::fabs(sp.lambda1 - 2.0 * (1.0 - std::cos(2.0 * M_PI / n))) <= 1e-10);
        CHECK(std::fabs(sp.eigenvalues(0)) <= 1e-9);
        CHECK(sp.eigenvalues.minCoeff() >= -1e-9);
        const Eigen::MatrixXd l = cayley_laplacian(g, g.s);
        for (Eigen::Index i = 0; i < sp.eigenvalues.size(); ++i) {
            const Eigen::VectorXd v = sp.eigenvectors.col(i);
            CHECK((l * v - sp.eigenvalues(i) * v).norm() <= 1e-8 * v.norm());
        }
    }
    CHECK(lambda1(generate_group({cycle_perm(4)})).lambda1 == doctest::Approx(2.0));

    for (std::size_t n = 2; n <= 16; ++n) {
        const auto g = generate_group({cycle_perm(n)});
        std::vector<std::size_t> all;
        for (std::size_t a = 1; a < n; ++a) all.push_back(a);
        CHECK(std::fabs(lambda1(g, all).lambda1 - static_cast<double>(n)) <= 1e-9);
    }

    // S_4 from a transposition and a 4-cycle.
    const auto s4 = generate_group({{1, 0, 2, 3}, {1, 2, 3, 0}});
    REQUIRE(s4.size() == 24);
    const auto sp = lambda1(s4);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(cayley_laplacian(s4, s4.s));
    CHECK(sp.lambda1 == doctest::Approx(ref.eigenvalues()(1)).epsilon(1e-10));

    // Relabeling the elements conjugates L by a permutation matrix.
    std::mt19937_64 rng(41);
    std::vector<int> perm(24);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::PermutationMatrix<Eigen::Dynamic> p(Eigen::Map<Eigen::VectorXi>(perm.data(), 24));
    const Eigen::MatrixXd relabeled = p * cayley_laplacian(s4, s4.s) * p.transpose();
    const auto other = jacobi_eigen(relabeled);
    CHECK((other.values - sp.eigenvalues).cwiseAbs().maxCoeff() <= 1e-9);

    const auto z4 = generate_group({cycle_perm(4)});
    const std::size_t half = find_element(z4, {2, 3, 0, 1});
    try {
        lambda1(z4, {half});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::disconnected);
    }
    CHECK_THROWS_AS(lambda1(z4, {1}), Error);  // not symmetric
    CHECK_THROWS_AS(lambda1(z4, {0}), Error);  // identity
}

TEST_CASE("Rayleigh quotients of orbit coordinates") {
    for (auto kind : {ModelKind::euclidean, ModelKind::hyperbolic}) {
        const ModelSpace space(kind, 2);
        for (std::size_t n = 3; n <= 12; ++n) {
            const auto setup = cyclic_setup(space, n);
            const auto& g = setup.group;
            const Eigen::VectorXd x = fixtures::model_point(space, 1.5);
            const auto orbit = materialize_orbit(setup.action, x);
            const Eigen::VectorXd c = karcher_mean(space, orbit.measure).center;
            const double lam = lambda1(g).lambda1;
            const double omega1 = omega_modulus(orbit.action, orbit.x)(1.0);
            Eigen::MatrixXd coords(static_cast<Eigen::Index>(g.size()), 2);
            std::vector<Eigen::VectorXd> images;
            for (std::size_t a = 0; a < g.size(); ++a) {
                images.push_back(space.renormalize(setup.action.isometries[a].apply(x)));
                coords.row(static_cast<Eigen::Index>(a)) = space.tangent_coordinates(c, space.log(c, images.back())).transpose();
            }
            for (Eigen::Index j = 0; j < 2; ++j) {
                Eigen::VectorXd phi = coords.col(j);
                CHECK(std::fabs(phi.sum()) <= 1e-9 * g.size());
                phi.array() -= phi.mean();
                if (phi.norm() > 1e-9) CHECK(lam <= rayleigh_quotient(g, g.s, phi) + 1e-8);
            }
            for (std::size_t a = 0; a < g.size(); ++a)
                for (std::size_t v : g.s)
                    CHECK(space.distance(images[a], images[g.group.multiply(v, a)]) <= omega1 + 1e-9);
        }
    }
}

TEST_CASE("spectral central-radius bound") {
    const auto r2 = ModelSpace::euclidean(2);
    const auto z4 = cyclic_setup(r2, 4);
    const auto spot = cayley_crad_bound(z4.group, z4.action, Eigen::Vector2d(1.0, 0.0), 0.4);
    CHECK(spot.omega1 == doctest::Approx(std::sqrt(2.0)));
    CHECK(spot.lambda1 == doctest::Approx(2.0));
    CHECK(spot.bound == doctest::Approx(std::sqrt(2.0) * std::sqrt(2.5)));
    CHECK(spot.bound == doctest::Approx(2.236).epsilon(1e-3));
    CHECK(spot.actual_crad == doctest::Approx(1.0));
    CHECK(spot.holds);

    const auto fixed = cayley_crad_bound(z4.group, z4.action, Eigen::Vector2d(0.0, 0.0), 0.4);
    CHECK(fixed.actual_crad == 0.0);
    CHECK(fixed.holds);

    const auto z8 = cyclic_setup(r2, 8);
    const auto b8 = cayley_crad_bound(z8.group, z8.action, Eigen::Vector2d(1.0, 0.0), 0.25);
    CHECK(b8.actual_crad == doctest::Approx(1.0));
    CHECK(b8.bound == doctest::Approx(2.0 * std::sin(M_PI / 8) *
                                      std::sqrt(4.0 / (0.5 * 2.0 * (1.0 - std::cos(M_PI / 4))))));
    CHECK(b8.holds);

    CHECK_THROWS_AS(cayley_crad_bound(z4.group, z4.action, Eigen::Vector2d(1.0, 0.0), 1.0), Error);

    for (auto kind : {ModelKind::euclidean, ModelKind::hyperbolic}) {
        const ModelSpace space(kind, 2);
        for (std::size_t n = 3; n <= 16; ++n) {
            const auto setup = cyclic_setup(space, n);
            for (double r : {0.5, 1.0, 2.0})
                for (double kappa : {0.1, 0.25, 0.4}) {
                    const auto b = cayley_crad_bound(setup.group, setup.action, fixtures::model_point(space, r), kappa);
                    CHECK(b.holds);
                }
        }
    }
}

TEST_CASE("spectral orbit bound") {
    const auto r2 = ModelSpace::euclidean(2);
    const auto triv_g = generate_group({});
    const auto triv = cayley_model_action(triv_g, r2, {});
    const auto t = cayley_orbit_bound(triv_g, triv, Eigen::Vector2d(1.0, 2.0));
    CHECK(t.radius == 0.0);
    CHECK(t.actual_center == 0.0);
    CHECK(t.holds);

    const auto z4 = cyclic_setup(r2, 4);
    const auto b = cayley_orbit_bound(z4.group, z4.action, Eigen::Vector2d(1.0, 0.0));
    CHECK(b.radius == doctest::Approx(std::sqrt(2.0) * std::sqrt(2.0)));
    CHECK(b.center_bound == doctest::Approx(2.0 * std::sqrt(2.0) * std::sqrt(2.0)));
    CHECK(b.actual_center <= 1e-12);
    CHECK(b.holds);

    const auto line = ModelSpace::euclidean(1);
    const auto z2 = generate_group({{1, 0}});
    const auto flip = cayley_model_action(z2, line, {reflection(line, 0)});
    const auto f = cayley_orbit_bound(z2, flip, Eigen::VectorXd::Constant(1, 1.0));
    CHECK(f.center(0) == doctest::Approx(0.0).scale(1.0));
    CHECK(f.actual_center <= 1e-12);
    CHECK(f.actual_orbit_point == doctest::Approx(2.0));
    CHECK(f.holds);

    // Dihedral group D_4 acting on the hyperbolic plane.
    const auto h2 = ModelSpace::hyperbolic(2);
    const auto d4 = generate_group({{1, 2, 3, 0}, {0, 3, 2, 1}});
    REQUIRE(d4.size() == 8);
    const auto action = cayley_model_action(d4, h2, {rotation(h2, 0, 1, M_PI / 2), reflection(h2, 1)});
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::VectorXd x = fixtures::random_model_point(rng, h2, 2.0);
        CHECK(cayley_orbit_bound(d4, action, x).holds);
        CHECK(cayley_crad_bound(d4, action, x, oracle::uniform(rng, 0.05, 0.95)).holds);
    }
}
