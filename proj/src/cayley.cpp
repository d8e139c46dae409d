#include "concentra/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

namespace concentra {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Permutation compose(const Permutation& a, const Permutation& b) {
    Permutation out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
    return out;
}

Permutation invert(const Permutation& a) {
    Permutation out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[a[i]] = i;
    return out;
}

void check_permutation(const Permutation& p, std::size_t degree) {
    if (p.size() != degree) throw Error(ErrorCode::not_a_permutation, "generators act on sets of different sizes");
    std::vector<bool> seen(degree, false);
    for (std::size_t v : p) {
        if (v >= degree || seen[v]) throw Error(ErrorCode::not_a_permutation, "generator is not a bijection");
        seen[v] = true;
    }
}

ModelIsometry inverse_isometry(const ModelIsometry& g) {
    const Eigen::MatrixXd inv = g.linear.inverse();
    return {inv, -inv * g.translation};
}

void check_set(const GeneratedGroup& g, const std::vector<std::size_t>& s) {
    std::vector<bool> in(g.size(), false);
    for (std::size_t v : s) {
        if (v >= g.size()) throw Error(ErrorCode::invalid_input, "generating set element out of range");
        if (v == g.group.identity()) throw Error(ErrorCode::invalid_input, "generating set contains the identity");
        if (in[v]) throw Error(ErrorCode::invalid_input, "generating set has repeated elements");
        in[v] = true;
    }
    for (std::size_t v : s)
        if (!in[g.group.inverse(v)]) throw Error(ErrorCode::invalid_input, "generating set is not symmetric");
}

bool connected(const GeneratedGroup& g, const std::vector<std::size_t>& s) {
    std::vector<bool> seen(g.size(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
        const std::size_t a = queue.front();
        queue.pop_front();
        for (std::size_t v : s) {
            const std::size_t b = g.group.multiply(v, a);
            if (!seen[b]) {
                seen[b] = true;
                ++count;
                queue.push_back(b);
            }
        }
    }
    return count == g.size();
}

}  // namespace

GeneratedGroup generate_group(const std::vector<Permutation>& generators, std::size_t cap) {
    const std::size_t degree = generators.empty() ? 0 : generators.front().size();
    for (const auto& p : generators) check_permutation(p, degree);
    Permutation id(degree);
    std::iota(id.begin(), id.end(), 0);

    std::vector<Permutation> moves;
    for (const auto& p : generators) {
        if (p == id) continue;
        moves.push_back(p);
        moves.push_back(invert(p));
    }
    std::sort(moves.begin(), moves.end());
    moves.erase(std::unique(moves.begin(), moves.end()), moves.end());

    std::vector<Permutation> elements{id};
    std::vector<std::size_t> parent{0}, step_move{0};
    std::map<Permutation, std::size_t> index{{id, 0}};
    for (std::size_t head = 0; head < elements.size(); ++head) {
        for (std::size_t m = 0; m < moves.size(); ++m) {
            Permutation next = compose(moves[m], elements[head]);
            if (index.count(next)) continue;
            if (elements.size() >= cap) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "group has more than %zu elements", cap);
                throw Error(ErrorCode::group_too_large, buf);
            }
            index.emplace(next, elements.size());
            elements.push_back(std::move(next));
            parent.push_back(head);
            step_move.push_back(m);
        }
    }

    const std::size_t n = elements.size();
    std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) table[a][b] = index.at(compose(elements[a], elements[b]));

    std::vector<std::size_t> gens;
    for (const auto& p : generators) gens.push_back(index.at(p));
    std::vector<std::size_t> s;
    for (const auto& m : moves) s.push_back(index.at(m));
    std::sort(s.begin(), s.end());
    std::vector<std::size_t> step(n, 0);
    for (std::size_t i = 1; i < n; ++i) step[i] = index.at(moves[step_move[i]]);

    FiniteMetricGroup group = FiniteMetricGroup::with_word_metric(std::move(table), gens);
    return {std::move(elements), std::move(gens), std::move(s), std::move(group), std::move(parent), std::move(step)};
}

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& input, double tol, std::size_t max_sweeps) {
    const Eigen::Index n = input.rows();
    if (input.cols() != n) throw Error(ErrorCode::invalid_input, "matrix is not square");
    if ((input - input.transpose()).norm() > 1e-12 * std::max(1.0, input.norm()))
        throw Error(ErrorCode::invalid_input, "matrix is not symmetric");
    Eigen::MatrixXd a = 0.5 * (input + input.transpose());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double scale = a.norm();
    SymmetricEigen out;
    auto off_norm = [&] {
        double s = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };
    while (off_norm() > tol * scale) {
        if (out.sweeps == max_sweeps) throw Error(ErrorCode::no_convergence, "Jacobi sweeps exhausted");
        ++out.sweeps;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
        out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

Eigen::MatrixXd cayley_laplacian(const GeneratedGroup& g, const std::vector<std::size_t>& s) {
    check_set(g, s);
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n) * static_cast<double>(s.size());
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t v : s) l(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(g.group.multiply(v, a))) -= 1.0;
    return l;
}

SpectralData lambda1(const GeneratedGroup& g) { return lambda1(g, g.s); }

SpectralData lambda1(const GeneratedGroup& g, const std::vector<std::size_t>& s) {
    check_set(g, s);
    if (!connected(g, s)) throw Error(ErrorCode::disconnected, "the set does not generate the group");
    const auto eig = jacobi_eigen(cayley_laplacian(g, s));
    SpectralData out{eig.values, eig.vectors, inf};
    if (g.size() > 1) out.lambda1 = eig.values(1);
    return out;
}

double rayleigh_quotient(const GeneratedGroup& g, const std::vector<std::size_t>& s, const Eigen::VectorXd& f) {
    if (static_cast<std::size_t>(f.size()) != g.size()) throw Error(ErrorCode::invalid_input, "one value per element required");
    double num = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t v : s) {
            const double diff = f(static_cast<Eigen::Index>(a)) - f(static_cast<Eigen::Index>(g.group.multiply(v, a)));
            num += diff * diff;
        }
    const double den = 2.0 * f.squaredNorm();
    return den > 0.0 ? num / den : inf;
}

ModelAction cayley_model_action(const GeneratedGroup& g, const ModelSpace& space,
                                const std::vector<ModelIsometry>& generator_isometries) {
    if (generator_isometries.size() != g.generators.size())
        throw Error(ErrorCode::invalid_action, "one isometry per generator required");
    std::vector<std::optional<ModelIsometry>> of_move(g.size());
    for (std::size_t j = 0; j < g.generators.size(); ++j) {
        if (!is_isometry(space, generator_isometries[j]))
            throw Error(ErrorCode::invalid_action, "generator matrix is not an isometry of the model");
        const std::size_t e = g.generators[j];
        if (!of_move[e]) of_move[e] = generator_isometries[j];
        const std::size_t inv = g.group.inverse(e);
        if (!of_move[inv]) of_move[inv] = inverse_isometry(generator_isometries[j]);
    }
    std::vector<ModelIsometry> isos(g.size(), identity_isometry(space));
    for (std::size_t i = 1; i < g.size(); ++i) isos[i] = isos[g.parent[i]].then(*of_move[g.step[i]]);
    return {space, g.group, std::move(isos)};
}

namespace {

void check_pair(const GeneratedGroup& g, const ModelAction& action) {
    if (action.group.size() != g.size()) throw Error(ErrorCode::invalid_action, "action group differs from the generated group");
}

}  // namespace

CayleyCradBound cayley_crad_bound(const GeneratedGroup& g, const ModelAction& action, const Eigen::VectorXd& x,
                                  double kappa) {
    check_pair(g, action);
    if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorCode::invalid_input, "kappa must lie in (0, 1)");
    const auto orbit = materialize_orbit(action, x);
    const auto spectral = lambda1(g);
    CayleyCradBound out;
    out.omega1 = omega_modulus(orbit.action, orbit.x)(1.0);
    out.lambda1 = spectral.lambda1;
    out.s_count = g.s.size();
    const double k = static_cast<double>(action.space.dim());
    out.bound = out.omega1 == 0.0 ? 0.0
                                  : out.omega1 * std::sqrt(k * static_cast<double>(out.s_count) / (2.0 * kappa * out.lambda1));
    const auto center = karcher_mean(action.space, orbit.measure).center;
    out.actual_crad = central_radius(action.space, orbit.measure, center, kappa);
    out.holds = out.actual_crad <= out.bound + 1e-9 * std::max(1.0, out.bound);
    return out;
}

CayleyOrbitBound cayley_orbit_bound(const GeneratedGroup& g, const ModelAction& action, const Eigen::VectorXd& x) {
    check_pair(g, action);
    const auto orbit = materialize_orbit(action, x);
    const auto spectral = lambda1(g);
    const double omega1 = omega_modulus(orbit.action, orbit.x)(1.0);
    const double k = static_cast<double>(action.space.dim());
    CayleyOrbitBound out;
    out.radius = omega1 == 0.0 ? 0.0 : omega1 * std::sqrt(k * static_cast<double>(g.s.size()) / spectral.lambda1);
    // Isometric action: rho(eta) = eta.
    out.center_bound = 2.0 * out.radius;
    out.orbit_point_bound = 4.0 * out.radius;
    const auto actual = crad_orbit_bound(action, x);
    out.center = actual.center;
    out.actual_center = actual.actual_center;
    out.z = actual.z;
    out.actual_orbit_point = actual.actual_orbit_point;
    const double slack = 1e-9 * std::max(1.0, out.radius);
    out.holds = out.actual_center <= out.center_bound + slack && out.actual_orbit_point <= out.orbit_point_bound + slack;
    return out;
}

}  // namespace concentra
