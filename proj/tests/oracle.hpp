#pragma once
// Brute-force reference implementations and random instance generators
// shared by the test executables. Deliberately naive: plain enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "concentra/core.hpp"

namespace oracle {

using concentra::FiniteMMSpace;

inline constexpr double tol = 1e-12;

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t index(std::mt19937_64& rng, std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform(rng) * static_cast<double>(n)));
}

inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n, bool allow_zero) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& v : w) {
        v = (allow_zero && uniform(rng) < 0.15) ? 0.0 : 0.05 + uniform(rng);
        total += v;
    }
    if (total == 0.0) {
        w[0] = 1.0;
        total = 1.0;
    }
    for (auto& v : w) v /= total;
    return w;
}

// Points in R^k, optionally snapped to a lattice to create ties.
inline FiniteMMSpace random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t k, bool lattice = false,
                                  bool allow_zero = true) {
    std::vector<std::vector<double>> pts(n, std::vector<double>(k));
    for (auto& p : pts) {
        for (auto& c : p) c = lattice ? std::floor(uniform(rng, 0.0, 5.0)) : uniform(rng, 0.0, 4.0);
    }
    return FiniteMMSpace::from_points(pts, random_weights(rng, n, allow_zero));
}

// Symmetric matrix with no triangle inequality.
inline FiniteMMSpace random_semimetric(std::mt19937_64& rng, std::size_t n) {
    concentra::RawMMSpace raw;
    raw.dist.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            raw.dist[i][j] = raw.dist[j][i] = std::round(uniform(rng, 0.5, 6.0) * 4.0) / 4.0;
        }
    }
    raw.weights = random_weights(rng, n, true);
    return concentra::validate_mmspace(raw);
}

inline FiniteMMSpace random_space(std::mt19937_64& rng, std::size_t n) {
    switch (rng() % 4) {
        case 0: return random_cloud(rng, n, 1, false);
        case 1: return random_cloud(rng, n, 2, true);
        case 2: return random_cloud(rng, n, 1 + rng() % 3, false);
        default: return random_semimetric(rng, n);
    }
}

inline double mass_of(const FiniteMMSpace& x, std::uint32_t mask) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (mask >> i & 1U) m += x.weight(i);
    }
    return m;
}

// Sep over all disjoint pairs (A, B) via ternary labelling.
inline double sep(const FiniteMMSpace& x, double k1, double k2) {
    const std::size_t n = x.size();
    if (k1 > x.total_mass() + tol || k2 > x.total_mass() + tol) return 0.0;
    double best = 0.0;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        double ma = 0.0, mb = 0.0;
        std::vector<std::size_t> a, b;
        for (std::size_t i = 0; i < n; ++i, c /= 3) {
            if (c % 3 == 1) { a.push_back(i); ma += x.weight(i); }
            if (c % 3 == 2) { b.push_back(i); mb += x.weight(i); }
        }
        if (a.empty() || b.empty() || ma < k1 - tol || mb < k2 - tol) continue;
        double d = std::numeric_limits<double>::infinity();
        for (auto i : a) for (auto j : b) d = std::min(d, x.dist(i, j));
        best = std::max(best, d);
    }
    return best;
}

inline double pdiam(const FiniteMMSpace& x, double kappa) {
    const double target = x.total_mass() - kappa;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < (1U << x.size()); ++mask) {
        if (mass_of(x, mask) < target - tol) continue;
        double d = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < x.size(); ++j)
                if ((mask >> i & 1U) && (mask >> j & 1U)) d = std::max(d, x.dist(i, j));
        best = std::min(best, d);
    }
    return best;
}

// alpha for the normalized measure.
inline double alpha(const FiniteMMSpace& x, double r) {
    const double m = x.total_mass();
    double best = 0.0;
    for (std::uint32_t mask = 1; mask < (1U << x.size()); ++mask) {
        if (mass_of(x, mask) / m < 0.5 - tol) continue;
        double far = 0.0;
        for (std::size_t y = 0; y < x.size(); ++y) {
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < x.size(); ++i)
                if (mask >> i & 1U) d = std::min(d, x.dist(i, y));
            if (d >= r) far += x.weight(y) / m;
        }
        best = std::max(best, far);
    }
    return best;
}

inline double diameter_of(const FiniteMMSpace& x, std::uint32_t mask) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if ((mask >> i & 1U) && (mask >> j & 1U)) d = std::max(d, x.dist(i, j));
    return d;
}

// Fewest sets of diameter <= delta covering all points: try k = 1, 2, ...
// by assigning points to k labelled groups.
inline std::size_t cover(const FiniteMMSpace& x, double delta) {
    const std::size_t n = x.size();
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::uint32_t> groups(k, 0);
        bool found = false;
        auto place = [&](auto&& self, std::size_t p, std::size_t opened) -> void {
            if (found) return;
            if (p == n) {
                found = true;
                return;
            }
            for (std::size_t g = 0; g < std::min(k, opened + 1); ++g) {
                groups[g] |= 1U << p;
                if (diameter_of(x, groups[g]) <= delta) self(self, p + 1, std::max(opened, g + 1));
                groups[g] &= ~(1U << p);
            }
        };
        place(place, 0, 0);
        if (found) return k;
    }
    return n;
}

// Largest subset with pairwise distance >= r1 inside some closed r2-ball.
inline std::size_t packing(const FiniteMMSpace& x, double r1, double r2) {
    std::size_t best = 0;
    for (std::size_t c = 0; c < x.size(); ++c) {
        std::vector<std::size_t> ball;
        for (std::size_t y = 0; y < x.size(); ++y)
            if (x.dist(c, y) <= r2) ball.push_back(y);
        for (std::uint32_t mask = 1; mask < (1U << ball.size()); ++mask) {
            bool ok = true;
            for (std::size_t i = 0; i < ball.size() && ok; ++i)
                for (std::size_t j = i + 1; j < ball.size() && ok; ++j)
                    if ((mask >> i & 1U) && (mask >> j & 1U) && x.dist(ball[i], ball[j]) < r1) ok = false;
            if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
        }
    }
    return best;
}

// Graph distances between marked points by subdividing every edge at the
// marks and running Floyd-Warshall on the refined graph.
struct MarkedEdge {
    std::size_t u, v;
    double length;
};
struct Mark {
    std::size_t edge;  // SIZE_MAX for a vertex
    double offset;
    std::size_t vertex;
};
inline std::vector<std::vector<double>> graph_distances(std::size_t vertices, const std::vector<MarkedEdge>& edges,
                                                        const std::vector<Mark>& marks) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> node(marks.size());
    std::size_t nodes = vertices;
    std::vector<std::vector<std::pair<double, std::size_t>>> on_edge(edges.size());
    for (std::size_t i = 0; i < marks.size(); ++i) {
        if (marks[i].edge == SIZE_MAX) {
            node[i] = marks[i].vertex;
        } else {
            node[i] = nodes++;
            on_edge[marks[i].edge].push_back({marks[i].offset, node[i]});
        }
    }
    std::vector<std::vector<double>> d(nodes, std::vector<double>(nodes, inf));
    for (std::size_t i = 0; i < nodes; ++i) d[i][i] = 0.0;
    auto link = [&](std::size_t a, std::size_t b, double len) {
        d[a][b] = std::min(d[a][b], len);
        d[b][a] = std::min(d[b][a], len);
    };
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto stops = on_edge[e];
        std::sort(stops.begin(), stops.end());
        std::size_t prev = edges[e].u;
        double at = 0.0;
        for (const auto& [off, id] : stops) {
            link(prev, id, off - at);
            prev = id;
            at = off;
        }
        link(prev, edges[e].v, edges[e].length - at);
    }
    for (std::size_t k = 0; k < nodes; ++k)
        for (std::size_t i = 0; i < nodes; ++i)
            for (std::size_t j = 0; j < nodes; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    std::vector<std::vector<double>> out(marks.size(), std::vector<double>(marks.size()));
    for (std::size_t i = 0; i < marks.size(); ++i)
        for (std::size_t j = 0; j < marks.size(); ++j) out[i][j] = d[node[i]][node[j]];
    return out;
}

}  // namespace oracle
