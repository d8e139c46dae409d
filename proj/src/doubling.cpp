#include "concentra/doubling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>

namespace concentra {

namespace {


std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

void check_radius(double r, const char* name) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::nonpositive_radius, name);
}

double ball_union_mass(const FiniteMMSpace& space, const std::vector<std::size_t>& centers, double r) {
    double m = 0.0;
    for (std::size_t y = 0; y < space.size(); ++y) {
        for (std::size_t c : centers) {
            if (space.dist(c, y) <= r) {
                m += space.weight(y);
                break;
            }
        }
    }
    return m;
}

// Greedy partition of `vertices` into cliques of the graph `adjacent`.
template <class Adjacent>
std::size_t greedy_clique_cover(const std::vector<std::size_t>& vertices, Adjacent adjacent) {
    std::vector<bool> used(vertices.size(), false);
    std::size_t cliques = 0;
    std::vector<std::size_t> clique;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (used[i]) continue;
        ++cliques;
        clique.assign(1, vertices[i]);
        used[i] = true;
        for (std::size_t j = i + 1; j < vertices.size(); ++j) {
            if (used[j]) continue;
            const bool all = std::all_of(clique.begin(), clique.end(),
                                         [&](std::size_t c) { return adjacent(c, vertices[j]); });
            if (all) {
                clique.push_back(vertices[j]);
                used[j] = true;
            }
        }
    }
    return cliques;
}

// Maximum independent set in a graph on at most 64 vertices.
class IndependentSetSearch {
public:
    explicit IndependentSetSearch(std::vector<std::uint64_t> conflict) : conflict_(std::move(conflict)) {}

    std::uint64_t run() {
        const std::size_t n = conflict_.size();
        const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
        expand(0, all);
        return best_;
    }

private:
    // Greedy clique cover of `cand` bounds how many more vertices fit.
    int cover_bound(std::uint64_t cand) const {
        int cliques = 0;
        while (cand) {
            ++cliques;
            std::uint64_t clique_cand = cand;
            while (clique_cand) {
                const auto v = static_cast<std::size_t>(std::countr_zero(clique_cand));
                cand &= ~(std::uint64_t{1} << v);
                clique_cand &= conflict_[v];
            }
        }
        return cliques;
    }

    void expand(std::uint64_t cur, std::uint64_t cand) {
        const int size = std::popcount(cur);
        if (size > best_size_) {
            best_size_ = size;
            best_ = cur;
        }
        while (cand) {
            if (size + cover_bound(cand) <= best_size_) return;
            const auto v = static_cast<std::size_t>(std::countr_zero(cand));
            const std::uint64_t bit = std::uint64_t{1} << v;
            cand &= ~bit;
            expand(cur | bit, cand & ~conflict_[v]);
        }
    }

    std::vector<std::uint64_t> conflict_;
    std::uint64_t best_ = 0;
    int best_size_ = -1;
};

}  // namespace

std::vector<std::size_t> greedy_separated_set(const FiniteMMSpace& space, double delta) {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < space.size(); ++p) {
        if (std::all_of(out.begin(), out.end(), [&](std::size_t q) { return space.dist(p, q) > delta; })) {
            out.push_back(p);
        }
    }
    return out;
}

CertifiedValue covering_number(const FiniteMMSpace& space, double delta, std::size_t exact_limit) {
    check_radius(delta, "delta");
    const std::size_t n = space.size();
    const auto lower_set = greedy_separated_set(space, delta);

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const std::size_t greedy = greedy_clique_cover(all, [&](std::size_t a, std::size_t b) {
        return space.dist(a, b) <= delta;
    });

    CertifiedValue out;
    out.lower = static_cast<double>(lower_set.size());
    out.upper = static_cast<double>(greedy);
    out.method = Method::heuristic;
    out.witness.description = "greedy cover; lower bound from a delta-separated set";
    out.witness.set_a = lower_set;

    if (n <= std::min<std::size_t>(exact_limit, 16) && out.lower < out.upper) {
        const std::size_t full = std::size_t{1} << n;
        std::vector<bool> small(full, false);
        small[0] = true;
        for (std::size_t mask = 1; mask < full; ++mask) {
            const auto low = static_cast<std::size_t>(std::countr_zero(mask));
            const std::size_t rest = mask & (mask - 1);
            if (!small[rest]) continue;
            bool ok = true;
            for (std::size_t r = rest; r && ok; r &= r - 1) {
                ok = space.dist(low, static_cast<std::size_t>(std::countr_zero(r))) <= delta;
            }
            small[mask] = ok;
        }
        std::vector<std::uint8_t> best(full, 0);
        for (std::size_t mask = 1; mask < full; ++mask) {
            const std::size_t low = mask & (~mask + 1);
            const std::size_t others = mask ^ low;
            std::uint8_t b = 255;
            for (std::size_t sub = others;; sub = (sub - 1) & others) {
                const std::size_t part = sub | low;
                if (small[part]) b = std::min<std::uint8_t>(b, static_cast<std::uint8_t>(best[mask ^ part] + 1));
                if (sub == 0) break;
            }
            best[mask] = b;
        }
        out.lower = out.upper = best[full - 1];
        out.method = Method::exhaustive;
    }
    if (out.lower == out.upper) {
        out.exact = true;
        if (out.method == Method::heuristic) out.method = Method::branch_and_bound;
    }
    return out;
}

CertifiedValue packing_constant(const FiniteMMSpace& space, double r1, double r2, std::size_t ball_limit) {
    check_radius(r1, "r1");
    check_radius(r2, "r2");
    const std::size_t limit = std::min<std::size_t>(ball_limit, 64);
    const std::size_t n = space.size();
    auto conflict = [&](std::size_t a, std::size_t b) { return a == b || space.dist(a, b) < r1; };

    CertifiedValue out;
    out.exact = true;
    out.method = Method::branch_and_bound;
    std::vector<std::size_t> ball;
    for (std::size_t c = 0; c < n; ++c) {
        ball.clear();
        for (std::size_t y = 0; y < n; ++y) {
            if (space.dist(c, y) <= r2) ball.push_back(y);
        }
        std::vector<std::size_t> chosen;
        double upper = 0.0;
        if (ball.size() <= limit) {
            std::vector<std::uint64_t> adj(ball.size(), 0);
            for (std::size_t i = 0; i < ball.size(); ++i)
                for (std::size_t j = 0; j < ball.size(); ++j)
                    if (i != j && conflict(ball[i], ball[j])) adj[i] |= std::uint64_t{1} << j;
            const std::uint64_t set = IndependentSetSearch(std::move(adj)).run();
            for (std::size_t i = 0; i < ball.size(); ++i)
                if (set >> i & 1U) chosen.push_back(ball[i]);
            upper = static_cast<double>(chosen.size());
        } else {
            for (std::size_t y : ball) {
                if (std::none_of(chosen.begin(), chosen.end(), [&](std::size_t q) { return conflict(y, q); })) {
                    chosen.push_back(y);
                }
            }
            upper = static_cast<double>(greedy_clique_cover(ball, conflict));
            if (upper > static_cast<double>(chosen.size())) {
                out.exact = false;
                out.method = Method::heuristic;
            }
        }
        if (static_cast<double>(chosen.size()) > out.lower) {
            out.lower = static_cast<double>(chosen.size());
            out.witness.description = fmt("separated subset of the ball around point %g", static_cast<double>(c));
            out.witness.set_a = chosen;
        }
        out.upper = std::max(out.upper, upper);
    }
    return out;
}

double measured_doubling_constant(const FiniteMMSpace& space) {
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(space.weight(i) > 0.0)) throw Error(ErrorCode::invalid_input, "doubling constant needs full support");
    }
    double c = 1.0;
    std::vector<std::size_t> order(n);
    std::vector<double> prefix(n + 1);
    std::vector<double> dist(n);
    for (std::size_t x = 0; x < n; ++x) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return space.dist(x, a) < space.dist(x, b); });
        for (std::size_t i = 0; i < n; ++i) {
            dist[i] = space.dist(x, order[i]);
            prefix[i + 1] = prefix[i] + space.weight(order[i]);
        }
        // On [a_i, a_{i+1}) the inner ball is constant and the outer one
        // increases towards the open ball of radius 2 a_{i+1}.
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && dist[j] == dist[i]) ++j;
            if (j == n) break;
            const double inner = prefix[j];
            const double reach = 2.0 * dist[j] * (1.0 - 1e-12);
            const auto outer = static_cast<std::size_t>(std::lower_bound(dist.begin(), dist.end(), reach) - dist.begin());
            c = std::max(c, prefix[outer] / inner);
            i = j;
        }
    }
    return c;
}

DoublingProfile DoublingProfile::explicit_c(double c) {
    if (!(c >= 1.0)) throw Error(ErrorCode::invalid_input, fmt("packing constant %g < 1", c));
    DoublingProfile p;
    p.mode = Mode::explicit_constant;
    p.constant = c;
    return p;
}

DoublingProfile DoublingProfile::from_function(std::function<double(double, double)> f) {
    DoublingProfile p;
    p.mode = Mode::explicit_function;
    p.function = std::move(f);
    return p;
}

DoublingProfile DoublingProfile::doubling_measure(double c) {
    if (!(c >= 1.0)) throw Error(ErrorCode::invalid_input, fmt("doubling constant %g < 1", c));
    DoublingProfile p;
    p.mode = Mode::doubling_measure;
    p.constant = c;
    return p;
}

DoublingProfile DoublingProfile::measured_packing() { return DoublingProfile{}; }

double DoublingProfile::upper(const FiniteMMSpace& space, double r1, double r2) const {
    if (scale_cap && (r1 > 2.0 * *scale_cap || r2 > 2.0 * *scale_cap)) {
        throw HypothesisError(fmt("radii (%g, %g) exceed 2 R1 = %g", r1, r2, 2.0 * *scale_cap));
    }
    double c = 0.0;
    switch (mode) {
    case Mode::explicit_constant: c = constant; break;
    case Mode::explicit_function:
        if (!function) throw Error(ErrorCode::invalid_input, "missing packing function");
        c = function(r1, r2);
        break;
    case Mode::doubling_measure: c = doubling_formula_bounds(constant, std::min(r1, r2), std::max(r1, r2)).c_upper; break;
    case Mode::measured: c = packing_constant(space, r1, r2).upper; break;
    }
    if (!(c >= 1.0) || !std::isfinite(c)) throw Error(ErrorCode::invalid_input, fmt("packing constant %g", c));
    return c;
}

DoublingFormula doubling_formula_bounds(double c, double r1, double r2) {
    if (!(c >= 1.0) || !std::isfinite(c)) throw Error(ErrorCode::invalid_input, fmt("doubling constant %g", c));
    if (!(r1 > 0.0) || !(r1 <= r2) || !std::isfinite(r2)) throw Error(ErrorCode::invalid_radii, fmt("r1=%g, r2=%g", r1, r2));
    DoublingFormula out;
    out.ratio_lb = std::pow(c, std::log2(r1 / r2) - 2.0);
    out.c_upper = std::pow(c, 2.0 + std::log2((r1 + 2.0 * r2) / r1));
    return out;
}

CaptureResult ball_capture(const FiniteMMSpace& space, double r0, double kappa, const DoublingProfile& profile,
                           std::size_t exact_limit, std::optional<std::array<double, 3>> sep_upper) {
    check_radius(r0, "r0");
    const double m = space.total_mass();
    if (!(kappa > 0.0)) throw Error(ErrorCode::nonpositive_kappa, fmt("kappa=%g", kappa));
    if (kappa >= m) throw Error(ErrorCode::deficit_exceeds_mass, fmt("kappa=%g, m=%g", kappa, m));
    if (!space.is_metric()) throw Error(ErrorCode::triangle_violation, "ball capture needs a metric");

    CaptureResult out;
    CaptureTrace& trace = out.trace;
    trace.packing_bound = profile.upper(space, r0, 5.0 * r0);
    const double rest = (m - kappa) / 3.0;
    if (sep_upper) {
        trace.sep_upper = *sep_upper;
    } else {
        trace.sep_upper = {separation(space, kappa, m / trace.packing_bound, exact_limit).upper,
                           separation(space, rest, rest, exact_limit).upper,
                           separation(space, rest, kappa, exact_limit).upper};
    }
    static const char* names[3] = {"Sep(kappa, m/C)", "Sep((m-kappa)/3, (m-kappa)/3)", "Sep((m-kappa)/3, kappa)"};
    const double margin = metric_tol * std::max(1.0, r0);
    for (std::size_t t = 0; t < 3; ++t) {
        if (!(r0 > trace.sep_upper[t] + margin)) {
            if (!out.diagnostics.empty()) out.diagnostics += "; ";
            out.diagnostics += std::string(names[t]) + fmt(" = %g is not below r0 = %g", trace.sep_upper[t], r0);
        }
    }
    if (!out.diagnostics.empty()) return out;

    const std::size_t n = space.size();
    for (std::size_t p = 0; p < n; ++p) {
        if (std::all_of(trace.net.begin(), trace.net.end(), [&](std::size_t q) { return space.dist(p, q) >= r0; })) {
            trace.net.push_back(p);
        }
    }
    const std::size_t net_size = trace.net.size();
    std::vector<std::size_t> peers;
    for (std::size_t a = 0; a < net_size; ++a) {
        std::size_t count = 0;
        for (std::size_t b = 0; b < net_size; ++b) {
            if (space.dist(trace.net[a], trace.net[b]) <= 5.0 * r0) ++count;
        }
        if (count > trace.k) {
            trace.k = count;
            trace.alpha0 = trace.net[a];
        }
    }
    if (static_cast<double>(trace.k) > trace.packing_bound) {
        out.diagnostics = fmt("C(r0, 5r0) = %g is below the %g separated points found in one ball", trace.packing_bound,
                              static_cast<double>(trace.k));
        return out;
    }
    out.hypothesis_ok = true;

    std::vector<std::size_t> beta;
    for (std::size_t q : trace.net) {
        if (space.dist(trace.alpha0, q) <= 5.0 * r0) beta.push_back(q);
    }
    std::vector<bool> used(n, false);
    std::vector<bool> later(n, false);
    for (std::size_t q : beta) later[q] = true;
    for (std::size_t i = 0; i < trace.k; ++i) {
        later[beta[i]] = false;
        std::vector<std::size_t> family{beta[i]};
        used[beta[i]] = true;
        for (std::size_t q : trace.net) {
            if (used[q] || later[q]) continue;
            const bool far = std::all_of(family.begin(), family.end(),
                                         [&](std::size_t f) { return space.dist(q, f) >= 5.0 * r0; });
            if (far) {
                family.push_back(q);
                used[q] = true;
            }
        }
        trace.families.push_back(std::move(family));
    }
    for (std::size_t q : trace.net) {
        if (!used[q]) throw Error(ErrorCode::internal_claim_failed, "the families J_i do not cover the net");
    }

    double best = -1.0;
    for (std::size_t i = 0; i < trace.k; ++i) {
        const double mass = ball_union_mass(space, trace.families[i], r0);
        if (mass > best) {
            best = mass;
            trace.chosen = i;
        }
    }
    trace.family_mass = best;
    if (best < m / static_cast<double>(trace.k) - mass_tol) {
        throw Error(ErrorCode::internal_claim_failed, fmt("no family carries m/k: best %g", best));
    }
    const auto& family = trace.families[trace.chosen];
    trace.doubled_mass = ball_union_mass(space, family, 2.0 * r0);
    if (trace.doubled_mass < m - kappa - mass_tol) {
        throw Error(ErrorCode::internal_claim_failed, fmt("2r0-union carries %g < m - kappa", trace.doubled_mass));
    }
    trace.center_mass = -1.0;
    for (std::size_t q : family) {
        const double mass = ball_mass(space, q, 2.0 * r0);
        if (mass > trace.center_mass) {
            trace.center_mass = mass;
            out.x0 = q;
        }
    }
    if (trace.center_mass < rest - mass_tol) {
        throw Error(ErrorCode::internal_claim_failed, fmt("largest 2r0-ball carries %g < (m - kappa)/3", trace.center_mass));
    }
    out.captured_mass = ball_mass(space, out.x0, 3.0 * r0);
    if (out.captured_mass < m - kappa - mass_tol) {
        throw Error(ErrorCode::internal_claim_failed, fmt("3r0-ball carries %g < m - kappa", out.captured_mass));
    }
    return out;
}

double doubling_capture_radius(const FiniteMMSpace& space, double kappa, double doubling_c, std::size_t exact_limit) {
    const double m = space.total_mass();
    if (!(kappa > 0.0)) throw Error(ErrorCode::nonpositive_kappa, fmt("kappa=%g", kappa));
    if (kappa >= m) throw Error(ErrorCode::deficit_exceeds_mass, fmt("kappa=%g, m=%g", kappa, m));
    const double c15 = doubling_formula_bounds(doubling_c, 1.0, 5.0).c_upper;
    const double rest = (m - kappa) / 3.0;
    return std::max({separation(space, kappa, m / c15, exact_limit).upper,
                     separation(space, rest, rest, exact_limit).upper,
                     separation(space, rest, kappa, exact_limit).upper});
}

DoublingOrbitBound doubling_orbit_bound(const FiniteAction& action, std::size_t x, double kappa,
                                        const DoublingProfile& profile, std::size_t exact_limit) {
    if (!(kappa > 0.0 && kappa < 0.5)) throw Error(ErrorCode::invalid_input, fmt("kappa=%g outside (0, 1/2)", kappa));
    const FiniteMMSpace nu = orbit_measure(action, x);
    const ModulusFunction omega = omega_modulus(action, x);
    const double rest = (1.0 - kappa) / 3.0;

    DoublingOrbitBound out;
    out.terms[1] = orbit_separation_bound(action, omega, rest, rest, exact_limit).upper;
    out.terms[2] = orbit_separation_bound(action, omega, rest, kappa, exact_limit).upper;
    auto above = [](double t) { return t + 1e-6 * std::max(1.0, t); };

    const bool scale_free = profile.mode == DoublingProfile::Mode::explicit_constant ||
                            profile.mode == DoublingProfile::Mode::doubling_measure;
    double r0 = above(std::max(out.terms[1], out.terms[2]));
    bool settled = false;
    for (int iter = 0; iter < 64 && !settled; ++iter) {
        const double c = scale_free ? profile.upper(nu, 1.0, 5.0) : profile.upper(nu, r0, 5.0 * r0);
        out.terms[0] = orbit_separation_bound(action, omega, kappa, 1.0 / c, exact_limit).upper;
        const double next = above(std::max({out.terms[0], out.terms[1], out.terms[2]}));
        if (next <= r0) {
            settled = true;
        } else {
            r0 = next;
        }
    }
    if (!settled) throw HypothesisError("no radius satisfies the capture hypothesis");
    out.r0 = r0;

    const CaptureResult capture = ball_capture(nu, r0, kappa, profile, exact_limit, out.terms);
    if (!capture.hypothesis_ok) throw HypothesisError(capture.diagnostics);
    const OrbitCertificate cert = ball_certificate(action, x, 3.0 * r0, capture.x0);
    out.z = capture.x0;
    out.center_bound = cert.center_bound;
    out.center_actual = cert.center_actual;
    out.orbit_point = cert.x0;
    out.bound = cert.bound;
    out.actual = cert.actual;
    out.holds = cert.holds;
    return out;
}

CompactOrbitBound compact_orbit_bound(const FiniteAction& action, std::size_t x, double delta,
                                      std::size_t exact_limit) {
    check_radius(delta, "delta");
    CompactOrbitBound out;
    out.covering = covering_number(action.space(), delta).upper;
    const double kappa = 1.0 / (2.0 * out.covering) * (1.0 - 1e-9);
    const ModulusFunction omega = omega_modulus(action, x);
    out.sep_term = orbit_separation_bound(action, omega, kappa, kappa, exact_limit).upper;
    out.r = out.sep_term + 2.0 * delta;
    const ModulusFunction rho = rho_modulus(action);
    out.bound = out.r + rho.right_limit(out.r);

    const FiniteMMSpace nu = orbit_measure(action, x);
    const CertifiedValue heavy = partial_diameter(nu, 0.5 - 1e-9, exact_limit);
    const OrbitCertificate cert = subset_certificate(action, x, heavy.witness.set_a);
    out.witness_diameter = heavy.upper;
    out.z = cert.x0;
    out.actual = cert.actual;
    out.holds = out.actual <= out.bound + metric_tol;
    return out;
}

double covering_separation_bound(const FiniteMMSpace& space, double kappa, double delta, std::size_t exact_limit) {
    const double n = covering_number(space, delta).upper;
    return separation(space, kappa / n, kappa / n, exact_limit).upper + 2.0 * delta;
}

}  // namespace concentra
