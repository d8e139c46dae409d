#include "concentra/concentration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

namespace concentra {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string describe(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

void check_deficit(double kappa, double mass) {
    if (!std::isfinite(kappa) || kappa < 0.0) {
        throw Error(ErrorCode::invalid_input, "mass deficit must be finite and >= 0");
    }
    if (kappa >= mass) throw Error(ErrorCode::deficit_exceeds_mass, describe("kappa=%g, m=%g", kappa, mass));
}

void check_kappa(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw Error(ErrorCode::nonpositive_kappa, describe("kappa=%g", kappa));
    }
}

// Positive-weight points, heaviest first; the exact searches run over these.
struct Support {
    std::vector<std::size_t> index;  // into the original space
    std::vector<double> weight;
    std::vector<double> dist;        // flat, |index| x |index|
    std::size_t n = 0;

    double d(std::size_t i, std::size_t j) const { return dist[i * n + j]; }
    std::vector<std::size_t> original(std::uint64_t mask) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1U) out.push_back(index[i]);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

Support make_support(const FiniteMMSpace& space, double scale = 1.0) {
    Support s;
    s.index = space.support();
    std::stable_sort(s.index.begin(), s.index.end(), [&](std::size_t a, std::size_t b) {
        return space.weight(a) > space.weight(b);
    });
    s.n = s.index.size();
    s.weight.resize(s.n);
    s.dist.resize(s.n * s.n);
    for (std::size_t i = 0; i < s.n; ++i) {
        s.weight[i] = space.weight(s.index[i]) * scale;
        for (std::size_t j = 0; j < s.n; ++j) s.dist[i * s.n + j] = space.dist(s.index[i], s.index[j]);
    }
    return s;
}

std::size_t effective_limit(std::size_t exact_limit) { return std::min(exact_limit, max_exact_limit); }

// ---------------------------------------------------------------- cliques

class CliqueSearch {
public:
    CliqueSearch(const std::vector<std::uint64_t>& adj, const std::vector<double>& w, double target)
        : adj_(adj), w_(w), target_(target) {}

    bool run(std::uint64_t all) {
        expand(0, 0.0, all);
        return found_;
    }
    std::uint64_t clique() const { return best_; }

private:
    double mass(std::uint64_t set) const {
        double m = 0.0;
        while (set) {
            m += w_[static_cast<std::size_t>(std::countr_zero(set))];
            set &= set - 1;
        }
        return m;
    }

    void expand(std::uint64_t cur, double cur_w, std::uint64_t cand) {
        if (cur_w >= target_ - mass_tol) {
            found_ = true;
            best_ = cur;
            return;
        }
        while (cand && !found_) {
            if (cur_w + mass(cand) < target_ - mass_tol) return;
            const auto v = static_cast<std::size_t>(std::countr_zero(cand));
            cand &= cand - 1;
            expand(cur | (std::uint64_t{1} << v), cur_w + w_[v], cand & adj_[v]);
        }
    }

    const std::vector<std::uint64_t>& adj_;
    const std::vector<double>& w_;
    double target_;
    bool found_ = false;
    std::uint64_t best_ = 0;
};

// ------------------------------------------------------------- separation

class SeparationSearch {
public:
    SeparationSearch(const Support& s, double k1, double k2) : s_(s), k1_(k1), k2_(k2) {
        suffix_.assign(s.n + 1, 0.0);
        for (std::size_t i = s.n; i-- > 0;) suffix_[i] = suffix_[i + 1] + s.weight[i];
        order_.resize(s.n);
    }

    void run() {
        std::vector<double> da(s_.n, inf);
        dfs(0, 0, 0.0, da);
    }

    double best = 0.0;
    std::uint64_t best_a = 0;
    std::vector<std::size_t> best_b;
    bool any = false;
    std::size_t budget = std::numeric_limits<std::size_t>::max();
    bool aborted = false;

    // Best B for fixed distances to A: farthest points first.
    double best_b_value(const std::vector<double>& da, std::vector<std::size_t>* b_set) {
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return da[a] > da[b] || (da[a] == da[b] && a < b);
        });
        double m = 0.0;
        for (std::size_t k = 0; k < s_.n; ++k) {
            const std::size_t y = order_[k];
            m += s_.weight[y];
            if (m >= k2_ - mass_tol) {
                if (b_set) b_set->assign(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(k + 1));
                return da[y];
            }
        }
        return -inf;
    }

private:
    void dfs(std::size_t next, std::uint64_t a, double mass_a, std::vector<double>& da) {
        if (aborted || ++nodes_ > budget) {
            aborted = true;
            return;
        }
        if (a != 0) {
            if (mass_a >= k1_ - mass_tol) {
                const double v = best_b_value(da, &scratch_);
                if (v > -inf && (!any || v > best)) {
                    best = v;
                    best_a = a;
                    best_b = scratch_;
                    any = true;
                }
                return;
            }
            if (any && best_b_value(da, nullptr) <= best) return;
        }
        if (mass_a + suffix_[next] < k1_ - mass_tol) return;
        std::vector<double> saved(s_.n);
        for (std::size_t j = next; j < s_.n; ++j) {
            if (mass_a + suffix_[j] < k1_ - mass_tol) return;
            saved = da;
            for (std::size_t y = 0; y < s_.n; ++y) da[y] = std::min(da[y], s_.d(j, y));
            dfs(j + 1, a | (std::uint64_t{1} << j), mass_a + s_.weight[j], da);
            da = saved;
        }
    }

    const Support& s_;
    double k1_;
    double k2_;
    std::vector<double> suffix_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> scratch_;
    std::size_t nodes_ = 0;
};

// Nearest-first prefix around each center with mass >= target.
std::vector<std::size_t> grow_ball(const Support& s, std::size_t center, double target,
                                   std::vector<std::size_t>& order) {
    order.resize(s.n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double da = s.d(center, a);
        const double db = s.d(center, b);
        return da < db || (da == db && a < b);
    });
    std::vector<std::size_t> out;
    double m = 0.0;
    for (std::size_t y : order) {
        out.push_back(y);
        m += s.weight[y];
        if (m >= target - mass_tol) break;
    }
    return out;
}

// Smallest r with mass{y : d(x, y) > r} < kappa.
double escape_radius(const Support& s, std::size_t x, double kappa, std::vector<std::size_t>& order) {
    order.resize(s.n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.d(x, a) > s.d(x, b); });
    double greater = 0.0;
    double answer = s.d(x, order.front());
    std::size_t k = 0;
    while (k < s.n) {
        const double v = s.d(x, order[k]);
        if (greater >= kappa - mass_tol) break;
        answer = v;
        while (k < s.n && s.d(x, order[k]) == v) greater += s.weight[order[k++]];
    }
    return answer;
}

// Grouping points around k farthest-point centers: if D(c, c') is the largest
// distance between the two groups, Sep(X) <= Sep over groups measured by D.
double coarse_separation_bound(const Support& s, double k1, double k2, std::size_t k, std::size_t budget) {
    k = std::min(k, s.n);
    std::vector<std::size_t> centers{0};
    std::vector<double> reach(s.n);
    std::vector<std::size_t> owner(s.n, 0);
    for (std::size_t y = 0; y < s.n; ++y) reach[y] = s.d(0, y);
    while (centers.size() < k) {
        const auto far = static_cast<std::size_t>(std::max_element(reach.begin(), reach.end()) - reach.begin());
        if (reach[far] == 0.0) break;
        centers.push_back(far);
        for (std::size_t y = 0; y < s.n; ++y) {
            if (s.d(far, y) < reach[y]) {
                reach[y] = s.d(far, y);
                owner[y] = centers.size() - 1;
            }
        }
    }
    Support coarse;
    coarse.n = centers.size();
    coarse.index = centers;
    coarse.weight.assign(coarse.n, 0.0);
    coarse.dist.assign(coarse.n * coarse.n, 0.0);
    for (std::size_t y = 0; y < s.n; ++y) {
        coarse.weight[owner[y]] += s.weight[y];
        for (std::size_t z = 0; z < s.n; ++z) {
            double& cell = coarse.dist[owner[y] * coarse.n + owner[z]];
            cell = std::max(cell, s.d(y, z));
        }
    }
    SeparationSearch search(coarse, k1, k2);
    search.budget = budget;
    search.run();
    return search.any && !search.aborted ? search.best : inf;
}

CertifiedValue separation_heuristic(const Support& s, bool metric, double k1, double k2) {
    CertifiedValue out;
    out.method = Method::heuristic;
    out.exact = false;
    SeparationSearch helper(s, k1, k2);
    SeparationSearch helper_swapped(s, k2, k1);
    std::vector<std::size_t> order;
    double best = 0.0;
    std::vector<std::size_t> best_a;
    std::vector<std::size_t> best_b;
    std::vector<double> da(s.n);
    for (int swap = 0; swap < 2; ++swap) {
        const double ka = swap ? k2 : k1;
        SeparationSearch& h = swap ? helper_swapped : helper;
        for (std::size_t c = 0; c < s.n; ++c) {
            const auto a = grow_ball(s, c, ka, order);
            std::fill(da.begin(), da.end(), inf);
            for (std::size_t i : a) {
                for (std::size_t y = 0; y < s.n; ++y) da[y] = std::min(da[y], s.d(i, y));
            }
            std::vector<std::size_t> b;
            const double v = h.best_b_value(da, &b);
            if (v > best) {
                best = v;
                best_a = a;
                best_b = std::move(b);
                if (swap) std::swap(best_a, best_b);
            }
        }
    }
    double upper = 0.0;
    for (std::size_t i = 0; i < s.n; ++i) {
        for (std::size_t j = i + 1; j < s.n; ++j) upper = std::max(upper, s.d(i, j));
    }
    if (metric) {
        for (std::size_t x = 0; x < s.n; ++x) {
            upper = std::min(upper, escape_radius(s, x, k1, order) + escape_radius(s, x, k2, order));
        }
        double coarse = coarse_separation_bound(s, k1, k2, 32, 2000000);
        if (coarse == inf) coarse = coarse_separation_bound(s, k1, k2, 16, std::numeric_limits<std::size_t>::max());
        upper = std::min(upper, coarse);
    }
    for (auto& v : best_a) v = s.index[v];
    for (auto& v : best_b) v = s.index[v];
    std::sort(best_a.begin(), best_a.end());
    std::sort(best_b.begin(), best_b.end());
    out.lower = best;
    out.upper = std::max(upper, best);
    out.witness = {describe("ball-grown pair at distance %g", best), best_a, best_b};
    return out;
}

// ---------------------------------------------------------- concentration

class AlphaSearch {
public:
    AlphaSearch(const Support& s, double r) : s_(s), r_(r) {
        suffix_.assign(s.n + 1, 0.0);
        for (std::size_t i = s.n; i-- > 0;) suffix_[i] = suffix_[i + 1] + s.weight[i];
    }

    void run() {
        std::vector<double> da(s_.n, inf);
        dfs(0, 0, 0.0, da);
    }

    double best = 0.0;
    std::uint64_t best_a = 0;
    bool any = false;

private:
    double far_mass(const std::vector<double>& da) const {
        double m = 0.0;
        for (std::size_t y = 0; y < s_.n; ++y) {
            if (da[y] >= r_) m += s_.weight[y];
        }
        return m;
    }

    void dfs(std::size_t next, std::uint64_t a, double mass_a, std::vector<double>& da) {
        if (a != 0) {
            const double v = far_mass(da);
            if (mass_a >= 0.5 - mass_tol) {
                if (!any || v > best) {
                    best = v;
                    best_a = a;
                    any = true;
                }
                return;
            }
            if (any && v <= best) return;
        }
        std::vector<double> saved(s_.n);
        for (std::size_t j = next; j < s_.n; ++j) {
            if (mass_a + suffix_[j] < 0.5 - mass_tol) return;
            saved = da;
            for (std::size_t y = 0; y < s_.n; ++y) da[y] = std::min(da[y], s_.d(j, y));
            dfs(j + 1, a | (std::uint64_t{1} << j), mass_a + s_.weight[j], da);
            da = saved;
        }
    }

    const Support& s_;
    double r_;
    std::vector<double> suffix_;
};

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::exhaustive: return "exhaustive";
        case Method::branch_and_bound: return "branch_and_bound";
        case Method::heuristic: return "heuristic";
        case Method::formula: return "formula";
    }
    return "unknown";
}

CertifiedValue CertifiedValue::exact_value(double v, Method method, Witness witness) {
    CertifiedValue out;
    out.lower = out.upper = v;
    out.exact = true;
    out.method = method;
    out.witness = std::move(witness);
    return out;
}

// ------------------------------------------------------- partial diameter

CertifiedValue partial_diameter(const RealMeasure1D& measure, double kappa) {
    check_deficit(kappa, measure.total_mass());
    const auto& atoms = measure.atoms();
    const double target = measure.total_mass() - kappa;
    double best = inf;
    std::size_t bi = 0;
    std::size_t bj = 0;
    double window = 0.0;
    std::size_t i = 0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        window += atoms[j].mass;
        while (i < j && window - atoms[i].mass >= target - mass_tol) {
            window -= atoms[i].mass;
            ++i;
        }
        if (window >= target - mass_tol) {
            const double len = atoms[j].position - atoms[i].position;
            if (len < best) {
                best = len;
                bi = i;
                bj = j;
            }
        }
    }
    Witness w;
    for (std::size_t k = bi; k <= bj; ++k) w.set_a.push_back(k);
    w.description = describe("window [%g, %g]", atoms[bi].position, atoms[bj].position);
    return CertifiedValue::exact_value(best, Method::exhaustive, std::move(w));
}

CertifiedValue partial_diameter(const FiniteMMSpace& space, double kappa, std::size_t exact_limit) {
    check_deficit(kappa, space.total_mass());
    const double target = space.total_mass() - kappa;
    const Support s = make_support(space);

    if (s.n <= effective_limit(exact_limit)) {
        std::vector<double> cand{0.0};
        for (std::size_t i = 0; i < s.n; ++i) {
            for (std::size_t j = i + 1; j < s.n; ++j) cand.push_back(s.d(i, j));
        }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        const std::uint64_t all = s.n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << s.n) - 1;
        std::vector<std::uint64_t> adj(s.n);
        auto feasible = [&](double t, std::uint64_t* clique) {
            for (std::size_t i = 0; i < s.n; ++i) {
                adj[i] = 0;
                for (std::size_t j = 0; j < s.n; ++j) {
                    if (j != i && s.d(i, j) <= t) adj[i] |= std::uint64_t{1} << j;
                }
            }
            CliqueSearch search(adj, s.weight, target);
            const bool ok = search.run(all);
            if (ok && clique) *clique = search.clique();
            return ok;
        };
        std::size_t lo = 0;
        std::size_t hi = cand.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (feasible(cand[mid], nullptr)) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        std::uint64_t clique = 0;
        feasible(cand[lo], &clique);
        Witness w{describe("set of mass >= %g with diameter %g", target, cand[lo]), s.original(clique), {}};
        return CertifiedValue::exact_value(cand[lo], Method::branch_and_bound, std::move(w));
    }

    CertifiedValue out;
    out.method = Method::heuristic;
    double lower = inf;
    double upper = inf;
    std::vector<std::size_t> order;
    std::vector<std::size_t> best_set;
    for (std::size_t c = 0; c < s.n; ++c) {
        const auto ball = grow_ball(s, c, target, order);
        lower = std::min(lower, s.d(c, ball.back()));
        double diam = 0.0;
        for (std::size_t a = 0; a < ball.size(); ++a) {
            for (std::size_t b = a + 1; b < ball.size(); ++b) diam = std::max(diam, s.d(ball[a], ball[b]));
        }
        if (diam < upper) {
            upper = diam;
            best_set = ball;
        }
    }
    for (auto& v : best_set) v = s.index[v];
    std::sort(best_set.begin(), best_set.end());
    out.lower = std::min(lower, upper);
    out.upper = upper;
    out.exact = out.lower == out.upper;
    out.witness = {describe("greedy ball set with diameter %g", upper), best_set, {}};
    return out;
}

// ------------------------------------------------------------- separation

CertifiedValue separation(const FiniteMMSpace& space, double kappa1, double kappa2, std::size_t exact_limit) {
    check_kappa(kappa1);
    check_kappa(kappa2);
    const double m = space.total_mass();
    if (kappa1 > m + mass_tol || kappa2 > m + mass_tol) {
        return CertifiedValue::exact_value(0.0, Method::formula, {"no set carries the required mass", {}, {}});
    }
    const Support s = make_support(space);
    if (s.n <= effective_limit(exact_limit)) {
        SeparationSearch search(s, kappa1, kappa2);
        search.run();
        std::vector<std::size_t> b;
        for (std::size_t y : search.best_b) b.push_back(s.index[y]);
        std::sort(b.begin(), b.end());
        Witness w{describe("d(A, B) = %g", search.best), s.original(search.best_a), std::move(b)};
        return CertifiedValue::exact_value(search.best, Method::branch_and_bound, std::move(w));
    }
    return separation_heuristic(s, space.is_metric(), kappa1, kappa2);
}

CertifiedValue separation(const RealMeasure1D& measure, double kappa1, double kappa2, std::size_t exact_limit) {
    check_kappa(kappa1);
    check_kappa(kappa2);
    const double m = measure.total_mass();
    if (measure.size() == 0) throw Error(ErrorCode::empty_measure, "");
    if (kappa1 > m + mass_tol || kappa2 > m + mass_tol) {
        return CertifiedValue::exact_value(0.0, Method::formula, {"no set carries the required mass", {}, {}});
    }
    const FiniteMMSpace line = measure.as_mmspace();
    if (line.support().size() <= effective_limit(exact_limit)) {
        return separation(line, kappa1, kappa2, exact_limit);
    }
    // Tail sets give a feasible pair; the span bounds every pair.
    const auto& atoms = measure.atoms();
    auto tails = [&](double left, double right) {
        std::size_t i = 0;
        double ml = 0.0;
        for (; i < atoms.size(); ++i) {
            ml += atoms[i].mass;
            if (ml >= left - mass_tol) break;
        }
        std::size_t j = atoms.size();
        double mr = 0.0;
        while (j-- > 0) {
            mr += atoms[j].mass;
            if (mr >= right - mass_tol) break;
        }
        return std::pair{i, j};
    };
    CertifiedValue out;
    out.method = Method::heuristic;
    double best = 0.0;
    for (int swap = 0; swap < 2; ++swap) {
        const auto [i, j] = swap ? tails(kappa2, kappa1) : tails(kappa1, kappa2);
        if (i < j && atoms[j].position - atoms[i].position > best) {
            best = atoms[j].position - atoms[i].position;
            Witness w{describe("tails gap %g", best), {}, {}};
            for (std::size_t k = 0; k <= i; ++k) w.set_a.push_back(k);
            for (std::size_t k = j; k < atoms.size(); ++k) w.set_b.push_back(k);
            if (swap) std::swap(w.set_a, w.set_b);
            out.witness = std::move(w);
        }
    }
    out.lower = best;
    out.upper = std::max(best, atoms.back().position - atoms.front().position);
    out.exact = out.lower == out.upper;
    return out;
}

// ---------------------------------------------------------- concentration

ConcentrationValue concentration_function(const FiniteMMSpace& space, double r, std::size_t exact_limit) {
    if (!(r > 0.0)) throw Error(ErrorCode::nonpositive_radius, describe("r=%g", r));
    ConcentrationValue out;
    const double m = space.total_mass();
    out.rescaled = std::fabs(m - 1.0) > mass_tol;
    const Support s = make_support(space, 1.0 / m);

    if (s.n <= effective_limit(exact_limit)) {
        AlphaSearch search(s, r);
        search.run();
        Witness w{describe("A of mass >= 1/2 leaves %g outside A_{+r}", search.best), s.original(search.best_a), {}};
        out.value = CertifiedValue::exact_value(search.best, Method::branch_and_bound, std::move(w));
        return out;
    }

    double best = 0.0;
    std::vector<std::size_t> best_a;
    std::vector<std::size_t> order;
    auto evaluate = [&](const std::vector<std::size_t>& a) {
        double far = 0.0;
        for (std::size_t y = 0; y < s.n; ++y) {
            double d = inf;
            for (std::size_t i : a) d = std::min(d, s.d(i, y));
            if (d >= r) far += s.weight[y];
        }
        if (far > best) {
            best = far;
            best_a = a;
        }
    };
    for (std::size_t c = 0; c < s.n; ++c) {
        evaluate(grow_ball(s, c, 0.5, order));
        // farthest-first set around c
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return s.d(c, a) > s.d(c, b) || (s.d(c, a) == s.d(c, b) && a < b);
        });
        std::vector<std::size_t> a;
        double ma = 0.0;
        for (std::size_t y : order) {
            a.push_back(y);
            ma += s.weight[y];
            if (ma >= 0.5 - mass_tol) break;
        }
        evaluate(a);
    }
    for (auto& v : best_a) v = s.index[v];
    std::sort(best_a.begin(), best_a.end());
    out.value.lower = best;
    out.value.upper = 0.5;
    out.value.exact = best == 0.5;
    out.value.method = Method::heuristic;
    out.value.witness = {describe("ball probe leaves %g outside", best), best_a, {}};
    return out;
}

// ----------------------------------------------------------------- median

MedianInterval median(const RealMeasure1D& measure) {
    const auto& atoms = measure.atoms();
    const double m = measure.total_mass();
    if (atoms.empty() || !(m > 0.0)) throw Error(ErrorCode::empty_measure, "");
    const double half = 0.5 * m;
    MedianInterval out;
    double below = 0.0;
    for (const Atom& a : atoms) {
        below += a.mass;
        if (a.mass > 0.0 && below >= half - mass_tol) {
            out.low = a.position;
            break;
        }
    }
    double above = 0.0;
    for (std::size_t k = atoms.size(); k-- > 0;) {
        above += atoms[k].mass;
        if (atoms[k].mass > 0.0 && above >= half - mass_tol) {
            out.high = atoms[k].position;
            break;
        }
    }
    out.representative = 0.5 * (out.low + out.high);
    return out;
}

double deviation_mass(const RealMeasure1D& measure, double m, double eps) {
    double out = 0.0;
    for (const Atom& a : measure.atoms()) {
        if (std::fabs(a.position - m) >= eps) out += a.mass;
    }
    return out;
}

// ----------------------------------------------------------------- probes

ProbeFunction make_probe(const FiniteMMSpace& space, std::vector<double> values, ProbeKind kind) {
    if (values.size() != space.size()) throw Error(ErrorCode::invalid_input, "probe size mismatch");
    double lip = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw Error(ErrorCode::non_finite_value, "probe value");
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            const double df = std::fabs(values[i] - values[j]);
            if (df == 0.0) continue;
            const double d = space.dist(i, j);
            lip = std::max(lip, d > 0.0 ? df / d : inf);
        }
    }
    return {std::move(values), lip, kind};
}

ProbeFunction contract_probe(ProbeFunction probe) {
    if (probe.lipschitz_constant > 1.0 && std::isfinite(probe.lipschitz_constant)) {
        for (double& v : probe.values) v /= probe.lipschitz_constant;
        probe.lipschitz_constant = 1.0;
    }
    return probe;
}

ProbeFunction point_distance_probe(const FiniteMMSpace& space, std::size_t center) {
    std::vector<double> v(space.row(center), space.row(center) + space.size());
    return make_probe(space, std::move(v), ProbeKind::point_distance);
}

ProbeFunction set_distance_probe(const FiniteMMSpace& space, const std::vector<std::size_t>& set) {
    if (set.empty()) throw Error(ErrorCode::empty_set, "set distance probe");
    std::vector<double> v(space.size(), inf);
    for (std::size_t a : set) {
        for (std::size_t y = 0; y < space.size(); ++y) v[y] = std::min(v[y], space.dist(a, y));
    }
    return make_probe(space, std::move(v), ProbeKind::set_distance);
}

std::vector<ProbeFunction> mcshane_probes(const FiniteMMSpace& space, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = space.size();
    const double diam = space.diameter();
    std::vector<ProbeFunction> out;
    out.reserve(count);
    for (std::size_t p = 0; p < count; ++p) {
        const std::size_t anchors = 1 + static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(std::min<std::size_t>(n, 4)));
        std::vector<double> v(n, inf);
        for (std::size_t a = 0; a < anchors; ++a) {
            const auto xi = std::min(n - 1, static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n)));
            const double ci = unit_uniform(rng) * diam;
            for (std::size_t y = 0; y < n; ++y) v[y] = std::min(v[y], ci + space.dist(xi, y));
        }
        out.push_back(make_probe(space, std::move(v), ProbeKind::mcshane_random));
    }
    return out;
}

// -------------------------------------------------------- observable diam

ObsDiamResult obs_diameter_interval(const FiniteMMSpace& space, double kappa, const ObsDiamOptions& options) {
    const double m = space.total_mass();
    if (!(kappa > 0.0)) throw Error(ErrorCode::nonpositive_kappa, describe("kappa=%g", kappa));
    check_deficit(kappa, m);

    ObsDiamResult out;
    for (std::size_t i = 0; i < space.size(); ++i) out.probes.push_back(point_distance_probe(space, i));

    std::vector<double> grid;
    for (double c : {1.25, 1.5, 2.0, 3.0, 4.0}) grid.push_back(c * kappa);
    grid.insert(grid.end(), options.witness_kappas.begin(), options.witness_kappas.end());
    for (double k : grid) {
        if (!(k > 0.0) || k > m) continue;
        const CertifiedValue sep = separation(space, k, k, options.exact_limit);
        if (!sep.witness.set_a.empty()) out.probes.push_back(set_distance_probe(space, sep.witness.set_a));
        if (!sep.witness.set_b.empty()) out.probes.push_back(set_distance_probe(space, sep.witness.set_b));
    }
    for (auto& p : mcshane_probes(space, options.n_probes, options.seed)) out.probes.push_back(std::move(p));

    double lower = 0.0;
    std::size_t best_probe = 0;
    std::vector<ProbeFunction> kept;
    kept.reserve(out.probes.size());
    for (auto& p : out.probes) {
        if (!std::isfinite(p.lipschitz_constant)) continue;
        kept.push_back(contract_probe(std::move(p)));
        const double v = partial_diameter(pushforward(space, kept.back().values), kappa).lower;
        if (v > lower) {
            lower = v;
            best_probe = kept.size() - 1;
        }
    }
    out.probes = std::move(kept);

    const CertifiedValue upper = separation(space, 0.5 * kappa, 0.5 * kappa, options.exact_limit);
    out.value.lower = lower;
    out.value.upper = std::max(lower, upper.upper);
    out.value.exact = out.value.upper - out.value.lower <= 1e-12;
    out.value.method = upper.exact ? Method::branch_and_bound : Method::heuristic;
    out.value.witness.description = describe("probe %g attains %g", static_cast<double>(best_probe), lower);
    return out;
}

}  // namespace concentra
