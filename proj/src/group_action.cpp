#include "concentra/group_action.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numeric>

namespace concentra {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr std::size_t full_check_limit = 128;

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

// Breakpoints are matched with a small relative slack.
double slack(double eta) { return 1e-12 * std::max(1.0, std::fabs(eta)); }

std::vector<double> orbit_weights(const FiniteAction& action, std::size_t x) {
    const auto& g = action.group();
    std::vector<double> w(action.space().size(), 0.0);
    const double unit = 1.0 / static_cast<double>(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) w[action.apply(k, x)] += unit;
    return w;
}

void require_point(const FiniteAction& action, std::size_t x) {
    if (x >= action.space().size()) throw Error(ErrorCode::invalid_input, "point index out of range");
}

}  // namespace

// ------------------------------------------------------------------ group

FiniteMetricGroup::FiniteMetricGroup(std::vector<std::vector<std::size_t>> table,
                                     std::vector<std::vector<double>> dist, bool require_right_invariant) {
    n_ = table.size();
    if (n_ == 0) throw Error(ErrorCode::invalid_action, "empty group");
    table_.resize(n_ * n_);
    for (std::size_t a = 0; a < n_; ++a) {
        if (table[a].size() != n_) throw Error(ErrorCode::invalid_action, "multiplication table is not square");
        for (std::size_t b = 0; b < n_; ++b) {
            if (table[a][b] >= n_) throw Error(ErrorCode::invalid_action, "table entry out of range");
            table_[a * n_ + b] = table[a][b];
        }
    }
    bool found = false;
    for (std::size_t e = 0; e < n_ && !found; ++e) {
        bool ok = true;
        for (std::size_t a = 0; a < n_ && ok; ++a) ok = multiply(e, a) == a && multiply(a, e) == a;
        if (ok) {
            identity_ = e;
            found = true;
        }
    }
    if (!found) throw Error(ErrorCode::invalid_action, "no identity element");
    inverse_.assign(n_, n_);
    for (std::size_t a = 0; a < n_; ++a) {
        for (std::size_t b = 0; b < n_; ++b) {
            if (multiply(a, b) == identity_ && multiply(b, a) == identity_) {
                inverse_[a] = b;
                break;
            }
        }
        if (inverse_[a] == n_) throw Error(ErrorCode::invalid_action, "element without inverse");
    }
    auto assoc = [&](std::size_t a, std::size_t b, std::size_t c) {
        return multiply(multiply(a, b), c) == multiply(a, multiply(b, c));
    };
    if (n_ <= full_check_limit) {
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b)
                for (std::size_t c = 0; c < n_; ++c)
                    if (!assoc(a, b, c)) throw Error(ErrorCode::invalid_action, "table is not associative");
    } else {
        std::size_t state = 88172645463325252ULL;
        for (int t = 0; t < 200000; ++t) {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            if (!assoc(state % n_, (state >> 20) % n_, (state >> 40) % n_)) {
                throw Error(ErrorCode::invalid_action, "table is not associative");
            }
        }
    }
    RawMMSpace raw;
    raw.dist = std::move(dist);
    raw.weights.assign(n_, 1.0 / static_cast<double>(n_));
    raw.metric_strict = n_ <= full_check_limit;
    if (raw.dist.size() != n_) throw Error(ErrorCode::invalid_action, "group metric size mismatch");
    haar_ = validate_mmspace(raw);
    for (std::size_t a = 0; a < n_; ++a) {
        for (std::size_t b = a + 1; b < n_; ++b) {
            if (haar_.dist(a, b) <= 0.0) throw Error(ErrorCode::invalid_action, "group metric is degenerate");
        }
    }
    if (require_right_invariant && !is_right_invariant()) {
        throw Error(ErrorCode::invalid_action, "group metric is not right invariant");
    }
}

FiniteMetricGroup FiniteMetricGroup::with_word_metric(std::vector<std::vector<std::size_t>> table,
                                                      const std::vector<std::size_t>& generators) {
    const std::size_t n = table.size();
    // Validate the table first with a placeholder metric.
    std::vector<std::vector<double>> discrete(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) discrete[i][i] = 0.0;
    const FiniteMetricGroup probe(table, discrete);
    std::vector<std::size_t> s;
    for (std::size_t g : generators) {
        if (g >= n) throw Error(ErrorCode::invalid_action, "generator out of range");
        if (g == probe.identity()) continue;
        s.push_back(g);
        s.push_back(probe.inverse(g));
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, inf));
    for (std::size_t src = 0; src < n; ++src) {
        std::deque<std::size_t> queue{src};
        dist[src][src] = 0.0;
        while (!queue.empty()) {
            const std::size_t g = queue.front();
            queue.pop_front();
            for (std::size_t gen : s) {
                const std::size_t h = probe.multiply(gen, g);
                if (dist[src][h] == inf) {
                    dist[src][h] = dist[src][g] + 1.0;
                    queue.push_back(h);
                }
            }
        }
        for (std::size_t h = 0; h < n; ++h) {
            if (dist[src][h] == inf) throw Error(ErrorCode::disconnected, "generators do not generate the group");
        }
    }
    return FiniteMetricGroup(std::move(table), std::move(dist));
}

FiniteMetricGroup FiniteMetricGroup::trivial() { return FiniteMetricGroup({{0}}, {{0.0}}); }

bool FiniteMetricGroup::is_right_invariant(double tol) const {
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
            for (std::size_t k = 0; k < n_; ++k)
                if (std::fabs(dist(multiply(a, k), multiply(b, k)) - dist(a, b)) > tol) return false;
    return true;
}

FiniteMetricGroup cyclic_group(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::invalid_input, "cyclic group of order 0");
    std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) table[a][b] = (a + b) % n;
    return FiniteMetricGroup::with_word_metric(std::move(table), n > 1 ? std::vector<std::size_t>{1} : std::vector<std::size_t>{});
}

// ----------------------------------------------------------------- action

FiniteAction::FiniteAction(FiniteMetricGroup group, FiniteMMSpace space, std::vector<std::vector<std::size_t>> maps)
    : group_(std::move(group)), space_(std::move(space)), maps_(std::move(maps)) {
    const std::size_t n = space_.size();
    if (maps_.size() != group_.size()) throw Error(ErrorCode::invalid_action, "one map per group element required");
    for (const auto& m : maps_) {
        if (m.size() != n) throw Error(ErrorCode::invalid_action, "map size mismatch");
        for (std::size_t v : m) {
            if (v >= n) throw Error(ErrorCode::invalid_action, "map target out of range");
        }
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (maps_[group_.identity()][x] != x) throw Error(ErrorCode::invalid_action, "identity does not act trivially");
    }
    for (std::size_t g = 0; g < group_.size(); ++g)
        for (std::size_t h = 0; h < group_.size(); ++h)
            for (std::size_t x = 0; x < n; ++x)
                if (maps_[g][maps_[h][x]] != maps_[group_.multiply(g, h)][x]) {
                    throw Error(ErrorCode::invalid_action, "composition law fails");
                }
}

std::vector<std::size_t> FiniteAction::orbit(std::size_t x) const {
    std::vector<std::size_t> out;
    for (const auto& m : maps_) out.push_back(m[x]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double FiniteAction::displacement(std::size_t x) const {
    double out = 0.0;
    for (const auto& m : maps_) out = std::max(out, space_.dist(x, m[x]));
    return out;
}

FiniteMMSpace orbit_measure(const FiniteAction& action, std::size_t x) {
    require_point(action, x);
    return action.space().with_weights(orbit_weights(action, x));
}

// ---------------------------------------------------------------- moduli

ModulusFunction::ModulusFunction(std::vector<std::pair<double, double>> samples) {
    std::sort(samples.begin(), samples.end());
    double running = 0.0;
    for (const auto& [b, v] : samples) {
        running = std::max(running, v);
        if (!breaks_.empty() && breaks_.back() == b) {
            values_.back() = running;
        } else {
            breaks_.push_back(b);
            values_.push_back(running);
        }
    }
}

double ModulusFunction::operator()(double eta) const {
    if (eta == inf) return values_.empty() ? 0.0 : values_.back();
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), eta + slack(eta));
    if (it == breaks_.begin()) return 0.0;
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

InverseModulus::InverseModulus(std::vector<std::pair<double, double>> pairs) {
    std::sort(pairs.begin(), pairs.end());
    reach_.resize(pairs.size());
    suffix_min_.resize(pairs.size());
    double running = inf;
    for (std::size_t k = pairs.size(); k-- > 0;) {
        reach_[k] = pairs[k].first;
        running = std::min(running, pairs[k].second);
        suffix_min_[k] = running;
    }
}

double InverseModulus::operator()(double r) const {
    const auto it = std::lower_bound(reach_.begin(), reach_.end(), r - slack(r));
    if (it == reach_.end()) return inf;
    return suffix_min_[static_cast<std::size_t>(it - reach_.begin())];
}

ModulusFunction rho_modulus(const FiniteAction& action) {
    const auto& x = action.space();
    const std::size_t n = x.size();
    std::vector<std::pair<double, double>> samples;
    samples.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double worst = 0.0;
            for (const auto& m : action.maps()) worst = std::max(worst, x.dist(m[i], m[j]));
            samples.emplace_back(x.dist(i, j), worst);
        }
    }
    return ModulusFunction(std::move(samples));
}

ModulusFunction omega_modulus(const FiniteAction& action, std::size_t x) {
    require_point(action, x);
    const auto& g = action.group();
    std::vector<std::pair<double, double>> samples;
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = a; b < g.size(); ++b) {
            samples.emplace_back(g.dist(a, b), action.space().dist(action.apply(a, x), action.apply(b, x)));
        }
    }
    return ModulusFunction(std::move(samples));
}

InverseModulus omega_inverse(const FiniteAction& action, std::size_t x) {
    require_point(action, x);
    const auto& g = action.group();
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = a + 1; b < g.size(); ++b) {
            pairs.emplace_back(action.space().dist(action.apply(a, x), action.apply(b, x)), g.dist(a, b));
        }
    }
    return InverseModulus(std::move(pairs));
}

Moduli moduli(const FiniteAction& action, std::size_t x) {
    return {rho_modulus(action), omega_modulus(action, x), omega_inverse(action, x)};
}

CertifiedValue orbit_separation_bound(const FiniteAction& action, const ModulusFunction& omega, double kappa1,
                                      double kappa2, std::size_t exact_limit) {
    const CertifiedValue sep = separation(action.group().as_mmspace(), kappa1, kappa2, exact_limit);
    CertifiedValue out;
    out.lower = omega.right_limit(sep.lower);
    out.upper = omega.right_limit(sep.upper);
    out.exact = sep.exact;
    out.method = sep.method;
    out.witness = {fmt("omega_x(+Sep(G)) with Sep(G) in [%g, %g]", sep.lower, sep.upper), sep.witness.set_a,
                   sep.witness.set_b};
    return out;
}

// ----------------------------------------------------------- certificates

OrbitCertificate ball_certificate(const FiniteAction& action, std::size_t x, double delta, std::optional<std::size_t> y) {
    require_point(action, x);
    if (!(delta > 0.0)) throw Error(ErrorCode::nonpositive_radius, "delta");
    const FiniteMMSpace nu = orbit_measure(action, x);
    const std::size_t n = nu.size();
    std::size_t center = n;
    if (y) {
        require_point(action, *y);
        if (ball_mass(nu, *y, delta) > 0.5 + mass_tol) center = *y;
    } else {
        double best = 0.5 + mass_tol;
        for (std::size_t c = 0; c < n; ++c) {
            const double m = ball_mass(nu, c, delta);
            if (m > best) {
                best = m;
                center = c;
            }
        }
    }
    if (center == n) throw Error(ErrorCode::mass_hypothesis_fails, fmt("no ball of radius %g carries mass > 1/2", delta));

    std::size_t x0 = n;
    double closest = inf;
    for (std::size_t p : action.orbit(x)) {
        if (nu.dist(center, p) <= delta && nu.dist(center, p) < closest) {
            closest = nu.dist(center, p);
            x0 = p;
        }
    }
    if (x0 == n) throw Error(ErrorCode::internal_claim_failed, "ball of mass > 1/2 misses the orbit");

    const ModulusFunction rho = rho_modulus(action);
    OrbitCertificate out;
    out.mode = "ball";
    out.center = center;
    out.center_bound = delta + rho(delta);
    out.center_actual = action.displacement(center);
    out.x0 = x0;
    out.bound = std::min(2.0 * delta + rho(2.0 * delta), 2.0 * delta + 2.0 * rho(delta));
    out.actual = action.displacement(x0);
    out.holds = out.actual <= out.bound + metric_tol && out.center_actual <= out.center_bound + metric_tol;
    return out;
}

OrbitCertificate subset_certificate(const FiniteAction& action, std::size_t x, const std::vector<std::size_t>& set) {
    require_point(action, x);
    const FiniteMMSpace nu = orbit_measure(action, x);
    const SubsetMask mask(nu, set);
    if (!(mask.mass() > 0.5 + mass_tol)) throw Error(ErrorCode::mass_hypothesis_fails, fmt("subset mass %g", mask.mass()));
    double diam = 0.0;
    const auto members = mask.members();
    for (std::size_t a : members)
        for (std::size_t b : members) diam = std::max(diam, nu.dist(a, b));
    std::size_t x0 = nu.size();
    for (std::size_t p : action.orbit(x)) {
        if (mask.contains(p)) {
            x0 = p;
            break;
        }
    }
    if (x0 == nu.size()) throw Error(ErrorCode::internal_claim_failed, "set of mass > 1/2 misses the orbit");
    const ModulusFunction rho = rho_modulus(action);
    OrbitCertificate out;
    out.mode = "subset";
    out.x0 = x0;
    out.bound = diam + rho(diam);
    out.actual = action.displacement(x0);
    out.holds = out.actual <= out.bound + metric_tol;
    return out;
}

OrbitCertificate limit_certificate(const FiniteAction& action, std::size_t x, std::size_t exact_limit) {
    require_point(action, x);
    const FiniteMMSpace nu = orbit_measure(action, x);
    OrbitCertificate out;
    out.mode = "limit";
    CertifiedValue last;
    for (int j = 2; j <= 10; ++j) {
        const double kappa = 0.5 - std::ldexp(1.0, -j);
        last = partial_diameter(nu, kappa, exact_limit);
        // An upper bound on the diameter keeps the certificate sound.
        out.grid_diameters.push_back(last.upper);
    }
    const double diam = out.grid_diameters.back();
    const ModulusFunction rho = rho_modulus(action);
    std::size_t x0 = nu.size();
    const auto orbit = action.orbit(x);
    for (std::size_t p : last.witness.set_a) {
        if (std::binary_search(orbit.begin(), orbit.end(), p)) {
            x0 = p;
            break;
        }
    }
    if (x0 == nu.size()) throw Error(ErrorCode::internal_claim_failed, "witness set misses the orbit");
    out.x0 = x0;
    out.bound = diam + rho.right_limit(diam);
    out.actual = action.displacement(x0);
    out.holds = out.actual <= out.bound + metric_tol;
    return out;
}

// ------------------------------------------------- pushforward concentration

PushforwardBound pushforward_concentration_bound(const FiniteAction& action, std::size_t x, double r,
                                                 std::optional<HolderModulus> holder,
                                                 std::optional<GroupProfile> profile, std::size_t exact_limit) {
    require_point(action, x);
    if (!(r > 0.0)) throw Error(ErrorCode::nonpositive_radius, "r");
    PushforwardBound out;
    out.omega_inv = omega_inverse(action, x)(r);
    const auto& g = action.group();
    if (out.omega_inv == inf) {
        out.group_term = 0.0;
        out.exact_group_alpha = true;
    } else if (g.size() <= std::min(exact_limit, max_exact_limit)) {
        out.group_term = concentration_function(g.as_mmspace(), out.omega_inv, exact_limit).value.lower;
        out.exact_group_alpha = true;
    } else if (profile) {
        out.group_term = std::min(0.5, profile->c2 * std::exp(-profile->c3 * std::pow(out.omega_inv, profile->beta)));
    } else {
        out.group_term = concentration_function(g.as_mmspace(), out.omega_inv, exact_limit).value.upper;
    }
    out.bound = out.group_term;

    if (holder) {
        if (!profile) throw Error(ErrorCode::invalid_input, "Holder closed form needs a group profile");
        if (!(holder->c1 > 0.0) || !(holder->alpha > 0.0)) throw Error(ErrorCode::invalid_input, "Holder constants must be positive");
        const ModulusFunction omega = omega_modulus(action, x);
        for (std::size_t k = 0; k < omega.breakpoints().size(); ++k) {
            const double eta = omega.breakpoints()[k];
            const double cap = holder->c1 * std::pow(eta, holder->alpha);
            if (omega.values()[k] > cap * (1.0 + 1e-12) + 1e-12) {
                throw Error(ErrorCode::holder_violated, fmt("omega_x(%g) = %g exceeds C1 eta^alpha", eta, omega.values()[k]));
            }
        }
        const double ratio = profile->beta / holder->alpha;
        out.holder_term = profile->c2 * std::exp(-std::pow(holder->c1, -ratio) * profile->c3 * std::pow(r, ratio));
        out.bound = std::min(out.bound, *out.holder_term);
    }
    return out;
}

}  // namespace concentra
