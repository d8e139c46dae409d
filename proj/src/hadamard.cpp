#include "concentra/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace concentra {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

// Minkowski norm of a vector known to be spacelike or null.
double spacelike_norm(const Eigen::VectorXd& v) { return std::sqrt(std::max(0.0, minkowski(v, v))); }

}  // namespace

double minkowski(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    return u.tail(u.size() - 1).dot(v.tail(v.size() - 1)) - u(0) * v(0);
}

// ------------------------------------------------------------ model space

ModelSpace::ModelSpace(ModelKind kind, std::size_t dim) : kind_(kind), dim_(dim) {
    if (dim == 0) throw Error(ErrorCode::invalid_input, "model dimension must be positive");
}

Eigen::VectorXd ModelSpace::origin() const {
    Eigen::VectorXd o = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ambient_dim()));
    if (kind_ == ModelKind::hyperbolic) o(0) = 1.0;
    return o;
}

Eigen::VectorXd ModelSpace::lift(const Eigen::VectorXd& spatial) const {
    if (static_cast<std::size_t>(spatial.size()) != dim_) throw Error(ErrorCode::not_on_model, "wrong coordinate count");
    if (kind_ == ModelKind::euclidean) return spatial;
    Eigen::VectorXd x(spatial.size() + 1);
    x(0) = std::sqrt(1.0 + spatial.squaredNorm());
    x.tail(spatial.size()) = spatial;
    return x;
}

Eigen::VectorXd ModelSpace::from_polar(const Eigen::VectorXd& v) const {
    if (static_cast<std::size_t>(v.size()) != dim_) throw Error(ErrorCode::not_on_model, "wrong coordinate count");
    if (kind_ == ModelKind::euclidean) return v;
    const double r = v.norm();
    Eigen::VectorXd x(v.size() + 1);
    x(0) = std::cosh(r);
    x.tail(v.size()) = r > 0.0 ? Eigen::VectorXd(v * (std::sinh(r) / r)) : Eigen::VectorXd::Zero(v.size());
    return renormalize(x);
}

void ModelSpace::check_point(const Eigen::VectorXd& x) const {
    if (static_cast<std::size_t>(x.size()) != ambient_dim()) throw Error(ErrorCode::not_on_model, "wrong coordinate count");
    if (!finite(x)) throw Error(ErrorCode::not_on_model, "non-finite coordinate");
    if (kind_ == ModelKind::hyperbolic) {
        if (x(0) <= 0.0) throw Error(ErrorCode::not_on_model, "point on the lower sheet");
        const double defect = std::fabs(minkowski(x, x) + 1.0);
        if (defect > model_tol * std::max(1.0, x(0) * x(0)))
            throw Error(ErrorCode::not_on_model, fmt("Minkowski norm defect %g", defect));
    }
}

void ModelSpace::check_tangent(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
    check_point(x);
    if (v.size() != x.size() || !finite(v)) throw Error(ErrorCode::not_on_model, "malformed tangent vector");
    if (kind_ == ModelKind::hyperbolic) {
        const double scale = std::max(1.0, x.norm() * v.norm());
        if (std::fabs(minkowski(x, v)) > model_tol * scale)
            throw Error(ErrorCode::not_on_model, fmt("tangent vector not orthogonal (%g)", minkowski(x, v)));
    }
}

Eigen::VectorXd ModelSpace::renormalize(const Eigen::VectorXd& x) const {
    if (kind_ == ModelKind::euclidean) return x;
    Eigen::VectorXd y = x;
    y(0) = std::sqrt(1.0 + x.tail(x.size() - 1).squaredNorm());
    return y;
}

double ModelSpace::inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return kind_ == ModelKind::euclidean ? u.dot(v) : minkowski(u, v);
}

double ModelSpace::norm(const Eigen::VectorXd& v) const {
    return kind_ == ModelKind::euclidean ? v.norm() : spacelike_norm(v);
}

double ModelSpace::distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    if (kind_ == ModelKind::euclidean) return (x - y).norm();
    const double b = -minkowski(x, y);
    if (b > 2.0) return std::acosh(b);
    // <x-y, x-y>_L = 4 sinh^2(d/2) is accurate for nearby points.
    return 2.0 * std::asinh(0.5 * spacelike_norm(x - y));
}

Eigen::VectorXd ModelSpace::exp(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
    if (kind_ == ModelKind::euclidean) return x + v;
    const double n = spacelike_norm(v);
    if (n == 0.0) return x;
    return renormalize(std::cosh(n) * x + (std::sinh(n) / n) * v);
}

Eigen::VectorXd ModelSpace::log(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    if (kind_ == ModelKind::euclidean) return y - x;
    const double d = distance(x, y);
    if (d == 0.0) return Eigen::VectorXd::Zero(x.size());
    Eigen::VectorXd u = y + minkowski(x, y) * x;
    Eigen::VectorXd v = (d / std::sinh(d)) * u;
    v += minkowski(x, v) * x;
    return v;
}

Eigen::VectorXd ModelSpace::tangent_coordinates(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const {
    if (kind_ == ModelKind::euclidean) return v;
    // Boost taking x back to the origin, applied to v.
    const Eigen::Index k = x.size() - 1;
    const Eigen::VectorXd u = x.tail(k);
    const double x0 = x(0);
    const Eigen::VectorXd vs = v.tail(k);
    return -u * v(0) + vs + u * (u.dot(vs) / (1.0 + x0));
}

// --------------------------------------------------------- raw hyperboloid

HyperboloidPoint::HyperboloidPoint(Eigen::VectorXd c) : coords(std::move(c)) {
    if (coords.size() < 2) throw Error(ErrorCode::not_on_model, "hyperboloid point needs k+1 >= 2 coordinates");
    ModelSpace::hyperbolic(dim()).check_point(coords);
}

TangentVector::TangentVector(Eigen::VectorXd b, Eigen::VectorXd v) : base(std::move(b)), vec(std::move(v)) {
    if (base.size() < 2) throw Error(ErrorCode::not_on_model, "hyperboloid point needs k+1 >= 2 coordinates");
    ModelSpace::hyperbolic(static_cast<std::size_t>(base.size()) - 1).check_tangent(base, vec);
}

double hyp_distance(const HyperboloidPoint& x, const HyperboloidPoint& y) {
    if (x.coords.size() != y.coords.size()) throw Error(ErrorCode::not_on_model, "dimension mismatch");
    return ModelSpace::hyperbolic(x.dim()).distance(x.coords, y.coords);
}

HyperboloidPoint hyp_exp(const TangentVector& v) {
    const auto space = ModelSpace::hyperbolic(static_cast<std::size_t>(v.base.size()) - 1);
    return HyperboloidPoint(space.exp(v.base, v.vec));
}

TangentVector hyp_log(const HyperboloidPoint& x, const HyperboloidPoint& y) {
    if (x.coords.size() != y.coords.size()) throw Error(ErrorCode::not_on_model, "dimension mismatch");
    return TangentVector(x.coords, ModelSpace::hyperbolic(x.dim()).log(x.coords, y.coords));
}

// ------------------------------------------------------------- isometries

ModelIsometry ModelIsometry::then(const ModelIsometry& next) const {
    return {next.linear * linear, next.linear * translation + next.translation};
}

ModelIsometry identity_isometry(const ModelSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.ambient_dim());
    return {Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n)};
}

namespace {

Eigen::Index spatial_index(const ModelSpace& space, std::size_t axis) {
    if (axis >= space.dim()) throw Error(ErrorCode::invalid_input, "axis out of range");
    return static_cast<Eigen::Index>(axis + (space.kind() == ModelKind::hyperbolic ? 1 : 0));
}

}  // namespace

ModelIsometry rotation(const ModelSpace& space, std::size_t i, std::size_t j, double theta) {
    if (i == j) throw Error(ErrorCode::invalid_input, "rotation needs two distinct axes");
    auto g = identity_isometry(space);
    const auto a = spatial_index(space, i);
    const auto b = spatial_index(space, j);
    g.linear(a, a) = std::cos(theta);
    g.linear(a, b) = -std::sin(theta);
    g.linear(b, a) = std::sin(theta);
    g.linear(b, b) = std::cos(theta);
    return g;
}

ModelIsometry translation(const ModelSpace& space, std::size_t axis, double t) {
    auto g = identity_isometry(space);
    const auto a = spatial_index(space, axis);
    if (space.kind() == ModelKind::euclidean) {
        g.translation(a) = t;
    } else {
        g.linear(0, 0) = g.linear(a, a) = std::cosh(t);
        g.linear(0, a) = g.linear(a, 0) = std::sinh(t);
    }
    return g;
}

ModelIsometry reflection(const ModelSpace& space, std::size_t axis) {
    auto g = identity_isometry(space);
    const auto a = spatial_index(space, axis);
    g.linear(a, a) = -1.0;
    return g;
}

bool is_isometry(const ModelSpace& space, const ModelIsometry& g, double tol) {
    const auto n = static_cast<Eigen::Index>(space.ambient_dim());
    if (g.linear.rows() != n || g.linear.cols() != n || g.translation.size() != n) return false;
    if (!g.linear.allFinite() || !g.translation.allFinite()) return false;
    const double scale = std::max(1.0, g.linear.squaredNorm());
    if (space.kind() == ModelKind::euclidean) {
        return (g.linear.transpose() * g.linear - Eigen::MatrixXd::Identity(n, n)).norm() <= tol * scale;
    }
    Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n);
    j(0, 0) = -1.0;
    return g.translation.norm() == 0.0 && g.linear(0, 0) > 0.0 &&
           (g.linear.transpose() * j * g.linear - j).norm() <= tol * scale;
}

// --------------------------------------------------------------- measures

double ModelMeasure::total_mass() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

namespace {

void check_measure(const ModelSpace& space, const ModelMeasure& nu) {
    if (nu.points.size() != nu.weights.size()) throw Error(ErrorCode::invalid_input, "one weight per point required");
    for (std::size_t i = 0; i < nu.points.size(); ++i) {
        space.check_point(nu.points[i]);
        if (!std::isfinite(nu.weights[i]) || nu.weights[i] < 0.0)
            throw Error(ErrorCode::invalid_input, "weights must be finite and nonnegative");
    }
    if (!(nu.total_mass() > 0.0)) throw Error(ErrorCode::empty_measure, "measure has no mass");
}

Eigen::VectorXd gradient(const ModelSpace& space, const ModelMeasure& nu, const Eigen::VectorXd& c, double mass) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(c.size());
    for (std::size_t i = 0; i < nu.points.size(); ++i)
        if (nu.weights[i] > 0.0) g += nu.weights[i] * space.log(c, nu.points[i]);
    g /= mass;
    if (space.kind() == ModelKind::hyperbolic) g += minkowski(c, g) * c;
    return g;
}

Eigen::VectorXd initial_center(const ModelSpace& space, const ModelMeasure& nu, double mass, bool flat_iterate) {
    if (flat_iterate) {
        const auto heaviest = std::max_element(nu.weights.begin(), nu.weights.end()) - nu.weights.begin();
        return nu.points[static_cast<std::size_t>(heaviest)];
    }
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(nu.points.front().size());
    for (std::size_t i = 0; i < nu.points.size(); ++i) mean += nu.weights[i] * nu.points[i];
    mean /= mass;
    if (space.kind() == ModelKind::hyperbolic) mean /= std::sqrt(-minkowski(mean, mean));
    return space.renormalize(mean);
}

}  // namespace

KarcherResult karcher_mean(const ModelSpace& space, const ModelMeasure& nu, const KarcherOptions& options) {
    check_measure(space, nu);
    const double mass = nu.total_mass();
    const bool flat = space.kind() == ModelKind::euclidean;
    KarcherResult out;
    if (flat && !options.iterate) {
        out.center = initial_center(space, nu, mass, false);
        out.residual = space.norm(gradient(space, nu, out.center, mass));
        return out;
    }
    // Floating-point floor for the residual at this scale.
    double spread = 0.0;
    for (const auto& p : nu.points) spread = std::max(spread, p.cwiseAbs().maxCoeff());
    const double accept = std::max(options.tolerance, 1e-10);
    double step = 1.0;
    double last_residual = inf;
    for (int attempt = 0; attempt <= 3; ++attempt, step *= 0.5) {
        Eigen::VectorXd c = initial_center(space, nu, mass, flat);
        Eigen::VectorXd best_c = c;
        double best = inf;
        std::size_t since_best = 0;
        bool diverged = false;
        std::size_t it = 0;
        for (; it < options.max_iterations; ++it) {
            const Eigen::VectorXd g = gradient(space, nu, c, mass);
            const double r = space.norm(g);
            if (!std::isfinite(r) || r > 1e3 * std::max(1.0, best == inf ? r : best)) {
                diverged = true;
                break;
            }
            if (r < best) {
                best = r;
                best_c = c;
                since_best = 0;
            } else if (++since_best > 50) {
                break;  // stagnated at rounding level
            }
            if (r <= options.tolerance) break;
            c = space.exp(c, step * g);
        }
        last_residual = best;
        if (!diverged && best <= accept) {
            out.center = best_c;
            out.residual = best;
            out.iterations = it;
            out.step = step;
            return out;
        }
    }
    throw Error(ErrorCode::no_convergence,
                fmt("Karcher iteration did not converge (residual %g, spread %g)", last_residual, spread));
}

double central_radius(const ModelSpace& space, const ModelMeasure& nu, const Eigen::VectorXd& center, double kappa) {
    check_measure(space, nu);
    space.check_point(center);
    const double mass = nu.total_mass();
    if (kappa < 0.0) throw Error(ErrorCode::invalid_input, "deficit must be nonnegative");
    if (kappa >= mass) throw Error(ErrorCode::deficit_exceeds_mass, "deficit must be below the total mass");
    std::vector<std::pair<double, double>> by_dist;
    for (std::size_t i = 0; i < nu.points.size(); ++i)
        if (nu.weights[i] > 0.0) by_dist.emplace_back(space.distance(center, nu.points[i]), nu.weights[i]);
    std::sort(by_dist.begin(), by_dist.end());
    const double target = mass - kappa - mass_tol;
    double acc = 0.0;
    for (const auto& [d, w] : by_dist) {
        acc += w;
        if (acc >= target) return d;
    }
    return by_dist.back().first;
}

double central_radius(const ModelSpace& space, const ModelMeasure& nu, double kappa) {
    return central_radius(space, nu, karcher_mean(space, nu).center, kappa);
}

// ---------------------------------------------------------------- actions

MaterializedOrbit materialize_orbit(const ModelAction& action, const Eigen::VectorXd& x, double dedup_tol) {
    const auto& space = action.space;
    const auto& group = action.group;
    space.check_point(x);
    if (action.isometries.size() != group.size())
        throw Error(ErrorCode::invalid_action, "one isometry per group element required");
    for (const auto& g : action.isometries)
        if (!is_isometry(space, g)) throw Error(ErrorCode::invalid_action, "matrix is not an isometry of the model");

    std::vector<Eigen::VectorXd> points;
    std::vector<std::size_t> index(group.size());
    for (std::size_t g = 0; g < group.size(); ++g) {
        const Eigen::VectorXd p = space.renormalize(action.isometries[g].apply(x));
        std::size_t found = points.size();
        for (std::size_t i = 0; i < points.size() && found == points.size(); ++i)
            if (space.distance(points[i], p) <= dedup_tol) found = i;
        if (found == points.size()) points.push_back(p);
        index[g] = found;
    }
    if (space.distance(points[index[group.identity()]], x) > dedup_tol)
        throw Error(ErrorCode::invalid_action, "identity element moves x");

    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> maps(group.size(), std::vector<std::size_t>(n, n));
    for (std::size_t h = 0; h < group.size(); ++h) {
        for (std::size_t g = 0; g < group.size(); ++g) {
            const std::size_t target = index[group.multiply(h, g)];
            auto& slot = maps[h][index[g]];
            if (slot != n && slot != target)
                throw Error(ErrorCode::invalid_action, "isometries do not represent the group on the orbit");
            slot = target;
        }
    }
    // The matrices must agree with the group law on the orbit.
    for (std::size_t h = 0; h < group.size(); ++h)
        for (std::size_t i = 0; i < n; ++i)
            if (space.distance(action.isometries[h].apply(points[i]), points[maps[h][i]]) > 1e-7 * std::max(1.0, points[i].norm()))
                throw Error(ErrorCode::invalid_action, "isometries do not represent the group on the orbit");

    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = space.distance(points[i], points[j]);
    std::vector<double> weights(n, 0.0);
    for (std::size_t g = 0; g < group.size(); ++g) weights[index[g]] += 1.0 / static_cast<double>(group.size());

    FiniteMMSpace orbit_space = make_unchecked(n, std::move(dist), weights);
    MaterializedOrbit out{FiniteAction(group, std::move(orbit_space), std::move(maps)), points, index[group.identity()],
                          ModelMeasure{points, weights}};
    return out;
}

CradOrbitBound crad_orbit_bound(const ModelAction& action, const Eigen::VectorXd& x) {
    const auto orbit = materialize_orbit(action, x);
    const auto& space = action.space;
    CradOrbitBound out;
    out.center = karcher_mean(space, orbit.measure).center;

    std::vector<std::pair<double, double>> by_dist;
    for (std::size_t i = 0; i < orbit.points.size(); ++i)
        by_dist.emplace_back(space.distance(out.center, orbit.points[i]), orbit.measure.weights[i]);
    std::sort(by_dist.begin(), by_dist.end());
    double acc = 0.0;
    for (const auto& [d, w] : by_dist) {
        acc += w;
        if (acc > 0.5 + mass_tol) {
            out.r = d;
            break;
        }
    }
    for (int j = 1; j <= 40; ++j) out.grid.push_back(central_radius(space, orbit.measure, out.center, 0.5 - std::ldexp(1.0, -j)));

    out.bound_center = 2.0 * out.r;
    out.bound_orbit_point = 4.0 * out.r;
    for (const auto& g : action.isometries)
        out.actual_center = std::max(out.actual_center, space.distance(out.center, space.renormalize(g.apply(out.center))));

    std::size_t nearest = 0;
    for (std::size_t i = 1; i < orbit.points.size(); ++i)
        if (space.distance(out.center, orbit.points[i]) < space.distance(out.center, orbit.points[nearest])) nearest = i;
    out.z = orbit.points[nearest];
    out.actual_orbit_point = orbit.action.displacement(nearest);
    const double slack = 1e-9 * std::max(1.0, out.r);
    out.holds = out.actual_center <= out.bound_center + slack && out.actual_orbit_point <= out.bound_orbit_point + slack;
    return out;
}

// ------------------------------------------------------------- formulas

GaussianMoment gaussian_moment(double p, std::size_t k) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_input, "moment order must be nonnegative");
    if (k == 0) throw Error(ErrorCode::invalid_input, "dimension must be positive");
    const double half_p = 0.5 * p;
    const double kd = static_cast<double>(k);
    GaussianMoment out;
    out.m_p = std::exp(half_p * std::log(2.0) - 0.5 * std::log(M_PI) + std::lgamma(0.5 * (p + 1.0)));
    out.full_moment = std::exp(half_p * std::log(2.0) + std::lgamma(0.5 * (p + kd)) - std::lgamma(0.5 * kd));
    return out;
}

HolderBounds holder_bounds(const HolderProfile& profile, std::size_t k, double kappa) {
    const auto& h = profile.modulus;
    const auto& g = profile.group;
    for (double v : {h.c1, h.alpha, g.c2, g.c3, g.beta, profile.c_user})
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::invalid_input, "profile constants must be positive");
    if (k == 0) throw Error(ErrorCode::invalid_input, "dimension must be positive");
    if (!(kappa > 0.0)) throw Error(ErrorCode::nonpositive_kappa, "kappa must be positive");
    if (h.alpha > g.beta) throw Error(ErrorCode::alpha_exceeds_beta, fmt("alpha %g exceeds beta %g", h.alpha, g.beta));
    const double ratio = h.alpha / g.beta;
    const double numerator = profile.c_user * h.c1 * std::sqrt(static_cast<double>(k));
    HolderBounds out;
    out.crad_bound = numerator / std::pow(g.c3 * kappa, ratio);
    out.orbit_radius = numerator / std::pow(g.c3, ratio);
    return out;
}

HolderFit holder_exponent_fit(const FiniteAction& action, std::size_t x) {
    const ModulusFunction omega = omega_modulus(action, x);
    std::vector<double> lx, ly;
    const auto& b = omega.breakpoints();
    const auto& v = omega.values();
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] > 0.0 && v[i] > 0.0 && std::isfinite(b[i])) {
            lx.push_back(std::log(b[i]));
            ly.push_back(std::log(v[i]));
        }
    }
    if (lx.size() < 2) throw Error(ErrorCode::degenerate_moduli, "fewer than two positive breakpoints of omega_x");
    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0.0) throw Error(ErrorCode::degenerate_moduli, "breakpoints of omega_x are not distinct");
    HolderFit out;
    out.alpha = sxy / sxx;
    const double intercept = my - out.alpha * mx;
    out.c1 = std::exp(intercept);
    for (std::size_t i = 0; i < lx.size(); ++i) out.residuals.push_back(ly[i] - (intercept + out.alpha * lx[i]));
    return out;
}

}  // namespace concentra
