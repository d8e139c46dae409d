#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "concentra/group_action.hpp"

namespace concentra {

// Tolerance for the hyperboloid constraint <x,x>_L = -1 and for tangency.
inline constexpr double model_tol = 1e-10;

enum class ModelKind { euclidean, hyperbolic };

// R^k with the Euclidean metric, or H^k as the upper sheet of the hyperboloid
// in R^{k+1}. Points and tangent vectors are ambient coordinate vectors.
class ModelSpace {
public:
    ModelSpace(ModelKind kind, std::size_t dim);
    static ModelSpace euclidean(std::size_t dim) { return {ModelKind::euclidean, dim}; }
    static ModelSpace hyperbolic(std::size_t dim) { return {ModelKind::hyperbolic, dim}; }

    ModelKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t ambient_dim() const noexcept { return kind_ == ModelKind::hyperbolic ? dim_ + 1 : dim_; }

    Eigen::VectorXd origin() const;
    // Point with the given k spatial coordinates (x0 solved for on H^k).
    Eigen::VectorXd lift(const Eigen::VectorXd& spatial) const;
    // Geodesic polar coordinates: exp_origin of the tangent vector `v` in R^k.
    Eigen::VectorXd from_polar(const Eigen::VectorXd& v) const;

    // Throws NotOnModel.
    void check_point(const Eigen::VectorXd& x) const;
    void check_tangent(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;
    // Re-imposes the model constraint after arithmetic.
    Eigen::VectorXd renormalize(const Eigen::VectorXd& x) const;

    double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
    double norm(const Eigen::VectorXd& v) const;
    double distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
    Eigen::VectorXd exp(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;
    Eigen::VectorXd log(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
    // Coordinates of a tangent vector at x in an orthonormal frame (R^k).
    Eigen::VectorXd tangent_coordinates(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;

private:
    ModelKind kind_;
    std::size_t dim_;
};

// Minkowski bilinear form -u0 v0 + sum u_i v_i.
double minkowski(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct HyperboloidPoint {
    Eigen::VectorXd coords;
    explicit HyperboloidPoint(Eigen::VectorXd c);  // validates
    std::size_t dim() const noexcept { return static_cast<std::size_t>(coords.size()) - 1; }
};

struct TangentVector {
    Eigen::VectorXd base;
    Eigen::VectorXd vec;
    TangentVector(Eigen::VectorXd b, Eigen::VectorXd v);  // validates
};

double hyp_distance(const HyperboloidPoint& x, const HyperboloidPoint& y);
HyperboloidPoint hyp_exp(const TangentVector& v);
TangentVector hyp_log(const HyperboloidPoint& x, const HyperboloidPoint& y);

// Isometry x -> linear x + translation (translation is zero on H^k).
struct ModelIsometry {
    Eigen::MatrixXd linear;
    Eigen::VectorXd translation;

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return linear * x + translation; }
    ModelIsometry then(const ModelIsometry& next) const;  // next after this
};

ModelIsometry identity_isometry(const ModelSpace& space);
// Rotation by theta in the plane of spatial axes i, j.
ModelIsometry rotation(const ModelSpace& space, std::size_t i, std::size_t j, double theta);
// Translation by t along spatial axis i (a boost on H^k).
ModelIsometry translation(const ModelSpace& space, std::size_t axis, double t);
// Reflection of spatial axis i.
ModelIsometry reflection(const ModelSpace& space, std::size_t axis);
bool is_isometry(const ModelSpace& space, const ModelIsometry& g, double tol = 1e-9);

struct ModelMeasure {
    std::vector<Eigen::VectorXd> points;
    std::vector<double> weights;
    double total_mass() const;
};

struct KarcherOptions {
    double tolerance = 1e-12;  // on |(1/m) sum w_i log_c(y_i)|
    std::size_t max_iterations = 10000;
    bool iterate = false;      // force the iteration on R^k
};

struct KarcherResult {
    Eigen::VectorXd center;
    double residual = 0.0;     // |sum w_i log_c(y_i)| / m
    std::size_t iterations = 0;
    double step = 1.0;
};

KarcherResult karcher_mean(const ModelSpace& space, const ModelMeasure& nu, const KarcherOptions& options = {});

// Smallest radius whose closed ball around `center` has mass >= m - kappa.
double central_radius(const ModelSpace& space, const ModelMeasure& nu, const Eigen::VectorXd& center, double kappa);
double central_radius(const ModelSpace& space, const ModelMeasure& nu, double kappa);

// Finite group acting on a model space through one isometry per element.
struct ModelAction {
    ModelSpace space;
    FiniteMetricGroup group;
    std::vector<ModelIsometry> isometries;
};

// The orbit of x as a finite action on its (deduplicated) points.
struct MaterializedOrbit {
    FiniteAction action;
    std::vector<Eigen::VectorXd> points;
    std::size_t x = 0;
    ModelMeasure measure;  // nu_{G,x}
};

MaterializedOrbit materialize_orbit(const ModelAction& action, const Eigen::VectorXd& x, double dedup_tol = 1e-9);

struct CradOrbitBound {
    Eigen::VectorXd center;
    double r = 0.0;                     // lim_{kappa -> 1/2-} CRad(nu, 1 - kappa)
    std::vector<double> grid;           // CRad at kappa = 1/2 - 2^-j
    double bound_center = 0.0;          // r + rho(+r)
    double bound_orbit_point = 0.0;     // min{2r + rho(+2r), 2r + 2 rho(+r)}
    double actual_center = 0.0;         // max_g d(c, g c)
    Eigen::VectorXd z;
    double actual_orbit_point = 0.0;    // max_g d(z, g z)
    bool holds = false;
};

// Isometric actions, so rho(eta) = eta.
CradOrbitBound crad_orbit_bound(const ModelAction& action, const Eigen::VectorXd& x);

struct GaussianMoment {
    double m_p = 0.0;          // E|N(0,1)|^p
    double full_moment = 0.0;  // E|N(0,I_k)|^p
};

GaussianMoment gaussian_moment(double p, std::size_t k);

struct HolderProfile {
    HolderModulus modulus;   // omega_x(eta) <= c1 eta^alpha
    GroupProfile group;      // alpha_G(r) <= c2 exp(-c3 r^beta)
    double c_user = 1.0;
};

struct HolderBounds {
    double crad_bound = 0.0;    // C c1 sqrt(k) / (c3 kappa)^(alpha/beta)
    double orbit_radius = 0.0;  // C c1 sqrt(k) / c3^(alpha/beta)
    // orbit_radius + rho(orbit_radius)
    double orbit_diam_bound(const ModulusFunction& rho) const { return orbit_radius + rho(orbit_radius); }
    double orbit_diam_bound() const { return 2.0 * orbit_radius; }
};

HolderBounds holder_bounds(const HolderProfile& profile, std::size_t k, double kappa);

struct HolderFit {
    double c1 = 0.0;
    double alpha = 0.0;
    std::vector<double> residuals;  // log-space residuals per breakpoint
};

// Least-squares fit of log omega_x against log eta over the breakpoints.
HolderFit holder_exponent_fit(const FiniteAction& action, std::size_t x);

}  // namespace concentra
