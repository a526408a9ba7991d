#pragma once
// Target torus T^2 of the warped product T^2 x_f S^2: the twisted torus metric,
// the (x,y) chart in which the geodesic gamma is a straight line, the cutoff
// chi and the warping function f.

#include <array>
#include <string>
#include <vector>

namespace wwm {

/// Point of T^2 in (w,z) coordinates, both reduced to [0,1).
class TorusPoint {
public:
    TorusPoint(double w, double z);
    double w() const noexcept { return w_; }
    double z() const noexcept { return z_; }

private:
    double w_;
    double z_;
};

/// Point in the (x,y) chart; (x,y) and (x+1,y-1) are the same torus point.
struct ChartPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Symmetric 2x2 metric tensor.
struct Metric2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double det() const noexcept { return xx * yy - xy * xy; }
    /// Eigenvalues in ascending order.
    std::array<double, 2> eigenvalues() const noexcept;
    bool positive_definite() const noexcept;
};

/// Shape constants of the concrete cutoff chi.
struct ChiParams {
    double delta0 = 0.05;    ///< half-width in x of the tube around gamma
    double sharpness = 1.0;  ///< k in the smooth step 1/(1+exp(k/t - k/(1-t)))
};

struct ManifoldConfig {
    double M = 4.0;
    double eps_bar = 0.5;
    ChiParams chi;

    /// Throws ConfigError unless M > 2, M > 2 sup f~ (sampled), eps_bar > 0
    /// and the chi transition fits between the plateau and w = 1/4.
    void validate() const;
    /// eps0 = min(eps_bar, cot(7 pi/16)/2).
    double eps0() const noexcept;
};

/// cot(7 pi/16): half-width in s = x+y of the plateau where f = M.
double plateau_half_width() noexcept;

/// Smooth monotone step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t, double sharpness = 1.0) noexcept;
double smooth_step_derivative(double t, double sharpness = 1.0) noexcept;

Metric2 metric_h(const TorusPoint& p) noexcept;
ChartPoint phi(const TorusPoint& p);
TorusPoint phi_inv(const ChartPoint& q) noexcept;
/// Jacobian of phi at p, row-major [[dx/dw, dx/dz],[dy/dw, dy/dz]].
std::array<double, 4> phi_jacobian(const TorusPoint& p);
Metric2 metric_xy(const ChartPoint& q) noexcept;

TorusPoint gamma(double s) noexcept;
ChartPoint gamma_xy(double s) noexcept;

/// Christoffel symbols of metric_xy at q, indexed [k][i][j].
std::array<std::array<std::array<double, 2>, 2>, 2> christoffel_xy(const ChartPoint& q) noexcept;
/// |c'' + Gamma(c)(c',c')| for a curve with position, velocity and acceleration in the chart.
double geodesic_residual(const ChartPoint& pos, std::array<double, 2> vel, std::array<double, 2> acc) noexcept;
/// Residual of gamma_xy at parameter s.
double geodesic_residual(double s) noexcept;

/// f~ in chart coordinates, as printed (no branch logic).
double f_tilde_xy(const ChartPoint& q) noexcept;

/// Value and chart gradient of a scalar field.
struct Jet2 {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
};

/// Which formula of the piecewise chart definition of f applies at s = x + y.
enum class FBranch { tilde, blend_tilde, blend_mirror, mirror };

/// The warped product's geometry for one ManifoldConfig. All members are pure.
class Manifold {
public:
    explicit Manifold(ManifoldConfig cfg = {});

    const ManifoldConfig& config() const noexcept { return cfg_; }

    double chi(const TorusPoint& p) const;
    Jet2 chi_xy(const ChartPoint& q) const noexcept;

    double f(const TorusPoint& p) const;
    double f_xy(const ChartPoint& q) const noexcept;
    Jet2 f_jet(const ChartPoint& q) const noexcept;

    /// d/dy f(0,y), analytic on every branch.
    double df_dy_on_gamma(double y) const noexcept;
    /// f(0,y) and d/dy f(0,y) in one evaluation.
    Jet2 f_on_gamma(double y) const noexcept { return f_jet({0.0, y}); }

    static FBranch branch_of(double s) noexcept;
    /// Evaluate one branch formula of f, extended past its own interval.
    Jet2 f_branch_jet(FBranch b, const ChartPoint& q) const noexcept;

    /// Metric gradient of f (index raised with metric_xy).
    std::array<double, 2> grad_f_xy(const ChartPoint& q) const noexcept;
    /// sup of f~ over the region where it enters f with nonzero weight.
    double sup_f_tilde_used() const noexcept;

private:
    double eta(double v) const noexcept;
    double eta_derivative(double v) const noexcept;

    ManifoldConfig cfg_;
    double eta_lo_;
    double eta_hi_;
};

/// One executable check of the manifold's properties.
struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct GeometryCheckOptions {
    std::size_t torus_samples = 1'000'000;
    std::size_t pushforward_samples = 1000;
    double s_min = -50.0;
    double s_max = 50.0;
    std::size_t s_samples = 20001;
};

/// Runs the whole geometry invariant suite.
std::vector<CheckResult> run_geometry_checks(const Manifold& m, const GeometryCheckOptions& opt = {});

}  // namespace wwm
