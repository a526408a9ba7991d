#include "wwm/geometry.hpp"

#include "wwm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace wwm {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double sqrt2 = std::numbers::sqrt2;

double mod1(double v) noexcept {
    double r = v - std::floor(v);
    return r >= 1.0 ? 0.0 : r;
}

double acot(double s) noexcept { return 0.5 * pi - std::atan(s); }

// Torus distance of w from the circle {w = 0}.
double dist_to_w0(double w) noexcept { return std::min(w, 1.0 - w); }

Jet2 f_tilde_jet(double x, double y) noexcept {
    const double s = x + y;
    const double env = std::exp(-2.0 * pi * s);
    const double arg = 2.0 * pi * (x - 0.125);
    const double osc = std::sin(arg) + sqrt2;
    Jet2 j;
    j.value = env * osc + 1.0;
    j.dy = -2.0 * pi * env * osc;
    j.dx = j.dy + 2.0 * pi * env * std::cos(arg);
    return j;
}

// f~(-x,-y) and its gradient with respect to (x,y).
Jet2 f_mirror_jet(double x, double y) noexcept {
    Jet2 j = f_tilde_jet(-x, -y);
    j.dx = -j.dx;
    j.dy = -j.dy;
    return j;
}

Jet2 blend(const Jet2& chi, const Jet2& g, double M) noexcept {
    Jet2 j;
    j.value = chi.value * g.value + (1.0 - chi.value) * M;
    j.dx = chi.dx * (g.value - M) + chi.value * g.dx;
    j.dy = chi.dy * (g.value - M) + chi.value * g.dy;
    return j;
}

}  // namespace

TorusPoint::TorusPoint(double w, double z) : w_(mod1(w)), z_(mod1(z)) {}

std::array<double, 2> Metric2::eigenvalues() const noexcept {
    const double mean = 0.5 * (xx + yy);
    const double rad = std::hypot(0.5 * (xx - yy), xy);
    return {mean - rad, mean + rad};
}

bool Metric2::positive_definite() const noexcept {
    return xx > 0.0 && det() > 0.0;
}

double plateau_half_width() noexcept { return 1.0 / std::tan(7.0 * pi / 16.0); }

double ManifoldConfig::eps0() const noexcept {
    return std::min(eps_bar, 0.5 * plateau_half_width());
}

void ManifoldConfig::validate() const {
    if (!(eps_bar > 0.0)) throw ConfigError("eps_bar must be positive");
    if (!(M > 2.0)) throw ConfigError("M must exceed 2");
    if (!(chi.delta0 > 0.0)) throw ConfigError("chi.delta0 must be positive");
    if (!(chi.sharpness > 0.0)) throw ConfigError("chi.sharpness must be positive");
    const double lo = plateau_half_width() + chi.delta0;
    const double hi = 1.0 - chi.delta0;
    if (!(lo < hi)) {
        throw ConfigError("chi.delta0 too large: the cutoff transition does not fit in w in (1/4, 7/16)");
    }
    const Manifold m(*this);
    const double sup = m.sup_f_tilde_used();
    if (!(M > 2.0 * sup)) {
        std::ostringstream os;
        os << "M = " << M << " must exceed 2 sup f~ = " << 2.0 * sup;
        throw ConfigError(os.str());
    }
}

double smooth_step(double t, double k) noexcept {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return 1.0 / (1.0 + std::exp(k / t - k / (1.0 - t)));
}

double smooth_step_derivative(double t, double k) noexcept {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double s = smooth_step(t, k);
    const double u = 1.0 - t;
    return s * (1.0 - s) * k * (1.0 / (t * t) + 1.0 / (u * u));
}

Metric2 metric_h(const TorusPoint& p) noexcept {
    const double s = std::sin(pi * p.w());
    const double s2 = s * s;
    return {pi * pi, pi * s2, 1.0 + s2 * s2};
}

ChartPoint phi(const TorusPoint& p) {
    if (dist_to_w0(p.w()) <= 1e-14) throw ChartDomainError("chart (x,y) is undefined at w = 0");
    const double cot = std::cos(pi * p.w()) / std::sin(pi * p.w());
    return {cot - p.z(), p.z()};
}

TorusPoint phi_inv(const ChartPoint& q) noexcept {
    return TorusPoint(acot(q.x + q.y) / pi, q.y);
}

std::array<double, 4> phi_jacobian(const TorusPoint& p) {
    if (dist_to_w0(p.w()) <= 1e-14) throw ChartDomainError("chart (x,y) is undefined at w = 0");
    const double s = std::sin(pi * p.w());
    return {-pi / (s * s), -1.0, 0.0, 1.0};
}

Metric2 metric_xy(const ChartPoint& q) noexcept {
    const double s = q.x + q.y;
    const double d = 1.0 + s * s;
    return {1.0 / (d * d), 0.0, 1.0};
}

TorusPoint gamma(double s) noexcept { return TorusPoint(acot(s) / pi, s); }

ChartPoint gamma_xy(double s) noexcept { return {0.0, s}; }

std::array<std::array<std::array<double, 2>, 2>, 2> christoffel_xy(const ChartPoint& q) noexcept {
    const double s = q.x + q.y;
    const double d = 1.0 + s * s;
    const double g = 1.0 / (d * d);
    const double dg = -4.0 * s / (d * d * d);  // same for d/dx and d/dy
    std::array<std::array<std::array<double, 2>, 2>, 2> G{};
    G[0][0][0] = 0.5 * dg / g;
    G[0][0][1] = G[0][1][0] = 0.5 * dg / g;
    G[0][1][1] = 0.0;
    G[1][0][0] = -0.5 * dg;
    G[1][0][1] = G[1][1][0] = 0.0;
    G[1][1][1] = 0.0;
    return G;
}

double geodesic_residual(const ChartPoint& pos, std::array<double, 2> vel, std::array<double, 2> acc) noexcept {
    const auto G = christoffel_xy(pos);
    std::array<double, 2> res{};
    for (int k = 0; k < 2; ++k) {
        res[k] = acc[k];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) res[k] += G[k][i][j] * vel[i] * vel[j];
    }
    const Metric2 h = metric_xy(pos);
    return std::sqrt(h.xx * res[0] * res[0] + 2.0 * h.xy * res[0] * res[1] + h.yy * res[1] * res[1]);
}

double geodesic_residual(double s) noexcept {
    return geodesic_residual(gamma_xy(s), {0.0, 1.0}, {0.0, 0.0});
}

double f_tilde_xy(const ChartPoint& q) noexcept { return f_tilde_jet(q.x, q.y).value; }

Manifold::Manifold(ManifoldConfig cfg)
    : cfg_(cfg),
      eta_lo_(plateau_half_width() + cfg.chi.delta0),
      eta_hi_(1.0 - cfg.chi.delta0) {}

double Manifold::eta(double v) const noexcept {
    return smooth_step((std::abs(v) - eta_lo_) / (eta_hi_ - eta_lo_), cfg_.chi.sharpness);
}

double Manifold::eta_derivative(double v) const noexcept {
    const double d = smooth_step_derivative((std::abs(v) - eta_lo_) / (eta_hi_ - eta_lo_), cfg_.chi.sharpness) /
                     (eta_hi_ - eta_lo_);
    return v < 0.0 ? -d : d;
}

Jet2 Manifold::chi_xy(const ChartPoint& q) const noexcept {
    const double s = q.x + q.y;
    if (s >= 1.0 || s <= -1.0) return {1.0, 0.0, 0.0};
    // Representative of x nearest 0 under (x,y) ~ (x+1,y-1).
    const double shift = std::round(q.x);
    const double xr = q.x - shift;
    const double yr = q.y + shift;
    const double d0 = cfg_.chi.delta0;
    const double a = std::abs(xr) / d0;
    const double B = smooth_step(a, cfg_.chi.sharpness);
    double Bx = smooth_step_derivative(a, cfg_.chi.sharpness) / d0;
    if (xr < 0.0) Bx = -Bx;
    const double e1 = eta(yr), e1p = eta_derivative(yr);
    const double e2 = eta(s), e2p = eta_derivative(s);
    Jet2 j;
    j.value = (1.0 - B) * e1 + B * e2;
    j.dx = Bx * (e2 - e1) + B * e2p;
    j.dy = (1.0 - B) * e1p + B * e2p;
    return j;
}

double Manifold::chi(const TorusPoint& p) const {
    if (p.w() <= 0.25 || p.w() >= 0.75) return 1.0;
    return chi_xy(phi(p)).value;
}

FBranch Manifold::branch_of(double s) noexcept {
    if (s >= 1.0) return FBranch::tilde;
    if (s >= 0.0) return FBranch::blend_tilde;
    if (s >= -1.0) return FBranch::blend_mirror;
    return FBranch::mirror;
}

Jet2 Manifold::f_branch_jet(FBranch b, const ChartPoint& q) const noexcept {
    switch (b) {
        case FBranch::tilde:
            return f_tilde_jet(q.x, q.y);
        case FBranch::mirror:
            return f_mirror_jet(q.x, q.y);
        case FBranch::blend_tilde:
            return blend(chi_xy(q), f_tilde_jet(q.x, q.y), cfg_.M);
        case FBranch::blend_mirror:
            return blend(chi_xy(q), f_mirror_jet(q.x, q.y), cfg_.M);
    }
    return {};
}

Jet2 Manifold::f_jet(const ChartPoint& q) const noexcept {
    return f_branch_jet(branch_of(q.x + q.y), q);
}

double Manifold::f_xy(const ChartPoint& q) const noexcept { return f_jet(q).value; }

double Manifold::f(const TorusPoint& p) const {
    if (p.w() == 0.0) return 1.0;
    return f_xy(phi(p));
}

double Manifold::df_dy_on_gamma(double y) const noexcept { return f_jet({0.0, y}).dy; }

std::array<double, 2> Manifold::grad_f_xy(const ChartPoint& q) const noexcept {
    const Jet2 j = f_jet(q);
    const Metric2 h = metric_xy(q);
    return {j.dx / h.xx, j.dy / h.yy};
}

double Manifold::sup_f_tilde_used() const noexcept {
    // f~ enters f with nonzero weight only where |x+y| > cot(7 pi/16); by the
    // (x,y) -> (-x,-y) symmetry of the mirrored branch it suffices to scan
    // s in [cot(7pi/16), 1] and one period in x.
    const double s0 = plateau_half_width();
    double sup = 0.0;
    constexpr int ns = 400, nx = 800;
    for (int i = 0; i <= ns; ++i) {
        const double s = s0 + (1.0 - s0) * i / ns;
        for (int k = 0; k < nx; ++k) {
            const double x = static_cast<double>(k) / nx;
            sup = std::max(sup, f_tilde_xy({x, s - x}));
        }
    }
    return sup;
}

}  // namespace wwm
