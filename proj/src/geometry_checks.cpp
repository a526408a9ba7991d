#include "wwm/geometry.hpp"

#include "wwm/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace wwm {

namespace {

constexpr double pi = std::numbers::pi;

// R2 low-discrepancy sequence on the unit square.
class R2Sequence {
public:
    std::array<double, 2> operator()(std::size_t n) const noexcept {
        return {frac(0.5 + a1_ * static_cast<double>(n)), frac(0.5 + a2_ * static_cast<double>(n))};
    }

private:
    static double frac(double v) noexcept { return v - std::floor(v); }
    static constexpr double g_ = 1.32471795724474602596;  // plastic number
    double a1_ = 1.0 / g_;
    double a2_ = 1.0 / (g_ * g_);
};

CheckResult make(std::string name, double residual, double tol, bool pass, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.max_residual = residual;
    c.tolerance = tol;
    c.pass = pass;
    c.detail = std::move(detail);
    return c;
}

// sin of the metric angle between two chart vectors.
double metric_sine(const Metric2& h, std::array<double, 2> a, std::array<double, 2> b) {
    const double na = std::sqrt(h.xx * a[0] * a[0] + 2 * h.xy * a[0] * a[1] + h.yy * a[1] * a[1]);
    const double nb = std::sqrt(h.xx * b[0] * b[0] + 2 * h.xy * b[0] * b[1] + h.yy * b[1] * b[1]);
    return std::abs(a[0] * b[1] - a[1] * b[0]) * std::sqrt(h.det()) / (na * nb);
}

CheckResult check_config(const Manifold& m) {
    const auto& c = m.config();
    const double sup = m.sup_f_tilde_used();
    std::ostringstream os;
    os << "M = " << c.M << ", 2 sup f~ = " << 2 * sup << ", eps_bar = " << c.eps_bar;
    bool ok = true;
    try {
        c.validate();
    } catch (const ConfigError& e) {
        ok = false;
        os << "; " << e.what();
    }
    return make("manifold_config", 2 * sup - c.M, 0.0, ok, os.str());
}

CheckResult check_metric_positive(std::size_t n) {
    const R2Sequence seq;
    double min_eig = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = seq(i);
        min_eig = std::min(min_eig, metric_h(TorusPoint(u[0], u[1])).eigenvalues()[0]);
    }
    return make("metric_h_positive_definite", -min_eig, 0.0, min_eig > 0.0);
}

CheckResult check_pushforward(std::size_t n) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> uw(0.05, 0.95), uz(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const TorusPoint p(uw(rng), uz(rng));
        const auto J = phi_jacobian(p);
        const double det = J[0] * J[3] - J[1] * J[2];
        const double inv[4] = {J[3] / det, -J[1] / det, -J[2] / det, J[0] / det};
        const Metric2 h = metric_h(p);
        const double H[4] = {h.xx, h.xy, h.xy, h.yy};
        double pushed[4] = {};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) pushed[2 * a + b] += inv[2 * k + a] * H[2 * k + l] * inv[2 * l + b];
        const Metric2 hx = metric_xy(phi(p));
        worst = std::max({worst, std::abs(pushed[0] - hx.xx), std::abs(pushed[1] - hx.xy),
                          std::abs(pushed[2] - hx.xy), std::abs(pushed[3] - hx.yy)});
    }
    return make("pushforward_identity", worst, 1e-10, worst <= 1e-10);
}

CheckResult check_geodesic(const GeometryCheckOptions& opt) {
    double worst = 0.0;
    for (std::size_t i = 0; i < opt.s_samples; ++i) {
        const double s = opt.s_min + (opt.s_max - opt.s_min) * i / (opt.s_samples - 1);
        worst = std::max(worst, geodesic_residual(s));
    }
    return make("geodesic_residual", worst, 1e-9, worst <= 1e-9);
}

CheckResult check_arc_length() {
    using boost::math::quadrature::gauss;
    double worst = 0.0;
    for (double s0 = -50.0; s0 <= 50.0; s0 += 7.3) {
        for (double L : {0.5, 1.0, 3.0, 10.0}) {
            const auto speed = [](double s) {
                const Metric2 h = metric_xy(gamma_xy(s));
                return std::sqrt(h.yy);  // gamma_xy' = (0, 1)
            };
            const double len = gauss<double, 20>::integrate(speed, s0, s0 + L);
            worst = std::max(worst, std::abs(len - L) / L);
        }
    }
    return make("geodesic_unit_speed", worst, 1e-10, worst <= 1e-10);
}

std::vector<CheckResult> check_f_bounds(const Manifold& m, std::size_t n) {
    const R2Sequence seq;
    double min_f = std::numeric_limits<double>::infinity();
    double worst_far = 0.0;  // largest torus distance from {w=0} among near-minimal points
    // f - 1 >= (sqrt2 - 1) e^{-2 pi cot(pi w)} on the f~ branches; solve for the w where
    // that bound reaches 1e-9.
    const double cot_min = std::log((std::numbers::sqrt2 - 1.0) / 1e-9) / (2.0 * pi);
    const double w_soft = (0.5 * pi - std::atan(cot_min)) / pi;
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = seq(i);
        const TorusPoint p(u[0], u[1]);
        if (p.w() == 0.0) continue;
        const double v = m.f(p);
        min_f = std::min(min_f, v);
        if (v <= 1.0 + 1e-9) worst_far = std::max(worst_far, std::min(p.w(), 1.0 - p.w()));
    }
    double worst_w0 = 0.0;
    for (int k = 0; k < 1000; ++k) worst_w0 = std::max(worst_w0, std::abs(m.f(TorusPoint(0.0, k / 1000.0)) - 1.0));

    std::vector<CheckResult> out;
    out.push_back(make("f_at_least_one", 1.0 - min_f, 1e-12, min_f >= 1.0 - 1e-12));
    out.push_back(make("f_equals_one_on_w0", worst_w0, 0.0, worst_w0 == 0.0));
    std::ostringstream os;
    os << "f <= 1+1e-9 only within torus distance " << w_soft << " of w=0";
    out.push_back(make("f_near_one_only_near_w0", worst_far, w_soft, worst_far <= w_soft, os.str()));
    return out;
}

std::vector<CheckResult> check_gamma_monotonicity(const Manifold& m, const GeometryCheckOptions& opt) {
    const double M = m.config().M;
    double worst_sign = -std::numeric_limits<double>::infinity();  // max of sgn(s) f_y
    double worst_plateau = 0.0;                                     // |f_y| where f == M
    std::size_t strict_fail = 0, off_plateau = 0;
    double worst_torus = 0.0;
    for (std::size_t i = 0; i < opt.s_samples; ++i) {
        const double s = opt.s_min + (opt.s_max - opt.s_min) * i / (opt.s_samples - 1);
        const Jet2 j = m.f_on_gamma(s);
        const double sg = s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
        worst_sign = std::max(worst_sign, sg * j.dy);
        if (j.value == M) {
            worst_plateau = std::max(worst_plateau, std::abs(j.dy));
        } else if (j.value < M - 1e-12) {
            ++off_plateau;
            if (!(sg * j.dy < 0.0)) ++strict_fail;
        }
        worst_torus = std::max(worst_torus, std::abs(m.f(gamma(s)) - j.value));
    }
    std::vector<CheckResult> out;
    out.push_back(make("sgn_y_df_dy_nonpositive", std::max(worst_sign, 0.0), 1e-10, worst_sign <= 1e-10));
    std::ostringstream os;
    os << strict_fail << " of " << off_plateau << " off-plateau samples without strict decrease; "
       << "max |df/dy| on plateau " << worst_plateau;
    out.push_back(make("df_dy_zero_only_on_plateau", worst_plateau, 1e-10, strict_fail == 0 && worst_plateau <= 1e-10,
                       os.str()));
    out.push_back(make("f_along_gamma_torus_vs_chart", worst_torus, 1e-12, worst_torus <= 1e-12));
    return out;
}

CheckResult check_gradient_alignment(const Manifold& m, const GeometryCheckOptions& opt) {
    double worst = 0.0;
    for (std::size_t i = 0; i < opt.s_samples; ++i) {
        const double s = opt.s_min + (opt.s_max - opt.s_min) * i / (opt.s_samples - 1);
        const ChartPoint q = gamma_xy(s);
        const auto g = m.grad_f_xy(q);
        const Metric2 h = metric_xy(q);
        const double norm = std::sqrt(h.xx * g[0] * g[0] + h.yy * g[1] * g[1]);
        if (norm <= 1e-12) continue;
        worst = std::max(worst, metric_sine(h, g, {0.0, 1.0}));
    }
    return make("grad_f_parallel_to_gamma", worst, 1e-8, worst <= 1e-8);
}

std::vector<CheckResult> check_chi(const Manifold& m, std::size_t n) {
    const R2Sequence seq;
    double worst_one = 0.0, worst_zero = 0.0, worst_range = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = seq(i);
        const TorusPoint p(u[0], u[1]);
        const double c = m.chi(p);
        worst_range = std::max({worst_range, -c, c - 1.0});
        if (p.w() <= 0.25 || p.w() >= 0.75) worst_one = std::max(worst_one, std::abs(c - 1.0));
        if (p.w() >= 7.0 / 16.0 && p.w() <= 9.0 / 16.0) worst_zero = std::max(worst_zero, std::abs(c));
    }
    double worst_align = 0.0;
    for (int k = -999; k <= 999; ++k) {
        const ChartPoint q = gamma_xy(k / 1000.0);
        const Jet2 c = m.chi_xy(q);
        const Metric2 h = metric_xy(q);
        const std::array<double, 2> g{c.dx / h.xx, c.dy / h.yy};
        const double norm = std::sqrt(h.xx * g[0] * g[0] + h.yy * g[1] * g[1]);
        if (norm <= 1e-12) continue;
        worst_align = std::max(worst_align, metric_sine(h, g, {0.0, 1.0}));
    }
    return {make("chi_in_unit_interval", std::max(worst_range, 0.0), 0.0, worst_range <= 0.0),
            make("chi_one_near_w0", worst_one, 0.0, worst_one == 0.0),
            make("chi_zero_on_plateau", worst_zero, 0.0, worst_zero == 0.0),
            make("grad_chi_parallel_to_gamma", worst_align, 1e-8, worst_align <= 1e-8)};
}

CheckResult check_identification(const Manifold& m) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const ChartPoint q{u(rng), u(rng)};
        worst = std::max(worst, std::abs(m.f_xy(q) - m.f_xy({q.x + 1.0, q.y - 1.0})));
    }
    return make("f_respects_chart_identification", worst, 1e-12, worst <= 1e-12);
}

// Derivatives 0..4 in y along x = 0 of one branch formula: the first from the
// analytic jet, higher ones by nested central differences of it.
std::array<double, 5> branch_derivatives(const Manifold& m, FBranch b, double y, double h) {
    const auto d1 = [&](double v) { return m.f_branch_jet(b, {0.0, v}).dy; };
    std::array<double, 5> d{};
    d[0] = m.f_branch_jet(b, {0.0, y}).value;
    d[1] = d1(y);
    d[2] = (d1(y + h) - d1(y - h)) / (2 * h);
    d[3] = (d1(y + h) - 2 * d1(y) + d1(y - h)) / (h * h);
    d[4] = (d1(y + 2 * h) - 2 * d1(y + h) + 2 * d1(y - h) - d1(y - 2 * h)) / (2 * h * h * h);
    return d;
}

CheckResult check_smoothness(const Manifold& m) {
    constexpr double h = 1e-3;
    struct Seam {
        double y;
        FBranch left, right;
    };
    const Seam seams[] = {{-1.0, FBranch::mirror, FBranch::blend_mirror},
                          {0.0, FBranch::blend_mirror, FBranch::blend_tilde},
                          {1.0, FBranch::blend_tilde, FBranch::tilde}};
    double worst = 0.0;
    for (const auto& seam : seams) {
        const auto a = branch_derivatives(m, seam.left, seam.y, h);
        const auto b = branch_derivatives(m, seam.right, seam.y, h);
        for (int k = 0; k < 5; ++k) {
            const double scale = std::max({1.0, std::abs(a[k]), std::abs(b[k])});
            worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
        }
    }
    return make("f_branches_match_to_fourth_derivative", worst, 1e-4, worst <= 1e-4);
}

}  // namespace

std::vector<CheckResult> run_geometry_checks(const Manifold& m, const GeometryCheckOptions& opt) {
    std::vector<CheckResult> out;
    out.push_back(check_config(m));
    out.push_back(check_metric_positive(opt.torus_samples / 10));
    out.push_back(check_pushforward(opt.pushforward_samples));
    out.push_back(check_geodesic(opt));
    out.push_back(check_arc_length());
    for (auto& c : check_f_bounds(m, opt.torus_samples)) out.push_back(std::move(c));
    for (auto& c : check_gamma_monotonicity(m, opt)) out.push_back(std::move(c));
    out.push_back(check_gradient_alignment(m, opt));
    for (auto& c : check_chi(m, opt.torus_samples / 10)) out.push_back(std::move(c));
    out.push_back(check_identification(m));
    out.push_back(check_smoothness(m));
    return out;
}

}  // namespace wwm
