#include "doctest.h"

#include "wwm/errors.hpp"
#include "wwm/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace wwm;

namespace {
constexpr double pi = std::numbers::pi;
constexpr double sqrt2 = std::numbers::sqrt2;
}  // namespace

TEST_CASE("metric_h at w = 1/2") {
    const Metric2 h = metric_h(TorusPoint(0.5, 0.3));
    CHECK(h.xx == doctest::Approx(pi * pi).epsilon(1e-15));
    CHECK(h.xy == doctest::Approx(pi).epsilon(1e-15));
    CHECK(h.yy == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(h.positive_definite());
}

TEST_CASE("chart map and its domain") {
    const ChartPoint q = phi(TorusPoint(0.25, 0.0));
    CHECK(q.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q.y == 0.0);
    CHECK_THROWS_AS(phi(TorusPoint(0.0, 0.4)), ChartDomainError);
    CHECK_THROWS_AS(phi(TorusPoint(1.0, 0.4)), ChartDomainError);

    const TorusPoint g = wwm::gamma(1.0);
    CHECK(g.w() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.z() == 0.0);

    // phi_inv o phi is the identity away from w = 0
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (int i = 0; i < 1000; ++i) {
        const TorusPoint p(u(rng), u(rng));
        const TorusPoint back = phi_inv(phi(p));
        CHECK(back.w() == doctest::Approx(p.w()).epsilon(1e-12));
        CHECK(back.z() == doctest::Approx(p.z()).epsilon(1e-12));
    }
}

TEST_CASE("pushforward metric against a finite-difference Jacobian") {
    // Independent oracle: differentiate phi numerically and push h forward.
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uw(0.1, 0.9), uz(0.1, 0.9);
    for (int i = 0; i < 200; ++i) {
        const double w = uw(rng), z = uz(rng);
        const double e = 1e-6;
        const auto P = [](double a, double b) { return phi(TorusPoint(a, b)); };
        const double Jwx = (P(w + e, z).x - P(w - e, z).x) / (2 * e);
        const double Jzx = (P(w, z + e).x - P(w, z - e).x) / (2 * e);
        const double Jwy = (P(w + e, z).y - P(w - e, z).y) / (2 * e);
        const double Jzy = (P(w, z + e).y - P(w, z - e).y) / (2 * e);
        const double det = Jwx * Jzy - Jzx * Jwy;
        const double inv[2][2] = {{Jzy / det, -Jzx / det}, {-Jwy / det, Jwx / det}};
        const Metric2 h = metric_h(TorusPoint(w, z));
        const double H[2][2] = {{h.xx, h.xy}, {h.xy, h.yy}};
        double G[2][2] = {};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) G[a][b] += inv[k][a] * H[k][l] * inv[l][b];
        const Metric2 m = metric_xy(P(w, z));
        CHECK(G[0][0] == doctest::Approx(m.xx).epsilon(1e-6));
        CHECK(std::abs(G[0][1]) < 1e-6);
        CHECK(G[1][1] == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("geodesic residual and a negative control") {
    for (double s = -50; s <= 50; s += 0.37) CHECK(geodesic_residual(s) <= 1e-12);
    // The horizontal line y = 1 is not a geodesic: at s = 1, Gamma^x_xx = -1 and
    // Gamma^y_xx = 1/4, so the residual is sqrt(g_xx + 1/16) = sqrt(5)/4.
    const double r = geodesic_residual(ChartPoint{0.0, 1.0}, {1.0, 0.0}, {0.0, 0.0});
    CHECK(r == doctest::Approx(std::sqrt(5.0) / 4).epsilon(1e-14));
    // The bent curve (0.1 s^2, s) is not a geodesic: its acceleration alone is 0.2 in x at s = 1.
    const double eps = 0.1, t = 1.0;
    CHECK(geodesic_residual(ChartPoint{eps * t * t, t}, {2.0 * eps * t, 1.0}, {2.0 * eps, 0.0}) > 1e-3);
    CHECK(r > 1e-3);
}

TEST_CASE("f~ hand-computed values") {
    CHECK(f_tilde_xy({0.125, 0.0}) == doctest::Approx(sqrt2 * std::exp(-pi / 4) + 1.0).epsilon(1e-15));
    CHECK(f_tilde_xy({0.0, 0.0}) == doctest::Approx(1.0 + sqrt2 / 2).epsilon(1e-15));
}

TEST_CASE("f on the plateau and along gamma") {
    const Manifold m;
    CHECK(m.f(TorusPoint(0.5, 0.0)) == 4.0);
    CHECK(m.f(TorusPoint(0.5, 0.77)) == 4.0);
    CHECK(m.f(TorusPoint(0.0, 0.3)) == 1.0);
    // s = 2 lies on the f~ branch: d/dy f~(0,y) = -2 pi e^{-2 pi y}(sin(-pi/4) + sqrt2)
    CHECK(m.df_dy_on_gamma(2.0) == doctest::Approx(-2 * pi * std::exp(-4 * pi) * sqrt2 / 2).epsilon(1e-13));
    CHECK(m.df_dy_on_gamma(-2.0) == doctest::Approx(2 * pi * std::exp(-4 * pi) * sqrt2 / 2).epsilon(1e-13));
    CHECK(m.df_dy_on_gamma(0.0) == 0.0);
    CHECK(m.df_dy_on_gamma(0.1) == 0.0);
}

TEST_CASE("analytic f gradient matches central differences") {
    const Manifold m;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int checked = 0;
    while (checked < 2000) {
        const ChartPoint q{u(rng), u(rng)};
        const double s = q.x + q.y;
        // skip points within the difference stencil of the formula seams
        if (std::abs(s) < 1e-3 || std::abs(std::abs(s) - 1.0) < 1e-3) continue;
        const double e = 1e-6;
        const Jet2 j = m.f_jet(q);
        const double dx = (m.f_xy({q.x + e, q.y}) - m.f_xy({q.x - e, q.y})) / (2 * e);
        const double dy = (m.f_xy({q.x, q.y + e}) - m.f_xy({q.x, q.y - e})) / (2 * e);
        CHECK(j.dx == doctest::Approx(dx).epsilon(1e-6).scale(1.0));
        CHECK(j.dy == doctest::Approx(dy).epsilon(1e-6).scale(1.0));
        ++checked;
    }
}

TEST_CASE("analytic chi gradient matches central differences") {
    const Manifold m;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 2000; ++i) {
        const ChartPoint q{u(rng), u(rng)};
        const double e = 1e-7;
        const Jet2 j = m.chi_xy(q);
        const double dx = (m.chi_xy({q.x + e, q.y}).value - m.chi_xy({q.x - e, q.y}).value) / (2 * e);
        const double dy = (m.chi_xy({q.x, q.y + e}).value - m.chi_xy({q.x, q.y - e}).value) / (2 * e);
        CHECK(j.dx == doctest::Approx(dx).epsilon(1e-5).scale(1.0));
        CHECK(j.dy == doctest::Approx(dy).epsilon(1e-5).scale(1.0));
    }
}

TEST_CASE("property: f is invariant under the point reflection and the identification") {
    const Manifold m;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 5000; ++i) {
        const ChartPoint q{u(rng), u(rng)};
        CHECK(m.f_xy({-q.x, -q.y}) == doctest::Approx(m.f_xy(q)).epsilon(1e-13));
        CHECK(m.f_xy({q.x + 1.0, q.y - 1.0}) == doctest::Approx(m.f_xy(q)).epsilon(1e-12));
        const double v = m.f_xy(q);
        CHECK(v >= 1.0);
        CHECK(v <= 4.0);
    }
}

TEST_CASE("sup of f~ where it is used") {
    // Maximised at the inner edge s = cot(7 pi/16) with sin = 1.
    const double s0 = std::tan(pi / 16);
    const double oracle = 1.0 + std::exp(-2 * pi * s0) * (1.0 + sqrt2);
    const Manifold m;
    CHECK(m.sup_f_tilde_used() == doctest::Approx(oracle).epsilon(1e-5));
    CHECK(m.sup_f_tilde_used() <= oracle);
}

TEST_CASE("manifold config validation") {
    CHECK_NOTHROW(ManifoldConfig{}.validate());
    ManifoldConfig small_m;
    small_m.M = 3.0;  // exceeds 2 but not 2 sup f~ ~ 3.38
    CHECK_THROWS_AS(small_m.validate(), ConfigError);
    ManifoldConfig wide;
    wide.chi.delta0 = 0.45;
    CHECK_THROWS_AS(wide.validate(), ConfigError);
    ManifoldConfig neg;
    neg.eps_bar = 0.0;
    CHECK_THROWS_AS(neg.validate(), ConfigError);
    CHECK(ManifoldConfig{}.eps0() == doctest::Approx(std::tan(pi / 16) / 2).epsilon(1e-15));
}

TEST_CASE("full geometry invariant suite") {
    GeometryCheckOptions opt;
    opt.torus_samples = 100'000;
    for (const auto& c : run_geometry_checks(Manifold{}, opt)) {
        INFO(c.name << ": residual " << c.max_residual << " tol " << c.tolerance << " " << c.detail);
        CHECK(c.pass);
    }
}
