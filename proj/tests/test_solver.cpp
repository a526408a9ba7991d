#include "doctest.h"

#include "wwm/diagnostics.hpp"
#include "wwm/errors.hpp"
#include "wwm/run.hpp"
#include "wwm/solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace wwm;

namespace {
constexpr double pi = std::numbers::pi;

FieldState smooth_random_state(const RadialGrid& g, unsigned seed, double c) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a1 = u(rng), a2 = u(rng), a3 = u(rng), a4 = u(rng);
    FieldState s(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double r = g.r(j);
        const double b = bump(r, 6.0);
        s.Y[j] = c + 0.3 * a1 * b;
        s.Y_t[j] = 0.2 * a2 * b;
        s.alpha[j] = 2.0 * std::atan(r) + 0.1 * a3 * r * b;
        s.alpha_t[j] = 0.2 * a4 * r * b;
    }
    return s;
}

FieldState hm_state(const RadialGrid& g, double c, double lam) {
    FieldState s(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        s.Y[j] = c;
        s.alpha[j] = 2.0 * std::atan(g.r(j) / lam);
    }
    return s;
}
}  // namespace

TEST_CASE("rhs vanishes on alpha = 0 for any constant Y") {
    const RadialGrid g(10.0, 200);
    const Solver solver(g, Manifold{});
    for (double c : {0.0, 0.6, 2.0, -3.7}) {
        FieldState s(g.size());
        for (auto& y : s.Y) y = c;
        const Accel a = solver.rhs(s);
        for (std::size_t j = 0; j < g.size(); ++j) {
            CHECK(a.Y[j] == 0.0);
            CHECK(a.alpha[j] == 0.0);
        }
    }
}

TEST_CASE("rhs on alpha = pi/2 is the angular forcing alone") {
    const RadialGrid g(10.0, 200);
    const Manifold m;
    const Solver solver(g, m);
    for (double c : {0.0, 0.6, 2.0}) {
        FieldState s(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) {
            s.Y[j] = c;
            s.alpha[j] = pi / 2;
        }
        const Accel a = solver.rhs(s);
        const double fy = m.df_dy_on_gamma(c);
        // the last node also carries the exterior tail closure
        for (std::size_t j = 0; j + 1 < g.size(); ++j) {
            const double r = g.r(j);
            // -sin(pi)/(2r^2) in floating point
            CHECK(std::abs(a.alpha[j]) <= 1e-15 / (r * r));
            CHECK(a.Y[j] == doctest::Approx(-fy / (2.0 * r * r)).epsilon(1e-13).scale(1e-300));
        }
        if (c == 0.0) CHECK(fy == 0.0);
        // tail energy b^2 q^2/2 with b = pi - pi/2 and q = r_{J-1}/R
        const std::size_t L = g.size() - 1;
        const double q = g.r(L) / g.R();
        const double tail = 0.5 * (pi / 2) * (pi / 2) * q * q;
        CHECK(a.alpha[L] == doctest::Approx((pi / 2) * q * q / g.weight(L)).epsilon(1e-12));
        CHECK(a.Y[L] == doctest::Approx(-fy / (2.0 * g.r(L) * g.r(L)) - fy * tail / g.weight(L)).epsilon(1e-12).scale(1e-300));
    }
}

TEST_CASE("static harmonic map on the plateau has an O(dr^2) residual") {
    // Compare the max residual on r in [1, 5] at two resolutions.
    double prev = 0.0;
    for (std::size_t J : {400, 800, 1600}) {
        const RadialGrid g(20.0, J);
        const Solver solver(g, Manifold{});
        const Accel a = solver.rhs(hm_state(g, 0.0, 1.0));
        double res = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (g.r(j) < 1.0 || g.r(j) > 5.0) continue;
            res = std::max({res, std::abs(a.alpha[j]), std::abs(a.Y[j])});
        }
        CHECK(res <= 5e-3 * g.dr() * g.dr() * 100);
        if (prev > 0.0) CHECK(prev / res == doctest::Approx(4.0).epsilon(0.05));
        prev = res;
    }
}

TEST_CASE("constant state is a fixed point of step") {
    const RadialGrid g(10.0, 100);
    const Solver solver(g, Manifold{});
    FieldState s(g.size());
    for (auto& y : s.Y) y = 0.37;
    const FieldState n = solver.step(s, 0.5 * g.dr());
    CHECK(max_abs_difference(s, n) == 0.0);
    CHECK(n.t == doctest::Approx(0.5 * g.dr()));
}

TEST_CASE("step is time reversible for both forcing models") {
    const RadialGrid g(10.0, 400);
    for (Forcing forcing : {Forcing::energy_density, Forcing::lagrangian}) {
        const Solver solver(g, Manifold{}, forcing);
        for (unsigned seed = 1; seed <= 5; ++seed) {
            for (double c : {0.5, 0.9, 1.3}) {
                const FieldState s = smooth_random_state(g, seed, c);
                const double dt = solver.max_dt();
                const FieldState back = solver.step(solver.step(s, dt), -dt);
                CHECK(max_abs_difference(s, back) <= 1e-10);
            }
        }
    }
}

TEST_CASE("energy error of the time stepper is second order in dt") {
    const RadialGrid g(10.0, 400);
    for (Forcing forcing : {Forcing::energy_density, Forcing::lagrangian}) {
        const Solver solver(g, Manifold{}, forcing);
        const FieldState s0 = smooth_random_state(g, 11, 0.8);
        const double E0 = solver.energy(s0);
        double prev = 0.0;
        for (int level = 0; level < 3; ++level) {
            const double dt = solver.max_dt() / std::pow(2.0, level);
            FieldState s = s0;
            const int n = static_cast<int>(std::lround(1.0 / dt));
            double err = 0.0;
            for (int i = 0; i < n; ++i) {
                solver.step_in_place(s, dt);
                err = std::max(err, std::abs(solver.energy(s) - E0) / E0);
            }
            if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.15));
            prev = err;
        }
    }
}

TEST_CASE("discrete energy equals the integral of the node energy density") {
    const RadialGrid g(10.0, 300);
    const Manifold m;
    const Solver solver(g, m);
    const FieldState s = smooth_random_state(g, 3, 0.7);
    CHECK(total_energy(g, s, m) == doctest::Approx(solver.energy(s)).epsilon(1e-13));
}

TEST_CASE("step errors") {
    const RadialGrid g(10.0, 100);
    const Solver solver(g, Manifold{});
    FieldState s(g.size());
    CHECK_THROWS_AS(solver.step(s, 1.01 * solver.max_dt()), CFLViolation);
    s.alpha[10] = std::numeric_limits<double>::quiet_NaN();
    s.t = 1.25;
    try {
        solver.step(s, solver.max_dt());
        FAIL("expected BlowupDetected");
    } catch (const BlowupDetected& e) {
        CHECK(e.time() == doctest::Approx(1.25 + solver.max_dt()));
    }
}

TEST_CASE("init_data energy and the energy condition") {
    RunConfig cfg;
    cfg.grid = {40.0, 4000};
    cfg.t_end = 1.0;
    cfg.init.c = 50.0;
    cfg.init.lam0 = 1.0;
    const InitialData d = init_data(cfg);
    // f(0,50) - 1 is below e^{-100 pi}(1 + sqrt2), and the grid energy includes the exterior
    // tail, so the energy approximates 2 pi int_0^inf e(2 atan r) r dr = 4 pi.
    CHECK(d.energy == doctest::Approx(4 * pi).epsilon(1e-5));
    CHECK(d.ground_state_energy == doctest::Approx(4 * pi).epsilon(1e-10));
    CHECK(d.energy_condition);
    CHECK(d.warning.empty());
    for (std::size_t j = 0; j < d.state.size(); ++j) CHECK(d.state.Y[j] == 50.0);
    CHECK(d.state.alpha.front() < 1e-2);
    CHECK(d.state.alpha.back() > pi - 0.1);

    cfg.init.c = 0.0;  // plateau: f = M
    const InitialData p = init_data(cfg);
    CHECK_FALSE(p.energy_condition);
    CHECK_FALSE(p.warning.empty());
}

TEST_CASE("run config validation") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    RunConfig bad = cfg;
    bad.t_end = cfg.grid.R - cfg.support_radius() + 0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.init.lam0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.cfl = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.grid.J = 2;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK(forcing_from_string("lagrangian") == Forcing::lagrangian);
    CHECK_THROWS_AS(forcing_from_string("other"), ConfigError);
}

TEST_CASE("run with t_end = 0 emits one record and takes no steps") {
    RunConfig cfg;
    cfg.t_end = 0.0;
    const RunResult r = run(cfg);
    CHECK(r.series.size() == 1);
    CHECK(r.snapshots.size() == 1);
    CHECK(r.steps == 0);
    CHECK(r.status == RunStatus::completed);
}

TEST_CASE("run is deterministic and keeps lambda constant for static plateau data") {
    RunConfig cfg;
    cfg.grid = {20.0, 1024};
    cfg.t_end = 10.0;
    cfg.output_dt = 1.0;
    cfg.init.c = 0.0;
    const RunResult a = run(cfg);
    const RunResult b = run(cfg);
    REQUIRE(a.series.size() == 11);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) CHECK(max_abs_difference(a.snapshots[i], b.snapshots[i]) == 0.0);
    for (const auto& d : a.series) {
        CHECK(d.lambda == doctest::Approx(a.series.front().lambda).epsilon(0.01));
        CHECK(d.degree == 1);
    }
    CHECK(a.status == RunStatus::completed);
}
