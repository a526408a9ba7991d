#include "doctest.h"

#include "wwm/sandbox.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace wwm;

TEST_CASE("goat potential hand values") {
    CHECK(goat_f({0.5, 0.0}) == 1.0);
    CHECK(goat_grad({0.5, 0.0}) == Vec2{0.0, 0.0});
    CHECK(goat_f({0.0, 1.0}) == 1.0);
    CHECK(goat_f({2.0, 0.0}) == doctest::Approx(1.0 + std::exp(-1.0) * (std::sin(1.0) + 2.0)).epsilon(1e-15));
    // theta = pi/2 at (0, 2): sin(1 + pi/2) = cos(1)
    CHECK(goat_f({0.0, 2.0}) == doctest::Approx(1.0 + std::exp(-1.0) * (std::cos(1.0) + 2.0)).epsilon(1e-15));
}

TEST_CASE("goat potential is at least one and continuous across the unit circle") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 20000; ++i) CHECK(goat_f({u(rng), u(rng)}) >= 1.0);
    for (double th = 0.0; th < 6.3; th += 0.1) {
        const double r = 1.0 + 1e-3;
        CHECK(goat_f({r * std::cos(th), r * std::sin(th)}) - 1.0 < 1e-300);
    }
}

TEST_CASE("goat gradient matches central differences") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> rad(1.05, 3.0), ang(-3.14, 3.14);
    for (int i = 0; i < 200; ++i) {
        const double r = rad(rng), th = ang(rng);
        const Vec2 x{r * std::cos(th), r * std::sin(th)};
        const Vec2 g = goat_grad(x);
        const double h = 1e-6;
        const double gx = (goat_f({x[0] + h, x[1]}) - goat_f({x[0] - h, x[1]})) / (2.0 * h);
        const double gy = (goat_f({x[0], x[1] + h}) - goat_f({x[0], x[1] - h})) / (2.0 * h);
        const double scale = 1.0 + std::hypot(g[0], g[1]);
        CHECK(std::abs(g[0] - gx) <= 1e-7 * scale);
        CHECK(std::abs(g[1] - gy) <= 1e-7 * scale);
    }
}

TEST_CASE("gradient flow inside the disc is stationary") {
    const auto traj = gradient_flow({0.3, -0.4}, 50.0);
    REQUIRE(traj.size() == 51);
    for (const auto& p : traj) {
        CHECK(p.x == Vec2{0.3, -0.4});
        CHECK(p.energy == 1.0);
    }
}

TEST_CASE("gradient flow decreases f and moves toward the circle") {
    GradientFlowOptions opt;
    opt.output_dt = 0.5;
    const auto traj = gradient_flow({1.2, 0.0}, 200.0, opt);
    REQUIRE(traj.size() == 401);
    CHECK(traj.front().t == 0.0);
    CHECK(traj.back().t == doctest::Approx(200.0));
    for (std::size_t i = 1; i < traj.size(); ++i) {
        CHECK(traj[i].energy <= traj[i - 1].energy + 1e-9);
        CHECK(std::abs(traj[i].energy - goat_f(traj[i].x)) <= 1e-15);
        CHECK(std::abs(std::remainder(traj[i].theta_lifted - std::atan2(traj[i].x[1], traj[i].x[0]),
                                      2.0 * std::numbers::pi)) <= 1e-12);
    }
    CHECK(traj.back().r < 1.2);
    CHECK(traj.back().r > 1.0);
}

TEST_CASE("Hamiltonian flow inside the disc is stationary at rest") {
    HamiltonianSummary s;
    const auto traj = hamiltonian_flow({0.1, 0.2}, {0.0, 0.0}, 10.0, {}, s);
    for (const auto& p : traj) CHECK(p.x == Vec2{0.1, 0.2});
    CHECK(s.max_rel_energy_drift == 0.0);
}

TEST_CASE("Hamiltonian flow conserves energy at second order in dt") {
    double drift[2];
    int k = 0;
    for (double dt : {2e-3, 1e-3}) {
        HamiltonianFlowOptions opt;
        opt.dt = dt;
        HamiltonianSummary s;
        hamiltonian_flow({1.6, 0.0}, {0.0, 0.3}, 50.0, opt, s);
        CHECK(s.energy0 == doctest::Approx(0.5 * 0.09 + goat_f({1.6, 0.0})));
        CHECK(s.literal_energy0 == doctest::Approx(0.09 + goat_f({1.6, 0.0})));
        drift[k++] = s.max_rel_energy_drift;
    }
    CHECK(drift[1] < 1e-6);
    CHECK(drift[0] / drift[1] == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("free motion inside the disc keeps constant speed") {
    HamiltonianFlowOptions opt;
    opt.output_dt = 0.5;
    HamiltonianSummary s;
    const auto traj = hamiltonian_flow({-0.5, 0.0}, {0.1, 0.0}, 5.0, opt, s);
    for (const auto& p : traj) {
        CHECK(p.x[0] == doctest::Approx(-0.5 + 0.1 * p.t));
        CHECK(p.v[0] == 0.1);
    }
}
