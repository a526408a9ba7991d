#include "doctest.h"

#include "wwm/bubble.hpp"
#include "wwm/diagnostics.hpp"
#include "wwm/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace wwm;

namespace {
constexpr double pi = std::numbers::pi;

FieldState profile_state(const RadialGrid& g, double c, double mu) {
    FieldState s(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        s.Y[j] = c;
        s.alpha[j] = 2.0 * std::atan(g.r(j) / mu);
    }
    return s;
}
}  // namespace

TEST_CASE("ground-state energy is 4 pi at every scale") {
    CHECK(std::abs(ground_state_energy() - 4.0 * pi) <= 1e-6);
    for (double rho : {1e-3, 0.05, 0.7, 3.0, 250.0}) CHECK(std::abs(ground_state_energy(rho) - 4.0 * pi) <= 1e-6);
}

TEST_CASE("profile derivatives against closed forms and finite differences") {
    for (double r : {0.01, 0.3, 1.0, 4.0, 60.0}) {
        CHECK(hm_profile(r) == doctest::Approx(2.0 * std::atan(r)));
        CHECK(hm_profile_derivative(r) == doctest::Approx(2.0 / (1.0 + r * r)));
        const double h = 1e-5 * (1.0 + r);
        const double fd = (hm_profile_derivative(r + h) - hm_profile_derivative(r - h)) / (2.0 * h);
        CHECK(hm_profile_second_derivative(r) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("the profile solves the equivariant harmonic map equation") {
    double worst = 0.0;
    for (int i = 0; i <= 600; ++i) worst = std::max(worst, std::abs(hm_profile_residual(std::pow(10.0, -3.0 + 0.01 * i))));
    CHECK(worst <= 1e-12);
}

TEST_CASE("degree-two comparison map carries at least twice the ground-state energy") {
    for (double rho2 : {2.0, 10.0, 100.0}) {
        const double E2 = profile_energy(degree_two_ansatz(rho2));
        CHECK(E2 >= 8.0 * pi);
        CHECK(std::isfinite(E2));
    }
    CHECK(profile_energy(degree_two_ansatz(1e4)) == doctest::Approx(8.0 * pi).epsilon(1e-3));
}

TEST_CASE("bubble extraction recovers the scale of an exact profile") {
    for (double mu : {0.05, 0.2, 1.0}) {
        const RadialGrid g(8.0, 4096);
        const FieldState s = profile_state(g, 3.25, mu);
        const BubbleFit fit = extract_bubble(g, s, mu);
        CHECK(fit.lambda_fit == doctest::Approx(mu).epsilon(1e-6));
        CHECK(fit.residual_L2 < 1e-8);
        CHECK(fit.z0 == doctest::Approx(0.25));
        CHECK(fit.energy_in_window > 0.0);
    }
}

TEST_CASE("self-fit with the scale measured by lambda_of_t") {
    const RadialGrid g(8.0, 4096);
    const FieldState s = profile_state(g, 0.0, 0.3);
    const BubbleFit fit = extract_bubble(g, s, lambda_of_t(g, s));
    CHECK(std::abs(fit.lambda_fit - 0.3) <= 1e-3);
    CHECK(fit.residual_L2 <= 1e-6);
}

TEST_CASE("bubble extraction is stable under 1% noise") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> noise(0.0, 0.01);
    for (double mu : {0.2, 1.0}) {
        const RadialGrid g(8.0, 4096);
        FieldState s = profile_state(g, 0.0, mu);
        for (auto& a : s.alpha) a *= 1.0 + noise(rng);
        const BubbleFit fit = extract_bubble(g, s, 1.3 * mu);
        CHECK(std::abs(fit.lambda_fit - mu) <= 0.05 * mu);
    }
}

TEST_CASE("bubble extraction refuses an underresolved scale") {
    const RadialGrid g(8.0, 256);
    const FieldState s = profile_state(g, 0.0, 0.05);
    CHECK_THROWS_AS(extract_bubble(g, s, 0.05), UnderResolved);
}

TEST_CASE("stationarity defect vanishes on the plateau and has the sign of -c off it") {
    const Manifold m;
    const RadialGrid g(50.0, 20000);
    const Profile p = hm_profile_scaled(1.0);
    const double s0 = plateau_half_width();
    for (double c : {0.0, 0.5 * s0, -0.9 * s0}) CHECK(stationarity_defect(m, c, p, 1.0, g) == 0.0);
    for (double c : {1.2, 1.5, 2.0, 2.7}) {
        const double plus = stationarity_defect(m, c, p, 1.0, g);
        const double minus = stationarity_defect(m, -c, p, 1.0, g);
        CHECK(plus < 0.0);
        CHECK(minus > 0.0);
        CHECK(minus == doctest::Approx(-plus).epsilon(1e-12));
    }
}

TEST_CASE("stationarity defect equals d_y f times the profile energy integral") {
    const Manifold m;
    const RadialGrid g(50.0, 20000);
    const Profile p = hm_profile_scaled(1.0);
    const double c = 1.7;
    const double ratio = stationarity_defect(m, c, p, 1.0, g) / m.f_on_gamma(c).dy;
    // int_0^50 4 r / (1 + r^2)^2 dr = 2 (1 - 1 / 2501)
    CHECK(ratio == doctest::Approx(2.0 * (1.0 - 1.0 / 2501.0)).epsilon(1e-4));
}

TEST_CASE("energy gap classification") {
    const double E = 4.0 * pi, eps0 = 0.1;
    CHECK(energy_gap_report(E * 0.9, E, eps0) == EnergyClass::below_ground_state);
    CHECK(energy_gap_report(E * (1.0 + 1e-8), E, eps0) == EnergyClass::ground_state);
    CHECK(energy_gap_report(E + 0.25 * eps0, E, eps0) == EnergyClass::forbidden_band);
    CHECK(energy_gap_report(E + 0.5 * eps0, E, eps0) == EnergyClass::forbidden_band);
    CHECK(energy_gap_report(E + 0.51 * eps0, E, eps0) == EnergyClass::above_gap);
    CHECK(energy_gap_report(2.0 * E, E, eps0) == EnergyClass::above_gap);
    CHECK(to_string(EnergyClass::forbidden_band) == "forbidden_band");
}
