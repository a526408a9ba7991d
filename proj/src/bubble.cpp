#include "wwm/bubble.hpp"

#include "wwm/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace wwm {

namespace {
constexpr double pi = std::numbers::pi;
}

double hm_profile(double r) noexcept { return 2.0 * std::atan(r); }

double hm_profile_derivative(double r) noexcept { return 2.0 / (1.0 + r * r); }

double hm_profile_second_derivative(double r) noexcept {
    const double d = 1.0 + r * r;
    return -4.0 * r / (d * d);
}

double hm_profile_residual(double r) noexcept {
    // sin(2 alpha) = 2 sin(alpha) cos(alpha) with sin(alpha) = 2r/(1+r^2), cos(alpha) = (1-r^2)/(1+r^2)
    const double d = 1.0 + r * r;
    const double sin2a = 4.0 * r * (1.0 - r * r) / (d * d);
    return hm_profile_second_derivative(r) + hm_profile_derivative(r) / r - sin2a / (2.0 * r * r);
}

Profile hm_profile_scaled(double rho) {
    if (!(rho > 0.0)) throw ConfigError("profile scale must be positive");
    return {[rho](double r) { return 2.0 * std::atan(r / rho); },
            [rho](double r) { return 2.0 * rho / (rho * rho + r * r); }};
}

Profile degree_two_ansatz(double rho2) {
    if (!(rho2 > 0.0)) throw ConfigError("profile scale must be positive");
    return {[rho2](double r) { return 2.0 * std::atan(r) + 2.0 * std::atan(r / rho2); },
            [rho2](double r) { return 2.0 / (1.0 + r * r) + 2.0 * rho2 / (rho2 * rho2 + r * r); }};
}

double profile_energy(const Profile& p) {
    const auto integrand = [&p](double r) {
        if (r == 0.0 || !std::isfinite(r)) return 0.0;
        const double a = p.derivative(r);
        const double s = std::sin(p.value(r));
        return 0.5 * (a * a * r + s * s / r);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    return 2.0 * pi * integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
}

double ground_state_energy(double rho) { return profile_energy(hm_profile_scaled(rho)); }

BubbleFit extract_bubble(const RadialGrid& grid, const FieldState& s, double lambda) {
    s.check_shape(grid);
    if (!(lambda >= 4.0 * grid.dr())) {
        std::ostringstream os;
        os << "lambda = " << lambda << " is below 4 dr = " << 4.0 * grid.dr();
        throw UnderResolved(os.str());
    }
    const double lo = lambda / 8.0, hi = 8.0 * lambda;
    std::vector<std::size_t> nodes;
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (grid.r(j) >= lo && grid.r(j) <= hi) nodes.push_back(j);
    if (nodes.size() < 3) throw UnderResolved("fewer than three grid nodes in the fit window");

    const auto misfit = [&](double log_mu) {
        const double mu = std::exp(log_mu);
        double sum = 0.0;
        for (std::size_t j : nodes) {
            const double d = s.alpha[j] - 2.0 * std::atan(grid.r(j) / mu);
            sum += d * d * grid.weight(j);
        }
        return sum;
    };
    const double l0 = std::log(lambda);
    const auto best = boost::math::tools::brent_find_minima(misfit, l0 - 4.0, l0 + 6.0, 52);

    BubbleFit fit;
    fit.lambda_fit = std::exp(best.first);
    fit.residual_L2 = std::sqrt(best.second);
    double ysum = 0.0, e = 0.0;
    for (std::size_t j : nodes) {
        ysum += s.Y[j];
        const double r = grid.r(j);
        const double left = j == 0 ? -s.alpha[0] : s.alpha[j - 1];
        const double ar = (s.alpha[std::min(j + 1, grid.size() - 1)] - left) / (2.0 * grid.dr());
        const double sn = std::sin(s.alpha[j]);
        e += 0.5 * (ar * ar + s.alpha_t[j] * s.alpha_t[j] + sn * sn / (r * r)) * grid.weight(j);
    }
    const double ymean = ysum / static_cast<double>(nodes.size());
    fit.z0 = ymean - std::floor(ymean);
    if (fit.z0 >= 1.0) fit.z0 = 0.0;
    fit.energy_in_window = 2.0 * pi * e;
    return fit;
}

double stationarity_defect(const Manifold& manifold, double c, const Profile& alpha, double rho,
                           const RadialGrid& grid) {
    if (!(rho > 0.0)) throw ConfigError("profile scale must be positive");
    const double fy = manifold.f_on_gamma(c).dy;
    if (fy == 0.0) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double r = grid.r(j);
        const double a = alpha.value(r / rho);
        const double ar = alpha.derivative(r / rho) / rho;
        const double sn = std::sin(a);
        sum += 0.5 * (ar * ar + sn * sn / (r * r)) * grid.weight(j);
    }
    return fy * sum;
}

std::string to_string(EnergyClass c) {
    switch (c) {
        case EnergyClass::below_ground_state:
            return "below_ground_state";
        case EnergyClass::ground_state:
            return "ground_state";
        case EnergyClass::forbidden_band:
            return "forbidden_band";
        case EnergyClass::above_gap:
            return "above_gap";
    }
    return "unknown";
}

EnergyClass energy_gap_report(double energy, double ground_state, double eps0, double rel_tol) {
    if (!(energy >= 0.0)) throw ConfigError("energy must be non-negative");
    const double tol = rel_tol * ground_state;
    if (std::abs(energy - ground_state) <= tol) return EnergyClass::ground_state;
    if (energy < ground_state) return EnergyClass::below_ground_state;
    if (energy <= ground_state + 0.5 * eps0) return EnergyClass::forbidden_band;
    return EnergyClass::above_gap;
}

}  // namespace wwm
