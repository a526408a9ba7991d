#pragma once
// Equivariant harmonic maps S^2 -> S^2 as reference solutions: the degree-one profile,
// its energy, bubble extraction from snapshots and the stationarity defect that rules out
// harmonic maps sitting off the plateau of f.

#include "wwm/geometry.hpp"
#include "wwm/state.hpp"

#include <functional>
#include <string>

namespace wwm {

/// Degree-one profile 2 atan(r).
double hm_profile(double r) noexcept;
double hm_profile_derivative(double r) noexcept;
double hm_profile_second_derivative(double r) noexcept;
/// alpha'' + alpha'/r - sin(2 alpha)/(2 r^2) evaluated on the analytic profile.
double hm_profile_residual(double r) noexcept;

/// Radial profile with its derivative.
struct Profile {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

/// 2 atan(r / rho).
Profile hm_profile_scaled(double rho);
/// Degree-two comparison map obtained by adding two ground-state profiles at scales 1 and rho2.
Profile degree_two_ansatz(double rho2 = 10.0);

/// 2 pi int_0^inf (alpha'^2 + sin^2 alpha / r^2)/2 r dr by double-exponential quadrature.
double profile_energy(const Profile& p);
/// Energy of the degree-one profile at scale rho (4 pi for every rho).
double ground_state_energy(double rho = 1.0);

struct BubbleFit {
    double lambda_fit = 0.0;   ///< scale mu of the best fit 2 atan(r / mu)
    double residual_L2 = 0.0;  ///< sqrt(sum (alpha - fit)^2 r dr) over the window
    double z0 = 0.0;           ///< mean of Y over the window, mod 1
    double energy_in_window = 0.0;
};

/// Fits 2 atan(r / mu) to alpha on the nodes with r in [lambda/8, 8 lambda].
/// Throws UnderResolved if lambda < 4 dr.
BubbleFit extract_bubble(const RadialGrid& grid, const FieldState& s, double lambda);

/// d_y f(0, c) times int e(alpha(r/rho)) r dr over the grid, with the static spherical density.
double stationarity_defect(const Manifold& manifold, double c, const Profile& alpha, double rho,
                           const RadialGrid& grid);

enum class EnergyClass { below_ground_state, ground_state, forbidden_band, above_gap };
std::string to_string(EnergyClass c);

/// Classifies an energy against E_S2 and the gap E_S2 + eps0/2. Values within
/// rel_tol * E_S2 of E_S2 count as the ground state.
EnergyClass energy_gap_report(double energy, double ground_state, double eps0, double rel_tol = 1e-6);

}  // namespace wwm
