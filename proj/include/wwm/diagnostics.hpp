#pragma once
// Energy, flux, characteristic quantities, cone and annulus energies, the concentration
// scale lambda(t) and winding statistics of a run.

#include "wwm/geometry.hpp"
#include "wwm/state.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace wwm {

/// Node-centred radial derivatives (central differences, alpha odd and Y even about r = 0,
/// constant extrapolation at r = R).
struct NodeDerivatives {
    std::vector<double> Y_r;
    std::vector<double> alpha_r;
};
NodeDerivatives node_derivatives(const RadialGrid& grid, const FieldState& s);

/// Pointwise e, m, L and the characteristic combinations Asq = r(e+m), Bsq = r(e-m).
struct CharFields {
    std::vector<double> e, m, L, Asq, Bsq;
};
CharFields char_fields(const RadialGrid& grid, const FieldState& s, const Manifold& manifold);

/// Per-cell energy density whose integral 2 pi sum(eps_j r_j dr) is the solver's discrete energy.
std::vector<double> energy_density(const RadialGrid& grid, const FieldState& s, const Manifold& manifold);
/// Per-cell spherical density (alpha_r^2 + alpha_t^2 + sin^2 alpha / r^2)/2, without the f weight.
std::vector<double> spherical_energy_density(const RadialGrid& grid, const FieldState& s);
/// Per-cell |d_t u|^2 = Y_t^2 + f alpha_t^2.
std::vector<double> kinetic_density(const RadialGrid& grid, const FieldState& s, const Manifold& manifold);

/// 2 pi times the integral over r < rho of a per-cell density (piecewise constant in r).
/// rho is clamped to [0, R].
double cumulative_energy(const RadialGrid& grid, const std::vector<double>& density, double rho);

double total_energy(const RadialGrid& grid, const FieldState& s, const Manifold& manifold);

/// Concentration scale: 2 lambda is the smallest radius enclosing spherical energy 1.5
/// (1.0 when the total lies in [1, 1.5)). Throws NoScaleError if the total is below 1.
double lambda_of_t(const RadialGrid& grid, const FieldState& s);

/// Linear interpolation of node values at rho, using the even reflection below r_0 and
/// constant extrapolation above r_{J-1}. Throws OutOfDomain for rho outside [0, R].
double interpolate_even(const RadialGrid& grid, const std::vector<double>& v, double rho);

/// Instantaneous flux 2 pi rho (e + m) at rho = t - A, that is 2 pi rho |grad_x u + grad_t u|^2 / 2.
/// Zero when rho <= 0; throws OutOfDomain when rho > R.
double flux(const RadialGrid& grid, const FieldState& s, const Manifold& manifold, double A);

/// Energy inside the cone r < t - A (0 if empty, the total if t - A >= R).
double cone_energy(const RadialGrid& grid, const FieldState& s, const Manifold& manifold, double A);
/// Energy in lambda_frac t < r < t - A (0 if that interval is empty).
double annulus_energy(const RadialGrid& grid, const FieldState& s, const Manifold& manifold, double lambda_frac,
                      double A);
/// Integral over r < t - A of |d_t u|^2 r dr (inner integral of the kinetic dispersion average).
double kinetic_cone_integral(const RadialGrid& grid, const FieldState& s, const Manifold& manifold, double A);

/// max over r_j >= lambda_frac t of |alpha - alpha(r_{J-1})|. Throws OutOfDomain if lambda_frac t >= R.
double exterior_oscillation(const RadialGrid& grid, const FieldState& s, double lambda_frac);

/// round(alpha(r_{J-1}) / pi).
int degree(const FieldState& s);

struct DiagnosticsRecord {
    double t = 0.0;
    double energy = 0.0;
    double lambda = 0.0;       ///< NaN when no scale exists
    double Y_at_lambda = 0.0;  ///< lifted torus coordinate at r = lambda
    double z_wrap = 0.0;       ///< Y_at_lambda mod 1
    int degree = 0;
    double cone_energy_A = 0.0;
    double annulus_energy = 0.0;
    double flux_A = 0.0;            ///< instantaneous flux through r = t - A
    double flux_integral = 0.0;     ///< integral of flux_A over [0, t]
    double kinetic_cone_avg = 0.0;  ///< (1/t) int_A^t int_0^{s-A} |d_t u|^2 r dr ds
    double alpha_exterior_osc = 0.0;
    double max_abs_Y = 0.0;
};

/// All diagnostics that depend only on the state at one time. flux_integral and
/// kinetic_cone_avg are left at zero; the run loop accumulates them.
DiagnosticsRecord instantaneous_record(const RadialGrid& grid, const FieldState& s, const Manifold& manifold,
                                       double A, double lambda_frac);

struct LambdaTrend {
    double initial = 0.0;
    double final = 0.0;
    double min = 0.0;
    double max = 0.0;
    double decrease_factor = 1.0;  ///< initial / min
};

struct WindingReport {
    double wrap_count = 0.0;  ///< max - min of Y_at_lambda
    bool eventually_monotone = false;
    std::optional<double> monotone_from_t;  ///< start of the final non-decreasing stretch
    double z_cover_fraction = 0.0;          ///< fraction of 100 bins of [0,1) swept by z_wrap
    LambdaTrend lambda_trend;
    std::size_t samples = 0;
};

/// Winding statistics of a diagnostics series. Records without a scale are skipped.
WindingReport winding_series(const std::vector<DiagnosticsRecord>& series);

}  // namespace wwm
