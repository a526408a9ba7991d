#pragma once
// Method-of-lines integrator for the reduced system
//   Y_tt     = Y_rr + Y_r / r - f_y(0,Y) e(alpha)
//   alpha_tt = alpha_rr + alpha_r / r - sin(2 alpha)/(2 r^2) + (f_y / f) Y_r alpha_r
// on a cell-centred radial grid, with a time-reversible leapfrog in time.

#include "wwm/geometry.hpp"
#include "wwm/state.hpp"

#include <string>
#include <vector>

namespace wwm {

/// Coupling of the torus coordinate Y to the sphere part.
enum class Forcing {
    /// Y forcing -f_y e(alpha) with e including alpha_t^2, as in the reduced system above.
    energy_density,
    /// Euler-Lagrange equations of the wave-map Lagrangian: Y forcing
    /// +f_y (alpha_t^2 - alpha_r^2 - sin^2 alpha / r^2)/2 and an extra -(f_y/f) Y_t alpha_t
    /// in the alpha equation.
    lagrangian,
};

std::string to_string(Forcing f);
Forcing forcing_from_string(const std::string& s);

struct GridParams {
    double R = 20.0;
    std::size_t J = 1024;
};

struct InitParams {
    double c = 1.0;            ///< Y(0, r) = c
    double lam0 = 1.0;         ///< alpha(0, r) = 2 atan(r / lam0)
    double y1_amp = 0.0;       ///< Y_t(0, r) = y1_amp bump(r)
    double alpha1_amp = 0.0;   ///< alpha_t(0, r) = alpha1_amp sin(alpha(0, r)) bump(r)
    double bump_radius = 5.0;  ///< support of bump(r) = exp(1 - 1/(1 - (r/b)^2))
};

struct DiagnosticsParams {
    double A = 0.0;            ///< inward shift of the light cone r = t - A
    double lambda_frac = 0.5;  ///< inner radius lambda_frac * t of the annulus
};

struct RunConfig {
    std::string name = "run";
    GridParams grid;
    double cfl = 0.5;
    double t_end = 5.0;
    double output_dt = 0.5;
    InitParams init;
    ManifoldConfig manifold;
    DiagnosticsParams diagnostics;
    Forcing forcing = Forcing::energy_density;
    std::size_t snapshot_stride = 1;  ///< keep every n-th output as a snapshot (first and last always kept)
    bool stop_on_underresolved = true;

    /// Effective support radius of the initial data: max(10 lam0, bump_radius if a velocity
    /// amplitude is nonzero).
    double support_radius() const noexcept;
    /// Throws ConfigError on any invalid field, including t_end > R - support_radius().
    void validate() const;
};

/// Smooth compactly supported bump, equal to 1 at r = 0 and 0 for r >= b.
double bump(double r, double b) noexcept;

struct InitialData {
    FieldState state;
    double energy = 0.0;
    double ground_state_energy = 0.0;
    double eps0 = 0.0;
    /// True when energy < ground_state_energy + eps0 / 2.
    bool energy_condition = false;
    std::string warning;
};

InitialData init_data(const RunConfig& cfg);

/// Accelerations of Y and alpha.
struct Accel {
    std::vector<double> Y;
    std::vector<double> alpha;
};

class Solver {
public:
    Solver(RadialGrid grid, Manifold manifold, Forcing forcing = Forcing::energy_density, double cfl = 0.5);

    const RadialGrid& grid() const noexcept { return grid_; }
    const Manifold& manifold() const noexcept { return manifold_; }
    Forcing forcing() const noexcept { return forcing_; }
    double max_dt() const noexcept { return cfl_ * grid_.dr(); }

    /// Right-hand side of the semi-discrete system at the state's positions and velocities.
    Accel rhs(const FieldState& s) const;

    /// One kick-drift-kick step; dt may be negative. Throws CFLViolation if |dt| > cfl dr
    /// and BlowupDetected if the result is not finite.
    FieldState step(const FieldState& s, double dt) const;
    void step_in_place(FieldState& s, double dt) const;

    /// Discrete energy 2 pi sum(...), exactly conserved by the semi-discrete system.
    double energy(const FieldState& s) const;

private:
    struct PositionPart {
        std::vector<double> Y, alpha;  // velocity-independent accelerations
        std::vector<double> f, fy;     // f(0,Y_j) and d/dy f(0,Y_j)
    };
    void position_part(const FieldState& s, PositionPart& p) const;
    void add_velocity_part(const PositionPart& p, const std::vector<double>& Y_t, const std::vector<double>& alpha_t,
                           std::vector<double>& aY, std::vector<double>& aA) const;
    void kick(const PositionPart& p, FieldState& s, double h, bool implicit) const;

    RadialGrid grid_;
    Manifold manifold_;
    Forcing forcing_;
    double cfl_;
};

}  // namespace wwm
