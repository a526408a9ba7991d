#pragma once
// Planar "goat tracks" potential f = 1 + exp(-1/(r-1)) (sin(1/(r-1) + theta) + 2) for r > 1,
// f = 1 for r <= 1: its gradient flow and its Newtonian (Hamiltonian) flow.

#include <array>
#include <vector>

namespace wwm {

using Vec2 = std::array<double, 2>;

double goat_f(const Vec2& x) noexcept;
/// Cartesian gradient; exactly zero for r <= 1 + 1e-8.
Vec2 goat_grad(const Vec2& x) noexcept;

struct TrajectoryPoint {
    double t = 0.0;
    Vec2 x{};
    Vec2 v{};
    double r = 0.0;
    double theta_lifted = 0.0;
    double energy = 0.0;  ///< f for the gradient flow, |v|^2/2 + f for the Hamiltonian flow
};

struct GradientFlowOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    double output_dt = 1.0;
};

/// Integrates x' = -grad f with an adaptive Dormand-Prince 5(4) stepper, recording a point
/// every output_dt. theta is unwrapped at every accepted step. Throws StepFailure if the
/// stepper cannot make progress.
std::vector<TrajectoryPoint> gradient_flow(const Vec2& x0, double t_end, const GradientFlowOptions& opt = {});

struct HamiltonianFlowOptions {
    double dt = 1e-3;
    double output_dt = 1.0;
};

struct HamiltonianSummary {
    double energy0 = 0.0;              ///< |v|^2/2 + f at t = 0
    double max_rel_energy_drift = 0.0;  ///< of |v|^2/2 + f
    double literal_energy0 = 0.0;      ///< |v|^2 + f at t = 0
    double max_rel_literal_drift = 0.0;
    double min_speed_near_circle = 0.0;  ///< min |v| over steps with |r - 1| <= 0.01 (inf if none)
    double min_obstruction = 0.0;        ///< min over steps of |r - 1| + |v|
    bool relaxed = false;                ///< |r - 1| <= 0.01 and |v| <= 0.01 at some step
};

/// Velocity Verlet for x'' = -grad f. Fills the summary over every step.
std::vector<TrajectoryPoint> hamiltonian_flow(const Vec2& x0, const Vec2& v0, double t_end,
                                              const HamiltonianFlowOptions& opt, HamiltonianSummary& summary);

}  // namespace wwm
