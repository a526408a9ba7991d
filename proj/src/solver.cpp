#include "wwm/solver.hpp"

#include "wwm/bubble.hpp"
#include "wwm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wwm {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

std::string to_string(Forcing f) {
    return f == Forcing::energy_density ? "energy_density" : "lagrangian";
}

Forcing forcing_from_string(const std::string& s) {
    if (s == "energy_density") return Forcing::energy_density;
    if (s == "lagrangian") return Forcing::lagrangian;
    throw ConfigError("forcing must be \"energy_density\" or \"lagrangian\", got \"" + s + "\"");
}

double RunConfig::support_radius() const noexcept {
    double r = 10.0 * init.lam0;
    if (init.y1_amp != 0.0 || init.alpha1_amp != 0.0) r = std::max(r, init.bump_radius);
    return r;
}

void RunConfig::validate() const {
    if (name.empty() || name.find('/') != std::string::npos) throw ConfigError("name must be a non-empty file name");
    RadialGrid(grid.R, grid.J);
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be a finite non-negative number");
    if (!(output_dt > 0.0)) throw ConfigError("output_dt must be positive");
    if (!(init.lam0 > 0.0)) throw ConfigError("init.lam0 must be positive");
    if (!(init.bump_radius > 0.0)) throw ConfigError("init.bump_radius must be positive");
    if (!std::isfinite(init.c) || !std::isfinite(init.y1_amp) || !std::isfinite(init.alpha1_amp))
        throw ConfigError("init values must be finite");
    if (!(diagnostics.A >= 0.0)) throw ConfigError("diagnostics.A must be non-negative");
    if (!(diagnostics.lambda_frac > 0.0 && diagnostics.lambda_frac < 1.0))
        throw ConfigError("diagnostics.lambda_frac must lie in (0, 1)");
    if (snapshot_stride == 0) throw ConfigError("snapshot_stride must be at least 1");
    manifold.validate();
    if (t_end > grid.R - support_radius()) {
        std::ostringstream os;
        os << "t_end = " << t_end << " exceeds R - support radius = " << grid.R << " - " << support_radius()
           << "; the outer boundary would influence the region of interest";
        throw ConfigError(os.str());
    }
}

double bump(double r, double b) noexcept {
    const double x = r / b;
    if (x >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

InitialData init_data(const RunConfig& cfg) {
    cfg.validate();
    const RadialGrid grid(cfg.grid.R, cfg.grid.J);
    const Manifold manifold(cfg.manifold);
    InitialData out;
    FieldState& s = out.state;
    s = FieldState(grid.size());
    const auto& in = cfg.init;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double r = grid.r(j);
        const double b = bump(r, in.bump_radius);
        s.Y[j] = in.c;
        s.Y_t[j] = in.y1_amp * b;
        s.alpha[j] = 2.0 * std::atan(r / in.lam0);
        s.alpha_t[j] = in.alpha1_amp * std::sin(s.alpha[j]) * b;
    }
    out.energy = Solver(grid, manifold, cfg.forcing, cfg.cfl).energy(s);
    out.ground_state_energy = ground_state_energy();
    out.eps0 = cfg.manifold.eps0();
    out.energy_condition = out.energy < out.ground_state_energy + 0.5 * out.eps0;
    if (!out.energy_condition) {
        std::ostringstream os;
        os << "initial energy " << out.energy << " is not below E_S2 + eps0/2 = "
           << out.ground_state_energy + 0.5 * out.eps0;
        out.warning = os.str();
    }
    return out;
}

Solver::Solver(RadialGrid grid, Manifold manifold, Forcing forcing, double cfl)
    : grid_(grid), manifold_(std::move(manifold)), forcing_(forcing), cfl_(cfl) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
}

void Solver::position_part(const FieldState& s, PositionPart& p) const {
    const std::size_t J = grid_.size();
    const double dr = grid_.dr();
    p.Y.assign(J, 0.0);
    p.alpha.assign(J, 0.0);
    p.f.resize(J);
    p.fy.resize(J);
    for (std::size_t j = 0; j < J; ++j) {
        const Jet2 fj = manifold_.f_on_gamma(s.Y[j]);
        p.f[j] = fj.value;
        p.fy[j] = fj.dy;
    }
    // Face fluxes; the face at r = 0 has zero weight and the outer face carries zero flux.
    // Accumulate each interior face's contribution into its two neighbours.
    std::vector<double> avg_da2(J, 0.0);  // sum over faces of r_f (d alpha)^2
    for (std::size_t k = 0; k + 1 < J; ++k) {
        const double rf = grid_.face(k);
        const double dY = (s.Y[k + 1] - s.Y[k]) / dr;
        const double dA = (s.alpha[k + 1] - s.alpha[k]) / dr;
        const double ff = 0.5 * (p.f[k] + p.f[k + 1]);
        const double fluxY = rf * dY;
        const double fluxA = rf * ff * dA;
        p.Y[k] += fluxY;
        p.Y[k + 1] -= fluxY;
        p.alpha[k] += fluxA;
        p.alpha[k + 1] -= fluxA;
        const double q = rf * dA * dA;
        avg_da2[k] += q;
        avg_da2[k + 1] += q;
    }
    for (std::size_t j = 0; j < J; ++j) {
        const double r = grid_.r(j);
        const double inv = 1.0 / (r * dr);
        const double sn = std::sin(s.alpha[j]);
        const double ang = sn * sn / (2.0 * r * r);
        const double ang_force = std::sin(2.0 * s.alpha[j]) / (2.0 * r * r);
        const double grad2 = avg_da2[j] / (2.0 * r);  // face-averaged alpha_r^2
        p.Y[j] = p.Y[j] * inv - p.fy[j] * (0.5 * grad2 + ang);
        p.alpha[j] = p.alpha[j] * inv / p.f[j] - ang_force;
    }
    const std::size_t last = J - 1;
    const TailTerm tail = exterior_tail(grid_, s.alpha[last]);
    p.Y[last] -= p.fy[last] * tail.value / grid_.weight(last);
    p.alpha[last] -= tail.derivative / grid_.weight(last);
}

void Solver::add_velocity_part(const PositionPart& p, const std::vector<double>& Y_t,
                               const std::vector<double>& alpha_t, std::vector<double>& aY,
                               std::vector<double>& aA) const {
    const std::size_t J = grid_.size();
    const double sign = forcing_ == Forcing::energy_density ? -0.5 : 0.5;
    for (std::size_t j = 0; j < J; ++j) {
        aY[j] = p.Y[j] + sign * p.fy[j] * alpha_t[j] * alpha_t[j];
        aA[j] = p.alpha[j];
        if (forcing_ == Forcing::lagrangian) aA[j] -= p.fy[j] / p.f[j] * Y_t[j] * alpha_t[j];
    }
}

Accel Solver::rhs(const FieldState& s) const {
    s.check_shape(grid_);
    PositionPart p;
    position_part(s, p);
    Accel a{std::vector<double>(grid_.size()), std::vector<double>(grid_.size())};
    add_velocity_part(p, s.Y_t, s.alpha_t, a.Y, a.alpha);
    return a;
}

// v <- v + h a(q, v_new), solved by fixed-point iteration when implicit, else v <- v + h a(q, v).
void Solver::kick(const PositionPart& p, FieldState& s, double h, bool implicit) const {
    const std::size_t J = grid_.size();
    std::vector<double> aY(J), aA(J);
    add_velocity_part(p, s.Y_t, s.alpha_t, aY, aA);
    std::vector<double> vY(J), vA(J);
    for (std::size_t j = 0; j < J; ++j) {
        vY[j] = s.Y_t[j] + h * aY[j];
        vA[j] = s.alpha_t[j] + h * aA[j];
    }
    if (implicit) {
        constexpr int max_iter = 100;
        int it = 0;
        for (; it < max_iter; ++it) {
            add_velocity_part(p, vY, vA, aY, aA);
            double change = 0.0, scale = 1.0;
            for (std::size_t j = 0; j < J; ++j) {
                const double nY = s.Y_t[j] + h * aY[j];
                const double nA = s.alpha_t[j] + h * aA[j];
                change = std::max({change, std::abs(nY - vY[j]), std::abs(nA - vA[j])});
                scale = std::max({scale, std::abs(nY), std::abs(nA)});
                vY[j] = nY;
                vA[j] = nA;
            }
            if (!std::isfinite(change)) break;
            if (change <= 1e-16 * scale) break;
        }
        if (it == max_iter) throw StepFailure("implicit half-kick did not converge");
    }
    s.Y_t = std::move(vY);
    s.alpha_t = std::move(vA);
}

void Solver::step_in_place(FieldState& s, double dt) const {
    s.check_shape(grid_);
    if (std::abs(dt) > max_dt() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "|dt| = " << std::abs(dt) << " exceeds cfl * dr = " << max_dt();
        throw CFLViolation(os.str());
    }
    const double h = 0.5 * dt;
    PositionPart p;
    position_part(s, p);
    kick(p, s, h, true);
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        s.Y[j] += dt * s.Y_t[j];
        s.alpha[j] += dt * s.alpha_t[j];
    }
    position_part(s, p);
    kick(p, s, h, false);
    s.t += dt;
    if (!s.finite()) throw BlowupDetected("non-finite field values", s.t);
}

FieldState Solver::step(const FieldState& s, double dt) const {
    FieldState out = s;
    step_in_place(out, dt);
    return out;
}

double Solver::energy(const FieldState& s) const {
    s.check_shape(grid_);
    const std::size_t J = grid_.size();
    const double dr = grid_.dr();
    std::vector<double> f(J);
    for (std::size_t j = 0; j < J; ++j) f[j] = manifold_.f_on_gamma(s.Y[j]).value;
    double node = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        const double r = grid_.r(j);
        const double sn = std::sin(s.alpha[j]);
        node += grid_.weight(j) *
                (0.5 * s.Y_t[j] * s.Y_t[j] + f[j] * (0.5 * s.alpha_t[j] * s.alpha_t[j] + sn * sn / (2.0 * r * r)));
    }
    double face = 0.0;
    for (std::size_t k = 0; k + 1 < J; ++k) {
        const double dY = (s.Y[k + 1] - s.Y[k]) / dr;
        const double dA = (s.alpha[k + 1] - s.alpha[k]) / dr;
        face += grid_.face(k) * dr * (0.5 * dY * dY + 0.25 * (f[k] + f[k + 1]) * dA * dA);
    }
    const double tail = f[J - 1] * exterior_tail(grid_, s.alpha[J - 1]).value;
    return two_pi * (node + face + tail);
}

}  // namespace wwm
