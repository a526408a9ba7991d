#include "wwm/sandbox.hpp"

#include "wwm/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wwm {

namespace {

constexpr double pi = std::numbers::pi;

// Continuous lift of the polar angle.
class AngleLift {
public:
    explicit AngleLift(const Vec2& x) : theta_(std::atan2(x[1], x[0])) {}
    double update(const Vec2& x) {
        if (x[0] == 0.0 && x[1] == 0.0) return theta_;
        double d = std::atan2(x[1], x[0]) - theta_;
        d -= 2.0 * pi * std::round(d / (2.0 * pi));
        theta_ += d;
        return theta_;
    }
    double value() const noexcept { return theta_; }

private:
    double theta_;
};

double radius(const Vec2& x) noexcept { return std::hypot(x[0], x[1]); }

}  // namespace

double goat_f(const Vec2& x) noexcept {
    const double r = radius(x);
    if (r <= 1.0) return 1.0;
    const double u = 1.0 / (r - 1.0);
    return 1.0 + std::exp(-u) * (std::sin(u + std::atan2(x[1], x[0])) + 2.0);
}

Vec2 goat_grad(const Vec2& x) noexcept {
    const double r = radius(x);
    if (r <= 1.0 + 1e-8) return {0.0, 0.0};
    const double u = 1.0 / (r - 1.0);
    const double phi = u + std::atan2(x[1], x[0]);
    const double e = std::exp(-u);
    const double df_dr = e * u * u * (std::sin(phi) + 2.0 - std::cos(phi));
    const double df_dtheta = e * std::cos(phi);
    const double cr = x[0] / r, sr = x[1] / r;
    return {df_dr * cr - df_dtheta / r * sr, df_dr * sr + df_dtheta / r * cr};
}

std::vector<TrajectoryPoint> gradient_flow(const Vec2& x0, double t_end, const GradientFlowOptions& opt) {
    using namespace boost::numeric::odeint;
    using State = std::array<double, 2>;
    if (!(t_end >= 0.0) || !(opt.output_dt > 0.0)) throw ConfigError("t_end must be >= 0 and output_dt > 0");
    const auto system = [](const State& x, State& dx, double) {
        const Vec2 g = goat_grad(x);
        dx[0] = -g[0];
        dx[1] = -g[1];
    };
    AngleLift lift(x0);
    std::vector<TrajectoryPoint> out;
    const auto record = [&](double t, const State& x) {
        TrajectoryPoint p;
        p.t = t;
        p.x = x;
        p.r = radius(x);
        p.theta_lifted = lift.update(x);
        p.energy = goat_f(x);
        out.push_back(p);
    };
    record(0.0, x0);
    if (t_end == 0.0) return out;

    auto stepper = make_dense_output(opt.abs_tol, opt.rel_tol, runge_kutta_dopri5<State>());
    stepper.initialize(x0, 0.0, std::min(1e-3, t_end));
    double next_out = std::min(opt.output_dt, t_end);
    std::size_t steps = 0;
    State x{};
    while (stepper.current_time() < t_end) {
        stepper.do_step(system);
        if (++steps > 100'000'000 || !(stepper.current_time_step() > 1e-14))
            throw StepFailure("gradient flow step size collapsed");
        while (next_out <= stepper.current_time() && next_out <= t_end) {
            stepper.calc_state(next_out, x);
            record(next_out, x);
            if (next_out == t_end) break;
            next_out = std::min(next_out + opt.output_dt, t_end);
        }
        if (stepper.current_time() < t_end) lift.update(stepper.current_state());
        if (out.back().t == t_end) break;
    }
    return out;
}

std::vector<TrajectoryPoint> hamiltonian_flow(const Vec2& x0, const Vec2& v0, double t_end,
                                              const HamiltonianFlowOptions& opt, HamiltonianSummary& sum) {
    if (!(t_end >= 0.0) || !(opt.dt > 0.0) || !(opt.output_dt > 0.0))
        throw ConfigError("t_end must be >= 0, dt and output_dt > 0");
    Vec2 x = x0, v = v0;
    AngleLift lift(x0);
    const auto speed2 = [](const Vec2& w) { return w[0] * w[0] + w[1] * w[1]; };
    sum = {};
    sum.energy0 = 0.5 * speed2(v) + goat_f(x);
    sum.literal_energy0 = speed2(v) + goat_f(x);
    sum.min_speed_near_circle = std::numeric_limits<double>::infinity();
    sum.min_obstruction = std::numeric_limits<double>::infinity();
    const auto observe = [&](double t, bool keep, std::vector<TrajectoryPoint>& out) {
        const double f = goat_f(x);
        const double s = std::sqrt(speed2(v));
        const double r = radius(x);
        const double e = 0.5 * s * s + f;
        sum.max_rel_energy_drift = std::max(sum.max_rel_energy_drift, std::abs(e - sum.energy0) / sum.energy0);
        sum.max_rel_literal_drift =
            std::max(sum.max_rel_literal_drift, std::abs(s * s + f - sum.literal_energy0) / sum.literal_energy0);
        if (std::abs(r - 1.0) <= 0.01) {
            sum.min_speed_near_circle = std::min(sum.min_speed_near_circle, s);
            if (s <= 0.01) sum.relaxed = true;
        }
        sum.min_obstruction = std::min(sum.min_obstruction, std::abs(r - 1.0) + s);
        const double th = lift.update(x);
        if (keep) {
            TrajectoryPoint p;
            p.t = t;
            p.x = x;
            p.v = v;
            p.r = r;
            p.theta_lifted = th;
            p.energy = e;
            out.push_back(p);
        }
    };
    std::vector<TrajectoryPoint> out;
    observe(0.0, true, out);
    const auto n = static_cast<std::size_t>(std::llround(t_end / opt.dt));
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(opt.output_dt / opt.dt)));
    const double h = 0.5 * opt.dt;
    Vec2 g = goat_grad(x);
    for (std::size_t i = 1; i <= n; ++i) {
        v[0] -= h * g[0];
        v[1] -= h * g[1];
        x[0] += opt.dt * v[0];
        x[1] += opt.dt * v[1];
        g = goat_grad(x);
        v[0] -= h * g[0];
        v[1] -= h * g[1];
        if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || !std::isfinite(v[0]) || !std::isfinite(v[1]))
            throw StepFailure("non-finite state in Hamiltonian flow");
        observe(static_cast<double>(i) * opt.dt, i % stride == 0 || i == n, out);
    }
    return out;
}

}  // namespace wwm
