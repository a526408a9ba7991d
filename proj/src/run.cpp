#include "wwm/run.hpp"

#include "wwm/errors.hpp"

#include <cmath>
#include <sstream>

namespace wwm {

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed:
            return "completed";
        case RunStatus::blowup:
            return "blowup";
        case RunStatus::underresolved:
            return "underresolved";
    }
    return "unknown";
}

namespace {

// Running trapezoid integrals of the flux and of the kinetic cone integrand.
struct Accumulators {
    double flux_integral = 0.0;
    double kinetic_integral = 0.0;
    double last_t = 0.0;
    double last_flux = 0.0;
    double last_kinetic = 0.0;

    void reset(double t, double flux_value, double kinetic_value) {
        last_t = t;
        last_flux = flux_value;
        last_kinetic = kinetic_value;
    }
    void advance(double t, double flux_value, double kinetic_value) {
        const double h = t - last_t;
        flux_integral += 0.5 * h * (last_flux + flux_value);
        kinetic_integral += 0.5 * h * (last_kinetic + kinetic_value);
        reset(t, flux_value, kinetic_value);
    }
};

}  // namespace

RunResult run(const RunConfig& cfg) {
    RunResult out;
    out.initial = init_data(cfg);
    const RadialGrid grid(cfg.grid.R, cfg.grid.J);
    const Manifold manifold(cfg.manifold);
    const Solver solver(grid, manifold, cfg.forcing, cfg.cfl);
    const double A = cfg.diagnostics.A;
    const double lf = cfg.diagnostics.lambda_frac;
    out.dt_max = solver.max_dt();

    FieldState s = out.initial.state;
    Accumulators acc;
    const auto kinetic_integrand = [&](const FieldState& st) {
        return st.t > A ? kinetic_cone_integral(grid, st, manifold, A) : 0.0;
    };
    acc.reset(0.0, flux(grid, s, manifold, A), kinetic_integrand(s));

    std::size_t output_index = 0;
    const auto emit = [&](bool last) {
        DiagnosticsRecord d = instantaneous_record(grid, s, manifold, A, lf);
        d.flux_integral = acc.flux_integral;
        d.kinetic_cone_avg = s.t > 0.0 ? acc.kinetic_integral / s.t : 0.0;
        out.series.push_back(d);
        if (output_index == 0 || last || output_index % cfg.snapshot_stride == 0) out.snapshots.push_back(s);
        ++output_index;
        return d;
    };

    const auto n_out = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.output_dt - 1e-12));
    DiagnosticsRecord d = emit(n_out == 0);
    const auto underresolved = [&](const DiagnosticsRecord& rec) {
        return cfg.stop_on_underresolved && std::isfinite(rec.lambda) && rec.lambda < 4.0 * grid.dr();
    };
    if (underresolved(d)) {
        out.status = RunStatus::underresolved;
        out.message = "initial scale below 4 dr";
        return out;
    }

    for (std::size_t k = 1; k <= n_out; ++k) {
        const double t0 = s.t;
        const double t1 = k == n_out ? cfg.t_end : static_cast<double>(k) * cfg.output_dt;
        const double len = t1 - t0;
        const auto n_steps = static_cast<std::size_t>(std::ceil(len / solver.max_dt() - 1e-12));
        const double dt = len / static_cast<double>(std::max<std::size_t>(n_steps, 1));
        try {
            for (std::size_t i = 0; i < n_steps; ++i) {
                solver.step_in_place(s, dt);
                ++out.steps;
                if (i + 1 == n_steps) s.t = t1;  // land exactly on the output time
                acc.advance(s.t, flux(grid, s, manifold, A), kinetic_integrand(s));
            }
        } catch (const BlowupDetected& e) {
            out.status = RunStatus::blowup;
            std::ostringstream os;
            os << e.what() << " at t = " << e.time();
            out.message = os.str();
            return out;
        }
        d = emit(k == n_out);
        if (underresolved(d)) {
            out.status = RunStatus::underresolved;
            std::ostringstream os;
            os << "lambda = " << d.lambda << " fell below 4 dr = " << 4.0 * grid.dr() << " at t = " << d.t;
            out.message = os.str();
            if (k != n_out && out.snapshots.empty() == false && out.snapshots.back().t != s.t)
                out.snapshots.push_back(s);
            return out;
        }
    }
    return out;
}

}  // namespace wwm
