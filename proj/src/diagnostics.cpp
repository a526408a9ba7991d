#include "wwm/diagnostics.hpp"

#include "wwm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace wwm {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Central difference at node j with the given parity about r = 0.
double node_derivative(const std::vector<double>& v, std::size_t j, double dr, bool odd) {
    const std::size_t J = v.size();
    const double left = j == 0 ? (odd ? -v[0] : v[0]) : v[j - 1];
    const double right = j + 1 == J ? v[J - 1] : v[j + 1];
    return (right - left) / (2.0 * dr);
}

struct NodeValues {
    double e, m;
};

NodeValues node_e_m(const RadialGrid& grid, const FieldState& s, const Manifold& manifold, std::size_t j) {
    const double dr = grid.dr();
    const double r = grid.r(j);
    const double f = manifold.f_on_gamma(s.Y[j]).value;
    const double Yr = node_derivative(s.Y, j, dr, false);
    const double ar = node_derivative(s.alpha, j, dr, true);
    const double sn = std::sin(s.alpha[j]);
    const double gx = Yr * Yr + f * (ar * ar + sn * sn / (r * r));
    const double gt = s.Y_t[j] * s.Y_t[j] + f * s.alpha_t[j] * s.alpha_t[j];
    return {0.5 * (gx + gt), Yr * s.Y_t[j] + f * ar * s.alpha_t[j]};
}

// Adds half of each interior face term r_f dr q_f to its two neighbouring cells and divides
// by the cell weight, so that the result integrates to the node-plus-face sum.
void add_face_split(const RadialGrid& grid, const std::vector<double>& face_q, std::vector<double>& density) {
    const std::size_t J = grid.size();
    const double dr = grid.dr();
    for (std::size_t k = 0; k + 1 < J; ++k) {
        const double half = 0.5 * grid.face(k) * dr * face_q[k];
        density[k] += half / grid.weight(k);
        density[k + 1] += half / grid.weight(k + 1);
    }
}

double z_of(double y) noexcept {
    double z = y - std::floor(y);
    return z >= 1.0 ? 0.0 : z;
}

}  // namespace

NodeDerivatives node_derivatives(const RadialGrid& grid, const FieldState& s) {
    s.check_shape(grid);
    NodeDerivatives d{std::vector<double>(grid.size()), std::vector<double>(grid.size())};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        d.Y_r[j] = node_derivative(s.Y, j, grid.dr(), false);
        d.alpha_r[j] = node_derivative(s.alpha, j, grid.dr(), true);
    }
    return d;
}

CharFields char_fields(const RadialGrid& grid, const FieldState& s, const Manifold& manifold) {
    s.check_shape(grid);
    const std::size_t J = grid.size();
    const NodeDerivatives d = node_derivatives(grid, s);
    CharFields c;
    for (auto* v : {&c.e, &c.m, &c.L, &c.Asq, &c.Bsq}) v->resize(J);
    for (std::size_t j = 0; j < J; ++j) {
        const double r = grid.r(j);
        const double f = manifold.f_on_gamma(s.Y[j]).value;
        const double sn = std::sin(s.alpha[j]);
        const double gx = d.Y_r[j] * d.Y_r[j] + f * (d.alpha_r[j] * d.alpha_r[j] + sn * sn / (r * r));
        const double gt = s.Y_t[j] * s.Y_t[j] + f * s.alpha_t[j] * s.alpha_t[j];
        c.e[j] = 0.5 * (gx + gt);
        c.m[j] = d.Y_r[j] * s.Y_t[j] + f * d.alpha_r[j] * s.alpha_t[j];
        c.L[j] = 0.5 * (gx - gt);
        c.Asq[j] = r * (c.e[j] + c.m[j]);
        c.Bsq[j] = r * (c.e[j] - c.m[j]);
    }
    return c;
}

std::vector<double> energy_density(const RadialGrid& grid, const FieldState& s, const Manifold& manifold) {
    s.check_shape(grid);
    const std::size_t J = grid.size();
    const double dr = grid.dr();
    std::vector<double> f(J), eps(J), face_q(J > 0 ? J - 1 : 0);
    for (std::size_t j = 0; j < J; ++j) f[j] = manifold.f_on_gamma(s.Y[j]).value;
    for (std::size_t j = 0; j < J; ++j) {
        const double r = grid.r(j);
        const double sn = std::sin(s.alpha[j]);
        eps[j] = 0.5 * s.Y_t[j] * s.Y_t[j] + f[j] * (0.5 * s.alpha_t[j] * s.alpha_t[j] + sn * sn / (2.0 * r * r));
    }
    for (std::size_t k = 0; k + 1 < J; ++k) {
        const double dY = (s.Y[k + 1] - s.Y[k]) / dr;
        const double dA = (s.alpha[k + 1] - s.alpha[k]) / dr;
        face_q[k] = 0.5 * dY * dY + 0.25 * (f[k] + f[k + 1]) * dA * dA;
    }
    add_face_split(grid, face_q, eps);
    eps[J - 1] += f[J - 1] * exterior_tail(grid, s.alpha[J - 1]).value / grid.weight(J - 1);
    return eps;
}

std::vector<double> spherical_energy_density(const RadialGrid& grid, const FieldState& s) {
    s.check_shape(grid);
    const std::size_t J = grid.size();
    const double dr = grid.dr();
    std::vector<double> eps(J), face_q(J > 0 ? J - 1 : 0);
    for (std::size_t j = 0; j < J; ++j) {
        const double r = grid.r(j);
        const double sn = std::sin(s.alpha[j]);
        eps[j] = 0.5 * s.alpha_t[j] * s.alpha_t[j] + sn * sn / (2.0 * r * r);
    }
    for (std::size_t k = 0; k + 1 < J; ++k) {
        const double dA = (s.alpha[k + 1] - s.alpha[k]) / dr;
        face_q[k] = 0.5 * dA * dA;
    }
    add_face_split(grid, face_q, eps);
    eps[J - 1] += exterior_tail(grid, s.alpha[J - 1]).value / grid.weight(J - 1);
    return eps;
}

std::vector<double> kinetic_density(const RadialGrid& grid, const FieldState& s, const Manifold& manifold) {
    s.check_shape(grid);
    std::vector<double> k(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double f = manifold.f_on_gamma(s.Y[j]).value;
        k[j] = s.Y_t[j] * s.Y_t[j] + f * s.alpha_t[j] * s.alpha_t[j];
    }
    return k;
}

double cumulative_energy(const RadialGrid& grid, const std::vector<double>& density, double rho) {
    const double dr = grid.dr();
    rho = std::clamp(rho, 0.0, grid.R());
    const std::size_t full = std::min(static_cast<std::size_t>(rho / dr), grid.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < full; ++j) sum += density[j] * grid.weight(j);
    if (full < grid.size()) {
        const double lo = static_cast<double>(full) * dr;
        sum += density[full] * 0.5 * (rho * rho - lo * lo);
    }
    return two_pi * sum;
}

double total_energy(const RadialGrid& grid, const FieldState& s, const Manifold& manifold) {
    return cumulative_energy(grid, energy_density(grid, s, manifold), grid.R());
}

double lambda_of_t(const RadialGrid& grid, const FieldState& s) {
    const std::vector<double> eps = spherical_energy_density(grid, s);
    const double total = cumulative_energy(grid, eps, grid.R());
    if (!(total >= 1.0)) throw NoScaleError("spherical energy below 1: no concentration scale");
    const double target = total >= 1.5 ? 1.5 : 1.0;
    const double dr = grid.dr();
    double sum = 0.0;  // running integral without the 2 pi factor
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double cell = eps[j] * grid.weight(j);
        if (two_pi * (sum + cell) >= target && eps[j] > 0.0) {
            const double lo = static_cast<double>(j) * dr;
            const double rho = std::sqrt(lo * lo + 2.0 * (target / two_pi - sum) / eps[j]);
            return 0.5 * std::min(rho, grid.face(j));
        }
        sum += cell;
    }
    return 0.5 * grid.R();
}

double interpolate_even(const RadialGrid& grid, const std::vector<double>& v, double rho) {
    if (!(rho >= 0.0 && rho <= grid.R())) throw OutOfDomain("interpolation radius outside [0, R]");
    const std::size_t J = grid.size();
    if (rho <= grid.r(0)) return v[0];
    if (rho >= grid.r(J - 1)) return v[J - 1];
    std::size_t j = static_cast<std::size_t>(rho / grid.dr() - 0.5);
    j = std::min(j, J - 2);
    const double w = (rho - grid.r(j)) / grid.dr();
    return (1.0 - w) * v[j] + w * v[j + 1];
}

double flux(const RadialGrid& grid, const FieldState& s, const Manifold& manifold, double A) {
    s.check_shape(grid);
    const double rho = s.t - A;
    if (rho <= 0.0) return 0.0;
    if (rho > grid.R()) throw OutOfDomain("flux radius t - A exceeds R");
    const std::size_t J = grid.size();
    double value;
    if (rho <= grid.r(0)) {
        // e is even and m odd about r = 0
        const NodeValues n = node_e_m(grid, s, manifold, 0);
        value = n.e + n.m * rho / grid.r(0);
    } else if (rho >= grid.r(J - 1)) {
        const NodeValues n = node_e_m(grid, s, manifold, J - 1);
        value = n.e + n.m;
    } else {
        std::size_t j = std::min(static_cast<std::size_t>(rho / grid.dr() - 0.5), J - 2);
        const double w = (rho - grid.r(j)) / grid.dr();
        const NodeValues a = node_e_m(grid, s, manifold, j);
        const NodeValues b = node_e_m(grid, s, manifold, j + 1);
        value = (1.0 - w) * (a.e + a.m) + w * (b.e + b.m);
    }
    return two_pi * rho * value;
}

double cone_energy(const RadialGrid& grid, const FieldState& s, const Manifold& manifold, double A) {
    const double rho = s.t - A;
    if (rho <= 0.0) return 0.0;
    return cumulative_energy(grid, energy_density(grid, s, manifold), rho);
}

double annulus_energy(const RadialGrid& grid, const FieldState& s, const Manifold& manifold, double lambda_frac,
                      double A) {
    const double outer = s.t - A;
    const double inner = lambda_frac * s.t;
    if (outer <= inner) return 0.0;
    const std::vector<double> eps = energy_density(grid, s, manifold);
    return cumulative_energy(grid, eps, outer) - cumulative_energy(grid, eps, inner);
}

double kinetic_cone_integral(const RadialGrid& grid, const FieldState& s, const Manifold& manifold, double A) {
    const double rho = s.t - A;
    if (rho <= 0.0) return 0.0;
    return cumulative_energy(grid, kinetic_density(grid, s, manifold), rho) / two_pi;
}

double exterior_oscillation(const RadialGrid& grid, const FieldState& s, double lambda_frac) {
    s.check_shape(grid);
    const double r_min = lambda_frac * s.t;
    if (r_min >= grid.R()) throw OutOfDomain("exterior region lambda_frac * t lies beyond R");
    const double a_inf = s.alpha.back();
    double osc = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (grid.r(j) >= r_min) osc = std::max(osc, std::abs(s.alpha[j] - a_inf));
    return osc;
}

int degree(const FieldState& s) { return static_cast<int>(std::lround(s.alpha.back() / pi)); }

DiagnosticsRecord instantaneous_record(const RadialGrid& grid, const FieldState& s, const Manifold& manifold,
                                       double A, double lambda_frac) {
    DiagnosticsRecord d;
    d.t = s.t;
    const std::vector<double> eps = energy_density(grid, s, manifold);
    d.energy = cumulative_energy(grid, eps, grid.R());
    try {
        d.lambda = lambda_of_t(grid, s);
        d.Y_at_lambda = interpolate_even(grid, s.Y, d.lambda);
        d.z_wrap = z_of(d.Y_at_lambda);
    } catch (const NoScaleError&) {
        d.lambda = d.Y_at_lambda = d.z_wrap = nan;
    }
    d.degree = degree(s);
    const double outer = s.t - A;
    d.cone_energy_A = outer <= 0.0 ? 0.0 : cumulative_energy(grid, eps, outer);
    const double inner = lambda_frac * s.t;
    d.annulus_energy = outer <= inner ? 0.0 : cumulative_energy(grid, eps, outer) - cumulative_energy(grid, eps, inner);
    d.flux_A = flux(grid, s, manifold, A);
    try {
        d.alpha_exterior_osc = exterior_oscillation(grid, s, lambda_frac);
    } catch (const OutOfDomain&) {
        d.alpha_exterior_osc = nan;
    }
    for (double y : s.Y) d.max_abs_Y = std::max(d.max_abs_Y, std::abs(y));
    return d;
}

WindingReport winding_series(const std::vector<DiagnosticsRecord>& series) {
    WindingReport w;
    std::vector<const DiagnosticsRecord*> rec;
    for (const auto& d : series)
        if (std::isfinite(d.lambda) && std::isfinite(d.Y_at_lambda)) rec.push_back(&d);
    w.samples = rec.size();
    if (rec.empty()) return w;

    double ymin = rec[0]->Y_at_lambda, ymax = ymin;
    for (const auto* d : rec) {
        ymin = std::min(ymin, d->Y_at_lambda);
        ymax = std::max(ymax, d->Y_at_lambda);
    }
    w.wrap_count = ymax - ymin;

    std::size_t k = rec.size() - 1;
    while (k > 0 && rec[k - 1]->Y_at_lambda <= rec[k]->Y_at_lambda) --k;
    const double t0 = rec.front()->t, t1 = rec.back()->t;
    if (k + 1 < rec.size() && rec.back()->Y_at_lambda > rec[k]->Y_at_lambda) {
        w.monotone_from_t = rec[k]->t;
        w.eventually_monotone = t1 > t0 && (t1 - rec[k]->t) >= 0.25 * (t1 - t0);
    }

    constexpr int bins = 100;
    std::set<int> covered;
    const auto bin_of = [](double y) { return static_cast<int>(std::floor(y * bins)); };
    const auto mark = [&](long b) { covered.insert(static_cast<int>(((b % bins) + bins) % bins)); };
    mark(bin_of(rec[0]->Y_at_lambda));
    for (std::size_t i = 1; i < rec.size(); ++i) {
        const double a = rec[i - 1]->Y_at_lambda, b = rec[i]->Y_at_lambda;
        if (std::abs(b - a) >= 1.0) {
            for (int q = 0; q < bins; ++q) covered.insert(q);
            break;
        }
        for (long q = bin_of(std::min(a, b)); q <= bin_of(std::max(a, b)); ++q) mark(q);
    }
    w.z_cover_fraction = static_cast<double>(covered.size()) / bins;

    LambdaTrend& lt = w.lambda_trend;
    lt.initial = rec.front()->lambda;
    lt.final = rec.back()->lambda;
    lt.min = lt.max = lt.initial;
    for (const auto* d : rec) {
        lt.min = std::min(lt.min, d->lambda);
        lt.max = std::max(lt.max, d->lambda);
    }
    lt.decrease_factor = lt.initial / lt.min;
    return w;
}

}  // namespace wwm
