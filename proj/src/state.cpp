#include "wwm/state.hpp"

#include "wwm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wwm {

RadialGrid::RadialGrid(double R, std::size_t J) : R_(R), J_(J), dr_(R / static_cast<double>(J)) {
    if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("grid.R must be positive and finite");
    if (J < 4) throw ConfigError("grid.J must be at least 4");
}

bool FieldState::finite() const noexcept {
    if (!std::isfinite(t)) return false;
    for (const auto* v : {&Y, &Y_t, &alpha, &alpha_t})
        for (double x : *v)
            if (!std::isfinite(x)) return false;
    return true;
}

void FieldState::check_shape(const RadialGrid& grid) const {
    const std::size_t n = grid.size();
    if (Y.size() != n || Y_t.size() != n || alpha.size() != n || alpha_t.size() != n)
        throw ConfigError("field arrays do not match the grid size");
}

TailTerm exterior_tail(const RadialGrid& grid, double alpha_last) noexcept {
    const double n = std::round(alpha_last / std::numbers::pi);
    const double b = n * std::numbers::pi - alpha_last;
    const double q = grid.r(grid.size() - 1) / grid.R();
    return {0.5 * b * b * q * q, -b * q * q};
}

double max_abs_difference(const FieldState& a, const FieldState& b) {
    double d = 0.0;
    const std::vector<double>* xs[] = {&a.Y, &a.Y_t, &a.alpha, &a.alpha_t};
    const std::vector<double>* ys[] = {&b.Y, &b.Y_t, &b.alpha, &b.alpha_t};
    for (int k = 0; k < 4; ++k) {
        if (xs[k]->size() != ys[k]->size()) throw ConfigError("states have different sizes");
        for (std::size_t j = 0; j < xs[k]->size(); ++j) d = std::max(d, std::abs((*xs[k])[j] - (*ys[k])[j]));
    }
    return d;
}

}  // namespace wwm
