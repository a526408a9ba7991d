#pragma once
// Radial grid and the dynamical state (Y, Y_t, alpha, alpha_t) of the reduced flow.

#include <cstddef>
#include <vector>

namespace wwm {

/// Cell-centred grid on (0, R): node j sits at r_j = (j + 1/2) dr, cell j covers [j dr, (j+1) dr].
class RadialGrid {
public:
    /// Throws ConfigError unless R > 0 and J >= 4.
    RadialGrid(double R, std::size_t J);

    double R() const noexcept { return R_; }
    std::size_t size() const noexcept { return J_; }
    double dr() const noexcept { return dr_; }
    double r(std::size_t j) const noexcept { return (static_cast<double>(j) + 0.5) * dr_; }
    /// Radius of the face between cells j and j+1.
    double face(std::size_t j) const noexcept { return static_cast<double>(j + 1) * dr_; }
    /// Area weight of cell j, the exact value of the integral of r over it.
    double weight(std::size_t j) const noexcept { return r(j) * dr_; }

private:
    double R_;
    std::size_t J_;
    double dr_;
};

struct FieldState {
    double t = 0.0;
    std::vector<double> Y;
    std::vector<double> Y_t;
    std::vector<double> alpha;
    std::vector<double> alpha_t;

    FieldState() = default;
    explicit FieldState(std::size_t n) : Y(n, 0.0), Y_t(n, 0.0), alpha(n, 0.0), alpha_t(n, 0.0) {}

    std::size_t size() const noexcept { return Y.size(); }
    /// True when every array entry and t are finite.
    bool finite() const noexcept;
    /// Throws ConfigError if the array lengths differ from the grid size.
    void check_shape(const RadialGrid& grid) const;
};

/// Closure of the grid at r = R: the energy beyond R of the linearised harmonic tail
/// n pi - alpha ~ 1/r matching alpha at the last node, divided by 2 pi f. With
/// b = n pi - alpha_{J-1} and n = round(alpha_{J-1}/pi) it equals b^2 r_{J-1}^2 / (2 R^2).
struct TailTerm {
    double value = 0.0;
    double derivative = 0.0;  ///< d value / d alpha_{J-1}
};
TailTerm exterior_tail(const RadialGrid& grid, double alpha_last) noexcept;

/// Largest absolute componentwise difference between two states of equal shape.
double max_abs_difference(const FieldState& a, const FieldState& b);

}  // namespace wwm
