#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace fracheat {

/// Uniformly sampled scalar field on [origin, origin + extent). A periodic
/// grid function is one period of a periodic function on the whole line.
struct GridFunction {
    std::vector<double> values;
    double spacing = 1.0;
    double origin = 0.0;
    bool periodic = false;

    GridFunction() = default;
    GridFunction(std::vector<double> v, double h, double x0, bool is_periodic);

    std::size_t size() const noexcept { return values.size(); }
    double extent() const noexcept { return spacing * static_cast<double>(values.size()); }
    double coordinate(std::size_t i) const noexcept { return origin + spacing * static_cast<double>(i); }
    double max_abs() const;
    bool same_geometry(const GridFunction &other) const;

    /// Throws DomainError unless spacing > 0 and all values are finite.
    void validate() const;

    /// Samples f at the grid nodes.
    static GridFunction sample(const std::function<double(double)> &f, std::size_t n, double x0, double h,
                               bool periodic);
    /// Periodic grid on [-half_width, half_width) with n nodes.
    static GridFunction periodic_box(const std::function<double(double)> &f, std::size_t n, double half_width);
};

/// Strictly increasing list of radii for kernel tabulation.
struct RadialGrid {
    std::vector<double> radii;

    static RadialGrid uniform(double r_max, std::size_t points); // 0, ..., r_max inclusive
    void validate() const;
};

/// Sum of power laws sum_i amp_i |y|^(-exponent_i), used for the far field
/// of a non-periodic function: one list for y > 0, one for y < 0. An empty
/// model means the function vanishes outside its grid.
struct PowerTail {
    struct Term {
        double amplitude = 0.0;
        double exponent = 0.0; // f ~ amplitude * |y|^-exponent
    };
    std::vector<Term> right;
    std::vector<Term> left;

    static PowerTail zero() { return {}; }
    static PowerTail symmetric(std::vector<Term> terms) { return {terms, terms}; }
    bool empty() const noexcept { return right.empty() && left.empty(); }
    double evaluate(double y) const;
    /// Smallest exponent across both sides (+inf when empty).
    double slowest_exponent() const;
    PowerTail product(const PowerTail &other) const;
};

/// A function of one variable as consumed by the principal-value evaluators:
/// either periodic with a known period, or defined analytically/by samples on
/// a window with a power-law tail beyond it.
struct FieldModel {
    std::function<double(double)> f;
    std::optional<double> period;
    // f is trusted on [window_lo, window_hi]; the tail model applies outside.
    double window_lo = -std::numeric_limits<double>::infinity();
    double window_hi = std::numeric_limits<double>::infinity();
    std::optional<PowerTail> tail;

    static FieldModel periodic(std::function<double(double)> f, double period);
    static FieldModel analytic(std::function<double(double)> f, std::optional<PowerTail> tail = std::nullopt);
    /// Local 6-point Lagrange interpolation of a grid function; periodic grids
    /// wrap, non-periodic grids switch to `tail` outside their extent.
    static FieldModel from_grid(const GridFunction &g, std::optional<PowerTail> tail = std::nullopt);

    double operator()(double y) const;
};

/// Piecewise quintic interpolant through the six nodes surrounding x.
double interpolate6(const GridFunction &g, double x);

/// Nonnegative trigonometric polynomial with seeded random coefficients and
/// fundamental period `period`; modes 1..max_mode plus a constant large
/// enough to keep the minimum at `floor`.
struct TrigPolynomial {
    double constant = 0.0;
    std::vector<double> cos_coef, sin_coef; // index k-1 for mode k
    double period = 2.0 * 3.14159265358979323846;

    static TrigPolynomial random_nonnegative(unsigned long long seed, int max_mode, double period, double floor = 0.1);
    double operator()(double x) const;
    double wavenumber(int k) const;
};

} // namespace fracheat
