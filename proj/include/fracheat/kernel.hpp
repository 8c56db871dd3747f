#pragma once

// Symmetric alpha-stable heat kernel P (probability normalized: the inverse
// Fourier transform of exp(-|xi|^alpha) with the (2 pi)^-n factor) and its
// self-similar family P_t(x) = t^(-n/alpha) P(x / t^(1/alpha)).

#include "fracheat/check_report.hpp"
#include "fracheat/grid.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace fracheat {

/// Quadrature policy for the oscillatory inversion integral.
struct QuadraturePolicy {
    int max_segments = 6000;        // zero-to-zero segments beyond the split point
    double target_abs_error = 1e-13;
    double split_radius = 1.0;      // s* = max(split_radius, 1/r)
};

struct KernelSpec {
    double alpha = 1.0;
    int dim = 1;
    QuadraturePolicy quad{};

    /// Throws DomainError unless 0 < alpha <= 2 and dim in {1, 2, 3}.
    void validate() const;
};

struct KernelValue {
    double x = 0.0; // radial distance
    double t = 1.0;
    double value = 0.0;
    double abs_error_estimate = 0.0;
};

/// How a value was obtained; `Auto` picks the cheapest accurate route.
enum class KernelRoute { Auto, Quadrature, ClosedForm, Series };

/// Evaluator for one (alpha, dim). Immutable after construction and safe to
/// share between threads.
class StableKernel {
  public:
    explicit StableKernel(KernelSpec spec);

    const KernelSpec &spec() const noexcept { return spec_; }

    /// P(r) by the requested route. ClosedForm is only available for alpha in
    /// {1, 2}; Series falls back to quadrature when it cannot certify accuracy.
    KernelValue profile(double r, KernelRoute route = KernelRoute::Auto) const;

    /// P_t at radial distance r: exact rescaling of profile().
    KernelValue at(double r, double t, KernelRoute route = KernelRoute::Auto) const;

    /// P(0) in closed form: Gamma(n/alpha) / (alpha 2^(n-1) pi^(n/2) Gamma(n/2)).
    double value_at_origin() const;

    /// Leading far-field coefficient c with P(r) ~ c r^-(n+alpha) (0 for alpha = 2).
    double tail_coefficient() const;

    /// Far-field expansion P(r) ~ sum_k a_k r^-(n + alpha k); the a_k.
    std::span<const double> far_field_coefficients() const noexcept { return far_coef_; }

    /// Sum of the far-field expansion of P_t at r (used for periodic images and
    /// box tails). Returns NaN when the expansion cannot reach `tol` at r.
    double far_field(double r, double t, double tol = 1e-15) const;

    /// Mass beyond radius d of P (one-dimensional only): integral_d^inf P(r) dr.
    KernelValue tail_mass_1d(double d) const;

  private:
    KernelValue quadrature(double r) const;
    bool try_far_series(double r, KernelValue &out) const;
    bool try_near_series(double r, KernelValue &out) const;
    bool closed_form(double r, KernelValue &out) const;

    KernelSpec spec_;
    std::vector<double> far_coef_;  // a_k, k = 1..K
    std::vector<double> near_coef_; // b_k for P(r) = sum_k b_k r^(2k), alpha > 1
};

/// P(r). Throws AccuracyNotReached (with the best estimate) when quadrature
/// cannot meet the policy's target error.
KernelValue eval_P(const KernelSpec &spec, double r);

/// P_t(x) for a point x in R^dim (x.size() == dim) or a radial distance.
KernelValue eval_Pt(const KernelSpec &spec, std::span<const double> x, double t);
KernelValue eval_Pt(const KernelSpec &spec, double r, double t);

struct KernelTable {
    double alpha = 1.0;
    int dim = 1;
    double t = 1.0;
    std::vector<double> r, value, abs_err;
};

/// P_t on every radius of the grid (t = 1 gives P). Throws on the first
/// point that fails; partial tables are never returned.
KernelTable tabulate_kernel(const KernelSpec &spec, const RadialGrid &grid, double t = 1.0);

/// Process-wide table cache keyed by (alpha, dim, t, grid). Insert-only, thread
/// safe. An optional directory persists tables as CSV between runs.
class KernelTableCache {
  public:
    explicit KernelTableCache(std::filesystem::path directory = {});
    KernelTable get(const KernelSpec &spec, const RadialGrid &grid, double t = 1.0);
    std::size_t size() const;

  private:
    std::string key(const KernelSpec &spec, const RadialGrid &grid, double t) const;
    std::filesystem::path directory_;
    mutable std::mutex mutex_;
    std::map<std::string, KernelTable> tables_;
};

/// CSV with header `r,value,abs_err`, shortest round-trip decimals.
void write_kernel_csv(std::ostream &os, const KernelTable &table);
KernelTable read_kernel_csv(std::istream &is);

struct SandwichConstants {
    double lower = 0.0;  // min over grid of P(r) (1 + r^(n+alpha))
    double upper = 0.0;  // max over grid
    double r_at_lower = 0.0, r_at_upper = 0.0;
    bool lower_degenerate = false; // lower bound collapses (alpha = 2 or ratio -> 0 at the grid edge)
};

/// Empirical two-sided bound P(r) ~ 1/(1 + r^(n+alpha)) over the grid.
/// Requires a grid reaching r >= 20. Throws BoundViolated on a nonpositive value.
SandwichConstants sandwich_constant(const KernelSpec &spec, const RadialGrid &grid);

/// Smallest C with P_t(r) <= C t / r^(n+alpha) for all grid radii r >= r_min.
/// Requires alpha < 2 and r_min >= t^(1/alpha). metric = C.
CheckReport tail_bound_check(const KernelSpec &spec, double t, double r_min, const RadialGrid &grid,
                             double max_admissible = 1e6);

/// sup_r P(r) r^(n+alpha) over a default grid: the constant in P_t(y) <= C t/|y|^(n+alpha)
/// valid for every y (used by the barrier construction).
double global_tail_constant(const KernelSpec &spec);

} // namespace fracheat
