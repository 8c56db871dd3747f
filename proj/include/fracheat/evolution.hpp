#pragma once

// Solution operators for u_t + (-Delta)^(alpha/2) u = 0 in one space
// dimension: kernel convolution and exact spectral propagation, the
// backward test function, the enthalpy transform, pointwise residuals and
// the comparison-principle checker.

#include "fracheat/check_report.hpp"
#include "fracheat/grid.hpp"
#include "fracheat/kernel.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fracheat {

struct SpaceTimeField {
    std::vector<GridFunction> frames;
    std::vector<double> times;
    std::optional<GridFunction> initial; // the t = 0 slice
    std::map<std::string, std::string> metadata;

    /// Throws DomainError unless frames share one geometry, times are
    /// positive and strictly increasing, and counts match.
    void validate() const;
    /// Times with the initial slice (t = 0) prepended when present.
    std::vector<double> all_times() const;
    const GridFunction &slice(std::size_t k) const; // index into all_times()
    std::size_t slice_count() const { return frames.size() + (initial ? 1 : 0); }
    /// Common step of all_times(); throws DomainError when not uniform.
    double uniform_step() const;
};

struct Cylinder {
    double rho = 1.0; // spatial ball radius
    double T = 1.0;   // time horizon
    void validate() const;
};

/// How kernel values become convolution weights.
enum class KernelSampling {
    Auto,        // point samples when the aliased mass exp(-t (2 pi/h)^alpha) is below alias_threshold
    Point,       // h * P_t(x_j): spectrally accurate once P_t is resolved
    CellAverage, // exact cell masses: consistent as t -> 0
};

struct ConvolutionOptions {
    KernelSampling sampling = KernelSampling::Auto;
    double alias_threshold = 1e-6;
    double extension = 4.0; // non-periodic data are extended by their tail model to this multiple of the box
};

/// Grid policy for the cross-solver tests: box half-width 80 t_max^(1/alpha)
/// rounded up to whole datum periods, spacing chosen so the kernel aliasing
/// error exp(-t_min (2 pi/h - k_max)^alpha) is about `aliasing` (measurable,
/// so refinement still shows), point count rounded up to a multiple of 32.
struct BoxGrid {
    std::size_t n = 0;
    double half_width = 0.0;
    double spacing() const { return 2.0 * half_width / static_cast<double>(n); }
};
BoxGrid default_box(double alpha, double t_min, double t_max, double k_max, double period,
                    double aliasing = 1e-7);

/// Far-field model of P_t valid for |y| >= r_min: sum_k a_k t^k |y|^-(1 + alpha k),
/// truncated at the smallest term. Empty for alpha = 2.
PowerTail kernel_tail(const StableKernel &kernel, double t, double r_min);

/// Circular convolution weights w_j ~ integral over cell j of the periodized
/// kernel sum_m P_t(x + m n h), laid out for fft::circular_convolve.
std::vector<double> periodized_kernel_weights(const StableKernel &kernel, double t, std::size_t n, double h,
                                              KernelSampling sampling);

/// u(., t) = P_t * u0 for each t. Periodic u0 is convolved with the
/// periodized kernel (exact for periodic data on the line). Non-periodic u0
/// is extended by its tail model, convolved linearly, and the remainder
/// beyond the extension is added analytically from the kernel's far field.
SpaceTimeField solve_by_convolution(const GridFunction &u0, const std::optional<PowerTail> &tail,
                                    const KernelSpec &spec, const std::vector<double> &times,
                                    const ConvolutionOptions &opts = {});

/// u_hat(xi, t) = u0_hat(xi) exp(-t |xi|^alpha); u0 must be periodic.
SpaceTimeField solve_by_spectral_stepping(const GridFunction &u0, double alpha, const std::vector<double> &times);

/// Mass of u(., t) outside [lo, hi] for a datum vanishing off its grid.
double mass_outside_box(const GridFunction &u0, const KernelSpec &spec, double t, double lo, double hi);

/// phi(., t) = theta * P_(t0 - t). theta must vanish within 2 nodes of the grid ends.
GridFunction backward_test_function(const GridFunction &theta, const KernelSpec &spec, double t0, double t);

enum class EnthalpyVariant {
    Strict,  // u(., 0) must vanish; v then solves the equation
    General, // any datum; v_t + L v = u(., 0)
};

/// v(x, t) = integral_0^t u(x, s) ds by a cumulative fourth-order rule over
/// the stored slices. Needs the t = 0 slice, uniform steps, >= 2 frames.
SpaceTimeField enthalpy(const SpaceTimeField &u, EnthalpyVariant variant = EnthalpyVariant::Strict);

enum class OperatorMethod { Pv, Spectral };
enum class TimeDifference { Central2, Central4 };

struct ResidualField {
    std::vector<double> times;
    std::vector<GridFunction> values;
    double max_abs() const;
};

/// u_t + (-Delta)^(alpha/2) u at interior slices (periodic fields only);
/// `source` (if given) is subtracted, e.g. u0 for a General enthalpy.
ResidualField residual(const SpaceTimeField &u, double alpha, OperatorMethod method,
                       TimeDifference diff = TimeDifference::Central2, const GridFunction *source = nullptr);

struct ComparisonOptions {
    double hypothesis_tol = 1e-6;
    double conclusion_tol = 1e-5;
    OperatorMethod method = OperatorMethod::Spectral;
    TimeDifference diff = TimeDifference::Central4;
};

/// Maximum principle on the cylinder B_rho x (t_first, T]: checks the
/// hypotheses (subsolution residual, v <= 0 outside B_rho and at t_first)
/// to hypothesis_tol, then the conclusion max v <= conclusion_tol.
CheckReport comparison_check(const SpaceTimeField &v, double alpha, const Cylinder &cyl,
                             const ComparisonOptions &opts = {});

} // namespace fracheat
