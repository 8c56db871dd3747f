#pragma once

// The fractional Laplacian (-Delta)^(alpha/2) in one space dimension as a
// principal-value singular integral and as the Fourier multiplier |xi|^alpha,
// plus the normalization constant C(n, alpha), the bilinear form B(f, g) of
// the product rule, and the weighted L^(alpha/2) norm.

#include "fracheat/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fracheat {

struct PVConfig {
    std::vector<double> eps_schedule{0.1, 0.05, 0.025, 0.0125, 0.00625};
    double outer_radius = 160.0;     // decoupled outer cutoff; tail model beyond
    double tail_decay_exponent = 0;  // used only when a non-periodic field has no tail model and
                                     // vanishes beyond its window (0 = not used)
    int richardson_order = 4;        // eliminated error terms eps^(4-a), eps^(6-a), ...
    double rel_tol = 1e-6;           // Cauchy test on the last two extrapolants
    double abs_tol = 1e-10;
    double quad_tol = 1e-13;         // absolute target of the middle-region quadrature

    static PVConfig geometric(double first, double ratio, std::size_t levels);
    /// Throws ConfigError unless the schedule is positive and strictly
    /// decreasing and outer_radius >= 1 / min(eps).
    void validate() const;
};

struct NormConstant {
    double alpha = 1.0;
    int dim = 1;
    double value = 0.0;      // C(n, alpha)
    double quad_error = 0.0; // error of value
    double integral = 0.0;   // the defining integral, 1 / value
};

/// C(n, alpha) as the reciprocal of the radially reduced integral of
/// (1 - cos xi_1) / |xi|^(n+alpha). `budget` is the panel count on [0, 1];
/// doubling it at least halves quad_error.
NormConstant normalization_constant(double alpha, int dim, int budget = 64);

/// 2^alpha Gamma((n+alpha)/2) / (pi^(n/2) |Gamma(-alpha/2)|), cross-check only.
double normalization_constant_closed_form(double alpha, int dim);

/// C(1, alpha) PV integral of (f(x) - f(y)) / |x - y|^(1+alpha) at x, extrapolated
/// over cfg.eps_schedule. Throws PvNotConverged when the last two extrapolants
/// disagree, ConfigError when a non-periodic field lacks a usable tail model.
double frac_laplacian_pv(const FieldModel &f, double x, const PVConfig &cfg, const NormConstant &norm);

/// The coupled truncation C * integral over eps < |x - y| < 1/eps, no
/// extrapolation and no tail model.
double frac_laplacian_pv_coupled(const FieldModel &f, double x, double eps, const NormConstant &norm);

/// Multiplier |xi_k|^alpha, xi_k = 2 pi k / (N h), on a periodic grid.
/// Throws DomainError for non-periodic input.
GridFunction frac_laplacian_spectral(const GridFunction &f, double alpha);

/// C(1, alpha) integral of (f(x) - f(y))(g(x) - g(y)) / |x - y|^(1+alpha) dy.
double bilinear_form(const FieldModel &f, const FieldModel &g, double x, const PVConfig &cfg,
                     const NormConstant &norm);

/// PV operator on a periodic grid as a translation-invariant stencil against
/// the periodized kernel. The cell around the singularity uses an exact
/// degree-6 fit; the rest uses 6-point Lagrange interpolation per cell.
class PeriodicPvStencil {
  public:
    PeriodicPvStencil(double alpha, std::size_t n, double spacing);
    GridFunction apply(const GridFunction &f) const;
    const std::vector<double> &weights() const noexcept { return weights_; }

  private:
    double alpha_;
    double spacing_;
    std::vector<double> weights_; // (Lf)_i = sum_j weights_[j] f_{i+j mod n}
};

struct WeightedNorm {
    double value = 0.0;
    bool finite = true;
    std::string diagnostic; // "not-in-L^(alpha/2)" reason when !finite
};

/// integral |f(y)| / (1 + |y|^(n+alpha)) dy. Periodic fields use the periodized
/// weight; otherwise grid part plus analytic tail part. A divergent tail gives
/// finite = false rather than an exception. Only n = 1.
WeightedNorm weighted_norm(const GridFunction &f, const std::optional<PowerTail> &tail, double alpha, int dim = 1);
WeightedNorm weighted_norm(const FieldModel &f, double alpha, int dim = 1);

} // namespace fracheat
