#pragma once

// Named numerical checks and the suite registry behind `fracheat verify`.

#include "fracheat/check_report.hpp"
#include "fracheat/evolution.hpp"
#include "fracheat/kernel.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracheat {

/// Weak identity with phi(x, t) = theta(x) eta(t) on a periodic field with a
/// t = 0 slice and uniform steps; T' is the last stored time.
/// metric = |integral_0^T' integral [-u phi_t + u L phi] + integral u(T') phi(T') - integral u0 phi(0)|.
CheckReport check_weak_form(const SpaceTimeField &u, const GridFunction &theta, const std::function<double(double)> &eta,
                            const std::function<double(double)> &eta_dot, double alpha, double tol = 1e-4);

/// max over slices and nodes of (P_t * u(., 0) - u)^+, the convolution being
/// computed independently. Throws DomainError when u has negative values.
CheckReport check_lower_bound(const SpaceTimeField &u, const KernelSpec &spec, double tol = 1e-5);

/// Cross-solver L-infinity distance between spectral and convolution
/// solutions of u0. Details carry the lower-bound violation of the spectral
/// field.
CheckReport check_representation(const GridFunction &u0, double alpha, const std::vector<double> &times,
                                 double tol = 1e-4);

/// Weighted norm of every frame and its trapezoid time integral. `tails`
/// holds one optional tail model per frame (or is empty). metric = largest
/// per-frame norm; a divergent frame fails the report.
CheckReport check_membership(const SpaceTimeField &u, double alpha, const std::vector<std::optional<PowerTail>> &tails = {},
                             double bound = std::numeric_limits<double>::max());

struct GrowthOptions {
    double hypothesis_tol = 1e-5;
    std::optional<std::pair<double, double>> exempt; // where subharmonicity is not required
    double stability_tol = 0.1;
};

/// C(t) = max u / (1 + |x|^(1+alpha)) per slice on the full box and on the
/// half box; metric = largest relative change. Fails as HypothesisFailed when
/// (-Delta)^(alpha/2) u > hypothesis_tol outside the exempt interval.
CheckReport check_growth_bound(const SpaceTimeField &u, double alpha, const GrowthOptions &opts = {});

/// Smooth cutoff: 1 on |x| <= R - 1, 0 on |x| >= R, C-infinity in between.
double smooth_cutoff(double x, double R);
/// Piecewise-linear cutoff 1, R - |x|, 0.
double linear_cutoff(double x, double R);
/// Compactly supported C-infinity bump with peak 1.
double bump(double x, double center, double radius);

struct SuiteConfig {
    unsigned long long seed = 7;
};

/// Registered suite names in execution order ("all" expands to these).
const std::vector<std::string> &registered_suites();

/// Runs the named suites in the given order. An empty list yields no reports.
/// Throws ConfigError on an unknown name.
std::vector<CheckReport> run_suite(const std::vector<std::string> &names, const SuiteConfig &cfg = {});

} // namespace fracheat
