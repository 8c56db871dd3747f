#pragma once

// Quadrature and series-acceleration primitives shared by the kernel and
// operator modules.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace fracheat::numerics {

inline constexpr double pi = 3.14159265358979323846264338327950288;

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;
};

struct GaussLegendreRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule. Thread safe.
const GaussLegendreRule &gauss_legendre(int n);

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <class F> double gauss_legendre_integrate(F &&f, double a, double b, int n) {
    const auto &rule = gauss_legendre(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

namespace detail {
// Kronrod 15-point abscissae (positive half) and weights; Gauss 7-point weights.
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
} // namespace detail

/// One Gauss-Kronrod 15/7 panel. The error estimate is |K15 - G7|.
template <class F> QuadResult gauss_kronrod15(F &&f, double a, double b) {
    const double center = 0.5 * (a + b), half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * detail::wgk[7];
    double gauss = fc * detail::wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * detail::xgk[j];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += detail::wgk[j] * fsum;
        if (j % 2 == 1) gauss += detail::wg[j / 2] * fsum;
    }
    QuadResult r;
    r.value = kronrod * half;
    r.error = std::abs((kronrod - gauss) * half);
    r.evaluations = 15;
    return r;
}

/// Globally adaptive Gauss-Kronrod on [a, b]: bisects the panel with the
/// largest error until the summed error meets max(abs_tol, rel_tol*|I|) or
/// max_panels is exhausted (then converged = false).
template <class F>
QuadResult integrate_adaptive(F &&f, double a, double b, double abs_tol, double rel_tol = 0.0,
                              int max_panels = 400) {
    struct Panel {
        double a, b;
        QuadResult r;
    };
    std::vector<Panel> panels;
    panels.reserve(static_cast<std::size_t>(max_panels));
    panels.push_back({a, b, gauss_kronrod15(f, a, b)});
    long evals = 15;
    auto by_error = [](const Panel &x, const Panel &y) { return x.r.error < y.r.error; };
    double total = panels.front().r.value, err = panels.front().r.error;
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (static_cast<int>(panels.size()) >= max_panels) {
            return {total, err, false, evals};
        }
        std::pop_heap(panels.begin(), panels.end(), by_error);
        Panel worst = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) { // interval no longer divisible
            panels.push_back(worst);
            std::push_heap(panels.begin(), panels.end(), by_error);
            break;
        }
        Panel left{worst.a, mid, gauss_kronrod15(f, worst.a, mid)};
        Panel right{mid, worst.b, gauss_kronrod15(f, mid, worst.b)};
        evals += 30;
        panels.push_back(left);
        std::push_heap(panels.begin(), panels.end(), by_error);
        panels.push_back(right);
        std::push_heap(panels.begin(), panels.end(), by_error);
        total = 0.0;
        err = 0.0;
        for (const auto &p : panels) {
            total += p.r.value;
            err += p.r.error;
        }
    }
    const bool ok = err <= std::max(abs_tol, rel_tol * std::abs(total));
    return {total, err, ok, evals};
}

struct Extrapolant {
    double value = 0.0;
    double error = std::numeric_limits<double>::infinity();
};

/// Wynn epsilon extrapolation of a sequence of partial sums. Uses at most the
/// last `window` entries; the error is the spread of the two most recent
/// even-column estimates.
Extrapolant wynn_epsilon(std::span<const double> partial_sums, std::size_t window = 24);

/// Hurwitz zeta sum_{m>=0} (m + q)^(-s) for s > 1, q > 0 (Euler-Maclaurin).
double hurwitz_zeta(double s, double q);

/// k-th positive zero of J0 (k >= 1). Cached; thread safe.
double bessel_j0_zero(int k);

struct OscillatoryPolicy {
    double abs_tol = 1e-13;
    int max_segments = 6000;
    int min_segments = 6;
    int panels_per_segment = 50;
};

/// Integrate f over [0, inf) where f changes sign at the increasing sequence
/// zero(k), k = 1, 2, ... The head [0, head_end] is integrated adaptively;
/// beyond it the integral is summed zero-to-zero and the partial sums are
/// accelerated with Wynn's epsilon algorithm. `negligible_from` is a point
/// beyond which |f| is below abs_tol in total (summation stops there).
template <class F, class Zero>
QuadResult integrate_oscillatory(F &&f, Zero &&zero, double head_end, double negligible_from,
                                 const OscillatoryPolicy &policy) {
    const double seg_tol = policy.abs_tol * 1e-2;
    // head: geometric panels [0,1], [1,2], [2,4], ... so slowly decaying
    // integrands over long ranges stay well resolved
    QuadResult head{0.0, 0.0, true, 0};
    const double head_stop = std::min(head_end, negligible_from);
    for (double a = 0.0, b = std::min(1.0, head_stop); a < head_stop; a = b, b = std::min(2.0 * b, head_stop)) {
        QuadResult piece = integrate_adaptive(f, a, b, seg_tol, 1e-15, 4 * policy.panels_per_segment);
        head.value += piece.value;
        head.error += piece.error;
        head.evaluations += piece.evaluations;
        head.converged = head.converged && piece.converged;
    }
    if (head_end >= negligible_from) return head;

    int k = 1;
    while (zero(k) <= head_end) ++k;
    std::vector<double> sums;
    sums.reserve(256);
    double running = head.value, quad_err = head.error;
    double lo = head_end;
    long evals = head.evaluations;
    bool converged = head.converged;
    Extrapolant prev, prev2;
    for (int seg = 0; seg < policy.max_segments; ++seg, ++k) {
        const double hi = zero(k);
        QuadResult piece = integrate_adaptive(f, lo, hi, seg_tol, 1e-15, policy.panels_per_segment);
        running += piece.value;
        quad_err += piece.error;
        evals += piece.evaluations;
        converged = converged && piece.converged;
        sums.push_back(running);
        lo = hi;
        if (hi >= negligible_from) {
            return {running, quad_err, converged, evals};
        }
        if (static_cast<int>(sums.size()) >= policy.min_segments) {
            Extrapolant cur = wynn_epsilon(sums);
            const double d1 = std::abs(cur.value - prev.value);
            const double d2 = std::abs(prev.value - prev2.value);
            if (std::isfinite(cur.value) && d1 < policy.abs_tol && d2 < policy.abs_tol) {
                return {cur.value, quad_err + std::max(d1, d2), converged, evals};
            }
            prev2 = prev;
            prev = cur;
        }
    }
    return {prev.value, quad_err + std::abs(prev.value - prev2.value), false, evals};
}

/// Richardson extrapolation of values v(h_i) whose error expands in powers
/// h^p_j. Returns the diagonal of the tableau (one entry per level).
std::vector<double> richardson_diagonal(std::span<const double> steps, std::span<const double> values,
                                        std::span<const double> exponents);

} // namespace fracheat::numerics
