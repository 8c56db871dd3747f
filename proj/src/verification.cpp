#include "fracheat/verification.hpp"

#include "fracheat/errors.hpp"
#include "fracheat/nonlocal_operator.hpp"
#include "fracheat/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

namespace fracheat {

namespace {

using numerics::pi;

double space_integral(const GridFunction &a, const GridFunction &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.values[i] * b.values[i];
    return s * a.spacing;
}

// Fourth-order composite rule on uniform samples: Simpson, with a 3/8 panel
// at the end for an odd number of intervals.
double time_integral(const std::vector<double> &g, double dt) {
    const std::size_t m = g.size() - 1;
    if (m == 0) return 0.0;
    if (m == 1) return 0.5 * dt * (g[0] + g[1]);
    const std::size_t simpson_end = (m % 2 == 0) ? m : m - 3;
    double s = 0.0;
    for (std::size_t k = 0; k + 2 <= simpson_end; k += 2) s += dt / 3.0 * (g[k] + 4.0 * g[k + 1] + g[k + 2]);
    if (simpson_end != m) {
        const std::size_t k = simpson_end;
        s += 3.0 * dt / 8.0 * (g[k] + 3.0 * g[k + 1] + 3.0 * g[k + 2] + g[k + 3]);
    }
    return s;
}

double weight_integral(double alpha) {
    // integral over the line of 1 / (1 + |y|^(1+alpha))
    const double q = 1.0 + alpha;
    return 2.0 * pi / (q * std::sin(pi / q));
}

std::vector<double> uniform_times(double t0, double t1, std::size_t steps) {
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) t[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(steps);
    return t;
}

std::vector<double> times_from(double dt, std::size_t steps) {
    std::vector<double> t(steps);
    for (std::size_t k = 0; k < steps; ++k) t[k] = dt * static_cast<double>(k + 1);
    return t;
}

std::string alpha_tag(double alpha) { return "alpha=" + format_double(alpha); }

double max_distance(const SpaceTimeField &a, const SpaceTimeField &b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.frames.size(); ++k)
        for (std::size_t i = 0; i < a.frames[k].size(); ++i)
            d = std::max(d, std::abs(a.frames[k].values[i] - b.frames[k].values[i]));
    return d;
}

CheckReport named(CheckReport r, const std::string &name) {
    r.name = name;
    return r;
}

constexpr double alphas[] = {0.5, 1.0, 1.5};

// ---------------------------------------------------------------------------
// suites

std::vector<CheckReport> suite_kernel_closed_form(const SuiteConfig &) {
    std::vector<CheckReport> out;
    for (double alpha : {1.0, 2.0}) {
        StableKernel k(KernelSpec{alpha, 1, {}});
        double worst = 0.0, at = 0.0;
        for (int i = 0; i <= 512; ++i) {
            const double r = 40.0 * i / 512.0;
            const double d = std::abs(k.profile(r, KernelRoute::Quadrature).value - k.profile(r, KernelRoute::ClosedForm).value);
            if (d > worst) worst = d, at = r;
        }
        out.push_back(CheckReport::judge("kernel_closed_form/" + alpha_tag(alpha), worst, 1e-8).note("r_at_max", at));
    }
    for (int dim : {2, 3}) {
        StableKernel k(KernelSpec{1.0, dim, {}});
        double worst = 0.0;
        for (int i = 0; i <= 32; ++i) {
            const double r = 10.0 * i / 32.0;
            worst = std::max(worst, std::abs(k.profile(r, KernelRoute::Quadrature).value -
                                             k.profile(r, KernelRoute::ClosedForm).value));
        }
        out.push_back(CheckReport::judge("kernel_closed_form/alpha=1,dim=" + std::to_string(dim), worst, 1e-8));
    }
    return out;
}

std::vector<CheckReport> suite_normalization(const SuiteConfig &) {
    std::vector<CheckReport> out;
    const auto &rule = numerics::gauss_legendre(12);
    for (double alpha : alphas) {
        StableKernel k(KernelSpec{alpha, 1, {}});
        for (double t : {0.25, 1.0, 4.0}) {
            const double s = std::pow(t, 1.0 / alpha);
            const double width = 0.25 * s;
            const int panels = 160;
            double grid_mass = 0.0;
            for (int p = 0; p < panels; ++p) {
                const double a = p * width, mid = a + 0.5 * width;
                for (std::size_t q = 0; q < rule.nodes.size(); ++q)
                    grid_mass += rule.weights[q] * 0.5 * width * k.at(mid + 0.5 * width * rule.nodes[q], t).value;
            }
            const double tail = k.tail_mass_1d(panels * width / s).value;
            const double mass = 2.0 * (grid_mass + tail);
            out.push_back(CheckReport::judge("normalization/" + alpha_tag(alpha) + ",t=" + format_double(t),
                                             std::abs(mass - 1.0), 1e-6)
                              .note("mass", mass)
                              .note("tail_mass", 2.0 * tail));
        }
    }
    return out;
}

std::vector<CheckReport> suite_constant(const SuiteConfig &) {
    std::vector<CheckReport> out;
    const auto c11 = normalization_constant(1.0, 1);
    out.push_back(CheckReport::judge("constant/integral(1,1)", std::abs(c11.integral - pi) / pi, 1e-6)
                      .note("integral", c11.integral));
    const std::pair<int, double> cases[] = {{1, 1.0}, {1, 0.1}, {1, 1.9}, {2, 1.0}, {3, 0.5}};
    for (auto [dim, alpha] : cases) {
        const auto c = normalization_constant(alpha, dim);
        const auto fine = normalization_constant(alpha, dim, 128);
        const double closed = normalization_constant_closed_form(alpha, dim);
        const double refine = std::abs(c.value - fine.value) / c.value;
        const double cross = std::abs(c.value - closed) / closed;
        out.push_back(CheckReport::judge("constant/C(" + std::to_string(dim) + "," + format_double(alpha) + ")",
                                         std::max(refine, cross), 1e-6)
                          .note("value", c.value)
                          .note("closed_form", closed)
                          .note("refinement_change", refine)
                          .note("quad_error", c.quad_error));
    }
    return out;
}

std::vector<CheckReport> suite_semigroup(const SuiteConfig &) {
    std::vector<CheckReport> out;
    const double s = 0.5, t = 0.5;
    for (double alpha : alphas) {
        const KernelSpec spec{alpha, 1, {}};
        StableKernel k(spec);
        const auto box = default_box(alpha, s, s + t, 0.0, 2.0 * pi, 1e-12);
        const double h = box.spacing();
        const auto p_s = GridFunction::sample([&](double x) { return k.at(std::abs(x), s).value; }, box.n + 1,
                                              -box.half_width, h, false);
        const auto sol = solve_by_convolution(p_s, kernel_tail(k, s, box.half_width), spec, {t});
        double worst = 0.0, closed = 0.0;
        for (std::size_t i = 0; i < p_s.size(); ++i) {
            const double x = p_s.coordinate(i), v = sol.frames[0].values[i];
            worst = std::max(worst, std::abs(v - k.at(std::abs(x), s + t).value));
            if (alpha == 1.0) closed = std::max(closed, std::abs(v - (s + t) / (pi * ((s + t) * (s + t) + x * x))));
        }
        auto r = CheckReport::judge("semigroup/" + alpha_tag(alpha), std::max(worst, closed), 1e-6);
        r.note("n", double(box.n)).note("kernel_distance", worst);
        if (alpha == 1.0) r.note("closed_form_distance", closed);
        out.push_back(r);
    }
    return out;
}

std::vector<CheckReport> suite_operator_crosscheck(const SuiteConfig &cfg) {
    std::vector<CheckReport> out;
    const auto tp = TrigPolynomial::random_nonnegative(cfg.seed, 4, 2.0 * pi);
    const std::size_t n = 256;
    const auto grid = GridFunction::periodic_box(tp, n, pi);
    const auto model = FieldModel::periodic(tp, 2.0 * pi);
    for (double alpha : alphas) {
        const auto norm = normalization_constant(alpha, 1);
        const auto spectral = frac_laplacian_spectral(grid, alpha);
        const auto stencil = PeriodicPvStencil(alpha, n, grid.spacing).apply(grid);
        double worst = 0.0, stencil_gap = 0.0;
        for (std::size_t j = 0; j < 12; ++j) {
            const std::size_t i = j * n / 12 + 3;
            const double pv = frac_laplacian_pv(model, grid.coordinate(i), PVConfig{}, norm);
            worst = std::max(worst, std::abs(pv - spectral.values[i]));
        }
        for (std::size_t i = 0; i < n; ++i) stencil_gap = std::max(stencil_gap, std::abs(stencil.values[i] - spectral.values[i]));
        out.push_back(CheckReport::judge("operator_crosscheck/" + alpha_tag(alpha), worst, 1e-4)
                          .note("stencil_vs_spectral", stencil_gap));
    }
    return out;
}

std::vector<CheckReport> suite_product_rule(const SuiteConfig &cfg) {
    std::vector<CheckReport> out;
    const auto f = TrigPolynomial::random_nonnegative(cfg.seed, 4, 2.0 * pi);
    const auto g = TrigPolynomial::random_nonnegative(cfg.seed + 1, 4, 2.0 * pi);
    const std::size_t n = 256;
    const auto fg = GridFunction::periodic_box(f, n, pi), gg = GridFunction::periodic_box(g, n, pi);
    const auto prod = GridFunction::periodic_box([&](double x) { return f(x) * g(x); }, n, pi);
    const auto fm = FieldModel::periodic(f, 2.0 * pi), gm = FieldModel::periodic(g, 2.0 * pi);
    for (double alpha : alphas) {
        const auto norm = normalization_constant(alpha, 1);
        const auto lf = frac_laplacian_spectral(fg, alpha), lg = frac_laplacian_spectral(gg, alpha),
                   lp = frac_laplacian_spectral(prod, alpha);
        double worst = 0.0, min_bff = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < 12; ++j) {
            const std::size_t i = j * n / 12 + 5;
            const double x = fg.coordinate(i);
            const double b = bilinear_form(fm, gm, x, PVConfig{}, norm);
            const double lhs = lp.values[i];
            const double rhs = fg.values[i] * lg.values[i] + gg.values[i] * lf.values[i] - b;
            worst = std::max(worst, std::abs(lhs - rhs));
            min_bff = std::min(min_bff, bilinear_form(fm, fm, x, PVConfig{}, norm));
        }
        out.push_back(CheckReport::judge("product_rule/" + alpha_tag(alpha), worst, 1e-4).note("min_B(f,f)", min_bff));
    }
    return out;
}

std::vector<CheckReport> suite_widder(const SuiteConfig &cfg) {
    std::vector<CheckReport> out;
    const auto tp = TrigPolynomial::random_nonnegative(cfg.seed, 6, 2.0 * pi);
    const std::vector<double> times{0.25, 1.0};
    for (double alpha : alphas) {
        const auto box = default_box(alpha, times.front(), times.back(), 6.0, 2.0 * pi);
        const auto coarse = check_representation(GridFunction::periodic_box(tp, box.n, box.half_width), alpha, times);
        const auto fine = check_representation(GridFunction::periodic_box(tp, 4 * box.n, 2.0 * box.half_width), alpha, times);
        out.push_back(named(coarse, "widder/" + alpha_tag(alpha)).note("n", double(box.n)));
        out.push_back(CheckReport::judge("widder_refinement/" + alpha_tag(alpha), fine.metric / coarse.metric, 0.5)
                          .note("coarse", coarse.metric)
                          .note("refined", fine.metric));
    }
    return out;
}

std::vector<CheckReport> suite_lower_bound(const SuiteConfig &cfg) {
    std::vector<CheckReport> out;
    const auto tp = TrigPolynomial::random_nonnegative(cfg.seed, 6, 2.0 * pi);
    const std::vector<double> times{0.25, 0.5, 1.0};
    for (double alpha : alphas) {
        const auto box = default_box(alpha, times.front(), times.back(), 6.0, 2.0 * pi);
        const auto u = solve_by_spectral_stepping(GridFunction::periodic_box(tp, box.n, box.half_width), alpha, times);
        out.push_back(named(check_lower_bound(u, KernelSpec{alpha, 1, {}}), "lower_bound/" + alpha_tag(alpha)));
    }
    return out;
}

// v_R - u - eps with v_R the solution from the truncated datum phi_R u0. The
// cylinder starts at tau so the time differences resolve every mode.
std::vector<CheckReport> suite_maximum_principle(const SuiteConfig &cfg) {
    std::vector<CheckReport> out;
    const auto tp = TrigPolynomial::random_nonnegative(cfg.seed, 6, 2.0 * pi);
    const double R = 3.0, T = 1.0, tau = 0.1, h = 0.05;
    const std::size_t steps = 512;
    double m_r = 0.0;
    for (int i = 0; i <= 6000; ++i) m_r = std::max(m_r, tp(-R + 2.0 * R * i / 6000.0));
    for (double alpha : alphas) {
        const double c = global_tail_constant(KernelSpec{alpha, 1, {}});
        for (double eps : {1e-2, 1e-3}) {
            const std::string name = "maximum_principle/" + alpha_tag(alpha) + ",eps=" + format_double(eps);
            const double rho = R + std::pow(c * m_r * T * 2.0 * R / eps, 1.0 / (1.0 + alpha));
            const double L = std::ceil(2.0 * rho / pi) * pi;
            const std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * L / h / 32.0)) * 32;
            const auto times = uniform_times(tau, T, steps);
            const auto u = solve_by_spectral_stepping(GridFunction::periodic_box(tp, n, L), alpha, times);
            const auto v = solve_by_spectral_stepping(
                GridFunction::periodic_box([&](double x) { return smooth_cutoff(x, R) * tp(x); }, n, L), alpha, times);
            SpaceTimeField w;
            w.times = times;
            double v_exterior = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < times.size(); ++k) {
                GridFunction g = v.frames[k];
                for (std::size_t i = 0; i < n; ++i) {
                    if (std::abs(g.coordinate(i)) >= rho) v_exterior = std::max(v_exterior, g.values[i]);
                    g.values[i] -= u.frames[k].values[i] + eps;
                }
                w.frames.push_back(std::move(g));
            }
            if (v_exterior > eps + 1e-6) {
                out.push_back(CheckReport::hypothesis_failed(name, v_exterior - eps, 1e-6, "v_R <= eps outside B_rho")
                                  .note("rho", rho));
                continue;
            }
            out.push_back(named(comparison_check(w, alpha, Cylinder{rho, T}), name)
                              .note("v_R_exterior_max", v_exterior)
                              .note("tail_constant", c)
                              .note("tau", tau));
        }
    }
    return out;
}

std::vector<CheckReport> suite_weak_form(const SuiteConfig &cfg) {
    std::vector<CheckReport> out;
    const auto tp = TrigPolynomial::random_nonnegative(cfg.seed, 6, 2.0 * pi);
    const std::size_t n = 256;
    const auto u0 = GridFunction::periodic_box(tp, n, pi);
    const auto theta = GridFunction::periodic_box([](double x) { return bump(x, 0.3, 2.0); }, n, pi);
    auto eta = [](double t) { return std::cos(t); };
    auto eta_dot = [](double t) { return -std::sin(t); };
    for (double alpha : alphas) {
        double errs[3];
        int level = 0;
        for (std::size_t steps : {8u, 16u, 32u}) {
            const auto u = solve_by_spectral_stepping(u0, alpha, times_from(1.0 / steps, steps));
            errs[level++] = check_weak_form(u, theta, eta, eta_dot, alpha).metric;
        }
        out.push_back(CheckReport::judge("weak_form/" + alpha_tag(alpha), errs[2], 1e-4).note("dt", 1.0 / 32));
        out.push_back(CheckReport::judge("weak_form_order/" + alpha_tag(alpha), errs[1] / errs[0], 0.125)
                          .note("error_dt=1/8", errs[0])
                          .note("error_dt=1/16", errs[1])
                          .note("observed_order", std::log2(errs[0] / errs[1])));
    }
    return out;
}

std::vector<CheckReport> suite_enthalpy(const SuiteConfig &cfg) {
    std::vector<CheckReport> out;
    const auto tp = TrigPolynomial::random_nonnegative(cfg.seed, 6, 2.0 * pi);
    const double dt = 1.0 / 64;
    const auto times = times_from(dt, 64);
    for (double alpha : alphas) {
        const std::string tag = alpha_tag(alpha);
        const auto u0 = GridFunction::periodic_box(tp, 128, pi);
        const auto v = enthalpy(solve_by_spectral_stepping(u0, alpha, times), EnthalpyVariant::General);
        const auto res = residual(v, alpha, OperatorMethod::Spectral, TimeDifference::Central4, &u0);
        out.push_back(CheckReport::judge("enthalpy_residual/" + tag, res.max_abs(), 1e-3));

        double drop = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k + 1 < v.slice_count(); ++k)
            for (std::size_t i = 0; i < u0.size(); ++i) drop = std::max(drop, v.slice(k).values[i] - v.slice(k + 1).values[i]);
        out.push_back(CheckReport::judge("enthalpy_monotone/" + tag, drop, 0.0));

        // subharmonic wherever the datum vanishes
        const double support = 1.0;
        const auto b0 = GridFunction::periodic_box([&](double x) { return bump(x, 0.0, support); }, 512, 16.0);
        const auto vb = enthalpy(solve_by_spectral_stepping(b0, alpha, times), EnthalpyVariant::General);
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto &frame : vb.frames) {
            const auto lv = frac_laplacian_spectral(frame, alpha);
            for (std::size_t i = 0; i < lv.size(); ++i)
                if (std::abs(lv.coordinate(i)) >= support) worst = std::max(worst, lv.values[i]);
        }
        out.push_back(CheckReport::judge("enthalpy_subharmonic/" + tag, worst, 1e-5));

        // one Fourier mode: v = cos(kx) (1 - exp(-t |k|^a)) / |k|^a
        const double kw = 2.0, lam = std::pow(kw, alpha);
        const auto c0 = GridFunction::periodic_box([&](double x) { return std::cos(kw * x); }, 64, pi);
        const auto vc = enthalpy(solve_by_spectral_stepping(c0, alpha, times), EnthalpyVariant::General);
        double gap = 0.0;
        for (std::size_t k = 0; k < vc.frames.size(); ++k)
            for (std::size_t i = 0; i < c0.size(); ++i)
                gap = std::max(gap, std::abs(vc.frames[k].values[i] -
                                             std::cos(kw * c0.coordinate(i)) * (1.0 - std::exp(-times[k] * lam)) / lam));
        out.push_back(CheckReport::judge("enthalpy_single_mode/" + tag, gap, 1e-6));
    }
    return out;
}

std::vector<CheckReport> suite_membership(const SuiteConfig &) {
    std::vector<CheckReport> out;
    const double alpha = 1.0;
    const KernelSpec spec{alpha, 1, {}};
    StableKernel k(spec);
    const auto u0 = GridFunction::sample([](double x) { return bump(x, 0.0, 1.0); }, 801, -20.0, 0.05, false);
    double mass = 0.0;
    for (double v : u0.values) mass += v * u0.spacing;
    const std::vector<double> times{0.25, 1.0, 4.0};
    const auto u = solve_by_convolution(u0, PowerTail::zero(), spec, times);
    std::vector<std::optional<PowerTail>> tails;
    for (double t : times) {
        PowerTail tail = kernel_tail(k, t, 20.0);
        for (auto *side : {&tail.right, &tail.left})
            for (auto &term : *side) term.amplitude *= mass;
        tails.emplace_back(tail);
    }
    out.push_back(named(check_membership(u, alpha, tails, u0.max_abs() * weight_integral(alpha)), "membership/bounded"));

    GridFunction growing = GridFunction::sample([](double x) { return std::sqrt(1.0 + x * x); }, 401, -10.0, 0.05, false);
    const auto wn = weighted_norm(growing, PowerTail::symmetric({{1.0, -1.0}}), alpha);
    out.push_back(CheckReport::judge("membership/divergent_flagged", wn.finite ? 1.0 : 0.0, 0.0).note("diagnostic", wn.diagnostic));
    return out;
}

std::vector<CheckReport> suite_growth_bound(const SuiteConfig &) {
    std::vector<CheckReport> out;
    for (double alpha : alphas) {
        const auto b0 = GridFunction::periodic_box([](double x) { return bump(x, 0.0, 1.0); }, 1024, 32.0);
        const auto v = enthalpy(solve_by_spectral_stepping(b0, alpha, times_from(1.0 / 32, 64)), EnthalpyVariant::General);
        GrowthOptions opts;
        opts.exempt = std::pair{-1.0, 1.0};
        out.push_back(named(check_growth_bound(v, alpha, opts), "growth_bound/" + alpha_tag(alpha)));
    }
    return out;
}

std::vector<CheckReport> suite_self_similar(const SuiteConfig &) {
    std::vector<CheckReport> out;
    auto u0 = GridFunction::sample([](double x) { return bump(x, 0.0, 1.0); }, 513, -8.0, 1.0 / 32, false);
    double mass = 0.0;
    for (double v : u0.values) mass += v * u0.spacing;
    for (double &v : u0.values) v /= mass;
    const std::size_t mid = 256;
    for (double alpha : alphas) {
        const KernelSpec spec{alpha, 1, {}};
        const double p0 = StableKernel(spec).value_at_origin();
        const auto u = solve_by_convolution(u0, PowerTail::zero(), spec, {4.0, 16.0});
        for (std::size_t k = 0; k < u.times.size(); ++k) {
            const double t = u.times[k];
            const double ratio = u.frames[k].values[mid] * std::pow(t, 1.0 / alpha) / p0;
            out.push_back(CheckReport::judge("self_similar/" + alpha_tag(alpha) + ",t=" + format_double(t),
                                             std::abs(ratio - 1.0), 0.05)
                              .note("ratio", ratio));
        }
    }
    return out;
}

std::vector<CheckReport> suite_monotone_truncation(const SuiteConfig &cfg) {
    std::vector<CheckReport> out;
    const auto tp = TrigPolynomial::random_nonnegative(cfg.seed, 6, 2.0 * pi);
    const double L = 8.0 * pi, t = 1.0;
    const std::size_t n = 1024;
    ConvolutionOptions opts;
    opts.sampling = KernelSampling::Point;
    for (double alpha : alphas) {
        const KernelSpec spec{alpha, 1, {}};
        const auto full = solve_by_convolution(GridFunction::periodic_box(tp, n, L), std::nullopt, spec, {t}, opts);
        std::vector<GridFunction> trunc;
        for (double R : {5.0, 10.0, 20.0}) {
            auto d = GridFunction::periodic_box([&](double x) { return linear_cutoff(x, R) * tp(x); }, n, L);
            d.periodic = false;
            trunc.push_back(solve_by_convolution(d, PowerTail::zero(), spec, {t}, opts).frames[0]);
        }
        trunc.push_back(full.frames[0]);
        double violation = -std::numeric_limits<double>::infinity();
        std::vector<double> dist(3, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(full.frames[0].coordinate(i)) > 5.0) continue;
            for (std::size_t j = 0; j + 1 < trunc.size(); ++j) {
                violation = std::max(violation, trunc[j].values[i] - trunc[j + 1].values[i]);
                dist[j] = std::max(dist[j], full.frames[0].values[i] - trunc[j].values[i]);
            }
        }
        const std::string tag = alpha_tag(alpha);
        out.push_back(CheckReport::judge("monotone_truncation/" + tag, violation, 1e-12));
        out.push_back(CheckReport::judge("monotone_truncation_convergence/" + tag,
                                         std::max(dist[1] / dist[0], dist[2] / dist[1]), 1.0)
                          .note("distance_R=5", dist[0])
                          .note("distance_R=10", dist[1])
                          .note("distance_R=20", dist[2]));
    }
    return out;
}

std::vector<CheckReport> suite_sandwich(const SuiteConfig &) {
    std::vector<CheckReport> out;
    const auto grid = RadialGrid::uniform(40.0, 401);
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
        const auto s = sandwich_constant(KernelSpec{alpha, 1, {}}, grid);
        double bad;
        if (alpha < 2.0) bad = (s.lower > 0.0 && s.lower <= s.upper && std::isfinite(s.upper) && !s.lower_degenerate) ? 0.0 : 1.0;
        else bad = s.lower_degenerate ? 0.0 : 1.0;
        out.push_back(CheckReport::judge("sandwich/" + alpha_tag(alpha), bad, 0.0)
                          .note("lower", s.lower)
                          .note("upper", s.upper)
                          .note("lower_degenerate", std::string(s.lower_degenerate ? "true" : "false")));
    }
    return out;
}

std::vector<CheckReport> suite_tail_bound(const SuiteConfig &) {
    std::vector<CheckReport> out;
    {
        RadialGrid g;
        for (int i = 0; i <= 400; ++i) g.radii.push_back(10.0 * std::pow(100.0, i / 400.0));
        const auto r = tail_bound_check(KernelSpec{1.0, 1, {}}, 1.0, 10.0, g);
        out.push_back(CheckReport::judge("tail_bound/alpha=1", std::abs(r.metric - 1.0 / pi) * pi, 1e-4).note("C", r.metric));
    }
    {
        auto grid = [](int points) {
            RadialGrid g;
            for (int i = 0; i <= points; ++i) g.radii.push_back(5.0 * std::pow(40.0, double(i) / points));
            return g;
        };
        const KernelSpec spec{0.75, 1, {}};
        const double c1 = tail_bound_check(spec, 0.5, 5.0, grid(200)).metric;
        const double c2 = tail_bound_check(spec, 0.5, 5.0, grid(400)).metric;
        out.push_back(CheckReport::judge("tail_bound/alpha=0.75", std::abs(c2 - c1) / c2, 0.02).note("C", c2));
    }
    return out;
}

using SuiteFn = std::vector<CheckReport> (*)(const SuiteConfig &);

const std::vector<std::pair<std::string, SuiteFn>> &registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> r{
        {"kernel_closed_form", suite_kernel_closed_form},
        {"normalization", suite_normalization},
        {"constant", suite_constant},
        {"semigroup", suite_semigroup},
        {"operator_crosscheck", suite_operator_crosscheck},
        {"product_rule", suite_product_rule},
        {"widder", suite_widder},
        {"lower_bound", suite_lower_bound},
        {"maximum_principle", suite_maximum_principle},
        {"weak_form", suite_weak_form},
        {"enthalpy", suite_enthalpy},
        {"membership", suite_membership},
        {"growth_bound", suite_growth_bound},
        {"self_similar", suite_self_similar},
        {"monotone_truncation", suite_monotone_truncation},
        {"sandwich", suite_sandwich},
        {"tail_bound", suite_tail_bound},
    };
    return r;
}

} // namespace

double smooth_cutoff(double x, double R) {
    const double s = R - std::abs(x);
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

double linear_cutoff(double x, double R) { return std::clamp(R - std::abs(x), 0.0, 1.0); }

double bump(double x, double center, double radius) {
    const double z = (x - center) / radius;
    if (std::abs(z) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

CheckReport check_weak_form(const SpaceTimeField &u, const GridFunction &theta, const std::function<double(double)> &eta,
                            const std::function<double(double)> &eta_dot, double alpha, double tol) {
    u.validate();
    if (!u.initial) throw DomainError("check_weak_form: the t = 0 slice is required");
    if (!theta.same_geometry(*u.initial) || !theta.periodic) throw DomainError("check_weak_form: theta must share the periodic grid of u");
    const double dt = u.uniform_step();
    const auto times = u.all_times();
    const auto l_theta = frac_laplacian_spectral(theta, alpha);
    std::vector<double> g(times.size()), a(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        a[k] = space_integral(u.slice(k), theta);
        g[k] = -eta_dot(times[k]) * a[k] + eta(times[k]) * space_integral(u.slice(k), l_theta);
    }
    const double lhs = time_integral(g, dt);
    const double boundary = eta(times.back()) * a.back() - eta(0.0) * a.front();
    auto r = CheckReport::judge("weak_form", std::abs(lhs + boundary), tol);
    r.note("lhs", lhs).note("boundary", boundary).note("T_prime", times.back());
    return r;
}

CheckReport check_lower_bound(const SpaceTimeField &u, const KernelSpec &spec, double tol) {
    u.validate();
    if (!u.initial) throw DomainError("check_lower_bound: the t = 0 slice is required");
    for (std::size_t k = 0; k < u.slice_count(); ++k)
        for (double v : u.slice(k).values)
            if (v < 0.0) throw DomainError("check_lower_bound: u must be nonnegative");
    const auto tail = u.initial->periodic ? std::optional<PowerTail>{} : std::optional<PowerTail>{PowerTail::zero()};
    const auto conv = solve_by_convolution(*u.initial, tail, spec, u.times);
    double worst = 0.0, x_at = 0.0, t_at = 0.0;
    for (std::size_t k = 0; k < u.frames.size(); ++k)
        for (std::size_t i = 0; i < u.frames[k].size(); ++i) {
            const double d = conv.frames[k].values[i] - u.frames[k].values[i];
            if (d > worst) worst = d, x_at = u.frames[k].coordinate(i), t_at = u.times[k];
        }
    auto r = CheckReport::judge("lower_bound", worst, tol);
    r.note("x_at_max", x_at).note("t_at_max", t_at);
    return r;
}

CheckReport check_representation(const GridFunction &u0, double alpha, const std::vector<double> &times, double tol) {
    const KernelSpec spec{alpha, 1, {}};
    const auto s = solve_by_spectral_stepping(u0, alpha, times);
    const auto c = solve_by_convolution(u0, std::nullopt, spec, times);
    double below = 0.0;
    for (std::size_t k = 0; k < s.frames.size(); ++k)
        for (std::size_t i = 0; i < u0.size(); ++i) below = std::max(below, c.frames[k].values[i] - s.frames[k].values[i]);
    auto r = CheckReport::judge("representation", max_distance(s, c), tol);
    r.note("lower_bound_violation", below).note("n", double(u0.size()));
    return r;
}

CheckReport check_membership(const SpaceTimeField &u, double alpha, const std::vector<std::optional<PowerTail>> &tails,
                             double bound) {
    u.validate();
    if (!tails.empty() && tails.size() != u.frames.size()) throw ConfigError("check_membership: one tail model per frame");
    std::vector<double> norms;
    for (std::size_t k = 0; k < u.frames.size(); ++k) {
        const auto w = weighted_norm(u.frames[k], tails.empty() ? std::nullopt : tails[k], alpha);
        if (!w.finite) {
            CheckReport r;
            r.name = "membership";
            r.metric = std::numeric_limits<double>::infinity();
            r.tolerance = bound;
            r.note("diagnostic", w.diagnostic).note("t", u.times[k]);
            return r;
        }
        norms.push_back(w.value);
    }
    double integral = 0.0;
    for (std::size_t k = 1; k < norms.size(); ++k) integral += 0.5 * (norms[k] + norms[k - 1]) * (u.times[k] - u.times[k - 1]);
    const double worst = norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
    auto r = CheckReport::judge("membership", worst, bound);
    r.note("time_integral", integral);
    return r;
}

CheckReport check_growth_bound(const SpaceTimeField &u, double alpha, const GrowthOptions &opts) {
    u.validate();
    const GridFunction &ref = u.frames.empty() ? u.slice(0) : u.frames.front();
    if (!ref.periodic) throw DomainError("check_growth_bound: periodic fields only");
    const double center = ref.origin + 0.5 * ref.extent();
    const double half = 0.25 * ref.extent();
    auto exempt = [&](double x) { return opts.exempt && x > opts.exempt->first && x < opts.exempt->second; };
    double hyp = -std::numeric_limits<double>::infinity(), worst = 0.0, c_max = 0.0;
    for (const auto &frame : u.frames) {
        const auto lu = frac_laplacian_spectral(frame, alpha);
        double c_full = 0.0, c_half = 0.0;
        for (std::size_t i = 0; i < frame.size(); ++i) {
            const double x = frame.coordinate(i);
            if (!exempt(x)) hyp = std::max(hyp, lu.values[i]);
            const double q = frame.values[i] / (1.0 + std::pow(std::abs(x), 1.0 + alpha));
            c_full = std::max(c_full, q);
            if (std::abs(x - center) <= half) c_half = std::max(c_half, q);
        }
        c_max = std::max(c_max, c_full);
        if (c_full > 0.0) worst = std::max(worst, (c_full - c_half) / c_full);
    }
    if (hyp > opts.hypothesis_tol)
        return CheckReport::hypothesis_failed("growth_bound", hyp, opts.hypothesis_tol, "(-Delta)^(alpha/2) u <= 0");
    auto r = CheckReport::judge("growth_bound", worst, opts.stability_tol);
    r.note("C_max", c_max).note("subharmonic_max", hyp);
    return r;
}

const std::vector<std::string> &registered_suites() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto &[name, fn] : registry()) v.push_back(name);
        return v;
    }();
    return names;
}

std::vector<CheckReport> run_suite(const std::vector<std::string> &names, const SuiteConfig &cfg) {
    std::vector<std::string> expanded;
    for (const auto &n : names) {
        if (n == "all") expanded.insert(expanded.end(), registered_suites().begin(), registered_suites().end());
        else expanded.push_back(n);
    }
    std::vector<CheckReport> out;
    for (const auto &n : expanded) {
        auto it = std::find_if(registry().begin(), registry().end(), [&](const auto &e) { return e.first == n; });
        if (it == registry().end()) throw ConfigError("unknown suite: " + n);
        try {
            auto reports = it->second(cfg);
            out.insert(out.end(), std::make_move_iterator(reports.begin()), std::make_move_iterator(reports.end()));
        } catch (const NumericalError &e) {
            CheckReport r;
            r.name = n;
            r.metric = e.achieved_error();
            r.status = CheckStatus::NotConverged;
            r.note("error", std::string(e.what())).note("best_estimate", e.best_estimate());
            out.push_back(r);
        }
    }
    return out;
}

} // namespace fracheat
