#include "fracheat/nonlocal_operator.hpp"

#include "fracheat/errors.hpp"
#include "fracheat/fft.hpp"
#include "fracheat/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace fracheat {

namespace {

using numerics::pi;

void check_alpha_open(double alpha, const char *who) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError(std::string(who) + ": alpha must lie in (0, 2)");
}

// 1 - (spherical average of cos xi_1 over radius rho), stable near 0
double one_minus_average(int n, double rho) {
    const double r2 = rho * rho;
    if (n == 1) {
        const double s = std::sin(0.5 * rho);
        return 2.0 * s * s;
    }
    if (rho > 0.5) return n == 2 ? 1.0 - std::cyl_bessel_j(0.0, rho) : 1.0 - std::sin(rho) / rho;
    // alternating Taylor series
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 20; ++k) {
        term *= n == 2 ? -r2 / (4.0 * k * k) : -r2 / ((2.0 * k) * (2.0 * k + 1.0));
        sum -= term;
    }
    return sum;
}

double average(int n, double rho) {
    return n == 1 ? std::cos(rho) : (n == 2 ? std::cyl_bessel_j(0.0, rho) : std::sin(rho) / rho);
}

// integral_L^inf m(x + h) h^(-1-alpha) dh for m(y) = sum A |y|^-e on one side;
// sign = +1 for y = x + h, -1 for y = x - h.
double tail_outer(const std::vector<PowerTail::Term> &terms, double x, double L, double alpha, double sign) {
    const double xs = sign * x; // |x +- h| = h (1 + xs / h)
    double total = 0.0;
    for (const auto &t : terms) {
        if (t.amplitude == 0.0) continue;
        if (!(t.exponent + alpha > 0.0))
            throw ConfigError("principal value: tail model grows too fast (not in L^(alpha/2))");
        double binom = 1.0, xpow = 1.0, sum = 0.0;
        for (int j = 0; j < 400; ++j) {
            const double p = t.exponent + j + alpha;
            const double term = binom * xpow * std::pow(L, -p) / p;
            sum += term;
            if (j > 2 && std::abs(term) < 1e-18 * std::abs(sum)) break;
            binom *= (-t.exponent - j) / (j + 1.0);
            xpow *= xs;
        }
        total += t.amplitude * sum;
    }
    return total;
}

// integral_L^inf [m(x+h) + m(x-h)] h^(-1-alpha) dh beyond the outer radius
double outer_pair(const FieldModel &m, double x, double L, double alpha, double decay_exponent) {
    if (m.tail) return tail_outer(m.tail->right, x, L, alpha, 1.0) + tail_outer(m.tail->left, x, L, alpha, -1.0);
    if (decay_exponent > 0.0) {
        // extrapolate f(y) ~ f(y_edge) (y_edge / y)^q beyond the outer radius
        const double yr = x + L, yl = x - L;
        const std::vector<PowerTail::Term> right{{m.f(yr) * std::pow(yr, decay_exponent), decay_exponent}};
        const std::vector<PowerTail::Term> left{{m.f(yl) * std::pow(-yl, decay_exponent), decay_exponent}};
        return tail_outer(right, x, L, alpha, 1.0) + tail_outer(left, x, L, alpha, -1.0);
    }
    throw ConfigError("principal value: non-periodic field needs a tail model or tail_decay_exponent");
}

struct Geometry {
    double L = 0.0;
    std::optional<double> period;
};

Geometry outer_geometry(const FieldModel &f, double x, const PVConfig &cfg) {
    Geometry g;
    if (f.period) {
        // images beyond L = K p are summed exactly, so the smallest K >= 1/p is enough
        g.period = f.period;
        g.L = *f.period * std::max(1.0, std::ceil(1.0 / *f.period));
        return g;
    }
    g.L = std::max({cfg.outer_radius, 2.0 * std::abs(x) + 1.0});
    if (std::isfinite(f.window_hi)) g.L = std::max(g.L, f.window_hi - x);
    if (std::isfinite(f.window_lo)) g.L = std::max(g.L, x - f.window_lo);
    return g;
}

// Extrapolated integral_0^inf E(h) h^(-1-alpha) dh where E(h) = O(h^2) is even
// in the pairing sense. `outer` supplies the part beyond geo.L.
template <class E, class Outer>
double extrapolated_integral(E &&e, const Geometry &geo, double alpha, const PVConfig &cfg, Outer &&outer,
                             const char *who) {
    cfg.validate();
    auto integrand = [&](double h) { return e(h) * std::pow(h, -1.0 - alpha); };
    const auto &eps = cfg.eps_schedule;
    const double L = geo.L;
    double common = 0.0;
    for (double a = eps.front(), b = std::min(2.0 * a, L); a < L; a = b, b = std::min(2.0 * b, L)) {
        auto q = numerics::integrate_adaptive(integrand, a, b, cfg.quad_tol, 1e-15, 2000);
        common += q.value;
    }
    double far = 0.0;
    if (geo.period) {
        const double p = *geo.period;
        const double K = std::round(L / p);
        auto images = [&](double s) {
            return e(s) * std::pow(p, -1.0 - alpha) * numerics::hurwitz_zeta(1.0 + alpha, K + s / p);
        };
        far = numerics::integrate_adaptive(images, 0.0, p, cfg.quad_tol, 1e-15, 2000).value;
    } else {
        far = outer(L);
    }
    std::vector<double> values;
    double middle = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (i > 0) middle += numerics::integrate_adaptive(integrand, eps[i], eps[i - 1], cfg.quad_tol, 1e-15, 2000).value;
        const double inner = e(eps[i]) * std::pow(eps[i], -alpha) / (2.0 - alpha);
        values.push_back(inner + middle + common + far);
    }
    std::vector<double> exponents;
    for (int j = 0; j < cfg.richardson_order; ++j) exponents.push_back(4.0 + 2.0 * j - alpha);
    const auto diag = numerics::richardson_diagonal(eps, values, exponents);
    const double best = diag.back();
    if (diag.size() >= 2) {
        const double diff = std::abs(diag.back() - diag[diag.size() - 2]);
        if (!(diff < std::max(cfg.rel_tol * std::abs(best), cfg.abs_tol)))
            throw PvNotConverged(std::string(who) + ": cutoff extrapolants are not Cauchy", best, diff);
    }
    return best;
}

} // namespace

PVConfig PVConfig::geometric(double first, double ratio, std::size_t levels) {
    if (!(first > 0.0) || !(ratio > 0.0 && ratio < 1.0) || levels == 0)
        throw ConfigError("PVConfig::geometric: need first > 0, 0 < ratio < 1, levels >= 1");
    PVConfig c;
    c.eps_schedule.clear();
    for (std::size_t i = 0; i < levels; ++i) c.eps_schedule.push_back(first * std::pow(ratio, static_cast<double>(i)));
    c.outer_radius = std::max(c.outer_radius, 1.0 / c.eps_schedule.back());
    return c;
}

void PVConfig::validate() const {
    if (eps_schedule.empty()) throw ConfigError("PVConfig: empty eps schedule");
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
        if (!(eps_schedule[i] > 0.0)) throw ConfigError("PVConfig: cutoffs must be positive");
        if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))
            throw ConfigError("PVConfig: cutoffs must be strictly decreasing");
    }
    if (!(outer_radius >= 1.0 / eps_schedule.back())) throw ConfigError("PVConfig: outer_radius must be >= 1/min(eps)");
    if (richardson_order < 0) throw ConfigError("PVConfig: richardson_order must be >= 0");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(quad_tol > 0.0)) throw ConfigError("PVConfig: tolerances must be positive");
}

NormConstant normalization_constant(double alpha, int dim, int budget) {
    check_alpha_open(alpha, "normalization_constant");
    if (dim < 1 || dim > 3) throw DomainError("normalization_constant: dim must be 1, 2 or 3");
    if (budget < 1) throw DomainError("normalization_constant: budget must be positive");
    // head: rho = u^m with m = 3/(2 - alpha) turns rho^(1-alpha) d rho into m u^2 du
    const double m = 3.0 / (2.0 - alpha);
    auto head_integrand = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double rho = std::pow(u, m);
        if (rho == 0.0) return 0.0;
        return one_minus_average(dim, rho) / (rho * rho) * m * u * u;
    };
    double head = 0.0, head_err = 0.0;
    for (int i = 0; i < budget; ++i) {
        const auto q = numerics::gauss_kronrod15(head_integrand, static_cast<double>(i) / budget,
                                                 static_cast<double>(i + 1) / budget);
        head += q.value;
        head_err += q.error;
    }
    // tail: integral_1^inf (1 - avg) rho^(-1-alpha) = 1/alpha - integral_1^inf avg rho^(-1-alpha)
    auto tail_integrand = [&](double rho) { return rho < 1.0 ? 0.0 : average(dim, rho) * std::pow(rho, -1.0 - alpha); };
    std::function<double(int)> zero;
    if (dim == 1) zero = [](int k) { return (k - 0.5) * pi; };
    else if (dim == 2) zero = [](int k) { return numerics::bessel_j0_zero(k); };
    else zero = [](int k) { return k * pi; };
    numerics::OscillatoryPolicy policy;
    policy.abs_tol = 1e-14;
    policy.max_segments = 20000;
    const auto tail = numerics::integrate_oscillatory(tail_integrand, zero, 1.0,
                                                      std::numeric_limits<double>::infinity(), policy);
    const double sphere = dim == 1 ? 2.0 : (dim == 2 ? 2.0 * pi : 4.0 * pi);
    NormConstant c;
    c.alpha = alpha;
    c.dim = dim;
    c.integral = sphere * (head + 1.0 / alpha - tail.value);
    const double err = sphere * (head_err + tail.error);
    c.value = 1.0 / c.integral;
    c.quad_error = err / (c.integral * c.integral);
    if (!tail.converged || !(c.integral > 0.0))
        throw AccuracyNotReached("normalization_constant: oscillatory tail did not converge", c.value, c.quad_error);
    return c;
}

double normalization_constant_closed_form(double alpha, int dim) {
    check_alpha_open(alpha, "normalization_constant_closed_form");
    return std::pow(2.0, alpha) * std::tgamma(0.5 * (dim + alpha)) /
           (std::pow(pi, 0.5 * dim) * std::abs(std::tgamma(-0.5 * alpha)));
}

double frac_laplacian_pv(const FieldModel &f, double x, const PVConfig &cfg, const NormConstant &norm) {
    check_alpha_open(norm.alpha, "frac_laplacian_pv");
    if (norm.dim != 1) throw DomainError("frac_laplacian_pv: only n = 1 is supported");
    const double alpha = norm.alpha;
    const double fx = f(x);
    auto d = [&](double h) { return 2.0 * fx - f(x + h) - f(x - h); };
    const Geometry geo = outer_geometry(f, x, cfg);
    auto outer = [&](double L) {
        return 2.0 * fx * std::pow(L, -alpha) / alpha - outer_pair(f, x, L, alpha, cfg.tail_decay_exponent);
    };
    return norm.value * extrapolated_integral(d, geo, alpha, cfg, outer, "frac_laplacian_pv");
}

double frac_laplacian_pv_coupled(const FieldModel &f, double x, double eps, const NormConstant &norm) {
    check_alpha_open(norm.alpha, "frac_laplacian_pv_coupled");
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("frac_laplacian_pv_coupled: eps must lie in (0, 1)");
    const double fx = f(x);
    auto integrand = [&](double h) { return (2.0 * fx - f(x + h) - f(x - h)) * std::pow(h, -1.0 - norm.alpha); };
    double sum = 0.0;
    const double hi = 1.0 / eps;
    for (double a = eps, b = std::min(2.0 * a, hi); a < hi; a = b, b = std::min(2.0 * b, hi))
        sum += numerics::integrate_adaptive(integrand, a, b, 1e-13, 1e-15, 2000).value;
    return norm.value * sum;
}

GridFunction frac_laplacian_spectral(const GridFunction &f, double alpha) {
    if (!f.periodic) throw DomainError("frac_laplacian_spectral: input must be periodic");
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("frac_laplacian_spectral: alpha must lie in (0, 2]");
    f.validate();
    const double dk = 2.0 * pi / f.extent();
    auto out = fft::apply_multiplier(f.values, [&](std::size_t k) { return std::pow(dk * static_cast<double>(k), alpha); });
    return {std::move(out), f.spacing, f.origin, true};
}

double bilinear_form(const FieldModel &f, const FieldModel &g, double x, const PVConfig &cfg,
                     const NormConstant &norm) {
    check_alpha_open(norm.alpha, "bilinear_form");
    if (norm.dim != 1) throw DomainError("bilinear_form: only n = 1 is supported");
    if (f.period.has_value() != g.period.has_value() || (f.period && *f.period != *g.period))
        throw ConfigError("bilinear_form: f and g must share periodicity");
    const double alpha = norm.alpha;
    const double fx = f(x), gx = g(x);
    auto e = [&](double h) {
        return (fx - f(x + h)) * (gx - g(x + h)) + (fx - f(x - h)) * (gx - g(x - h));
    };
    Geometry geo = outer_geometry(f, x, cfg);
    geo.L = std::max(geo.L, outer_geometry(g, x, cfg).L);
    auto outer = [&](double L) {
        FieldModel fg = FieldModel::analytic([&](double y) { return f(y) * g(y); });
        if (f.tail && g.tail) fg.tail = f.tail->product(*g.tail);
        else if (f.tail || g.tail) fg.tail = PowerTail::zero(); // one factor vanishes beyond its window
        return 2.0 * fx * gx * std::pow(L, -alpha) / alpha - fx * outer_pair(g, x, L, alpha, cfg.tail_decay_exponent) -
               gx * outer_pair(f, x, L, alpha, cfg.tail_decay_exponent) +
               outer_pair(fg, x, L, alpha, cfg.tail_decay_exponent > 0 ? 2.0 * cfg.tail_decay_exponent : 0.0);
    };
    return norm.value * extrapolated_integral(e, geo, alpha, cfg, outer, "bilinear_form");
}

PeriodicPvStencil::PeriodicPvStencil(double alpha, std::size_t n, double spacing) : alpha_(alpha), spacing_(spacing) {
    check_alpha_open(alpha, "PeriodicPvStencil");
    if (n < 16 || n % 2 != 0) throw DomainError("PeriodicPvStencil: need an even grid of at least 16 points");
    if (!(spacing > 0.0)) throw DomainError("PeriodicPvStencil: spacing must be positive");
    const double h = spacing;
    const double p = h * static_cast<double>(n);
    const auto N = static_cast<long>(n);
    // smooth part of the periodized kernel: images m != 0
    auto images = [&](double s) {
        return std::pow(p, -1.0 - alpha) *
               (numerics::hurwitz_zeta(1.0 + alpha, 1.0 + s / p) + numerics::hurwitz_zeta(1.0 + alpha, 1.0 - s / p));
    };
    auto kernel = [&](double s) { return std::pow(s, -1.0 - alpha) + images(s); };
    std::vector<double> w(n, 0.0);
    auto add = [&](long offset, double value) { w[static_cast<std::size_t>(((offset % N) + N) % N)] += value; };

    // near cell [0, 3h]: exact degree-6 interpolant through offsets -3..3.
    // c_k = sum_j inv[k][j] f_j / h^k; only even k enter D(s) = -2 sum c_k s^k.
    constexpr int m = 7;
    std::array<std::array<double, m>, m> a{}, inv{};
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            a[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = std::pow(j - 3.0, k);
            inv[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = j == k ? 1.0 : 0.0;
        }
    for (int c = 0; c < m; ++c) { // Gauss-Jordan with partial pivoting, a * X = I
        int piv = c;
        for (int r = c + 1; r < m; ++r)
            if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) >
                std::abs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)]))
                piv = r;
        std::swap(a[static_cast<std::size_t>(c)], a[static_cast<std::size_t>(piv)]);
        std::swap(inv[static_cast<std::size_t>(c)], inv[static_cast<std::size_t>(piv)]);
        const double d = a[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        for (int k = 0; k < m; ++k) {
            a[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)] /= d;
            inv[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)] /= d;
        }
        for (int r = 0; r < m; ++r) {
            if (r == c) continue;
            const double fct = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            for (int k = 0; k < m; ++k) {
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -= fct * a[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
                inv[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -= fct * inv[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
            }
        }
    }
    // a was the matrix V[j][k] = (j-3)^k mapping coefficients to values, so
    // coefficients = V^-1 values: c_k = sum_j inv[k][j] f_{j-3}
    const double near_end = 3.0 * h;
    for (int k = 2; k <= 6; k += 2) {
        const double moment = std::pow(near_end, k - alpha) / (k - alpha) +
                              numerics::gauss_legendre_integrate([&](double s) { return std::pow(s, k) * images(s); },
                                                                 0.0, near_end, 20);
        for (int j = 0; j < m; ++j)
            add(j - 3, -2.0 * inv[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] * moment / std::pow(h, k));
    }
    // far cells [c h, (c+1) h], c = 3 .. n/2 - 1, 6-point Lagrange in the cell
    const auto &rule = numerics::gauss_legendre(10);
    for (long c = 3; c < N / 2; ++c) {
        for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
            const double s = h * (static_cast<double>(c) + 0.5 + 0.5 * rule.nodes[g]);
            const double wk = 0.5 * h * rule.weights[g] * kernel(s);
            const double tau = s / h - static_cast<double>(c - 2); // local coordinate on nodes 0..5
            add(0, 2.0 * wk);
            for (int l = 0; l < 6; ++l) {
                double lag = 1.0;
                for (int q = 0; q < 6; ++q)
                    if (q != l) lag *= (tau - q) / static_cast<double>(l - q);
                add(c - 2 + l, -wk * lag);
                add(-(c - 2 + l), -wk * lag);
            }
        }
    }
    const double cst = normalization_constant(alpha, 1).value;
    for (auto &v : w) v *= cst;
    double rest = 0.0;
    for (std::size_t j = 1; j < n; ++j) rest += w[j];
    w[0] = -rest; // constants are annihilated exactly
    weights_ = std::move(w);
}

GridFunction PeriodicPvStencil::apply(const GridFunction &f) const {
    if (!f.periodic || f.size() != weights_.size() || std::abs(f.spacing - spacing_) > 1e-12 * spacing_)
        throw DomainError("PeriodicPvStencil::apply: grid does not match the stencil");
    return {fft::circular_convolve(f.values, weights_), f.spacing, f.origin, true};
}

namespace {

// integral_R^inf |sum A y^-e| / (1 + y^q) dy, assuming the tail keeps one sign beyond R
std::optional<double> tail_weighted(const std::vector<PowerTail::Term> &terms, double R, double q) {
    double any = 0.0;
    for (const auto &t : terms) {
        if (t.amplitude == 0.0) continue;
        any += std::abs(t.amplitude);
        if (!(t.exponent + q > 1.0)) return std::nullopt;
    }
    if (any == 0.0) return 0.0;
    double total = 0.0;
    double start = R;
    if (R < 2.0) {
        auto f = [&](double y) {
            double s = 0.0;
            for (const auto &t : terms) s += t.amplitude * std::pow(y, -t.exponent);
            return std::abs(s) / (1.0 + std::pow(y, q));
        };
        total += numerics::integrate_adaptive(f, R, 2.0, 1e-14, 1e-13, 2000).value;
        start = 2.0;
    }
    // 1/(1 + y^q) = sum_k (-1)^k y^(-q(k+1)) for y > 1
    double signed_sum = 0.0;
    for (const auto &t : terms) {
        for (int k = 0; k < 400; ++k) {
            const double p = t.exponent + q * (k + 1) - 1.0;
            const double term = (k % 2 == 0 ? 1.0 : -1.0) * t.amplitude * std::pow(start, -p) / p;
            signed_sum += term;
            if (std::abs(term) < 1e-18 * std::abs(signed_sum)) break;
        }
    }
    return total + std::abs(signed_sum);
}

// sum over m of 1 / (1 + |s + m p|^q) for s in [0, p)
double periodized_weight(double s, double p, double q) {
    const long direct = std::max(1L, static_cast<long>(std::ceil(30.0 / p)));
    double w = 0.0;
    for (long m = -direct; m <= direct; ++m) w += 1.0 / (1.0 + std::pow(std::abs(s + static_cast<double>(m) * p), q));
    const double base = static_cast<double>(direct + 1);
    for (int k = 0; k < 200; ++k) {
        const double e = q * (k + 1);
        const double term = (k % 2 == 0 ? 1.0 : -1.0) * std::pow(p, -e) *
                            (numerics::hurwitz_zeta(e, base + s / p) + numerics::hurwitz_zeta(e, base - s / p));
        w += term;
        if (std::abs(term) < 1e-18 * w) break;
    }
    return w;
}

WeightedNorm divergent(const std::string &why) { return {std::numeric_limits<double>::infinity(), false, why}; }

} // namespace

WeightedNorm weighted_norm(const GridFunction &f, const std::optional<PowerTail> &tail, double alpha, int dim) {
    check_alpha_open(alpha, "weighted_norm");
    if (dim != 1) throw DomainError("weighted_norm: only n = 1 is supported");
    f.validate();
    const double q = dim + alpha;
    WeightedNorm out;
    if (f.size() == 0) return out;
    if (f.periodic) {
        const double p = f.extent();
        double s = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            double y = std::fmod(f.coordinate(i), p);
            if (y < 0.0) y += p;
            s += std::abs(f.values[i]) * periodized_weight(y, p, q);
        }
        out.value = s * f.spacing;
        return out;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double wt = (i == 0 || i + 1 == f.size()) ? 0.5 : 1.0;
        s += wt * std::abs(f.values[i]) / (1.0 + std::pow(std::abs(f.coordinate(i)), q));
    }
    out.value = s * f.spacing;
    if (tail && !tail->empty()) {
        const double hi = f.coordinate(f.size() - 1), lo = f.origin;
        if (!(hi > 0.0 && lo < 0.0)) throw ConfigError("weighted_norm: a tail model needs a grid straddling 0");
        auto right = tail_weighted(tail->right, hi, q);
        auto left = tail_weighted(tail->left, -lo, q);
        if (!right || !left) return divergent("not-in-L^(alpha/2): tail decays no faster than |y|^-alpha");
        out.value += *right + *left;
    }
    return out;
}

WeightedNorm weighted_norm(const FieldModel &f, double alpha, int dim) {
    check_alpha_open(alpha, "weighted_norm");
    if (dim != 1) throw DomainError("weighted_norm: only n = 1 is supported");
    const double q = dim + alpha;
    WeightedNorm out;
    if (f.period) {
        const double p = *f.period;
        auto g = [&](double y) { return std::abs(f(y)) * periodized_weight(y, p, q); };
        for (int i = 0; i < 16; ++i)
            out.value += numerics::integrate_adaptive(g, p * i / 16.0, p * (i + 1) / 16.0, 1e-14, 1e-13, 1000).value;
        return out;
    }
    double lo = f.window_lo, hi = f.window_hi;
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        if (!f.tail) throw ConfigError("weighted_norm: unbounded window needs a tail model");
        lo = std::isfinite(lo) ? lo : -64.0;
        hi = std::isfinite(hi) ? hi : 64.0;
    }
    auto g = [&](double y) { return std::abs(f(y)) / (1.0 + std::pow(std::abs(y), q)); };
    const int pieces = 64;
    for (int i = 0; i < pieces; ++i)
        out.value += numerics::integrate_adaptive(g, lo + (hi - lo) * i / pieces, lo + (hi - lo) * (i + 1) / pieces,
                                                  1e-14, 1e-13, 1000)
                         .value;
    if (f.tail && !f.tail->empty()) {
        if (!(hi > 0.0 && lo < 0.0)) throw ConfigError("weighted_norm: a tail model needs a window straddling 0");
        auto right = tail_weighted(f.tail->right, hi, q);
        auto left = tail_weighted(f.tail->left, -lo, q);
        if (!right || !left) return divergent("not-in-L^(alpha/2): tail decays no faster than |y|^-alpha");
        out.value += *right + *left;
    }
    return out;
}

} // namespace fracheat
