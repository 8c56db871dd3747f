#include "fracheat/evolution.hpp"

#include "fracheat/errors.hpp"
#include "fracheat/fft.hpp"
#include "fracheat/nonlocal_operator.hpp"
#include "fracheat/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracheat {

namespace {

using numerics::pi;

void check_times(const std::vector<double> &times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0) || !std::isfinite(times[i])) throw DomainError("times must be positive and finite");
        if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("times must be strictly increasing");
    }
}

// mass of P_t beyond distance d (d may be negative)
double kernel_tail_mass(const StableKernel &k, double t, double d) {
    const double scale = std::pow(t, 1.0 / k.spec().alpha);
    if (d >= 0.0) return k.tail_mass_1d(d / scale).value;
    return 1.0 - k.tail_mass_1d(-d / scale).value;
}

bool use_points(KernelSampling s, double alpha, double t, double h, double alias_threshold) {
    if (s == KernelSampling::Point) return true;
    if (s == KernelSampling::CellAverage) return false;
    return std::exp(-t * std::pow(2.0 * pi / h, alpha)) <= alias_threshold;
}

// sum_(m >= 1) P_t(m p + s) + P_t(m p - s) for |s| <= p/2
double image_sum(const StableKernel &k, double t, double p, double s) {
    const double alpha = k.spec().alpha;
    double direct = 0.0;
    long m = 1;
    if (alpha >= 2.0) {
        for (; m < 100000; ++m) {
            const double a = k.at(m * p - s, t).value + k.at(m * p + s, t).value;
            direct += a;
            if (a < 1e-300 || a < 1e-18 * direct) break;
        }
        return direct;
    }
    // direct images until the far series is certified at the nearest remaining one, (m - 1/2) p away
    while (std::isnan(k.far_field((m - 0.5) * p, t, 1e-17 * k.at((m - 0.5) * p, t).value))) {
        direct += k.at(m * p - s, t).value + k.at(m * p + s, t).value;
        if (++m > 1000) throw AccuracyNotReached("periodized kernel: far field never certified", direct, 0.0);
    }
    const auto a = k.far_field_coefficients();
    const double q = static_cast<double>(m);
    // same stopping rule as StableKernel::far_field: a few isolated rises are tolerated
    double series = 0.0, prev = std::numeric_limits<double>::infinity();
    int rising = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        const double kk = static_cast<double>(i + 1);
        const double e = 1.0 + alpha * kk;
        const double term = a[i] * std::pow(t, kk) * std::pow(p, -e) *
                            (numerics::hurwitz_zeta(e, q + s / p) + numerics::hurwitz_zeta(e, q - s / p));
        const double mag = std::abs(term);
        if (mag > prev && ++rising > 2) break;
        if (mag <= prev) rising = 0;
        series += term;
        prev = mag;
        if (mag < 1e-18 * std::abs(series)) break;
    }
    return direct + series;
}

// weights for a linear (non-periodic) convolution, offsets 0..count-1
std::vector<double> linear_kernel_weights(const StableKernel &k, double t, std::size_t count, double h, bool points) {
    std::vector<double> w(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double s = h * static_cast<double>(j);
        if (points) w[j] = h * k.at(s, t).value;
        else if (j == 0) w[j] = 1.0 - 2.0 * kernel_tail_mass(k, t, 0.5 * h);
        else w[j] = kernel_tail_mass(k, t, s - 0.5 * h) - kernel_tail_mass(k, t, s + 0.5 * h);
    }
    return w;
}

// integral over the datum tail beyond the extended grid: right part y >= B and
// left part y <= A, with P_t from its far field
std::vector<double> analytic_remainder(const StableKernel &k, double t, const PowerTail &tail, double A, double B,
                                       const std::vector<double> &xs) {
    std::vector<double> out(xs.size(), 0.0);
    const double alpha = k.spec().alpha;
    if (alpha >= 2.0 || tail.empty()) return out;
    double xmax = 0.0;
    for (double x : xs) xmax = std::max(xmax, std::abs(x));
    const double r_min = std::min(B, -A) - xmax;
    if (!(r_min > 0.0) || std::isnan(k.far_field(r_min, t, 1e-16 * k.at(r_min, t).value)))
        throw ConfigError("solve_by_convolution: extension too short for the kernel far field");
    const auto a = k.far_field_coefficients();
    // sides: right edge B with (y - x), left edge |A| with (z + x), z = -y
    for (int side = 0; side < 2; ++side) {
        const auto &terms = side == 0 ? tail.right : tail.left;
        const double edge = side == 0 ? B : -A;
        const double xsign = side == 0 ? -1.0 : 1.0;
        for (const auto &term : terms) {
            if (term.amplitude == 0.0) continue;
            double prev = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] == 0.0) continue;
                const double kk = static_cast<double>(i + 1);
                const double beta = 1.0 + alpha * kk;
                if (!(beta + term.exponent - 1.0 > 0.0)) throw ConfigError("solve_by_convolution: datum tail not in L^(alpha/2)");
                const double size = std::abs(a[i]) * std::pow(t, kk) * std::pow(r_min, -alpha * kk);
                if (size > prev) break;
                prev = size;
                // coefficients c_j of sum_j c_j x^j
                std::vector<double> c;
                double binom = 1.0;
                for (int j = 0; j < 200; ++j) {
                    const double p = beta + j + term.exponent - 1.0;
                    const double cj = term.amplitude * a[i] * std::pow(t, kk) * binom * std::pow(xsign, j) *
                                      std::pow(edge, -p) / p;
                    c.push_back(cj);
                    if (j > 2 && std::abs(cj) * std::pow(xmax, j) < 1e-19 * std::abs(c.front())) break;
                    binom *= (-beta - j) / (j + 1.0);
                }
                for (std::size_t ix = 0; ix < xs.size(); ++ix) {
                    double acc = 0.0;
                    for (std::size_t j = c.size(); j-- > 0;) acc = acc * xs[ix] + c[j];
                    out[ix] += acc;
                }
                if (size < 1e-18) break;
            }
        }
    }
    return out;
}

} // namespace

void SpaceTimeField::validate() const {
    if (frames.size() != times.size()) throw DomainError("SpaceTimeField: frame count differs from time count");
    check_times(times);
    const GridFunction *ref = initial ? &*initial : (frames.empty() ? nullptr : &frames.front());
    if (!ref) return;
    for (const auto &f : frames) {
        f.validate();
        if (!f.same_geometry(*ref)) throw DomainError("SpaceTimeField: frames must share one grid");
    }
    if (initial) initial->validate();
}

std::vector<double> SpaceTimeField::all_times() const {
    std::vector<double> t;
    if (initial) t.push_back(0.0);
    t.insert(t.end(), times.begin(), times.end());
    return t;
}

const GridFunction &SpaceTimeField::slice(std::size_t k) const {
    if (initial) return k == 0 ? *initial : frames.at(k - 1);
    return frames.at(k);
}

double SpaceTimeField::uniform_step() const {
    const auto t = all_times();
    if (t.size() < 2) throw DomainError("SpaceTimeField: need at least two slices for a time step");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * dt) throw DomainError("SpaceTimeField: time steps are not uniform");
    return dt;
}

void Cylinder::validate() const {
    if (!(rho > 0.0) || !(T > 0.0)) throw DomainError("Cylinder: rho and T must be positive");
}

BoxGrid default_box(double alpha, double t_min, double t_max, double k_max, double period, double aliasing) {
    if (!(alpha > 0.0 && alpha <= 2.0) || !(t_min > 0.0) || !(t_max >= t_min) || !(period > 0.0) ||
        !(aliasing > 0.0 && aliasing < 1.0))
        throw DomainError("default_box: invalid parameters");
    BoxGrid g;
    const double half_period = 0.5 * period;
    g.half_width = std::ceil(80.0 * std::pow(t_max, 1.0 / alpha) / half_period) * half_period;
    const double xi_max = k_max + std::pow(std::log(1.0 / aliasing) / t_min, 1.0 / alpha);
    const double h = 2.0 * pi / xi_max;
    // multiples of 32 keep FFTW on small radices without the up-to-2x
    // overshoot of a power of two
    g.n = std::max<std::size_t>(64, 32 * static_cast<std::size_t>(std::ceil(2.0 * g.half_width / h / 32.0)));
    return g;
}

PowerTail kernel_tail(const StableKernel &kernel, double t, double r_min) {
    PowerTail tail;
    const double alpha = kernel.spec().alpha;
    if (alpha >= 2.0) return tail;
    const auto a = kernel.far_field_coefficients();
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        const double kk = static_cast<double>(i + 1);
        const double amp = a[i] * std::pow(t, kk);
        const double size = std::abs(amp) * std::pow(r_min, -alpha * kk);
        if (size > prev) break;
        prev = size;
        tail.right.push_back({amp, 1.0 + alpha * kk});
        if (size < 1e-18 * std::abs(tail.right.front().amplitude) * std::pow(r_min, -alpha)) break;
    }
    tail.left = tail.right;
    return tail;
}

std::vector<double> periodized_kernel_weights(const StableKernel &kernel, double t, std::size_t n, double h,
                                              KernelSampling sampling) {
    if (n < 2 || !(h > 0.0)) throw DomainError("periodized_kernel_weights: invalid grid");
    const double p = h * static_cast<double>(n);
    const double alpha = kernel.spec().alpha;
    const bool points = use_points(sampling, alpha, t, h, ConvolutionOptions{}.alias_threshold);
    std::vector<double> w(n, 0.0);
    for (std::size_t j = 0; j <= n / 2; ++j) {
        const double s = h * static_cast<double>(j);
        double v;
        if (points) {
            v = h * (image_sum(kernel, t, p, s) + kernel.at(s, t).value);
        } else {
            // images are smooth on the cell: 3-point Gauss-Legendre
            const double g = 0.5 * h * std::sqrt(0.6);
            v = h * (5.0 * image_sum(kernel, t, p, s - g) + 8.0 * image_sum(kernel, t, p, s) +
                     5.0 * image_sum(kernel, t, p, s + g)) / 18.0;
            if (j == 0) v += 1.0 - 2.0 * kernel_tail_mass(kernel, t, 0.5 * h);
            else v += kernel_tail_mass(kernel, t, s - 0.5 * h) - kernel_tail_mass(kernel, t, s + 0.5 * h);
        }
        w[j] = v;
        if (j > 0 && j < n - j) w[n - j] = v;
    }
    return w;
}

SpaceTimeField solve_by_convolution(const GridFunction &u0, const std::optional<PowerTail> &tail,
                                    const KernelSpec &spec, const std::vector<double> &times,
                                    const ConvolutionOptions &opts) {
    u0.validate();
    check_times(times);
    if (spec.dim != 1) throw DomainError("solve_by_convolution: only n = 1 is supported");
    if (u0.size() < 2) throw DomainError("solve_by_convolution: datum needs at least two points");
    StableKernel kernel(spec);
    SpaceTimeField out;
    out.initial = u0;
    out.times = times;
    out.metadata["alpha"] = format_double(spec.alpha);
    out.metadata["solver"] = "convolution";
    const double h = u0.spacing;
    if (u0.periodic) {
        if (tail && !tail->empty()) throw ConfigError("solve_by_convolution: periodic data take no tail model");
        for (double t : times) {
            auto w = periodized_kernel_weights(kernel, t, u0.size(), h, use_points(opts.sampling, spec.alpha, t, h, opts.alias_threshold)
                                                                            ? KernelSampling::Point
                                                                            : KernelSampling::CellAverage);
            out.frames.emplace_back(fft::circular_convolve(u0.values, w), h, u0.origin, true);
        }
        return out;
    }
    const std::size_t n = u0.size();
    const bool has_tail = tail && !tail->empty();
    const std::size_t pad = has_tail ? static_cast<std::size_t>(std::ceil(0.5 * (opts.extension - 1.0) * n)) : 0;
    const std::size_t ne = n + 2 * pad;
    const double x_first = u0.origin - h * static_cast<double>(pad);
    std::vector<double> data(2 * ne, 0.0);
    for (std::size_t i = 0; i < ne; ++i) {
        if (i >= pad && i < pad + n) data[i] = u0.values[i - pad];
        else data[i] = tail->evaluate(x_first + h * static_cast<double>(i));
    }
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = u0.coordinate(i);
    for (double t : times) {
        const bool points = use_points(opts.sampling, spec.alpha, t, h, opts.alias_threshold);
        const auto lw = linear_kernel_weights(kernel, t, ne, h, points);
        std::vector<double> kw(2 * ne, 0.0);
        for (std::size_t j = 0; j < ne; ++j) {
            kw[j] = lw[j];
            if (j > 0) kw[2 * ne - j] = lw[j];
        }
        const auto conv = fft::circular_convolve(data, kw);
        std::vector<double> u(conv.begin() + static_cast<long>(pad), conv.begin() + static_cast<long>(pad + n));
        if (has_tail) {
            const double A = x_first - 0.5 * h, B = x_first + h * static_cast<double>(ne - 1) + 0.5 * h;
            const auto rem = analytic_remainder(kernel, t, *tail, A, B, xs);
            for (std::size_t i = 0; i < n; ++i) u[i] += rem[i];
        }
        out.frames.emplace_back(std::move(u), h, u0.origin, false);
    }
    return out;
}

SpaceTimeField solve_by_spectral_stepping(const GridFunction &u0, double alpha, const std::vector<double> &times) {
    if (!u0.periodic) throw DomainError("solve_by_spectral_stepping: datum must be periodic");
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("solve_by_spectral_stepping: alpha must lie in (0, 2]");
    u0.validate();
    check_times(times);
    SpaceTimeField out;
    out.initial = u0;
    out.times = times;
    out.metadata["alpha"] = format_double(alpha);
    out.metadata["solver"] = "spectral";
    const auto c0 = fft::forward(u0.values);
    const double dk = 2.0 * pi / u0.extent();
    for (double t : times) {
        auto c = c0;
        for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::exp(-t * std::pow(dk * static_cast<double>(k), alpha));
        out.frames.emplace_back(fft::inverse(c, u0.size()), u0.spacing, u0.origin, true);
    }
    return out;
}

double mass_outside_box(const GridFunction &u0, const KernelSpec &spec, double t, double lo, double hi) {
    if (spec.dim != 1) throw DomainError("mass_outside_box: only n = 1 is supported");
    if (!(t > 0.0) || !(hi > lo)) throw DomainError("mass_outside_box: need t > 0 and lo < hi");
    StableKernel kernel(spec);
    double m = 0.0;
    for (std::size_t j = 0; j < u0.size(); ++j) {
        if (u0.values[j] == 0.0) continue;
        const double y = u0.coordinate(j);
        m += u0.spacing * u0.values[j] * (kernel_tail_mass(kernel, t, hi - y) + kernel_tail_mass(kernel, t, y - lo));
    }
    return m;
}

GridFunction backward_test_function(const GridFunction &theta, const KernelSpec &spec, double t0, double t) {
    if (!(t0 > 0.0) || !(t >= 0.0 && t < t0)) throw DomainError("backward_test_function: need 0 <= t < t0");
    if (theta.periodic) throw DomainError("backward_test_function: theta must be compactly supported, not periodic");
    theta.validate();
    const std::size_t n = theta.size();
    if (n < 8) throw DomainError("backward_test_function: grid too small");
    const double scale = std::max(theta.max_abs(), std::numeric_limits<double>::min());
    for (std::size_t i : {std::size_t{0}, std::size_t{1}, n - 2, n - 1})
        if (std::abs(theta.values[i]) > 1e-14 * scale) throw DomainError("backward_test_function: support escapes the grid");
    return solve_by_convolution(theta, PowerTail::zero(), spec, {t0 - t}).frames.front();
}

SpaceTimeField enthalpy(const SpaceTimeField &u, EnthalpyVariant variant) {
    u.validate();
    if (!u.initial) throw DomainError("enthalpy: the t = 0 slice is required");
    if (u.frames.size() < 2) throw DomainError("enthalpy: need at least two frames for the fourth-order rule");
    if (variant == EnthalpyVariant::Strict) {
        const double scale = std::max(1.0, u.frames.back().max_abs());
        if (u.initial->max_abs() > 1e-12 * scale) throw DomainError("enthalpy: strict variant needs u(., 0) = 0");
    }
    const double dt = u.uniform_step();
    const std::size_t count = u.slice_count();
    const std::size_t n = u.initial->size();
    auto f = [&](std::size_t k, std::size_t i) { return u.slice(k).values[i]; };
    SpaceTimeField v;
    v.times = u.times;
    v.metadata = u.metadata;
    v.metadata["transform"] = "enthalpy";
    v.initial = GridFunction(std::vector<double>(n, 0.0), u.initial->spacing, u.initial->origin, u.initial->periodic);
    std::vector<std::vector<double>> simpson(count, std::vector<double>(n, 0.0)); // valid at even k
    for (std::size_t k = 2; k < count; k += 2)
        for (std::size_t i = 0; i < n; ++i)
            simpson[k][i] = simpson[k - 2][i] + dt / 3.0 * (f(k - 2, i) + 4.0 * f(k - 1, i) + f(k, i));
    for (std::size_t k = 1; k < count; ++k) {
        std::vector<double> val(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (k == 1) val[i] = dt / 12.0 * (5.0 * f(0, i) + 8.0 * f(1, i) - f(2, i));
            else if (k % 2 == 0) val[i] = simpson[k][i];
            else
                val[i] = simpson[k - 3][i] +
                         3.0 * dt / 8.0 * (f(k - 3, i) + 3.0 * f(k - 2, i) + 3.0 * f(k - 1, i) + f(k, i));
        }
        v.frames.emplace_back(std::move(val), u.initial->spacing, u.initial->origin, u.initial->periodic);
    }
    return v;
}

double ResidualField::max_abs() const {
    double m = 0.0;
    for (const auto &g : values) m = std::max(m, g.max_abs());
    return m;
}

ResidualField residual(const SpaceTimeField &u, double alpha, OperatorMethod method, TimeDifference diff,
                       const GridFunction *source) {
    u.validate();
    const std::size_t count = u.slice_count();
    const std::size_t reach = diff == TimeDifference::Central2 ? 1 : 2;
    if (count < 2 * reach + 1) throw DomainError("residual: too few frames for centered differencing");
    const double dt = u.uniform_step();
    const auto times = u.all_times();
    const GridFunction &ref = u.slice(0);
    if (!ref.periodic) throw DomainError("residual: periodic fields only");
    if (source && !source->same_geometry(ref)) throw DomainError("residual: source grid differs");
    std::optional<PeriodicPvStencil> stencil;
    if (method == OperatorMethod::Pv) stencil.emplace(alpha, ref.size(), ref.spacing);
    ResidualField out;
    for (std::size_t k = reach; k + reach < count; ++k) {
        GridFunction lu = method == OperatorMethod::Pv ? stencil->apply(u.slice(k)) : frac_laplacian_spectral(u.slice(k), alpha);
        for (std::size_t i = 0; i < ref.size(); ++i) {
            double ut;
            if (reach == 1) ut = (u.slice(k + 1).values[i] - u.slice(k - 1).values[i]) / (2.0 * dt);
            else
                ut = (-u.slice(k + 2).values[i] + 8.0 * u.slice(k + 1).values[i] - 8.0 * u.slice(k - 1).values[i] +
                      u.slice(k - 2).values[i]) /
                     (12.0 * dt);
            lu.values[i] += ut - (source ? source->values[i] : 0.0);
        }
        out.times.push_back(times[k]);
        out.values.push_back(std::move(lu));
    }
    return out;
}

CheckReport comparison_check(const SpaceTimeField &v, double alpha, const Cylinder &cyl, const ComparisonOptions &opts) {
    cyl.validate();
    v.validate();
    const auto times = v.all_times();
    const GridFunction &ref = v.slice(0);
    const double box_lo = ref.origin, box_hi = ref.coordinate(ref.size() - 1);
    if (!(-cyl.rho > box_lo && cyl.rho < box_hi)) throw DomainError("comparison_check: ball B_rho must lie inside the grid");
    auto inside = [&](std::size_t i) { return std::abs(ref.coordinate(i)) < cyl.rho; };
    const double t_first = times.front();

    // hypotheses
    double initial_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ref.size(); ++i)
        if (inside(i)) initial_max = std::max(initial_max, ref.values[i]);
    double exterior_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < times.size() && times[k] <= cyl.T * (1 + 1e-12); ++k)
        for (std::size_t i = 0; i < ref.size(); ++i)
            if (!inside(i)) exterior_max = std::max(exterior_max, v.slice(k).values[i]);
    double residual_max = -std::numeric_limits<double>::infinity();
    if (v.slice_count() >= (opts.diff == TimeDifference::Central2 ? 3u : 5u)) {
        const auto res = residual(v, alpha, opts.method, opts.diff);
        for (std::size_t k = 0; k < res.times.size(); ++k) {
            if (res.times[k] > cyl.T * (1 + 1e-12)) break;
            for (std::size_t i = 0; i < ref.size(); ++i)
                if (inside(i)) residual_max = std::max(residual_max, res.values[k].values[i]);
        }
    }
    auto fail = [&](double viol, const std::string &what) {
        auto r = CheckReport::hypothesis_failed("comparison", viol, opts.hypothesis_tol, what);
        r.note("initial_max", initial_max).note("exterior_max", exterior_max).note("residual_max", residual_max);
        return r;
    };
    if (initial_max > opts.hypothesis_tol) return fail(initial_max, "v <= 0 at the initial time inside B_rho");
    if (exterior_max > opts.hypothesis_tol) return fail(exterior_max, "v <= 0 outside B_rho");
    if (residual_max > opts.hypothesis_tol) return fail(residual_max, "v_t + (-Delta)^(alpha/2) v <= 0 in the cylinder");

    // conclusion
    double best = -std::numeric_limits<double>::infinity(), x_at = 0.0, t_at = t_first;
    for (std::size_t k = 1; k < times.size() && times[k] <= cyl.T * (1 + 1e-12); ++k)
        for (std::size_t i = 0; i < ref.size(); ++i)
            if (inside(i) && v.slice(k).values[i] > best) {
                best = v.slice(k).values[i];
                x_at = ref.coordinate(i);
                t_at = times[k];
            }
    auto r = CheckReport::judge("comparison", best, opts.conclusion_tol);
    r.note("x_at_max", x_at).note("t_at_max", t_at).note("rho", cyl.rho).note("T", cyl.T);
    r.note("initial_max", initial_max).note("exterior_max", exterior_max).note("residual_max", residual_max);
    return r;
}

} // namespace fracheat
