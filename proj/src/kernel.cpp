#include "fracheat/kernel.hpp"

#include "fracheat/errors.hpp"
#include "fracheat/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fracheat {

namespace {

using numerics::pi;

constexpr int far_terms = 160;
constexpr int near_terms = 200;
constexpr double roundoff = 4e-16;

bool is_exact(double alpha, double v) { return alpha == v; }

} // namespace

void KernelSpec::validate() const {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("KernelSpec: alpha must lie in (0, 2]");
    if (dim < 1 || dim > 3) throw DomainError("KernelSpec: dim must be 1, 2 or 3");
    if (quad.max_segments < 1 || !(quad.target_abs_error > 0.0) || !(quad.split_radius > 0.0))
        throw DomainError("KernelSpec: invalid quadrature policy");
}

StableKernel::StableKernel(KernelSpec spec) : spec_(spec) {
    spec_.validate();
    const double a = spec_.alpha;
    const double n = spec_.dim;
    if (a < 2.0) {
        // P(r) ~ pi^-(n/2+1) sum_k (-1)^(k+1)/k! 2^(ak) G((ak+n)/2) G(ak/2+1) sin(pi a k/2) r^-(n+ak)
        far_coef_.resize(far_terms);
        for (int k = 1; k <= far_terms; ++k) {
            const double ak = a * k;
            const double s = std::sin(0.5 * pi * ak);
            double c = 0.0;
            if (std::abs(s) > 1e-13) {
                const double logmag = ak * std::log(2.0) + std::lgamma(0.5 * (ak + n)) + std::lgamma(0.5 * ak + 1.0) -
                                      std::lgamma(k + 1.0) - (0.5 * n + 1.0) * std::log(pi);
                c = (k % 2 == 1 ? 1.0 : -1.0) * (s > 0 ? 1.0 : -1.0) * std::exp(logmag) * std::abs(s);
            }
            far_coef_[static_cast<std::size_t>(k - 1)] = c;
        }
    }
    if (a > 1.0) {
        // P(r) = 2^(1-n) pi^(-n/2) / a * sum_k (-1)^k G((n+2k)/a) / (k! G(k+n/2)) (r/2)^(2k)
        near_coef_.resize(near_terms);
        for (int k = 0; k < near_terms; ++k) {
            const double logmag = (1.0 - n) * std::log(2.0) - 0.5 * n * std::log(pi) - std::log(a) +
                                  std::lgamma((n + 2.0 * k) / a) - std::lgamma(k + 1.0) - std::lgamma(k + 0.5 * n) -
                                  2.0 * k * std::log(2.0);
            near_coef_[static_cast<std::size_t>(k)] = (k % 2 == 0 ? 1.0 : -1.0) * std::exp(logmag);
        }
    }
}

double StableKernel::value_at_origin() const {
    const double n = spec_.dim, a = spec_.alpha;
    return std::exp(std::lgamma(n / a) - std::lgamma(0.5 * n)) / (a * std::pow(2.0, n - 1.0) * std::pow(pi, 0.5 * n));
}

double StableKernel::tail_coefficient() const { return far_coef_.empty() ? 0.0 : far_coef_.front(); }

bool StableKernel::closed_form(double r, KernelValue &out) const {
    const int n = spec_.dim;
    if (is_exact(spec_.alpha, 1.0)) {
        const double q = 1.0 + r * r;
        out.value = n == 1 ? 1.0 / (pi * q) : (n == 2 ? 1.0 / (2.0 * pi * q * std::sqrt(q)) : 1.0 / (pi * pi * q * q));
    } else if (is_exact(spec_.alpha, 2.0)) {
        out.value = std::pow(4.0 * pi, -0.5 * n) * std::exp(-0.25 * r * r);
    } else {
        return false;
    }
    out.abs_error_estimate = roundoff * out.value;
    return true;
}

bool StableKernel::try_far_series(double r, KernelValue &out) const {
    if (far_coef_.empty() || !(r > 0.0)) return false;
    const double step = std::pow(r, -spec_.alpha);
    double power = std::pow(r, -static_cast<double>(spec_.dim));
    double sum = 0.0, abs_sum = 0.0, last = std::numeric_limits<double>::infinity();
    double prev_mag = std::numeric_limits<double>::infinity();
    int rising = 0;
    for (double c : far_coef_) {
        power *= step;
        const double term = c * power;
        if (term == 0.0) continue;
        const double mag = std::abs(term);
        if (mag > prev_mag) {
            if (++rising > 2) break; // asymptotic series has started to diverge
        } else {
            rising = 0;
        }
        sum += term;
        abs_sum += mag;
        last = mag;
        prev_mag = mag;
        if (mag < 1e-17 * std::abs(sum)) break;
    }
    const double err = last + roundoff * abs_sum;
    if (!(sum > 0.0) || err > 1e-12 * sum || err > spec_.quad.target_abs_error) return false;
    out.value = sum;
    out.abs_error_estimate = err;
    return true;
}

bool StableKernel::try_near_series(double r, KernelValue &out) const {
    if (near_coef_.empty()) return false;
    const double r2 = r * r;
    double power = 1.0, sum = 0.0, abs_sum = 0.0, last = 0.0;
    bool done = false;
    for (double c : near_coef_) {
        const double term = c * power;
        sum += term;
        abs_sum += std::abs(term);
        last = std::abs(term);
        if (last < 1e-17 * std::abs(sum) && power > 0.0) {
            done = true;
            break;
        }
        power *= r2;
        if (!std::isfinite(power)) break;
    }
    if (r == 0.0) done = true;
    const double err = last + roundoff * abs_sum;
    if (!done || !(sum > 0.0) || err > 1e-12 * sum || err > spec_.quad.target_abs_error) return false;
    out.value = sum;
    out.abs_error_estimate = err;
    return true;
}

KernelValue StableKernel::quadrature(double r) const {
    const double a = spec_.alpha;
    const int n = spec_.dim;
    numerics::OscillatoryPolicy policy;
    policy.abs_tol = spec_.quad.target_abs_error;
    policy.max_segments = spec_.quad.max_segments;
    // beyond this point s^(n-1) exp(-s^a) is far below roundoff
    const double negligible = std::pow(42.0 + 2.0 * (n - 1) * std::log(1.0 + std::pow(42.0, 1.0 / a)), 1.0 / a);

    numerics::QuadResult q;
    double prefactor = 1.0;
    if (r == 0.0) {
        auto radial = [a, n](double s) { return std::pow(s, n - 1) * std::exp(-std::pow(s, a)); };
        q = numerics::integrate_oscillatory(radial, [](int) { return 0.0; }, negligible, negligible, policy);
        prefactor = n == 1 ? 1.0 / pi : (n == 2 ? 1.0 / (2.0 * pi) : 1.0 / (2.0 * pi * pi));
    } else {
        const double head = std::max(spec_.quad.split_radius, 1.0 / r);
        if (n == 1) {
            auto f = [a, r](double s) { return std::cos(r * s) * std::exp(-std::pow(s, a)); };
            auto zero = [r](int k) { return (k - 0.5) * pi / r; };
            q = numerics::integrate_oscillatory(f, zero, head, negligible, policy);
            prefactor = 1.0 / pi;
        } else if (n == 2) {
            auto f = [a, r](double s) { return s * std::cyl_bessel_j(0.0, r * s) * std::exp(-std::pow(s, a)); };
            auto zero = [r](int k) { return numerics::bessel_j0_zero(k) / r; };
            q = numerics::integrate_oscillatory(f, zero, head, negligible, policy);
            prefactor = 1.0 / (2.0 * pi);
        } else {
            auto f = [a, r](double s) { return s * std::sin(r * s) * std::exp(-std::pow(s, a)); };
            auto zero = [r](int k) { return k * pi / r; };
            q = numerics::integrate_oscillatory(f, zero, head, negligible, policy);
            prefactor = 1.0 / (2.0 * pi * pi * r);
        }
    }
    KernelValue v;
    v.x = r;
    v.value = prefactor * q.value;
    v.abs_error_estimate = prefactor * q.error + roundoff * std::abs(v.value);
    if (!q.converged || v.abs_error_estimate > 10.0 * spec_.quad.target_abs_error) {
        throw AccuracyNotReached("eval_P: oscillatory quadrature did not reach the target error", v.value,
                                 v.abs_error_estimate);
    }
    return v;
}

KernelValue StableKernel::profile(double r, KernelRoute route) const {
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("eval_P: r must be finite and nonnegative");
    KernelValue v;
    v.x = r;
    v.t = 1.0;
    switch (route) {
    case KernelRoute::Quadrature:
        break;
    case KernelRoute::ClosedForm:
        if (!closed_form(r, v)) throw DomainError("eval_P: closed form exists only for alpha = 1 or 2");
        return v;
    case KernelRoute::Series:
    case KernelRoute::Auto:
        if (route == KernelRoute::Auto && closed_form(r, v)) return v;
        if (try_far_series(r, v) || try_near_series(r, v)) return v;
        if (r == 0.0) {
            v.value = value_at_origin();
            v.abs_error_estimate = roundoff * v.value;
            return v;
        }
        break;
    }
    KernelValue q = quadrature(r);
    q.t = 1.0;
    return q;
}

KernelValue StableKernel::at(double r, double t, KernelRoute route) const {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("eval_Pt: t must be positive");
    const double scale = std::pow(t, 1.0 / spec_.alpha);
    KernelValue v = profile(r / scale, route);
    const double jac = std::pow(scale, -static_cast<double>(spec_.dim));
    v.x = r;
    v.t = t;
    v.value *= jac;
    v.abs_error_estimate *= jac;
    return v;
}

double StableKernel::far_field(double r, double t, double tol) const {
    if (far_coef_.empty()) return std::numeric_limits<double>::quiet_NaN();
    // P_t(r) ~ sum_k a_k t^k r^-(n + a k)
    const double step = t * std::pow(r, -spec_.alpha);
    double power = std::pow(r, -static_cast<double>(spec_.dim));
    double sum = 0.0, last = std::numeric_limits<double>::infinity(), prev_mag = last;
    int rising = 0;
    for (double c : far_coef_) {
        power *= step;
        const double term = c * power;
        if (term == 0.0) continue;
        const double mag = std::abs(term);
        if (mag > prev_mag && ++rising > 2) break;
        if (mag <= prev_mag) rising = 0;
        sum += term;
        last = mag;
        prev_mag = mag;
        if (mag < 1e-17 * std::abs(sum)) break;
    }
    return last <= tol ? sum : std::numeric_limits<double>::quiet_NaN();
}

KernelValue StableKernel::tail_mass_1d(double d) const {
    if (spec_.dim != 1) throw DomainError("tail_mass_1d: one-dimensional kernels only");
    if (!(d >= 0.0)) throw DomainError("tail_mass_1d: d must be nonnegative");
    KernelValue v;
    v.x = d;
    if (is_exact(spec_.alpha, 1.0)) {
        v.value = 0.5 - std::atan(d) / pi;
        v.abs_error_estimate = roundoff;
        return v;
    }
    if (is_exact(spec_.alpha, 2.0)) {
        v.value = 0.5 * std::erfc(0.5 * d);
        v.abs_error_estimate = roundoff * v.value;
        return v;
    }
    const double a = spec_.alpha;
    // far series integrated termwise: sum_k a_k d^(-a k) / (a k)
    if (d > 0.0) {
        const double step = std::pow(d, -a);
        double power = 1.0, sum = 0.0, abs_sum = 0.0, last = std::numeric_limits<double>::infinity();
        double prev_mag = last;
        int rising = 0, k = 0;
        for (double c : far_coef_) {
            ++k;
            power *= step;
            const double term = c * power / (a * k);
            if (term == 0.0) continue;
            const double mag = std::abs(term);
            if (mag > prev_mag && ++rising > 2) break;
            if (mag <= prev_mag) rising = 0;
            sum += term;
            abs_sum += mag;
            last = mag;
            prev_mag = mag;
            if (mag < 1e-17 * std::abs(sum)) break;
        }
        const double err = last + roundoff * abs_sum;
        if (sum > 0.0 && err < 1e-12 * sum && err < spec_.quad.target_abs_error) {
            v.value = sum;
            v.abs_error_estimate = err;
            return v;
        }
    }
    // 1/2 - integral_0^d P = 1/2 - (1/pi) integral_0^inf sin(d s)/s exp(-s^a) ds
    if (d == 0.0) {
        v.value = 0.5;
        return v;
    }
    numerics::OscillatoryPolicy policy;
    policy.abs_tol = spec_.quad.target_abs_error;
    policy.max_segments = spec_.quad.max_segments;
    const double negligible = std::pow(42.0, 1.0 / a);
    auto f = [a, d](double s) {
        const double x = d * s;
        const double sinc = std::abs(x) < 1e-8 ? d * (1.0 - x * x / 6.0) : std::sin(x) / s;
        return sinc * std::exp(-std::pow(s, a));
    };
    auto zero = [d](int k) { return k * pi / d; };
    auto q = numerics::integrate_oscillatory(f, zero, std::max(spec_.quad.split_radius, 1.0 / d), negligible, policy);
    v.value = 0.5 - q.value / pi;
    v.abs_error_estimate = q.error / pi + roundoff;
    if (!q.converged) throw AccuracyNotReached("tail_mass_1d: quadrature did not converge", v.value, v.abs_error_estimate);
    return v;
}

KernelValue eval_P(const KernelSpec &spec, double r) { return StableKernel(spec).profile(r); }

KernelValue eval_Pt(const KernelSpec &spec, double r, double t) { return StableKernel(spec).at(r, t); }

KernelValue eval_Pt(const KernelSpec &spec, std::span<const double> x, double t) {
    if (static_cast<int>(x.size()) != spec.dim) throw DomainError("eval_Pt: point dimension does not match spec");
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return StableKernel(spec).at(std::sqrt(r2), t);
}

KernelTable tabulate_kernel(const KernelSpec &spec, const RadialGrid &grid, double t) {
    grid.validate();
    StableKernel kernel(spec);
    KernelTable table;
    table.alpha = spec.alpha;
    table.dim = spec.dim;
    table.t = t;
    table.r = grid.radii;
    table.value.resize(grid.radii.size());
    table.abs_err.resize(grid.radii.size());
    for (std::size_t i = 0; i < grid.radii.size(); ++i) {
        const KernelValue v = kernel.at(grid.radii[i], t);
        table.value[i] = v.value;
        table.abs_err[i] = v.abs_error_estimate;
    }
    return table;
}

KernelTableCache::KernelTableCache(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::string KernelTableCache::key(const KernelSpec &spec, const RadialGrid &grid, double t) const {
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a over the radii bytes
    for (double r : grid.radii) {
        const auto *bytes = reinterpret_cast<const unsigned char *>(&r);
        for (std::size_t i = 0; i < sizeof(double); ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    }
    std::ostringstream os;
    os << "kernel_a" << format_double(spec.alpha) << "_n" << spec.dim << "_t" << format_double(t) << "_"
       << grid.radii.size() << "_" << std::hex << h;
    return os.str();
}

KernelTable KernelTableCache::get(const KernelSpec &spec, const RadialGrid &grid, double t) {
    const std::string k = key(spec, grid, t);
    {
        std::lock_guard lock(mutex_);
        if (auto it = tables_.find(k); it != tables_.end()) return it->second;
    }
    KernelTable table;
    bool loaded = false;
    const auto path = directory_.empty() ? std::filesystem::path{} : directory_ / (k + ".csv");
    if (!path.empty() && std::filesystem::exists(path)) {
        std::ifstream in(path);
        table = read_kernel_csv(in);
        table.alpha = spec.alpha;
        table.dim = spec.dim;
        table.t = t;
        loaded = table.r == grid.radii;
    }
    if (!loaded) {
        table = tabulate_kernel(spec, grid, t);
        if (!path.empty()) {
            std::filesystem::create_directories(directory_);
            std::ofstream out(path);
            write_kernel_csv(out, table);
        }
    }
    std::lock_guard lock(mutex_);
    return tables_.emplace(k, std::move(table)).first->second;
}

std::size_t KernelTableCache::size() const {
    std::lock_guard lock(mutex_);
    return tables_.size();
}

void write_kernel_csv(std::ostream &os, const KernelTable &table) {
    os << "r,value,abs_err\n";
    for (std::size_t i = 0; i < table.r.size(); ++i)
        os << format_double(table.r[i]) << ',' << format_double(table.value[i]) << ','
           << format_double(table.abs_err[i]) << '\n';
}

KernelTable read_kernel_csv(std::istream &is) {
    KernelTable table;
    std::string line;
    if (!std::getline(is, line) || line != "r,value,abs_err") throw ParseError("kernel CSV line 1: expected header r,value,abs_err");
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        double vals[3];
        const char *p = line.data(), *end = line.data() + line.size();
        for (int c = 0; c < 3; ++c) {
            auto [next, ec] = std::from_chars(p, end, vals[c]);
            if (ec != std::errc{}) throw ParseError("kernel CSV line " + std::to_string(lineno) + ": bad number");
            p = next;
            if (c < 2) {
                if (p == end || *p != ',') throw ParseError("kernel CSV line " + std::to_string(lineno) + ": expected ','");
                ++p;
            }
        }
        if (p != end) throw ParseError("kernel CSV line " + std::to_string(lineno) + ": trailing characters");
        table.r.push_back(vals[0]);
        table.value.push_back(vals[1]);
        table.abs_err.push_back(vals[2]);
    }
    return table;
}

SandwichConstants sandwich_constant(const KernelSpec &spec, const RadialGrid &grid) {
    grid.validate();
    if (grid.radii.back() < 20.0) throw DomainError("sandwich_constant: grid must reach r >= 20");
    StableKernel kernel(spec);
    const double p = spec.dim + spec.alpha;
    SandwichConstants out;
    out.lower = std::numeric_limits<double>::infinity();
    out.upper = 0.0;
    for (double r : grid.radii) {
        const KernelValue v = kernel.profile(r);
        if (!(v.value > 0.0)) throw BoundViolated("sandwich_constant: nonpositive kernel value", v.value, v.abs_error_estimate);
        const double ratio = v.value * (1.0 + std::pow(r, p));
        if (ratio < out.lower) {
            out.lower = ratio;
            out.r_at_lower = r;
        }
        if (ratio > out.upper) {
            out.upper = ratio;
            out.r_at_upper = r;
        }
    }
    out.lower_degenerate = spec.alpha >= 2.0 || out.lower < 1e-8 * out.upper;
    return out;
}

CheckReport tail_bound_check(const KernelSpec &spec, double t, double r_min, const RadialGrid &grid,
                             double max_admissible) {
    spec.validate();
    if (!(spec.alpha < 2.0)) throw DomainError("tail_bound_check: requires alpha < 2 (polynomial tails)");
    if (!(t > 0.0)) throw DomainError("tail_bound_check: t must be positive");
    if (!(r_min >= std::pow(t, 1.0 / spec.alpha))) throw DomainError("tail_bound_check: r_min must be >= t^(1/alpha)");
    grid.validate();
    StableKernel kernel(spec);
    const double p = spec.dim + spec.alpha;
    double c = 0.0, r_at = r_min;
    std::size_t used = 0;
    for (double r : grid.radii) {
        if (r < r_min) continue;
        ++used;
        const double ratio = kernel.at(r, t).value * std::pow(r, p) / t;
        if (ratio > c) {
            c = ratio;
            r_at = r;
        }
    }
    if (used == 0) throw DomainError("tail_bound_check: no grid radius >= r_min");
    auto rep = CheckReport::judge("tail_bound", c, max_admissible);
    rep.note("alpha", spec.alpha).note("t", t).note("r_min", r_min).note("r_at_max", r_at).note("points",
                                                                                           static_cast<double>(used));
    return rep;
}

double global_tail_constant(const KernelSpec &spec) {
    StableKernel kernel(spec);
    if (!(spec.alpha < 2.0)) throw DomainError("global_tail_constant: requires alpha < 2");
    const double p = spec.dim + spec.alpha;
    double c = kernel.tail_coefficient();
    for (int i = 1; i <= 400; ++i) {
        const double r = 0.01 * std::pow(1e4, i / 400.0); // 0.01 .. 100
        c = std::max(c, kernel.profile(r).value * std::pow(r, p));
    }
    return c;
}

} // namespace fracheat
