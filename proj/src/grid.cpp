#include "fracheat/grid.hpp"

#include "fracheat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace fracheat {

GridFunction::GridFunction(std::vector<double> v, double h, double x0, bool is_periodic)
    : values(std::move(v)), spacing(h), origin(x0), periodic(is_periodic) {}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

bool GridFunction::same_geometry(const GridFunction &other) const {
    return values.size() == other.values.size() && spacing == other.spacing && origin == other.origin &&
           periodic == other.periodic;
}

void GridFunction::validate() const {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw DomainError("GridFunction: spacing must be positive");
    if (!std::isfinite(origin)) throw DomainError("GridFunction: origin must be finite");
    for (double v : values)
        if (!std::isfinite(v)) throw DomainError("GridFunction: non-finite value");
}

GridFunction GridFunction::sample(const std::function<double(double)> &f, std::size_t n, double x0, double h,
                                  bool periodic) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(x0 + h * static_cast<double>(i));
    return {std::move(v), h, x0, periodic};
}

GridFunction GridFunction::periodic_box(const std::function<double(double)> &f, std::size_t n, double half_width) {
    return sample(f, n, -half_width, 2.0 * half_width / static_cast<double>(n), true);
}

RadialGrid RadialGrid::uniform(double r_max, std::size_t points) {
    if (points < 2) throw DomainError("RadialGrid: need at least two points");
    RadialGrid g;
    g.radii.resize(points);
    for (std::size_t i = 0; i < points; ++i)
        g.radii[i] = r_max * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

void RadialGrid::validate() const {
    if (radii.empty()) throw DomainError("RadialGrid: empty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!std::isfinite(radii[i]) || radii[i] < 0.0) throw DomainError("RadialGrid: radii must be finite and >= 0");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw DomainError("RadialGrid: radii must be strictly increasing");
    }
}

double PowerTail::evaluate(double y) const {
    const auto &terms = y >= 0.0 ? right : left;
    const double ay = std::abs(y);
    double s = 0.0;
    for (const auto &t : terms) s += t.amplitude * std::pow(ay, -t.exponent);
    return s;
}

double PowerTail::slowest_exponent() const {
    double q = std::numeric_limits<double>::infinity();
    for (const auto &t : right) q = std::min(q, t.exponent);
    for (const auto &t : left) q = std::min(q, t.exponent);
    return q;
}

PowerTail PowerTail::product(const PowerTail &other) const {
    PowerTail out;
    for (const auto &a : right)
        for (const auto &b : other.right) out.right.push_back({a.amplitude * b.amplitude, a.exponent + b.exponent});
    for (const auto &a : left)
        for (const auto &b : other.left) out.left.push_back({a.amplitude * b.amplitude, a.exponent + b.exponent});
    return out;
}

FieldModel FieldModel::periodic(std::function<double(double)> f, double period) {
    if (!(period > 0.0)) throw DomainError("FieldModel: period must be positive");
    FieldModel m;
    m.f = std::move(f);
    m.period = period;
    return m;
}

FieldModel FieldModel::analytic(std::function<double(double)> f, std::optional<PowerTail> tail) {
    FieldModel m;
    m.f = std::move(f);
    m.tail = std::move(tail);
    return m;
}

FieldModel FieldModel::from_grid(const GridFunction &g, std::optional<PowerTail> tail) {
    g.validate();
    if (g.size() < 6) throw DomainError("FieldModel::from_grid: need at least 6 nodes");
    FieldModel m;
    auto shared = std::make_shared<GridFunction>(g);
    m.f = [shared](double y) { return interpolate6(*shared, y); };
    if (g.periodic) {
        m.period = g.extent();
    } else {
        m.window_lo = g.origin;
        m.window_hi = g.coordinate(g.size() - 1);
        m.tail = tail ? std::move(tail) : std::optional<PowerTail>(PowerTail::zero());
    }
    return m;
}

double FieldModel::operator()(double y) const {
    if (!period && (y < window_lo || y > window_hi)) {
        if (!tail) throw ConfigError("FieldModel: evaluation outside the window without a tail model");
        return tail->evaluate(y);
    }
    return f(y);
}

double interpolate6(const GridFunction &g, double x) {
    const auto n = static_cast<long>(g.size());
    double s = (x - g.origin) / g.spacing;
    if (g.periodic) {
        s = std::fmod(s, static_cast<double>(n));
        if (s < 0) s += static_cast<double>(n);
    }
    long cell = static_cast<long>(std::floor(s));
    long first = cell - 2;
    if (!g.periodic) first = std::clamp(first, 0L, n - 6);
    const double local = s - static_cast<double>(first);
    // exact node hit
    const double nearest = std::round(s);
    if (std::abs(s - nearest) < 1e-13) {
        long idx = static_cast<long>(nearest);
        if (g.periodic) idx = ((idx % n) + n) % n;
        if (idx >= 0 && idx < n) return g.values[static_cast<std::size_t>(idx)];
    }
    double sum = 0.0;
    for (int j = 0; j < 6; ++j) {
        double w = 1.0;
        for (int m = 0; m < 6; ++m)
            if (m != j) w *= (local - m) / static_cast<double>(j - m);
        long idx = first + j;
        if (g.periodic) idx = ((idx % n) + n) % n;
        sum += w * g.values[static_cast<std::size_t>(idx)];
    }
    return sum;
}

TrigPolynomial TrigPolynomial::random_nonnegative(unsigned long long seed, int max_mode, double period,
                                                  double floor) {
    std::mt19937_64 engine(seed);
    auto uniform = [&engine]() { // [-1, 1), platform independent
        return static_cast<double>(engine() >> 11) * 0x1.0p-52 - 1.0;
    };
    TrigPolynomial p;
    p.period = period;
    double amplitude_sum = 0.0;
    for (int k = 1; k <= max_mode; ++k) {
        const double a = uniform() / k, b = uniform() / k;
        p.cos_coef.push_back(a);
        p.sin_coef.push_back(b);
        amplitude_sum += std::hypot(a, b);
    }
    p.constant = amplitude_sum + floor;
    return p;
}

double TrigPolynomial::wavenumber(int k) const { return 2.0 * 3.14159265358979323846 * k / period; }

double TrigPolynomial::operator()(double x) const {
    double s = constant;
    for (std::size_t i = 0; i < cos_coef.size(); ++i) {
        const double kx = wavenumber(static_cast<int>(i) + 1) * x;
        s += cos_coef[i] * std::cos(kx) + sin_coef[i] * std::sin(kx);
    }
    return s;
}

} // namespace fracheat
