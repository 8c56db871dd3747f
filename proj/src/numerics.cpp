#include "fracheat/numerics.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace fracheat::numerics {

const GaussLegendreRule &gauss_legendre(int n) {
    static std::mutex guard;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    std::lock_guard lock(guard);
    auto &slot = cache[n];
    if (slot) return *slot;

    auto rule = std::make_unique<GaussLegendreRule>();
    rule->nodes.resize(static_cast<std::size_t>(n));
    rule->weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule->nodes[static_cast<std::size_t>(i)] = -x;
        rule->nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule->weights[static_cast<std::size_t>(i)] = w;
        rule->weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule->nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    slot = std::move(rule);
    return *slot;
}

Extrapolant wynn_epsilon(std::span<const double> partial_sums, std::size_t window) {
    if (partial_sums.empty()) return {};
    const std::size_t m = std::min(window, partial_sums.size());
    const auto s = partial_sums.subspan(partial_sums.size() - m);
    if (m < 3) return {s.back(), std::abs(s.back() - s.front())};

    // eps[j] holds column k of the epsilon table, rows j = 0..m-1-k.
    std::vector<double> prev(m, 0.0), cur(s.begin(), s.end());
    double best = s.back(), best_prev = s[m - 2];
    for (std::size_t k = 1; k < m; ++k) {
        std::vector<double> next(m - k);
        bool broken = false;
        for (std::size_t j = 0; j + k < m; ++j) {
            const double diff = cur[j + 1] - cur[j];
            if (diff == 0.0 || !std::isfinite(diff)) {
                broken = true;
                break;
            }
            next[j] = prev[j + 1] + 1.0 / diff;
        }
        if (broken) break;
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0) {
            // even columns approximate the limit
            best = cur.back();
            best_prev = cur.size() >= 2 ? cur[cur.size() - 2] : best;
        }
    }
    return {best, std::abs(best - best_prev)};
}

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0)) throw std::invalid_argument("hurwitz_zeta: need s > 1, q > 0");
    constexpr int shift = 12;
    double sum = 0.0;
    for (int j = 0; j < shift; ++j) sum += std::pow(q + j, -s);
    const double a = q + shift;
    sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
    // Bernoulli numbers B_2k / (2k)!
    static constexpr std::array<double, 8> b2k_over_fact = {
        1.0 / 12.0,          -1.0 / 720.0,          1.0 / 30240.0,          -1.0 / 1209600.0,
        1.0 / 47900160.0,    -691.0 / 1307674368000.0, 1.0 / 74724249600.0, -3617.0 / 10670622842880000.0};
    double rising = s; // s (s+1) ... (s + 2k - 2)
    double power = std::pow(a, -s - 1.0);
    for (std::size_t k = 0; k < b2k_over_fact.size(); ++k) {
        const double term = b2k_over_fact[k] * rising * power;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        rising *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0);
        power /= a * a;
    }
    return sum;
}

double bessel_j0_zero(int k) {
    if (k < 1) throw std::invalid_argument("bessel_j0_zero: k >= 1");
    static std::mutex guard;
    static std::vector<double> zeros;
    std::lock_guard lock(guard);
    while (static_cast<int>(zeros.size()) < k) {
        const int idx = static_cast<int>(zeros.size()) + 1;
        const double beta = (idx - 0.25) * pi;
        const double b8 = 8.0 * beta;
        double x = beta + 1.0 / b8 - 124.0 / (3.0 * b8 * b8 * b8);
        for (int it = 0; it < 8; ++it) {
            const double j0 = std::cyl_bessel_j(0.0, x);
            const double j1 = std::cyl_bessel_j(1.0, x);
            const double dx = j0 / j1; // d/dx J0 = -J1
            x += dx;
            if (std::abs(dx) < 1e-15 * x) break;
        }
        zeros.push_back(x);
    }
    return zeros[static_cast<std::size_t>(k - 1)];
}

std::vector<double> richardson_diagonal(std::span<const double> steps, std::span<const double> values,
                                        std::span<const double> exponents) {
    const std::size_t n = values.size();
    std::vector<std::vector<double>> table(n);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        table[i].push_back(values[i]);
        const std::size_t levels = std::min(i, exponents.size());
        for (std::size_t j = 1; j <= levels; ++j) {
            const double hp_prev = std::pow(steps[i - 1], exponents[j - 1]);
            const double hp_cur = std::pow(steps[i], exponents[j - 1]);
            table[i].push_back((hp_prev * table[i][j - 1] - hp_cur * table[i - 1][j - 1]) / (hp_prev - hp_cur));
        }
        diag[i] = table[i].back();
    }
    return diag;
}

} // namespace fracheat::numerics
