#include <doctest.h>

#include "fracheat/errors.hpp"
#include "fracheat/evolution.hpp"
#include "fracheat/nonlocal_operator.hpp"

#include <cmath>

using namespace fracheat;

namespace {

constexpr double pi = 3.14159265358979323846;

double max_gap(const GridFunction &a, const GridFunction &b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d;
}

std::vector<double> steps(double dt, int n) {
    std::vector<double> t;
    for (int k = 1; k <= n; ++k) t.push_back(k * dt);
    return t;
}

} // namespace

TEST_CASE("spectral stepping is exact on a single mode") {
    const auto u0 = GridFunction::periodic_box([](double x) { return 1.0 + std::cos(3.0 * x); }, 64, pi);
    for (double alpha : {0.5, 1.0, 2.0}) {
        const auto u = solve_by_spectral_stepping(u0, alpha, {0.3, 1.0});
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t i = 0; i < u0.size(); ++i) {
                const double x = u0.coordinate(i);
                CHECK(u.frames[k].values[i] ==
                      doctest::Approx(1.0 + std::exp(-u.times[k] * std::pow(3.0, alpha)) * std::cos(3.0 * x)).epsilon(1e-13));
            }
        CHECK(u.initial.has_value());
        CHECK(u.metadata.at("solver") == "spectral");
    }
}

TEST_CASE("convolution agrees with spectral stepping on periodic data") {
    const auto tp = TrigPolynomial::random_nonnegative(3, 5, 2.0 * pi);
    for (double alpha : {0.5, 1.0, 1.5}) {
        const auto box = default_box(alpha, 0.25, 1.0, 5.0, 2.0 * pi);
        const auto u0 = GridFunction::periodic_box(tp, box.n, box.half_width);
        const auto s = solve_by_spectral_stepping(u0, alpha, {0.25, 1.0});
        const auto c = solve_by_convolution(u0, std::nullopt, KernelSpec{alpha, 1, {}}, {0.25, 1.0});
        CHECK(max_gap(s.frames[0], c.frames[0]) < 1e-5);
        CHECK(max_gap(s.frames[1], c.frames[1]) < 1e-5);
    }
}

TEST_CASE("default box") {
    const auto b = default_box(1.0, 0.25, 1.0, 6.0, 2.0 * pi);
    CHECK(b.n % 32 == 0);
    CHECK(b.n >= 64);
    CHECK(std::fmod(b.half_width, pi) == doctest::Approx(0.0).scale(1.0));
    CHECK(b.half_width >= 80.0);
    CHECK_THROWS_AS(default_box(1.0, 0.0, 1.0, 6.0, 2.0 * pi), DomainError);
}

TEST_CASE("non-periodic convolution conserves mass and reproduces the semigroup") {
    const KernelSpec spec{1.0, 1, {}};
    StableKernel k(spec);
    const double h = 0.05;
    const auto u0 = GridFunction::sample([&](double x) { return k.at(std::abs(x), 0.5).value; }, 1601, -40.0, h, false);
    const auto u = solve_by_convolution(u0, kernel_tail(k, 0.5, 40.0), spec, {0.5});
    double worst = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i)
        worst = std::max(worst, std::abs(u.frames[0].values[i] - 1.0 / (pi * (1.0 + std::pow(u0.coordinate(i), 2)))));
    CHECK(worst < 1e-8);

    const auto bump = GridFunction::sample([](double x) { return std::abs(x) < 1 ? std::exp(-1.0 / (1 - x * x)) : 0.0; },
                                           401, -10.0, h, false);
    const auto v = solve_by_convolution(bump, PowerTail::zero(), spec, {1.0});
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < bump.size(); ++i) m0 += bump.values[i] * h, m1 += v.frames[0].values[i] * h;
    // node sums cover the cells, i.e. [-10 - h/2, 10 + h/2]
    CHECK(m1 + mass_outside_box(bump, spec, 1.0, -10.0 - h / 2, 10.0 + h / 2) == doctest::Approx(m0).epsilon(1e-6));
    for (double x : v.frames[0].values) CHECK(x >= 0.0);
}

TEST_CASE("convolution configuration errors") {
    const auto periodic = GridFunction::periodic_box([](double) { return 1.0; }, 32, pi);
    CHECK_THROWS_AS(solve_by_convolution(periodic, PowerTail::symmetric({{1.0, 2.0}}), KernelSpec{1.0, 1, {}}, {1.0}),
                    ConfigError);
    CHECK_THROWS_AS(solve_by_convolution(periodic, std::nullopt, KernelSpec{1.0, 1, {}}, {1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(solve_by_convolution(periodic, std::nullopt, KernelSpec{1.0, 2, {}}, {1.0}), DomainError);
    GridFunction open({0.0, 1.0, 0.0}, 0.1, 0.0, false);
    CHECK_THROWS_AS(solve_by_spectral_stepping(open, 1.0, {1.0}), DomainError);
}

TEST_CASE("backward test function") {
    const KernelSpec spec{1.5, 1, {}};
    const auto theta = GridFunction::sample([](double x) { return std::abs(x) < 1 ? std::exp(-1.0 / (1 - x * x)) : 0.0; },
                                            401, -10.0, 0.05, false);
    const auto phi = backward_test_function(theta, spec, 1.0, 0.5);
    const auto u = solve_by_convolution(theta, PowerTail::zero(), spec, {0.5});
    CHECK(max_gap(phi, u.frames[0]) < 1e-14);
    CHECK_THROWS_AS(backward_test_function(theta, spec, 1.0, 1.0), DomainError);
    const auto wide = GridFunction::sample([](double) { return 1.0; }, 64, -1.0, 0.05, false);
    CHECK_THROWS_AS(backward_test_function(wide, spec, 1.0, 0.5), DomainError);
}

TEST_CASE("enthalpy of a single mode") {
    const double alpha = 1.5, lam = std::pow(2.0, alpha), dt = 1.0 / 64;
    const auto u0 = GridFunction::periodic_box([](double x) { return std::cos(2.0 * x); }, 32, pi);
    const auto v = enthalpy(solve_by_spectral_stepping(u0, alpha, steps(dt, 64)), EnthalpyVariant::General);
    REQUIRE(v.frames.size() == 64);
    for (std::size_t k = 0; k < v.frames.size(); ++k) {
        const double t = v.times[k];
        CHECK(v.frames[k].values[0] == doctest::Approx(std::cos(2.0 * u0.origin) * (1 - std::exp(-t * lam)) / lam).epsilon(1e-7));
    }
    CHECK_THROWS_AS(enthalpy(solve_by_spectral_stepping(u0, alpha, steps(dt, 4)), EnthalpyVariant::Strict), DomainError);
}

TEST_CASE("residual of spectral solutions") {
    const auto tp = TrigPolynomial::random_nonnegative(11, 4, 2.0 * pi);
    const auto u0 = GridFunction::periodic_box(tp, 64, pi);
    const auto u = solve_by_spectral_stepping(u0, 1.0, steps(1.0 / 128, 64));
    const double r2 = residual(u, 1.0, OperatorMethod::Spectral, TimeDifference::Central2).max_abs();
    const double r4 = residual(u, 1.0, OperatorMethod::Spectral, TimeDifference::Central4).max_abs();
    CHECK(r4 < r2);
    CHECK(r4 < 1e-5);
    CHECK(residual(u, 1.0, OperatorMethod::Pv, TimeDifference::Central4).max_abs() < 1e-4);
}

TEST_CASE("comparison check") {
    const auto u0 = GridFunction::periodic_box([](double x) { return std::cos(x) - 2.0; }, 64, 2.0 * pi);
    const auto v = solve_by_spectral_stepping(u0, 1.0, steps(1.0 / 64, 64));
    const auto ok = comparison_check(v, 1.0, Cylinder{3.0, 1.0});
    CHECK(ok.passed);
    CHECK(ok.metric < 0.0);

    const auto up = GridFunction::periodic_box([](double x) { return std::cos(x) + 0.5; }, 64, 2.0 * pi);
    const auto w = solve_by_spectral_stepping(up, 1.0, steps(1.0 / 64, 64));
    const auto bad = comparison_check(w, 1.0, Cylinder{3.0, 1.0});
    CHECK(bad.status == CheckStatus::HypothesisFailed);
    CHECK_FALSE(bad.passed);
    CHECK_THROWS_AS(comparison_check(v, 1.0, Cylinder{100.0, 1.0}), DomainError);
}

TEST_CASE("space-time field invariants") {
    SpaceTimeField u;
    u.times = {1.0};
    CHECK_THROWS_AS(u.validate(), DomainError);
    u.frames.push_back(GridFunction({1.0, 2.0}, 0.5, 0.0, false));
    CHECK_NOTHROW(u.validate());
    u.times = {1.0, 2.0};
    u.frames.push_back(GridFunction({1.0, 2.0, 3.0}, 0.5, 0.0, false));
    CHECK_THROWS_AS(u.validate(), DomainError);
    u.frames.back() = GridFunction({1.0, 2.0}, 0.5, 0.0, false);
    u.times = {1.0, 3.0};
    u.initial = GridFunction({0.0, 0.0}, 0.5, 0.0, false);
    CHECK_THROWS_AS(u.uniform_step(), DomainError);
}
