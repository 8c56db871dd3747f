#include <doctest.h>

#include "fracheat/errors.hpp"
#include "fracheat/verification.hpp"

#include <cmath>

using namespace fracheat;

namespace {
constexpr double pi = 3.14159265358979323846;

std::vector<double> steps(double dt, int n) {
    std::vector<double> t;
    for (int k = 1; k <= n; ++k) t.push_back(k * dt);
    return t;
}
} // namespace

TEST_CASE("cutoffs and bump") {
    CHECK(smooth_cutoff(0.0, 5.0) == 1.0);
    CHECK(smooth_cutoff(4.0, 5.0) == 1.0);
    CHECK(smooth_cutoff(-5.0, 5.0) == 0.0);
    CHECK(smooth_cutoff(4.5, 5.0) == doctest::Approx(0.5));
    CHECK(linear_cutoff(4.25, 5.0) == doctest::Approx(0.75));
    CHECK(linear_cutoff(-7.0, 5.0) == 0.0);
    CHECK(bump(2.0, 2.0, 1.0) == 1.0);
    CHECK(bump(3.0, 2.0, 1.0) == 0.0);
    for (double x = -6.0; x < 6.0; x += 0.1) {
        CHECK(smooth_cutoff(x, 5.0) >= 0.0);
        CHECK(smooth_cutoff(x, 5.0) <= 1.0);
    }
}

TEST_CASE("weak form: the consistent sign closes, the opposite sign does not") {
    const auto tp = TrigPolynomial::random_nonnegative(5, 4, 2.0 * pi);
    const auto u0 = GridFunction::periodic_box(tp, 128, pi);
    const auto theta = GridFunction::periodic_box([](double x) { return bump(x, 0.0, 1.5); }, 128, pi);
    const auto u = solve_by_spectral_stepping(u0, 1.0, steps(1.0 / 32, 32));
    const auto r = check_weak_form(u, theta, [](double t) { return 1.0 + t * t; }, [](double t) { return 2.0 * t; }, 1.0);
    CHECK(r.passed);
    const double lhs = std::stod(r.details.at("lhs")), boundary = std::stod(r.details.at("boundary"));
    CHECK(std::abs(lhs - boundary) > 1e-2);
}

TEST_CASE("lower bound and representation") {
    const auto tp = TrigPolynomial::random_nonnegative(7, 3, 2.0 * pi);
    const auto box = default_box(1.0, 0.5, 1.0, 3.0, 2.0 * pi);
    const auto u0 = GridFunction::periodic_box(tp, box.n, box.half_width);
    const auto u = solve_by_spectral_stepping(u0, 1.0, {0.5, 1.0});
    CHECK(check_lower_bound(u, KernelSpec{1.0, 1, {}}).passed);
    CHECK(check_representation(u0, 1.0, {0.5, 1.0}).passed);

    auto lowered = u;
    for (auto &v : lowered.frames[1].values) v -= 1e-3;
    const auto r = check_lower_bound(lowered, KernelSpec{1.0, 1, {}});
    CHECK_FALSE(r.passed);
    CHECK(r.metric == doctest::Approx(1e-3).epsilon(1e-3));

    auto negative = u;
    negative.frames[0].values[0] = -1.0;
    CHECK_THROWS_AS(check_lower_bound(negative, KernelSpec{1.0, 1, {}}), DomainError);
}

TEST_CASE("membership") {
    const auto u0 = GridFunction::periodic_box([](double) { return 2.0; }, 64, pi);
    const auto u = solve_by_spectral_stepping(u0, 1.0, {0.5, 1.0});
    const auto r = check_membership(u, 1.0);
    CHECK(r.passed);
    CHECK(r.metric == doctest::Approx(2.0 * pi).epsilon(1e-9));
    CHECK(std::stod(r.details.at("time_integral")) == doctest::Approx(pi).epsilon(1e-9));
    CHECK_FALSE(check_membership(u, 1.0, {}, 1.0).passed);
}

TEST_CASE("growth bound flags a failed subharmonicity hypothesis") {
    const auto b0 = GridFunction::periodic_box([](double x) { return bump(x, 0.0, 1.0); }, 256, 16.0);
    const auto u = solve_by_spectral_stepping(b0, 1.0, {0.5, 1.0});
    // u itself is not subharmonic near its peak
    const auto r = check_growth_bound(u, 1.0);
    CHECK(r.status == CheckStatus::HypothesisFailed);
}

TEST_CASE("suite registry") {
    const auto &names = registered_suites();
    REQUIRE(names.size() == 17);
    CHECK(names.front() == "kernel_closed_form");
    CHECK(run_suite({}).empty());
    CHECK_THROWS_AS(run_suite({"no_such_suite"}), ConfigError);
    const auto a = run_suite({"sandwich", "tail_bound", "constant"});
    const auto b = run_suite({"sandwich", "tail_bound", "constant"});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].passed);
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].metric == b[i].metric);
        CHECK(a[i].details == b[i].details);
    }
}
