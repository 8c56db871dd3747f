#include <doctest.h>

#include "fracheat/errors.hpp"
#include "fracheat/nonlocal_operator.hpp"

#include <cmath>

using namespace fracheat;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("normalization constant oracles") {
    // mpmath, 30 digits: tests/oracles/kernel_oracles.py
    struct {
        int dim;
        double alpha, value;
    } cases[] = {{1, 1.0, 0.31830988618379067154},
                 {1, 0.1, 0.047372166018939413576},
                 {1, 1.9, 0.090992482475194569511},
                 {2, 1.0, 0.15915494309189533577},
                 {3, 0.5, 0.047620226950680727339}};
    for (const auto &c : cases) {
        CAPTURE(c.alpha);
        const auto nc = normalization_constant(c.alpha, c.dim);
        CHECK(nc.value == doctest::Approx(c.value).epsilon(1e-12));
        CHECK(nc.integral * nc.value == doctest::Approx(1.0));
        CHECK(normalization_constant_closed_form(c.alpha, c.dim) == doctest::Approx(c.value).epsilon(1e-13));
    }
    CHECK(normalization_constant(1.0, 1).integral == doctest::Approx(pi).epsilon(1e-13));
}

TEST_CASE("normalization constant budget halves the error") {
    const double exact = normalization_constant_closed_form(1.9, 1);
    double prev = std::abs(normalization_constant(1.9, 1, 2).value - exact);
    for (int b : {4, 8}) {
        const double err = std::abs(normalization_constant(1.9, 1, b).value - exact);
        CHECK(err <= 0.5 * prev);
        prev = err;
    }
    CHECK_THROWS_AS(normalization_constant(1.0, 1, 0), DomainError);
}

TEST_CASE("principal value on cosines") {
    for (double alpha : {0.3, 0.5, 1.0, 1.5, 1.8}) {
        const auto norm = normalization_constant(alpha, 1);
        for (double k : {1.0, 3.0}) {
            const auto f = FieldModel::periodic([k](double y) { return std::cos(k * y); }, 2.0 * pi);
            for (double x : {0.0, 0.4, 2.0}) {
                CAPTURE(alpha);
                CAPTURE(k);
                CHECK(frac_laplacian_pv(f, x, PVConfig{}, norm) ==
                      doctest::Approx(std::pow(k, alpha) * std::cos(k * x)).epsilon(1e-8).scale(1.0));
            }
        }
    }
}

TEST_CASE("principal value with a power tail") {
    // (-Delta)^(1/2) 1/(1+x^2) = (1 - x^2)/(1 + x^2)^2
    const auto norm = normalization_constant(1.0, 1);
    PowerTail tail;
    for (int j = 0; j < 30; ++j) {
        const double a = (j % 2 ? -1.0 : 1.0);
        tail.right.push_back({a, 2.0 + 2.0 * j});
    }
    tail.left = tail.right;
    const auto f = FieldModel::analytic([](double y) { return 1.0 / (1.0 + y * y); }, tail);
    for (double x : {0.0, 0.5, 2.0}) {
        const double expect = (1.0 - x * x) / ((1.0 + x * x) * (1.0 + x * x));
        CHECK(frac_laplacian_pv(f, x, PVConfig{}, norm) == doctest::Approx(expect).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("principal value errors") {
    const auto norm = normalization_constant(1.0, 1);
    const auto bare = FieldModel::analytic([](double y) { return std::exp(-y * y); });
    CHECK_THROWS_AS(frac_laplacian_pv(bare, 0.0, PVConfig{}, norm), ConfigError);

    PVConfig cfg;
    cfg.eps_schedule = {0.1, 0.2};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    PVConfig strict;
    strict.eps_schedule = {0.5, 0.4};
    strict.richardson_order = 0;
    strict.rel_tol = 1e-15;
    strict.abs_tol = 1e-15;
    const auto f = FieldModel::periodic([](double y) { return std::cos(5.0 * y); }, 2.0 * pi);
    CHECK_THROWS_AS(frac_laplacian_pv(f, 0.0, strict, norm), PvNotConverged);

    GridFunction open({1.0, 2.0, 3.0, 4.0}, 0.1, 0.0, false);
    CHECK_THROWS_AS(frac_laplacian_spectral(open, 1.0), DomainError);
}

TEST_CASE("coupled truncation converges only slowly") {
    const auto norm = normalization_constant(1.0, 1);
    const auto f = FieldModel::periodic([](double y) { return std::cos(y); }, 2.0 * pi);
    const double e1 = std::abs(frac_laplacian_pv_coupled(f, 0.0, 0.1, norm) - 1.0);
    const double e2 = std::abs(frac_laplacian_pv_coupled(f, 0.0, 0.05, norm) - 1.0);
    CHECK(e2 < e1);
    CHECK(e2 > 1e-4);
}

TEST_CASE("stencil and spectral operators agree on the grid") {
    const std::size_t n = 256;
    const auto g = GridFunction::periodic_box([](double x) { return std::exp(std::sin(x)); }, n, pi);
    for (double alpha : {0.5, 1.0, 1.5}) {
        const auto a = PeriodicPvStencil(alpha, n, g.spacing).apply(g);
        const auto b = frac_laplacian_spectral(g, alpha);
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
        CHECK(d < 1e-7);
    }
    CHECK_THROWS_AS(PeriodicPvStencil(1.0, 15, 0.1), DomainError);
}

TEST_CASE("bilinear form") {
    const auto norm = normalization_constant(1.0, 1);
    const auto f = FieldModel::periodic([](double y) { return std::cos(y); }, 2.0 * pi);
    // 2 cos L cos - L(cos^2) = 2 cos^2 - cos 2x = 1 for alpha = 1
    for (double x : {0.0, 1.0, 2.5})
        CHECK(bilinear_form(f, f, x, PVConfig{}, norm) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("weighted norm") {
    const auto one = FieldModel::periodic([](double) { return 1.0; }, 2.0 * pi);
    CHECK(weighted_norm(one, 1.0).value == doctest::Approx(pi).epsilon(1e-10));
    const auto one_grid = GridFunction::periodic_box([](double) { return 1.0; }, 64, pi);
    CHECK(weighted_norm(one_grid, std::nullopt, 1.0).value == doctest::Approx(pi).epsilon(1e-10));

    // |y|^0.6 with alpha = 0.5: the weighted integrand decays like |y|^-0.9
    const auto grow = GridFunction::sample([](double x) { return std::pow(std::abs(x), 0.6); }, 201, -10.0, 0.1, false);
    const auto w = weighted_norm(grow, PowerTail::symmetric({{1.0, -0.6}}), 0.5);
    CHECK_FALSE(w.finite);
    CHECK(w.diagnostic.find("not-in-L") != std::string::npos);
    CHECK_THROWS_AS(weighted_norm(one_grid, std::nullopt, 1.0, 2), DomainError);
}
