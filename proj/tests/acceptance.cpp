// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance <path-to-fracheat-cli>

#include "fracheat/evolution.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/nonlocal_operator.hpp"
#include "fracheat/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace fracheat;

namespace {

constexpr double pi = 3.14159265358979323846;

// pinned tolerances
constexpr double tol_closed_form = 1e-8;
constexpr double budget_closed_form_s = 10.0;
constexpr double tol_mass = 1e-6;
constexpr double tol_constant = 1e-6;
constexpr double tol_semigroup = 1e-6;
constexpr double tol_operator = 1e-4;
constexpr double tol_widder = 1e-4;
constexpr double widder_refinement_ratio = 0.5;
constexpr double budget_widder_s = 60.0;
constexpr double tol_lower_bound = 1e-5;
constexpr double tol_comparison = 1e-5;
constexpr double tol_weak_form = 1e-4;
constexpr double weak_form_halving_ratio = 0.125; // third order or better
constexpr double tol_enthalpy_residual = 1e-3;
constexpr double tol_enthalpy_subharmonic = 1e-5;
constexpr double tol_enthalpy_mode = 1e-6;
constexpr double budget_suite_s = 300.0;

using clock_type = std::chrono::steady_clock;

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Verdict {
    bool pass = true;
    double metric = 0.0;
    double tol = 0.0;
    std::string note;

    void require(bool ok, const std::string &why) {
        if (!ok) {
            pass = false;
            if (!note.empty()) note += "; ";
            note += why;
        }
    }
};

int failures = 0;

void print(int id, const char *what, const Verdict &v) {
    if (!v.pass) ++failures;
    std::printf("[%s] %2d %-34s metric=%.3e tol=%.1e%s%s\n", v.pass ? "PASS" : "FAIL", id, what, v.metric, v.tol,
                v.note.empty() ? "" : "  ", v.note.c_str());
    std::fflush(stdout);
}

// Reports whose name starts with prefix, re-judged against a pinned tolerance.
Verdict rejudge(const std::vector<CheckReport> &reports, const std::string &prefix, double tol) {
    Verdict v;
    v.tol = tol;
    v.metric = -std::numeric_limits<double>::infinity();
    int seen = 0;
    for (const auto &r : reports) {
        if (r.name.rfind(prefix, 0) != 0) continue;
        ++seen;
        v.metric = std::max(v.metric, r.metric);
        v.require(r.status == CheckStatus::Passed || r.status == CheckStatus::Failed, r.name + " " + to_string(r.status));
        v.require(r.metric <= tol, r.name + " above tolerance");
    }
    v.require(seen > 0, "no reports for " + prefix);
    return v;
}

Verdict merge(Verdict a, const Verdict &b) {
    a.pass = a.pass && b.pass;
    if (a.tol == b.tol) a.metric = std::max(a.metric, b.metric);
    if (!b.note.empty()) a.note += (a.note.empty() ? "" : "; ") + b.note;
    return a;
}

std::vector<CheckReport> suite(const std::string &name) {
    try {
        return run_suite({name});
    } catch (const std::exception &e) {
        CheckReport r;
        r.name = name;
        r.metric = std::numeric_limits<double>::infinity();
        r.status = CheckStatus::NotConverged;
        r.details["error"] = e.what();
        return {r};
    }
}

void criterion_1() {
    const auto t0 = clock_type::now();
    Verdict v;
    v.tol = tol_closed_form;
    for (double alpha : {1.0, 2.0}) {
        StableKernel k(KernelSpec{alpha, 1, {}});
        for (int i = 0; i < 512; ++i) {
            const double r = 40.0 * i / 511.0;
            const double d =
                std::abs(k.profile(r, KernelRoute::Quadrature).value - k.profile(r, KernelRoute::ClosedForm).value);
            v.metric = std::max(v.metric, d);
        }
    }
    const double secs = seconds_since(t0);
    v.require(v.metric <= tol_closed_form, "closed-form gap");
    v.require(secs <= budget_closed_form_s, "over 10 s");
    v.note += (v.note.empty() ? "" : "; ") + std::string("time=") + sci(secs) + "s";
    print(1, "closed-form kernel agreement", v);
}

void criterion_3() {
    const auto reports = suite("constant");
    auto v = merge(rejudge(reports, "constant/integral(1,1)", tol_constant), rejudge(reports, "constant/C(", tol_constant));
    const auto c = normalization_constant(1.0, 1);
    const double cross = std::abs(c.value - 1.0 / pi) * pi;
    v.metric = std::max(v.metric, cross);
    v.require(cross <= tol_constant, "C(1,1) != 1/pi");
    print(3, "constant C(1,1) = 1/pi", v);
}

void criterion_4() {
    const auto reports = suite("semigroup");
    auto v = rejudge(reports, "semigroup/", tol_semigroup);
    bool closed = false;
    for (const auto &r : reports)
        if (r.name == "semigroup/alpha=1" && r.details.count("closed_form_distance"))
            closed = std::stod(r.details.at("closed_form_distance")) <= tol_semigroup;
    v.require(closed, "alpha=1 closed-form identity missing or off");
    print(4, "semigroup P_0.5 * P_0.5 = P_1", v);
}

void criterion_6() {
    const auto tp = TrigPolynomial::random_nonnegative(SuiteConfig{}.seed, 6, 2.0 * pi);
    const std::vector<double> times{0.25, 1.0};
    for (double alpha : {0.5, 1.0, 1.5}) {
        const auto t0 = clock_type::now();
        Verdict v;
        v.tol = tol_widder;
        try {
            const auto box = default_box(alpha, times.front(), times.back(), 6.0, 2.0 * pi);
            const auto coarse = check_representation(GridFunction::periodic_box(tp, box.n, box.half_width), alpha, times);
            const auto fine =
                check_representation(GridFunction::periodic_box(tp, 4 * box.n, 2.0 * box.half_width), alpha, times);
            v.metric = coarse.metric;
            const double ratio = fine.metric / coarse.metric;
            v.require(coarse.metric <= tol_widder, "cross-solver distance");
            v.require(ratio <= widder_refinement_ratio, "refinement ratio " + sci(ratio));
            v.note = "refined=" + sci(fine.metric);
        } catch (const std::exception &e) {
            v.metric = std::numeric_limits<double>::infinity();
            v.require(false, e.what());
        }
        const double secs = seconds_since(t0);
        v.require(secs <= budget_widder_s, "over 60 s");
        v.note += "; time=" + sci(secs) + "s";
        const std::string what = "Widder equivalence alpha=" + format_double(alpha);
        print(6, what.c_str(), v);
    }
}

void criterion_8() {
    const auto reports = suite("maximum_principle");
    auto v = rejudge(reports, "maximum_principle/", tol_comparison);
    int eps_cases = 0;
    for (const auto &r : reports) eps_cases += r.name.find("eps=") != std::string::npos;
    v.require(eps_cases == 6, "expected 3 alphas x 2 eps");
    print(8, "maximum principle (barrier)", v);
}

void criterion_9() {
    const auto reports = suite("weak_form");
    auto v = rejudge(reports, "weak_form/", tol_weak_form);
    const auto order = rejudge(reports, "weak_form_order/", weak_form_halving_ratio);
    v = merge(v, order);
    v.note += (v.note.empty() ? "" : "; ") + std::string("worst halving ratio=") + sci(order.metric);
    print(9, "weak-form identity", v);
}

void criterion_10() {
    const auto reports = suite("enthalpy");
    auto v = rejudge(reports, "enthalpy_residual/", tol_enthalpy_residual);
    v = merge(v, rejudge(reports, "enthalpy_monotone/", 0.0));
    v = merge(v, rejudge(reports, "enthalpy_subharmonic/", tol_enthalpy_subharmonic));
    const auto mode = rejudge(reports, "enthalpy_single_mode/", tol_enthalpy_mode);
    v = merge(v, mode);
    v.note += (v.note.empty() ? "" : "; ") + std::string("single-mode gap=") + sci(mode.metric);
    print(10, "enthalpy", v);
}

struct Captured {
    int status = -1;
    std::string out;
};

Captured run_cli(const std::string &cli) {
    Captured c;
    const std::string cmd = "'" + cli + "' verify --suite all --seed 7 2>/dev/null";
    FILE *p = popen(cmd.c_str(), "r");
    if (!p) return c;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) c.out.append(buf, got);
    const int raw = pclose(p);
    c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return c;
}

void criterion_11(const std::string &cli) {
    Verdict v;
    v.tol = budget_suite_s;
    const auto t0 = clock_type::now();
    const auto a = run_cli(cli);
    const double first = seconds_since(t0);
    const auto b = run_cli(cli);
    v.metric = first;
    v.require(a.status == 0 && b.status == 0, "exit " + std::to_string(a.status) + "/" + std::to_string(b.status));
    v.require(!a.out.empty() && a.out == b.out, "outputs differ");
    v.require(first <= budget_suite_s, "over 5 min");
    v.note += (v.note.empty() ? "" : "; ") + std::string("second run ") + sci(seconds_since(t0) - first) + "s";
    print(11, "verify --suite all determinism", v);
}

} // namespace

int main(int argc, char **argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <fracheat-cli>\n";
        return 2;
    }
    criterion_1();
    print(2, "kernel normalization", rejudge(suite("normalization"), "normalization/", tol_mass));
    criterion_3();
    criterion_4();
    {
        auto v = rejudge(suite("operator_crosscheck"), "operator_crosscheck/", tol_operator);
        print(5, "PV vs spectral, product rule", merge(v, rejudge(suite("product_rule"), "product_rule/", tol_operator)));
    }
    criterion_6();
    print(7, "lower bound", rejudge(suite("lower_bound"), "lower_bound/", tol_lower_bound));
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11(argv[1]);
    std::printf("%s: %d criterion line(s) failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
