#include "fracheat/check_report.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace fracheat {

std::string to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::Passed: return "passed";
    case CheckStatus::Failed: return "failed";
    case CheckStatus::HypothesisFailed: return "hypothesis-failed";
    case CheckStatus::NotConverged: return "not-converged";
    }
    return "unknown";
}

CheckReport CheckReport::judge(std::string name, double metric, double tolerance) {
    CheckReport r;
    r.name = std::move(name);
    r.metric = metric;
    r.tolerance = tolerance;
    r.passed = metric <= tolerance; // false for NaN
    r.status = r.passed ? CheckStatus::Passed : CheckStatus::Failed;
    return r;
}

CheckReport CheckReport::hypothesis_failed(std::string name, double violation, double tolerance, std::string what) {
    CheckReport r;
    r.name = std::move(name);
    r.metric = violation;
    r.tolerance = tolerance;
    r.passed = false;
    r.status = CheckStatus::HypothesisFailed;
    r.details["hypothesis"] = std::move(what);
    return r;
}

CheckReport &CheckReport::note(const std::string &key, double value) {
    details[key] = format_double(value);
    return *this;
}

CheckReport &CheckReport::note(const std::string &key, std::string value) {
    details[key] = std::move(value);
    return *this;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), end);
}

} // namespace fracheat
