#pragma once

#include <map>
#include <string>

namespace fracheat {

enum class CheckStatus { Passed, Failed, HypothesisFailed, NotConverged };

std::string to_string(CheckStatus s);

/// Outcome of one named numerical check. `passed` is true exactly when
/// metric <= tolerance and the status is Passed.
struct CheckReport {
    std::string name;
    double metric = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    CheckStatus status = CheckStatus::Failed;
    std::map<std::string, std::string> details;

    /// Sets passed/status from metric <= tolerance.
    static CheckReport judge(std::string name, double metric, double tolerance);
    static CheckReport hypothesis_failed(std::string name, double violation, double tolerance, std::string what);

    CheckReport &note(const std::string &key, double value);
    CheckReport &note(const std::string &key, std::string value);
};

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

} // namespace fracheat
