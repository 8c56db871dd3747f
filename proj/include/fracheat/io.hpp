#pragma once

// Run configuration, command-line parsing, field/report files and the
// subcommand driver used by the `fracheat` executable.

#include "fracheat/check_report.hpp"
#include "fracheat/evolution.hpp"
#include "fracheat/kernel.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fracheat {

enum class FileFormat { Csv, Json };

FileFormat parse_format(const std::string &s); // "csv" | "json", else ConfigError
std::string to_string(FileFormat f);

struct RunConfig {
    std::string command; // kernel | solve | verify | constant
    double alpha = 1.0;
    int dim = 1;
    double t = 1.0; // kernel time
    std::size_t grid_points = 256;
    double box_halfwidth = 10.0;
    std::vector<double> times{1.0};
    unsigned long long seed = 7;
    std::vector<std::string> suites{"all"};
    std::filesystem::path out; // empty: standard output
    FileFormat format = FileFormat::Csv;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

nlohmann::json to_json(const RunConfig &cfg);
/// Keys mirror the RunConfig fields; absent keys keep the values of `base`.
RunConfig config_from_json(const nlohmann::json &j, RunConfig base = {});
RunConfig load_config(const std::filesystem::path &path, RunConfig base = {});

/// Thrown by parse_cli for --help; what() is the help text.
class HelpRequested : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Subcommand and flags, layered over `--config` when given. Throws
/// ConfigError on unknown flags or invalid values.
RunConfig parse_cli(int argc, const char *const *argv);

void write_field_csv(std::ostream &os, const SpaceTimeField &u);
SpaceTimeField read_field_csv(std::istream &is);
nlohmann::json field_to_json(const SpaceTimeField &u);
SpaceTimeField field_from_json(const nlohmann::json &j);
void write_field_json(std::ostream &os, const SpaceTimeField &u);
SpaceTimeField read_field_json(std::istream &is);

void write_field(const std::filesystem::path &path, const SpaceTimeField &u, FileFormat format);
SpaceTimeField read_field(const std::filesystem::path &path, FileFormat format);

nlohmann::json report_to_json(const CheckReport &r);
void write_reports_jsonl(std::ostream &os, const std::vector<CheckReport> &reports);
/// Fixed-width table for terminals.
void write_report_table(std::ostream &os, const std::vector<CheckReport> &reports);

/// 0 all pass, 1 check failure, 3 numerical non-convergence (takes precedence).
int exit_code(const std::vector<CheckReport> &reports);

namespace exit_codes {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int usage = 2;
inline constexpr int not_converged = 3;
} // namespace exit_codes

/// Executes cfg.command. Data goes to cfg.out (or `out`), summaries to `log`.
/// Library exceptions propagate; the executable maps them to exit codes.
int run(const RunConfig &cfg, std::ostream &out, std::ostream &log);

/// run() with exceptions mapped: ConfigError/DomainError/ParseError -> 2,
/// NumericalError -> 3. Messages go to `log`.
int run_guarded(int argc, const char *const *argv, std::ostream &out, std::ostream &log);

} // namespace fracheat
