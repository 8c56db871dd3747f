#include "fracheat/io.hpp"

#include "fracheat/errors.hpp"
#include "fracheat/nonlocal_operator.hpp"
#include "fracheat/numerics.hpp"
#include "fracheat/verification.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace fracheat {

namespace {

using nlohmann::json;

const char *const commands[] = {"kernel", "solve", "verify", "constant"};

double parse_number(const std::string &s, std::size_t line) {
    double v = 0.0;
    const char *b = s.data(), *e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw ParseError("line " + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

std::string join_doubles(const std::vector<double> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
    return s;
}

std::ofstream open_out(const std::filesystem::path &path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    return os;
}

std::ifstream open_in(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + path.string());
    return is;
}

const GridFunction *reference_grid(const SpaceTimeField &u) {
    if (u.initial) return &*u.initial;
    return u.frames.empty() ? nullptr : &u.frames.front();
}

std::filesystem::path with_suffix(const std::filesystem::path &p, const std::string &tag) {
    auto q = p;
    q.replace_filename(p.stem().string() + "." + tag + p.extension().string());
    return q;
}

// Seeded periodic datum on [-xmax, xmax): a whole number of periods near 2 pi.
TrigPolynomial solve_datum(const RunConfig &cfg) {
    const double periods = std::max(1.0, std::round(cfg.box_halfwidth / numerics::pi));
    return TrigPolynomial::random_nonnegative(cfg.seed, 6, 2.0 * cfg.box_halfwidth / periods);
}

int run_kernel(const RunConfig &cfg, std::ostream &out) {
    const KernelSpec spec{cfg.alpha, cfg.dim, {}};
    const auto table = tabulate_kernel(spec, RadialGrid::uniform(cfg.box_halfwidth, cfg.grid_points), cfg.t);
    auto emit = [&](std::ostream &os) {
        if (cfg.format == FileFormat::Csv) write_kernel_csv(os, table);
        else
            os << json{{"alpha", table.alpha}, {"dim", table.dim}, {"t", table.t},
                       {"r", table.r},         {"value", table.value}, {"abs_err", table.abs_err}}
                      .dump()
               << "\n";
    };
    if (cfg.out.empty()) emit(out);
    else {
        auto os = open_out(cfg.out);
        emit(os);
    }
    return exit_codes::ok;
}

int run_solve(const RunConfig &cfg, std::ostream &out, std::ostream &log) {
    const auto tp = solve_datum(cfg);
    const auto u0 = GridFunction::periodic_box(tp, cfg.grid_points, cfg.box_halfwidth);
    auto conv = solve_by_convolution(u0, std::nullopt, KernelSpec{cfg.alpha, 1, {}}, cfg.times);
    auto spec = solve_by_spectral_stepping(u0, cfg.alpha, cfg.times);
    double dist = 0.0;
    for (std::size_t k = 0; k < conv.frames.size(); ++k)
        for (std::size_t i = 0; i < u0.size(); ++i)
            dist = std::max(dist, std::abs(conv.frames[k].values[i] - spec.frames[k].values[i]));
    for (auto *f : {&conv, &spec}) {
        f->metadata["seed"] = std::to_string(cfg.seed);
        f->metadata["datum"] = "trig-polynomial";
    }
    if (cfg.out.empty()) {
        if (cfg.format == FileFormat::Csv) write_field_csv(out, conv);
        else write_field_json(out, conv);
    } else {
        write_field(cfg.out, conv, cfg.format);
        write_field(with_suffix(cfg.out, "spectral"), spec, cfg.format);
    }
    const double tol = 1e-4;
    log << "cross-solver distance " << format_double(dist) << " (tolerance " << format_double(tol) << ")\n";
    return dist <= tol ? exit_codes::ok : exit_codes::check_failed;
}

int run_verify(const RunConfig &cfg, std::ostream &out, std::ostream &log) {
    SuiteConfig sc;
    sc.seed = cfg.seed;
    const auto reports = run_suite(cfg.suites, sc);
    if (cfg.out.empty()) write_reports_jsonl(out, reports);
    else {
        auto os = open_out(cfg.out);
        write_reports_jsonl(os, reports);
        write_report_table(out, reports);
    }
    const int code = exit_code(reports);
    const auto passed = std::count_if(reports.begin(), reports.end(), [](const CheckReport &r) { return r.passed; });
    log << passed << "/" << reports.size() << " checks passed\n";
    return code;
}

int run_constant(const RunConfig &cfg, std::ostream &out) {
    const auto c = normalization_constant(cfg.alpha, cfg.dim);
    const double closed = normalization_constant_closed_form(cfg.alpha, cfg.dim);
    if (cfg.format == FileFormat::Json)
        out << json{{"alpha", c.alpha}, {"dim", c.dim}, {"value", c.value}, {"error", c.quad_error}, {"closed_form", closed}}.dump()
            << "\n";
    else
        out << "C(" << cfg.dim << ", " << format_double(cfg.alpha) << ") = " << format_double(c.value) << " +- "
            << format_double(c.quad_error) << "\nclosed form " << format_double(closed) << "\n";
    return exit_codes::ok;
}

} // namespace

FileFormat parse_format(const std::string &s) {
    if (s == "csv") return FileFormat::Csv;
    if (s == "json") return FileFormat::Json;
    throw ConfigError("unknown format '" + s + "' (csv or json)");
}

std::string to_string(FileFormat f) { return f == FileFormat::Csv ? "csv" : "json"; }

void RunConfig::validate() const {
    if (!command.empty() && std::find(std::begin(commands), std::end(commands), command) == std::end(commands))
        throw ConfigError("unknown command '" + command + "'");
    if (!(alpha > 0.0 && alpha <= 2.0)) throw ConfigError("alpha must lie in (0, 2]");
    if (dim < 1 || dim > 3) throw ConfigError("dim must be 1, 2 or 3");
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("t must be positive");
    if (grid_points < 16) throw ConfigError("grid_points must be >= 16");
    if (!(box_halfwidth > 0.0) || !std::isfinite(box_halfwidth)) throw ConfigError("box_halfwidth must be positive");
    if (times.empty()) throw ConfigError("times must not be empty");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0) || !std::isfinite(times[i])) throw ConfigError("times must be positive");
        if (i && !(times[i] > times[i - 1])) throw ConfigError("times must be strictly increasing");
    }
    if (command == "solve" && dim != 1) throw ConfigError("solve supports dim = 1 only");
}

json to_json(const RunConfig &cfg) {
    return json{{"command", cfg.command},
                {"alpha", cfg.alpha},
                {"dim", cfg.dim},
                {"t", cfg.t},
                {"grid_points", cfg.grid_points},
                {"box_halfwidth", cfg.box_halfwidth},
                {"times", cfg.times},
                {"seed", cfg.seed},
                {"suites", cfg.suites},
                {"out", cfg.out.string()},
                {"format", to_string(cfg.format)}};
}

RunConfig config_from_json(const json &j, RunConfig base) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    static const char *const known[] = {"command", "alpha", "dim", "t", "grid_points", "box_halfwidth",
                                        "times", "seed", "suites", "out", "format"};
    for (const auto &[key, value] : j.items())
        if (std::find_if(std::begin(known), std::end(known), [&](const char *k) { return key == k; }) == std::end(known))
            throw ConfigError("config: unknown key '" + key + "'");
    try {
        if (j.contains("command")) base.command = j.at("command").get<std::string>();
        if (j.contains("alpha")) base.alpha = j.at("alpha").get<double>();
        if (j.contains("dim")) base.dim = j.at("dim").get<int>();
        if (j.contains("t")) base.t = j.at("t").get<double>();
        if (j.contains("grid_points")) base.grid_points = j.at("grid_points").get<std::size_t>();
        if (j.contains("box_halfwidth")) base.box_halfwidth = j.at("box_halfwidth").get<double>();
        if (j.contains("times")) base.times = j.at("times").get<std::vector<double>>();
        if (j.contains("seed")) base.seed = j.at("seed").get<unsigned long long>();
        if (j.contains("suites")) base.suites = j.at("suites").get<std::vector<std::string>>();
        if (j.contains("out")) base.out = j.at("out").get<std::string>();
        if (j.contains("format")) base.format = parse_format(j.at("format").get<std::string>());
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return base;
}

RunConfig load_config(const std::filesystem::path &path, RunConfig base) {
    auto is = open_in(path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error &e) {
        throw ParseError(path.string() + ": byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return config_from_json(j, std::move(base));
}

RunConfig parse_cli(int argc, const char *const *argv) {
    CLI::App app{"Fractional heat equation toolkit", "fracheat"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::optional<double> alpha, t, xmax;
    std::optional<int> dim;
    std::optional<std::size_t> n;
    std::vector<double> times;
    std::optional<unsigned long long> seed;
    std::vector<std::string> suites;
    std::string out, format;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", config_path, "JSON file with RunConfig defaults");
        sub->add_option("--alpha", alpha, "stability index in (0, 2]");
        sub->add_option("--out", out, "output file (default: standard output)");
        sub->add_option("--format", format, "csv or json");
    };
    auto *kernel = app.add_subcommand("kernel", "tabulate P_t on a radial grid");
    add_common(kernel);
    kernel->add_option("--dim", dim, "space dimension");
    kernel->add_option("--t", t, "time");
    kernel->add_option("--xmax", xmax, "largest radius");
    kernel->add_option("--n", n, "number of radii");

    auto *solve = app.add_subcommand("solve", "solve by convolution and spectrally, dump both fields");
    add_common(solve);
    solve->add_option("--times", times, "output times")->delimiter(',');
    solve->add_option("--n", n, "grid points");
    solve->add_option("--xmax", xmax, "box half-width");
    solve->add_option("--seed", seed, "datum seed");

    auto *verify = app.add_subcommand("verify", "run verification suites");
    add_common(verify);
    verify->add_option("--suite", suites, "suite name or all")->delimiter(',');
    verify->add_option("--seed", seed, "seed");

    auto *constant = app.add_subcommand("constant", "print C(n, alpha)");
    add_common(constant);
    constant->add_option("--dim", dim, "space dimension");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError &e) {
        throw ConfigError(e.what());
    }

    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    cfg.command = app.get_subcommands().front()->get_name();
    if (alpha) cfg.alpha = *alpha;
    if (dim) cfg.dim = *dim;
    if (t) cfg.t = *t;
    if (xmax) cfg.box_halfwidth = *xmax;
    if (n) cfg.grid_points = *n;
    if (!times.empty()) cfg.times = times;
    if (seed) cfg.seed = *seed;
    if (!suites.empty()) cfg.suites = suites;
    if (!out.empty()) cfg.out = out;
    if (!format.empty()) cfg.format = parse_format(format);
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------
// fields

void write_field_csv(std::ostream &os, const SpaceTimeField &u) {
    u.validate();
    os << "# fracheat-field v1\n";
    for (const auto &[k, v] : u.metadata) {
        if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos)
            throw DomainError("write_field_csv: metadata '" + k + "' is not representable");
        os << "# " << k << "=" << v << "\n";
    }
    const GridFunction *ref = reference_grid(u);
    if (ref) {
        os << "# grid.n=" << ref->size() << "\n";
        os << "# grid.spacing=" << format_double(ref->spacing) << "\n";
        os << "# grid.origin=" << format_double(ref->origin) << "\n";
        os << "# grid.periodic=" << (ref->periodic ? "true" : "false") << "\n";
    }
    os << "# times=" << join_doubles(u.times) << "\n";
    os << "# initial=" << (u.initial ? "true" : "false") << "\n";
    os << "t,x,value\n";
    const auto times = u.all_times();
    for (std::size_t k = 0; k < u.slice_count(); ++k) {
        const auto &g = u.slice(k);
        const std::string tk = format_double(times[k]);
        for (std::size_t i = 0; i < g.size(); ++i)
            os << tk << ',' << format_double(g.coordinate(i)) << ',' << format_double(g.values[i]) << '\n';
    }
}

SpaceTimeField read_field_csv(std::istream &is) {
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string &what) { return ParseError("line " + std::to_string(lineno) + ": " + what); };
    if (!std::getline(is, line) || (++lineno, line != "# fracheat-field v1")) throw fail("missing '# fracheat-field v1' signature");

    SpaceTimeField u;
    std::optional<std::size_t> n;
    double spacing = 1.0, origin = 0.0;
    bool periodic = false, initial = false, have_times = false;
    while (true) {
        if (!std::getline(is, line)) throw fail("missing 't,x,value' header");
        ++lineno;
        if (line == "t,x,value") break;
        if (line.rfind("# ", 0) != 0) throw fail("expected '# key=value' or the header");
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw fail("expected '# key=value'");
        const std::string key = line.substr(2, eq - 2), value = line.substr(eq + 1);
        if (key == "grid.n") {
            std::size_t v = 0;
            auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc() || p != value.data() + value.size()) throw fail("bad grid.n");
            n = v;
        } else if (key == "grid.spacing") spacing = parse_number(value, lineno);
        else if (key == "grid.origin") origin = parse_number(value, lineno);
        else if (key == "grid.periodic" || key == "initial") {
            if (value != "true" && value != "false") throw fail(key + " must be true or false");
            (key == "initial" ? initial : periodic) = value == "true";
        } else if (key == "times") {
            have_times = true;
            if (!value.empty())
                for (const auto &s : split(value, ';')) u.times.push_back(parse_number(s, lineno));
        } else u.metadata[key] = value;
    }
    if (!have_times) throw fail("missing '# times=' line");
    const std::size_t slices = u.times.size() + (initial ? 1 : 0);
    if (slices > 0 && !n) throw fail("missing grid.n");
    std::vector<double> all_times;
    if (initial) all_times.push_back(0.0);
    all_times.insert(all_times.end(), u.times.begin(), u.times.end());

    std::vector<std::vector<double>> values(slices);
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 3) throw fail("expected 3 columns, found " + std::to_string(cols.size()));
        if (!n || *n == 0 || rows / *n >= slices) throw fail("more rows than times x grid.n");
        const std::size_t k = rows / *n, i = rows % *n;
        if (parse_number(cols[0], lineno) != all_times[k]) throw fail("time column does not match slice " + std::to_string(k));
        const double x = parse_number(cols[1], lineno), expect = origin + spacing * static_cast<double>(i);
        if (std::abs(x - expect) > 1e-9 * (std::abs(expect) + spacing)) throw fail("x column does not match the grid");
        values[k].push_back(parse_number(cols[2], lineno));
        ++rows;
    }
    if (slices > 0 && rows != slices * *n)
        throw fail("expected " + std::to_string(slices * *n) + " data rows, found " + std::to_string(rows));
    std::size_t k = 0;
    if (initial) u.initial = GridFunction(std::move(values[k++]), spacing, origin, periodic);
    for (; k < slices; ++k) u.frames.emplace_back(std::move(values[k]), spacing, origin, periodic);
    try {
        u.validate();
    } catch (const DomainError &e) {
        throw ParseError(std::string("invalid field: ") + e.what());
    }
    return u;
}

json field_to_json(const SpaceTimeField &u) {
    u.validate();
    json j;
    j["format"] = "fracheat-field";
    j["version"] = 1;
    j["metadata"] = u.metadata;
    const GridFunction *ref = reference_grid(u);
    if (ref)
        j["grid"] = {{"n", ref->size()}, {"spacing", ref->spacing}, {"origin", ref->origin}, {"periodic", ref->periodic}};
    else j["grid"] = nullptr;
    j["times"] = u.times;
    j["initial"] = u.initial ? json(u.initial->values) : json(nullptr);
    j["frames"] = json::array();
    for (const auto &f : u.frames) j["frames"].push_back(f.values);
    return j;
}

SpaceTimeField field_from_json(const json &j) {
    SpaceTimeField u;
    try {
        if (!j.is_object() || j.value("format", "") != "fracheat-field") throw ParseError("field JSON: missing format tag");
        if (j.at("version").get<int>() != 1) throw ParseError("field JSON: unsupported version");
        u.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
        u.times = j.at("times").get<std::vector<double>>();
        const auto &frames = j.at("frames");
        if (!frames.is_array()) throw ParseError("field JSON: frames must be an array");
        if (frames.size() != u.times.size())
            throw ParseError("field JSON: " + std::to_string(frames.size()) + " frames for " + std::to_string(u.times.size()) +
                             " times");
        const bool has_initial = !j.at("initial").is_null();
        if (j.at("grid").is_null()) {
            if (!frames.empty() || has_initial) throw ParseError("field JSON: grid is required for a nonempty field");
            return u;
        }
        const auto &g = j.at("grid");
        const auto n = g.at("n").get<std::size_t>();
        const double h = g.at("spacing").get<double>(), x0 = g.at("origin").get<double>();
        const bool periodic = g.at("periodic").get<bool>();
        auto take = [&](const json &arr, const std::string &what) {
            auto v = arr.get<std::vector<double>>();
            if (v.size() != n)
                throw ParseError("field JSON: " + what + " has " + std::to_string(v.size()) + " values, grid.n is " +
                                 std::to_string(n));
            return GridFunction(std::move(v), h, x0, periodic);
        };
        if (has_initial) u.initial = take(j.at("initial"), "initial");
        for (std::size_t k = 0; k < frames.size(); ++k) u.frames.push_back(take(frames[k], "frame " + std::to_string(k)));
    } catch (const json::exception &e) {
        throw ParseError(std::string("field JSON: ") + e.what());
    }
    try {
        u.validate();
    } catch (const DomainError &e) {
        throw ParseError(std::string("invalid field: ") + e.what());
    }
    return u;
}

void write_field_json(std::ostream &os, const SpaceTimeField &u) { os << field_to_json(u).dump() << "\n"; }

SpaceTimeField read_field_json(std::istream &is) {
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error &e) {
        throw ParseError("byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return field_from_json(j);
}

void write_field(const std::filesystem::path &path, const SpaceTimeField &u, FileFormat format) {
    auto os = open_out(path);
    if (format == FileFormat::Csv) write_field_csv(os, u);
    else write_field_json(os, u);
}

SpaceTimeField read_field(const std::filesystem::path &path, FileFormat format) {
    auto is = open_in(path);
    return format == FileFormat::Csv ? read_field_csv(is) : read_field_json(is);
}

// ---------------------------------------------------------------------------
// reports

json report_to_json(const CheckReport &r) {
    auto number = [](double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); };
    return json{{"name", r.name},
                {"metric", number(r.metric)},
                {"tolerance", number(r.tolerance)},
                {"passed", r.passed},
                {"status", to_string(r.status)},
                {"details", r.details}};
}

void write_reports_jsonl(std::ostream &os, const std::vector<CheckReport> &reports) {
    for (const auto &r : reports) os << report_to_json(r).dump() << "\n";
}

void write_report_table(std::ostream &os, const std::vector<CheckReport> &reports) {
    std::size_t width = 4;
    for (const auto &r : reports) width = std::max(width, r.name.size());
    os << std::left << std::setw(static_cast<int>(width)) << "name" << "  " << std::setw(12) << "metric" << "  "
       << std::setw(12) << "tolerance" << "  status\n";
    for (const auto &r : reports)
        os << std::left << std::setw(static_cast<int>(width)) << r.name << "  " << std::setw(12) << format_double(r.metric)
           << "  " << std::setw(12) << format_double(r.tolerance) << "  " << to_string(r.status) << "\n";
}

int exit_code(const std::vector<CheckReport> &reports) {
    int code = exit_codes::ok;
    for (const auto &r : reports) {
        if (r.status == CheckStatus::NotConverged) return exit_codes::not_converged;
        if (!r.passed) code = exit_codes::check_failed;
    }
    return code;
}

int run(const RunConfig &cfg, std::ostream &out, std::ostream &log) {
    cfg.validate();
    if (cfg.command == "kernel") return run_kernel(cfg, out);
    if (cfg.command == "solve") return run_solve(cfg, out, log);
    if (cfg.command == "verify") return run_verify(cfg, out, log);
    if (cfg.command == "constant") return run_constant(cfg, out);
    throw ConfigError("no command given");
}

int run_guarded(int argc, const char *const *argv, std::ostream &out, std::ostream &log) {
    try {
        return run(parse_cli(argc, argv), out, log);
    } catch (const HelpRequested &h) {
        out << h.what();
        return exit_codes::ok;
    } catch (const ConfigError &e) {
        log << "error: " << e.what() << "\n";
        return exit_codes::usage;
    } catch (const DomainError &e) {
        log << "error: " << e.what() << "\n";
        return exit_codes::usage;
    } catch (const ParseError &e) {
        log << "error: " << e.what() << "\n";
        return exit_codes::usage;
    } catch (const NumericalError &e) {
        log << "error: " << e.what() << " (best estimate " << format_double(e.best_estimate()) << ", error "
            << format_double(e.achieved_error()) << ")\n";
        return exit_codes::not_converged;
    }
}

} // namespace fracheat
