#include <doctest.h>

#include "fracheat/errors.hpp"
#include "fracheat/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace fracheat;

namespace {

constexpr double pi = 3.14159265358979323846;

RunConfig parse(std::vector<std::string> args) {
    args.insert(args.begin(), "fracheat");
    std::vector<const char *> argv;
    for (const auto &a : args) argv.push_back(a.c_str());
    return parse_cli(static_cast<int>(argv.size()), argv.data());
}

SpaceTimeField random_field(unsigned seed, bool with_initial) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1e3, 1e3);
    SpaceTimeField u;
    auto frame = [&] {
        std::vector<double> v(37);
        for (auto &x : v) x = dist(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
        return GridFunction(std::move(v), 0.1 / 3.0, -0.7, true);
    };
    if (with_initial) u.initial = frame();
    for (double t : {0.1, 0.2, 1.0 / 3.0}) {
        u.times.push_back(t);
        u.frames.push_back(frame());
    }
    u.metadata["alpha"] = "1.5";
    u.metadata["seed"] = std::to_string(seed);
    return u;
}

void require_equal(const SpaceTimeField &a, const SpaceTimeField &b) {
    REQUIRE(a.times == b.times);
    REQUIRE(a.frames.size() == b.frames.size());
    CHECK(a.metadata == b.metadata);
    CHECK(a.initial.has_value() == b.initial.has_value());
    if (a.initial) CHECK(a.initial->values == b.initial->values);
    for (std::size_t k = 0; k < a.frames.size(); ++k) {
        CHECK(a.frames[k].values == b.frames[k].values);
        CHECK(a.frames[k].spacing == b.frames[k].spacing);
        CHECK(a.frames[k].origin == b.frames[k].origin);
        CHECK(a.frames[k].periodic == b.frames[k].periodic);
    }
}

} // namespace

TEST_CASE("run config validation") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    c.grid_points = 8;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.times = {1.0, 0.5};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.box_halfwidth = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.alpha = 2.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config JSON mirrors RunConfig") {
    RunConfig c;
    c.command = "solve";
    c.alpha = 0.75;
    c.times = {0.5, 2.0};
    c.suites = {"widder", "semigroup"};
    c.format = FileFormat::Json;
    const auto back = config_from_json(to_json(c));
    CHECK(back.alpha == 0.75);
    CHECK(back.times == c.times);
    CHECK(back.suites == c.suites);
    CHECK(back.format == FileFormat::Json);
    CHECK(to_json(back) == to_json(c));
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"alhpa", 1.0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"alpha", "one"}}), ConfigError);
}

TEST_CASE("command line") {
    auto c = parse({"kernel", "--alpha", "2", "--dim", "1", "--t", "1", "--xmax", "10", "--n", "64", "--out", "k.csv"});
    CHECK(c.command == "kernel");
    CHECK(c.alpha == 2.0);
    CHECK(c.grid_points == 64);
    CHECK(c.box_halfwidth == 10.0);
    CHECK(c.out == "k.csv");

    c = parse({"solve", "--times", "0.25,1", "--seed", "9"});
    CHECK(c.times == std::vector<double>{0.25, 1.0});
    CHECK(c.seed == 9);

    c = parse({"verify", "--suite", "widder,semigroup", "--format", "json"});
    CHECK(c.suites == std::vector<std::string>{"widder", "semigroup"});
    CHECK(c.format == FileFormat::Json);

    CHECK_THROWS_AS(parse({"verify", "--nope"}), ConfigError);
    CHECK_THROWS_AS(parse({"constant", "--alpha", "3"}), ConfigError);
    CHECK_THROWS_AS(parse({"solve", "--n", "4"}), ConfigError);
    CHECK_THROWS_AS(parse({"kernel", "--format", "xml"}), ConfigError);
    CHECK_THROWS_AS(parse({}), ConfigError);
    CHECK_THROWS_AS(parse({"constant", "--help"}), HelpRequested);
}

TEST_CASE("explicit flags override the config file") {
    const auto path = std::filesystem::temp_directory_path() / "fracheat_cfg_test.json";
    {
        std::ofstream os(path);
        os << R"({"alpha": 0.5, "seed": 11, "times": [0.5, 1.0]})";
    }
    const auto c = parse({"solve", "--config", path.string(), "--alpha", "1.5"});
    CHECK(c.alpha == 1.5);
    CHECK(c.seed == 11);
    CHECK(c.times == std::vector<double>{0.5, 1.0});
    {
        std::ofstream os(path);
        os << R"({"alpha": 0.5,})";
    }
    CHECK_THROWS_AS(parse({"solve", "--config", path.string()}), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("field CSV round trip") {
    for (bool init : {false, true}) {
        const auto u = random_field(init ? 1 : 2, init);
        std::stringstream ss;
        write_field_csv(ss, u);
        require_equal(u, read_field_csv(ss));
    }
    SpaceTimeField empty;
    empty.metadata["alpha"] = "1";
    std::stringstream ss;
    write_field_csv(ss, empty);
    const auto back = read_field_csv(ss);
    CHECK(back.frames.empty());
    CHECK(back.metadata == empty.metadata);
}

TEST_CASE("field JSON round trip") {
    const auto u = random_field(3, true);
    std::stringstream ss;
    write_field_json(ss, u);
    require_equal(u, read_field_json(ss));

    std::stringstream es;
    write_field_json(es, SpaceTimeField{});
    CHECK(read_field_json(es).frames.empty());
}

TEST_CASE("malformed fields are rejected with a location") {
    std::istringstream csv("# fracheat-field v1\n# grid.n=2\n# grid.spacing=1\n# grid.origin=0\n# grid.periodic=false\n"
                           "# times=1\n# initial=false\nt,x,value\n1,0,0.5\n1,1,abc\n");
    try {
        (void)read_field_csv(csv);
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(std::string(e.what()).find("line 10") != std::string::npos);
    }

    auto j = field_to_json(random_field(4, false));
    j["frames"][1].erase(0);
    try {
        (void)field_from_json(j);
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(std::string(e.what()).find("frame 1 has 36 values") != std::string::npos);
    }

    std::istringstream broken(R"({"format": "fracheat-field", )");
    try {
        (void)read_field_json(broken);
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("reports and exit codes") {
    auto pass = CheckReport::judge("a", 0.5, 1.0);
    auto fail = CheckReport::judge("b", 2.0, 1.0);
    CheckReport nc;
    nc.name = "c";
    nc.status = CheckStatus::NotConverged;
    CHECK(exit_code({pass}) == 0);
    CHECK(exit_code({pass, fail}) == 1);
    CHECK(exit_code({fail, nc}) == 3);

    std::ostringstream os;
    write_reports_jsonl(os, {pass, fail});
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    const auto j = nlohmann::json::parse(line);
    CHECK(j["name"] == "a");
    CHECK(j["passed"] == true);
    CHECK(j["status"] == "passed");
    CHECK(j["metric"] == 0.5);

    auto inf = CheckReport::judge("d", std::numeric_limits<double>::infinity(), 1.0);
    CHECK(report_to_json(inf)["metric"] == "inf");
}

TEST_CASE("run: kernel table and constant") {
    RunConfig c;
    c.command = "kernel";
    c.alpha = 2.0;
    c.box_halfwidth = 10.0;
    c.grid_points = 64;
    std::ostringstream out, log;
    CHECK(run(c, out, log) == 0);
    std::istringstream is(out.str());
    const auto table = read_kernel_csv(is);
    REQUIRE(table.r.size() == 64);
    for (std::size_t i = 0; i < 64; ++i)
        CHECK(table.value[i] == doctest::Approx(std::exp(-table.r[i] * table.r[i] / 4) / std::sqrt(4 * pi)).epsilon(1e-12));

    c.command = "constant";
    c.alpha = 1.0;
    std::ostringstream cout;
    CHECK(run(c, cout, log) == 0);
    CHECK(cout.str().find("0.318309886") != std::string::npos);
}

TEST_CASE("run: solve writes both fields") {
    const auto path = std::filesystem::temp_directory_path() / "fracheat_solve_test.json";
    RunConfig c;
    c.command = "solve";
    c.box_halfwidth = pi;
    c.grid_points = 64;
    c.times = {0.5, 1.0};
    c.out = path;
    c.format = FileFormat::Json;
    std::ostringstream out, log;
    CHECK(run(c, out, log) == 0);
    const auto conv = read_field(path, FileFormat::Json);
    auto spec_path = path;
    spec_path.replace_filename("fracheat_solve_test.spectral.json");
    const auto spec = read_field(spec_path, FileFormat::Json);
    CHECK(conv.metadata.at("solver") == "convolution");
    CHECK(spec.metadata.at("solver") == "spectral");
    CHECK(conv.metadata.at("seed") == "7");
    REQUIRE(conv.frames.size() == 2);
    std::filesystem::remove(path);
    std::filesystem::remove(spec_path);
}

TEST_CASE("guarded runner maps errors to exit codes") {
    std::ostringstream out, log;
    const char *bad[] = {"fracheat", "verify", "--suite", "nope"};
    CHECK(run_guarded(4, bad, out, log) == 2);
    const char *range[] = {"fracheat", "constant", "--alpha", "-1"};
    CHECK(run_guarded(4, range, out, log) == 2);
    const char *help[] = {"fracheat", "--help"};
    CHECK(run_guarded(2, help, out, log) == 0);
    const char *ok[] = {"fracheat", "verify", "--suite", "sandwich"};
    std::ostringstream jl;
    CHECK(run_guarded(4, ok, jl, log) == 0);
    CHECK(jl.str().find("\"sandwich/alpha=2\"") != std::string::npos);
}
