#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmot/cli.hpp"
#include "pmot/io.hpp"

using namespace pmot;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / "pmot_cli_tests";
        fs::create_directories(dir);
    }
    ~Scratch() { std::error_code ec; fs::remove_all(dir, ec); }
    std::string file(const std::string& name, const std::string& content) const {
        const auto p = dir / name;
        std::ofstream f(p);
        f << content;
        return p.string();
    }
};

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    std::vector<const char*> argv{"pmot"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("dist subcommand prints the distance") {
    Scratch s;
    const auto a = s.file("a.txt", "0 2\n");
    const auto b = s.file("b.txt", "0 4\n");
    const auto r = run({"dist", a, b, "--p", "2"});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(2.0));  // direct matching, distance 2
}

TEST_CASE("dist writes a plan file when asked") {
    Scratch s;
    const auto a = s.file("a.txt", "0 2 1.5\n");
    const auto b = s.file("b.txt", "0 2 0.5\n");
    const auto plan_path = (s.dir / "plan.json").string();
    const auto r = run({"dist", a, b, "--plan", plan_path});
    REQUIRE(r.code == 0);
    std::ifstream pf(plan_path);
    REQUIRE(pf.good());
    nlohmann::json j;
    pf >> j;
    CHECK(j["p"] == 2.0);
    REQUIRE(j["edges"].size() == 2);  // shared atom plus 1.0 mass to the diagonal
}

TEST_CASE("bottleneck subcommand") {
    Scratch s;
    const auto a = s.file("a.txt", "0 2\n");
    const auto b = s.file("b.txt", "0.5 2\n");
    const auto r = run({"bottleneck", a, b});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(0.5));
}

TEST_CASE("barycenter subcommand emits a measure plus an energy trace") {
    Scratch s;
    const auto a = s.file("a.txt", "0 2\n");
    const auto b = s.file("b.txt", "0 4\n");
    const auto r = run({"barycenter", a, b, "--p", "2", "--seed", "5"});
    REQUIRE(r.code == 0);
    std::istringstream body(r.out);
    const auto mu = load_measure_auto(body);
    REQUIRE(mu.size() == 1);
    CHECK(mu.atoms()[0].point.death == doctest::Approx(3.0));
    const auto marker = r.out.find("# energy_trace ");
    REQUIRE(marker != std::string::npos);
    const auto j = nlohmann::json::parse(r.out.substr(marker + 15));
    CHECK(j["converged"] == true);
    CHECK(j["energy"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("barycenter validates weights") {
    Scratch s;
    const auto a = s.file("a.txt", "0 2\n");
    const auto b = s.file("b.txt", "0 4\n");
    const auto r = run({"barycenter", a, b, "--weights", "0.9,0.9"});
    CHECK(r.code == 1);
    CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("surface silhouette and betti write grids") {
    Scratch s;
    const auto a = s.file("a.txt", "0 2\n");
    auto r = run({"surface", a, "--bandwidth", "0.4", "--nx", "4", "--ny", "4"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# surface", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);

    r = run({"silhouette", a, "--samples", "7", "--t-min", "0", "--t-max", "2"});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);

    r = run({"betti", a, "--samples", "3", "--t-min", "0", "--t-max", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "0 1\n1 1\n2 1\n");
}

TEST_CASE("lln subcommand writes csv and honors the out directory variable") {
    Scratch s;
    ::setenv("PMOT_OUT_DIR", s.dir.c_str(), 1);
    const auto r = run({"lln", "--n", "3,5", "--trials", "2", "--m", "20", "--out", "lln.csv"});
    ::unsetenv("PMOT_OUT_DIR");
    REQUIRE(r.code == 0);
    std::ifstream f(s.dir / "lln.csv");
    REQUIRE(f.good());
    std::string header, columns;
    std::getline(f, header);
    std::getline(f, columns);
    CHECK(header.rfind("# {", 0) == 0);
    CHECK(columns == "n,median,p10,p90");
}

TEST_CASE("lln writes the plot script on request") {
    Scratch s;
    const auto script = (s.dir / "plot.py").string();
    const auto r = run({"lln", "--n", "3", "--trials", "1", "--m", "5", "--plot-script", script,
                        "--out", (s.dir / "x.csv").string()});
    REQUIRE(r.code == 0);
    std::ifstream f(script);
    std::string first;
    std::getline(f, first);
    CHECK(first == "#!/usr/bin/env python3");
}

TEST_CASE("usage errors exit with one") {
    Scratch s;
    CHECK(run({"dist", "only_one.txt"}).code == 1);
    CHECK(run({"no_such_command"}).code == 1);
    CHECK(run({"dist", "missing_a.txt", "missing_b.txt"}).code == 1);
    const auto bad = s.file("bad.txt", "1 zebra\n");
    const auto ok = s.file("ok.txt", "0 1\n");
    CHECK(run({"dist", bad, ok}).code == 1);
    CHECK(run({"lln", "--n", "banana"}).code == 1);
    CHECK(run({"barycenter", ok, "--p", "1"}).code == 1);
}

TEST_CASE("help exits cleanly") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("dist") != std::string::npos);
}
