#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "benjamin/csv.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {
struct Result {
    int status = -1;
    std::string err;
};

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("benjamin_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Result run(const std::string& args, const fs::path& dir) {
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + BENJAMIN_LAB + "\" " + args + " > \"" + (dir / "stdout.txt").string() +
                            "\" 2> \"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    Result r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.err = slurp(err);
    return r;
}
}  // namespace

TEST_CASE("cli solve-wave closed form") {
    const fs::path dir = scratch("solve");
    const Result r = run("solve-wave --gamma 0 --c 1 --n 1024 --L 200 --out \"" + (dir / "out").string() + "\"", dir);
    REQUIRE(r.status == 0);
    std::ifstream csv(dir / "out" / "profile.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "x,Q");
    double peak = 0.0;
    while (std::getline(csv, line)) {
        const double q = std::stod(line.substr(line.find(',') + 1));
        peak = std::max(peak, q);
    }
    CHECK(peak == doctest::Approx(3.0).epsilon(1e-8));
    const std::string report = slurp(dir / "out" / "report.txt");
    CHECK(report.find("[conventions]") != std::string::npos);
    CHECK(report.find("mass = 12") != std::string::npos);
}

TEST_CASE("cli usage errors exit 2") {
    const fs::path dir = scratch("usage");
    CHECK(run("not-a-command", dir).status == 2);
    CHECK(run("", dir).status == 2);
    CHECK(run("solve-wave --no-such-flag 1", dir).status == 2);
    CHECK(run("solve-wave --gamma abc", dir).status == 2);
    CHECK(run("--help", dir).status == 0);
}

TEST_CASE("cli missing config exits 1 naming the path") {
    const fs::path dir = scratch("missing");
    const std::string path = (dir / "absent.ini").string();
    const Result r = run("stability --config \"" + path + "\"", dir);
    CHECK(r.status == 1);
    CHECK(r.err.find(path) != std::string::npos);
}

TEST_CASE("cli domain error exits 1") {
    const fs::path dir = scratch("domain");
    const Result r = run("solve-wave --gamma -5 --c 1 --out \"" + (dir / "out").string() + "\"", dir);
    CHECK(r.status == 1);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("cli runs are deterministic given a seed") {
    const fs::path dir = scratch("determinism");
    const std::string common = "evolve --gamma 0.1 --n 512 --L 200 --T 1 --dt 0.01 --perturbation noise --seed 9 --out ";
    REQUIRE(run(common + "\"" + (dir / "a").string() + "\"", dir).status == 0);
    REQUIRE(run(common + "\"" + (dir / "b").string() + "\"", dir).status == 0);
    const auto results = [](const std::string& report) { return report.substr(report.find("[results]")); };
    CHECK(results(slurp(dir / "a" / "report.txt")) == results(slurp(dir / "b" / "report.txt")));
    for (const char* name : {"trajectory.csv", "final.csv"}) {
        const std::string a = slurp(dir / "a" / name);
        CHECK_FALSE(a.empty());
        CHECK(a == slurp(dir / "b" / name));
    }
    REQUIRE(run("evolve --gamma 0.1 --n 512 --L 200 --T 1 --dt 0.01 --perturbation noise --seed 10 --out \"" +
                    (dir / "c").string() + "\"",
                dir)
                .status == 0);
    CHECK(slurp(dir / "a" / "final.csv") != slurp(dir / "c" / "final.csv"));
}

TEST_CASE("cli config file drives the run") {
    const fs::path dir = scratch("config");
    const fs::path ini = dir / "run.ini";
    {
        std::ofstream out(ini);
        out << "[wave]\ngamma = 0.05\nc = 1\n[grid]\nn = 1024\nL = 200\n[output]\ndir = " << (dir / "out").string() << "\n";
    }
    REQUIRE(run("rescale --config \"" + ini.string() + "\" --lambda 1.25", dir).status == 0);
    const std::string report = slurp(dir / "out" / "report.txt");
    CHECK(report.find("gamma = 0.050000000000000003") != std::string::npos);
    CHECK(report.find("lambda = 1.25") != std::string::npos);
    CHECK(report.find("residual_dilated_grid") != std::string::npos);
}
