#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "svfa/io.hpp"

namespace {

std::string cli_path() {
    const char* p = std::getenv("SVFAPPROX_CLI");
    REQUIRE(p != nullptr);
    return p;
}

int run_cli(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::vector<std::string> csv_lines(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

double csv_field(const std::string& line, int index) {
    std::stringstream ss(line);
    std::string item;
    for (int i = 0; i <= index; ++i) std::getline(ss, item, ',');
    return std::stod(item);
}

}  // namespace

TEST_CASE("run produces a decreasing observed column at the jump") {
    int rc = run_cli(
        "run --operator kantorovich --svf jump-pair --x 0.5 --n 16,64,256,1024 "
        "--grid 128 --seeds 2 --out cli_jump");
    CHECK(rc == 0);
    std::vector<std::string> lines = csv_lines("cli_jump.csv");
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "n,x,observed,bound,delta_star,slope");
    double prev = 1e300;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        double obs = csv_field(lines[i], 2);
        CHECK(obs <= prev + 1e-9);
        prev = obs;
    }
}

TEST_CASE("identical configs give byte-identical CSV") {
    CHECK(run_cli("run --operator bd --svf lipschitz-tube --x 0.25 --n 4,16,64 --grid 64 "
                  "--seeds 3 --out cli_det_a --jobs 2") == 0);
    CHECK(run_cli("run --operator bd --svf lipschitz-tube --x 0.25 --n 4,16,64 --grid 64 "
                  "--seeds 3 --out cli_det_b --jobs 1") == 0);
    CHECK(svfa::read_file("cli_det_a.csv") == svfa::read_file("cli_det_b.csv"));
}

TEST_CASE("unknown svf exits 2") { CHECK(run_cli("run --svf catalog-name-typo") == 2); }

TEST_CASE("unknown operator exits 2") {
    CHECK(run_cli("run --operator fourier --svf jump-pair") == 2);
}

TEST_CASE("constant catalog entry stays at machine precision") {
    CHECK(run_cli("run --operator bd --svf const-c --x 0.3,0.8 --n 4,16 --grid 32 "
                  "--out cli_const --strict") == 0);
    std::vector<std::string> lines = csv_lines("cli_const.csv");
    for (std::size_t i = 1; i < lines.size(); ++i) CHECK(csv_field(lines[i], 2) <= 1e-10);
}

TEST_CASE("config file is honored and flags win") {
    svfa::write_file("cli_cfg.json",
                     R"({"operator":"kantorovich","svf":"jump-pair","n":[8,32],"x":[0.5],)"
                     R"("grid":64,"seeds":2,"out":"cli_cfg_out"})");
    CHECK(run_cli("run --config cli_cfg.json") == 0);
    CHECK(csv_lines("cli_cfg_out.csv").size() == 3);
    CHECK(run_cli("run --config cli_cfg.json --out cli_cfg_override") == 0);
    CHECK(csv_lines("cli_cfg_override.csv").size() == 3);
}

TEST_CASE("selections subcommand exports the family") {
    CHECK(run_cli("selections --svf jump-pair --grid 32 --seeds 2 --out cli_selections") == 0);
    std::string manifest = svfa::read_file("cli_selections/selection_manifest.json");
    CHECK(manifest.find("\"count\": 2") != std::string::npos);
}

TEST_CASE("diag subcommand prints a table") {
    CHECK(run_cli("diag --operator kantorovich --n 10,100 --x 0.5 --delta 0.1") == 0);
}
