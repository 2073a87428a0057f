#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "altproj/cli.hpp"

using namespace altproj;

namespace {

std::string fixture(const char* name) { return std::string(ALTPROJ_FIXTURE_DIR) + "/" + name; }

struct Outcome {
    int code;
    std::string out;
    std::string log;
};

Outcome run_cfg(const ExperimentConfig& cfg)
{
    std::ostringstream out, log;
    const int code = run(cfg, out, log);
    return {code, out.str(), log.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("iterate on lines at pi/3 follows cos^(2n-1)")
{
    ExperimentConfig cfg;
    cfg.command = Command::iterate;
    cfg.instance_path = fixture("two_lines_pi3.inst");
    cfg.n_max = 20;
    const auto res = run_cfg(cfg);
    REQUIRE(res.code == kExitOk);
    const auto rows = csv_rows(res.out);
    REQUIRE(rows.size() == 22);
    CHECK(rows[0] == std::vector<std::string>{"n", "error", "bound_c", "bound_iota2"});
    for (int n = 1; n <= 20; ++n)
        CHECK(std::abs(std::stod(rows[n + 1][1]) - std::pow(0.5, 2 * n - 1)) < 1e-12);
}

TEST_CASE("outputs are byte-identical across runs")
{
    ExperimentConfig cfg;
    cfg.command = Command::geometry;
    cfg.instance_path = fixture("random_d8_n3.inst");
    cfg.seed = 3;
    const auto a = run_cfg(cfg), b = run_cfg(cfg);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(csv_rows(a.out)[0].size() == 8);
}

TEST_CASE("randomized commands require a seed")
{
    ExperimentConfig cfg;
    cfg.command = Command::geometry;
    cfg.instance_path = fixture("random_d8_n3.inst");
    const auto res = run_cfg(cfg);
    CHECK(res.code == kExitParse);
    CHECK(res.log.find("--seed") != std::string::npos);
}

TEST_CASE("malformed instance: parse exit code and no output file")
{
    const auto dir = std::filesystem::temp_directory_path() / "altproj_cli_test";
    std::filesystem::create_directories(dir);
    const auto bad = dir / "bad.inst";
    std::ofstream(bad) << "altproj-instance v1\nkind two_lines\n";
    ExperimentConfig cfg;
    cfg.command = Command::iterate;
    cfg.instance_path = bad.string();
    cfg.out_path = (dir / "trace.csv").string();
    std::filesystem::remove(cfg.out_path);
    const auto res = run_cfg(cfg);
    CHECK(res.code == kExitParse);
    CHECK_FALSE(std::filesystem::exists(cfg.out_path));
}

TEST_CASE("numrange on a convex combination fixture")
{
    ExperimentConfig cfg;
    cfg.command = Command::numrange;
    cfg.instance_path = fixture("convex_pair.inst");
    const auto res = run_cfg(cfg);
    CHECK(res.code == kExitOk);
    const auto rows = csv_rows(res.out);
    CHECK(rows.size() == 257);
    CHECK(rows[0].size() == 7);
}

TEST_CASE("slowvec capacity exit code")
{
    InstanceSpec small;
    small.kind = InstanceKind::block_aligned;
    small.blocks = 2;
    small.rule = AngleRule::inverse;
    ExperimentConfig cfg;
    cfg.command = Command::slowvec;
    cfg.instance = small;
    cfg.n_max = 5000;
    CHECK(run_cfg(cfg).code == kExitCapacity);
}

TEST_CASE("slowvec and fracpow on block fixtures")
{
    ExperimentConfig cfg;
    cfg.command = Command::slowvec;
    cfg.instance_path = fixture("block_inverse_400.inst");
    cfg.n_max = 200;
    CHECK(run_cfg(cfg).code == kExitOk);

    cfg.command = Command::fracpow;
    cfg.instance_path = fixture("block_custom.inst");
    cfg.seed = 1;
    cfg.alphas = {0.5, 1.0};
    const auto res = run_cfg(cfg);
    CHECK(res.code == kExitOk);
    CHECK(csv_rows(res.out).size() == 3);
}

TEST_CASE("ritt on the T = 0 fixture")
{
    ExperimentConfig cfg;
    cfg.command = Command::ritt;
    cfg.instance_path = fixture("orthogonal_lines.inst");
    cfg.n_max = 10;
    const auto res = run_cfg(cfg);
    CHECK(res.code == kExitOk);
    CHECK(res.out.find("resolvent,") != std::string::npos);
}
