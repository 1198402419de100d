#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "presets.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int run(const std::string& args) {
    const int rc = std::system((std::string(QTOKEN_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("qtoken_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

const std::string configs = QTOKEN_CONFIG_DIR;

}  // namespace

TEST(Cli, EmbeddedPresetsMatchFiles) {
    EXPECT_EQ(std::string(presets::reference_cavity), slurp(configs + "/reference_cavity.ini"));
    EXPECT_EQ(std::string(presets::reference_optical), slurp(configs + "/reference_optical.ini"));
}

TEST(Cli, SecurityTableCsv) {
    const auto dir = scratch("table");
    ASSERT_EQ(run("--out " + dir.string() + " security-table"), 0);
    const auto csv = slurp(dir / "security_table.csv");
    EXPECT_NE(csv.find("\n0.0001,42,41,"), std::string::npos);
    EXPECT_NE(csv.find("\n9.9999999999999995e-07,59,58,"), std::string::npos);
}

TEST(Cli, MalformedThresholdsAreUsageErrors) {
    EXPECT_EQ(run("security-table --p-th 2.0"), 2);
    EXPECT_EQ(run("security-table --p-th abc"), 2);
}

TEST(Cli, ConfigErrorsExitTwo) {
    EXPECT_EQ(run("--set cavity.bogus=1 security-table"), 2);
    EXPECT_EQ(run("--config /nonexistent.ini security-table"), 2);
}

TEST(Cli, SweepIsByteIdenticalAcrossRuns) {
    const auto a = scratch("sweep_a"), b = scratch("sweep_b");
    const std::string args = "--config " + configs + "/reference_optical.ini sweep --axis bandwidth --from 2 --to 8 --points 4 --svg";
    ASSERT_EQ(run("--out " + a.string() + " " + args), 0);
    ASSERT_EQ(run("--out " + b.string() + " " + args), 0);
    EXPECT_EQ(slurp(a / "sweep_bandwidth.csv"), slurp(b / "sweep_bandwidth.csv"));
    EXPECT_EQ(slurp(a / "sweep_bandwidth.svg"), slurp(b / "sweep_bandwidth.svg"));
    EXPECT_EQ(slurp(a / "sweep_bandwidth.csv").rfind("# qtoken 1.0.0 config ", 0), 0u);
}

TEST(Cli, StorageSweepMarksCrossing) {
    const auto dir = scratch("storage");
    ASSERT_EQ(run("--out " + dir.string() + " --config " + configs +
                  "/reference_optical.ini --set memory.medium=electron --set memory.gamma_plus_per_ms=1 "
                  "--set memory.gamma_minus_per_ms=1 sweep --axis storage --from 0 --to 2e6 --points 41"),
              0);
    EXPECT_NE(slurp(dir / "sweep_storage.csv").find("crosses 0.75"), std::string::npos);
}

TEST(Cli, SingleCellLandscape) {
    const auto dir = scratch("landscape");
    ASSERT_EQ(run("--out " + dir.string() + " --config " + configs +
                  "/reference_cavity.ini --set design.generations=40 optimize-cavity --grid 1"),
              0);
    const auto csv = slurp(dir / "landscape.csv");
    std::size_t rows = 0;
    for (char c : csv) rows += c == '\n';
    EXPECT_EQ(rows, 3u);
    EXPECT_TRUE(fs::exists(dir / "optimize_report.json"));
}

TEST(Cli, MonteCarloWritesBothChecks) {
    const auto dir = scratch("mc");
    ASSERT_EQ(run("--out " + dir.string() + " mc-verify --trials 20000 --seed 4"), 0);
    const auto csv = slurp(dir / "mc_verify.csv");
    EXPECT_NE(csv.find("\n0,"), std::string::npos);
    EXPECT_NE(csv.find("\n1,"), std::string::npos);
}
