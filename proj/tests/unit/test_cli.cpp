#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace mechsq;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "mechsq");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("mechsq_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const auto file = dir / "cfg.yaml";
    std::ofstream(file) << "name: c\nengine: gaussian_effective\nhorizon: 20\n"
                           "params: {omega_m: 0.1, omega_a: 8, g: 1, gamma: 0.1, n_th: 0}\n"
                        << body;
    return file;
}

}  // namespace

TEST(ValueList, Examples) {
    EXPECT_EQ(cli::parse_value_list("0.2,0.3, 0.4"), (std::vector<Real>{0.2, 0.3, 0.4}));
    EXPECT_EQ(cli::parse_value_list("5"), (std::vector<Real>{5.0}));
    EXPECT_EQ(cli::parse_value_list("1e-2,-3"), (std::vector<Real>{0.01, -3.0}));
    EXPECT_TRUE(cli::parse_value_list("").empty());
    EXPECT_TRUE(cli::parse_value_list("  ").empty());
    EXPECT_THROW(cli::parse_value_list("0.1,,0.2"), InvalidArgument);
    EXPECT_THROW(cli::parse_value_list("0.1,x"), InvalidArgument);
}

TEST(ValueList, CommaDecimalsAreSeparateValues) {
    EXPECT_EQ(cli::parse_value_list("0,5"), (std::vector<Real>{0.0, 5.0}));
}

TEST(Cli, UsageErrorsAreFatal) {
    EXPECT_EQ(invoke({}).code, cli::kFatal);
    EXPECT_EQ(invoke({"launch"}).code, cli::kFatal);
    EXPECT_EQ(invoke({"simulate"}).code, cli::kFatal);
    EXPECT_EQ(invoke({"sweep", "missing.yaml", "--axis", "g", "--values", "1"}).code, cli::kFatal);
    EXPECT_EQ(invoke({"--threads", "0", "simulate", "fig1"}).code, cli::kFatal);
    EXPECT_EQ(invoke({"--help"}).code, cli::kSuccess);
}

TEST(Cli, UnknownScenarioIsFatal) {
    const auto r = invoke({"simulate", "fig9", "--out", scratch_dir("unknown").string()});
    EXPECT_EQ(r.code, cli::kFatal);
    EXPECT_NE(r.err.find("fig9"), std::string::npos);
}

TEST(Cli, SimulateFig1Succeeds) {
    const auto dir = scratch_dir("fig1");
    const auto r = invoke({"simulate", "fig1", "--out", dir.string()});
    EXPECT_EQ(r.code, cli::kSuccess) << r.err;
    EXPECT_TRUE(fs::exists(dir / "fig1_effective.csv"));
    EXPECT_TRUE(fs::exists(dir / "fig1_manifest.txt"));
    EXPECT_NE(r.out.find("fig1_effective.csv"), std::string::npos);
}

TEST(Cli, SimulateCustomConfig) {
    const auto dir = scratch_dir("custom");
    const auto cfg = write_config(dir, "");
    const auto r = invoke({"--out", dir.string(), "simulate", "custom", cfg.string()});
    EXPECT_EQ(r.code, cli::kSuccess) << r.err;
    EXPECT_TRUE(fs::exists(dir / "c.csv"));
    EXPECT_EQ(invoke({"--out", dir.string(), "simulate", "custom"}).code, cli::kFatal);
}

TEST(Cli, BadConfigIsFatal) {
    const auto dir = scratch_dir("badcfg");
    const auto cfg = write_config(dir, "omega_q: 3\n");
    const auto r = invoke({"--out", dir.string(), "simulate", "custom", cfg.string()});
    EXPECT_EQ(r.code, cli::kFatal);
    EXPECT_NE(r.err.find("omega_q"), std::string::npos);
}

TEST(Cli, SweepWithEmptyValuesSucceeds) {
    const auto dir = scratch_dir("empty");
    const auto cfg = write_config(dir, "");
    const auto r = invoke({"sweep", cfg.string(), "--axis", "n_th", "--values", "", "--out", dir.string()});
    EXPECT_EQ(r.code, cli::kSuccess) << r.err;
    EXPECT_TRUE(fs::exists(dir / "c_sweep_n_th.csv"));
}

TEST(Cli, SweepWithFailingPointIsPartial) {
    const auto dir = scratch_dir("partial");
    const auto cfg = write_config(dir, "");
    const auto r = invoke({"sweep", cfg.string(), "--axis", "gamma", "--values", "0.1,-1", "--out", dir.string(),
                           "--threads", "2"});
    EXPECT_EQ(r.code, cli::kPartial);
    EXPECT_NE(r.err.find("failed:"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "c_gamma_0.1.csv"));
}

TEST(Cli, SweepUnknownAxisIsFatal) {
    const auto dir = scratch_dir("axis");
    const auto cfg = write_config(dir, "");
    EXPECT_EQ(invoke({"sweep", cfg.string(), "--axis", "omega_q", "--values", "1", "--out", dir.string()}).code,
              cli::kFatal);
    EXPECT_EQ(invoke({"sweep", cfg.string(), "--axis", "g", "--values", "1,a", "--out", dir.string()}).code,
              cli::kFatal);
}
