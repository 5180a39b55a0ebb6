#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run fdwave(const std::string& args) {
    const std::string cmd = std::string(FDWAVE_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, {}};
    std::string out;
    char buf[4096];
    while (const std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("fdwave_cli_" + name + "_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST(Cli, AiryTableIsJson) {
    const auto r = fdwave("airy-table --count 4");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    ASSERT_EQ(j["records"].size(), 4u);
    EXPECT_NEAR(j["records"][0]["omega_k"].get<double>(), 2.3381074105, 1e-9);
    EXPECT_NEAR(j["records"][3]["omega_k"].get<double>(), 6.7867080901, 1e-9);
}

TEST(Cli, HelpExitsCleanly) {
    EXPECT_EQ(fdwave("--help").code, 0);
    EXPECT_EQ(fdwave("green-eval --help").code, 0);
}

TEST(Cli, UsageErrorsExitWithTwo) {
    EXPECT_EQ(fdwave("").code, 2);
    EXPECT_EQ(fdwave("no-such-command").code, 2);
    EXPECT_EQ(fdwave("airy-table --count nope").code, 2);
    EXPECT_EQ(fdwave("decay-fit").code, 2);
}

TEST(Cli, DomainErrorsExitWithTwo) {
    EXPECT_EQ(fdwave("modes --k 0").code, 2);
    EXPECT_EQ(fdwave("green-eval --h -1").code, 2);
    EXPECT_EQ(fdwave("green-eval --m 2").code, 2);
}

TEST(Cli, GreenEvalFields) {
    const auto r = fdwave("green-eval --h 0.0625 --t 1");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    for (const char* k : {"value_re", "value_im", "mode_count", "error_estimate", "empty_window"})
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_FALSE(j["empty_window"].get<bool>());
}

TEST(Cli, PoissonCheckReportsRelativeError) {
    const auto r = fdwave("poisson-check --bump-center 2.3381074104597670 --bump-width 0.3 --nmax 40");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    const double lhs = j["lhs"], rhs = j["rhs"];
    EXPECT_NEAR(j["relerr"].get<double>(), std::abs(lhs - rhs) / std::abs(rhs), 1e-15);
}

TEST(Cli, OverlapCountReport) {
    const auto r = fdwave("overlap-count --t 1 --gamma 0.25 --h 0.0078125 --m 0");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["count"].get<std::size_t>(), j["members"].size());
    EXPECT_GE(j["bound_rhs"].get<double>(), 1.0);
    for (const auto& n : j["members"]) EXPECT_LE(std::abs(n.get<int>()), 1);
}

TEST(Cli, ManifestReplayIsByteIdentical) {
    const auto d = scratch_dir("replay");
    const auto first = d / "first.json", second = d / "second.json";
    ASSERT_EQ(fdwave("model-integral --m 1 --c 2.338107410459767 --z degenerate --t-list 100,300,1000,3000,10000,30000 --out " +
                     first.string())
                  .code,
              0);
    const auto manifest = fs::path(first.string() + ".manifest.json");
    ASSERT_TRUE(fs::exists(manifest));
    const auto m = json::parse(slurp(manifest));
    EXPECT_EQ(m["subcommand"], "model-integral");
    EXPECT_TRUE(m.contains("version"));
    EXPECT_TRUE(m.contains("tolerances"));
    ASSERT_EQ(fdwave("--from-manifest " + manifest.string() + " --out " + second.string()).code, 0);
    EXPECT_EQ(slurp(first), slurp(second));
    EXPECT_FALSE(slurp(first).empty());
    fs::remove_all(d);
}

TEST(Cli, DecayScanThenFit) {
    const auto d = scratch_dir("scan");
    const auto csv = d / "curve.csv";
    ASSERT_EQ(fdwave("decay-scan --h 0.015625 --t-min 0.5 --t-max 6 --t-count 12 --spacing linear --out " +
                     csv.string())
                  .code,
              0);
    const auto r = fdwave("decay-fit --in " + csv.string());
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.contains("exponent"));
    EXPECT_EQ(fdwave("decay-fit --in " + (d / "missing.csv").string()).code, 2);
    fs::remove_all(d);
}
