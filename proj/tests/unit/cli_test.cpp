// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "musicnd/cli/commands.hpp"
#include "musicnd/cli/config.hpp"
#include "musicnd/cli/io.hpp"

using namespace musicnd;
using namespace musicnd::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir()
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() / (std::string("musicnd_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    std::string str(const std::string& sub = "") const { return (sub.empty() ? path_ : path_ / sub).string(); }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int run_cli(const std::string& args, const fs::path& cwd)
{
    const std::string cmd = "cd '" + cwd.string() + "' && '" MUSICND_CLI_PATH "' " + args + " > cli.log 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::set<std::string> listing(const fs::path& dir)
{
    std::set<std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) out.insert(fs::relative(e.path(), dir).string());
    return out;
}

}  // namespace

TEST(Config, ParsesKeyValueText)
{
    std::istringstream in("# comment\n\nseed = 7\nnsr = 0.1, 0.2\nn_values=10,20\n  timing = yes \n");
    RunConfig c;
    for (const auto& [k, v] : parse_config_text(in)) apply_setting(c, k, v);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.nsr, (std::vector<double>{0.1, 0.2}));
    EXPECT_EQ(c.n_values, (std::vector<int>{10, 20}));
    EXPECT_TRUE(c.timing);
}

TEST(Config, RejectsMalformedInput)
{
    RunConfig c;
    EXPECT_THROW(apply_setting(c, "colour", "red"), ConfigError);
    EXPECT_THROW(apply_setting(c, "seed", "12x"), ConfigError);
    EXPECT_THROW(apply_setting(c, "nsr", ""), ConfigError);
    EXPECT_THROW(apply_setting(c, "timing", "maybe"), ConfigError);
    std::istringstream bad("seed 3\n");
    EXPECT_THROW(parse_config_text(bad), ConfigError);
}

TEST(Config, LaterSettingsOverride)
{
    RunConfig c;
    apply_setting(c, "seed", "1");
    apply_setting(c, "seed", "2");
    EXPECT_EQ(c.seed, 2u);
    EXPECT_EQ(to_json(c)["seed"], 2);
}

TEST(Config, EstimateNeedsModelOrder)
{
    RunConfig c;
    c.command = "estimate";
    EXPECT_THROW(resolve(c), ConfigError);
    c.s = 36;
    EXPECT_THROW(resolve(c), ConfigError);
    c.s = 3;
    resolve(c);
    EXPECT_EQ(c.n, (Dims{10, 10}));
    EXPECT_EQ(c.l, (Dims{5, 5}));
}

TEST(Io, MeasurementRoundTrip)
{
    const SamplingGrid grid({3, 2});
    const auto y = synthesize(random_model(2, grid, 0.0, 2.0, 1), grid);
    std::stringstream ss;
    write_measurements(ss, y);
    const auto back = read_measurements(ss);
    EXPECT_EQ(back.grid(), grid);
    EXPECT_EQ(back.data(), y.data());
}

TEST(Io, MalformedMeasurements)
{
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_measurements(in);
    };
    EXPECT_THROW(parse(""), FormatError);
    EXPECT_THROW(parse("size 1\n0 1 0\n1 1 0\n"), FormatError);
    EXPECT_THROW(parse("dims 1\n0 1 0\n"), FormatError);                  // missing sample
    EXPECT_THROW(parse("dims 1\n0 1 0\n0 1 0\n"), FormatError);           // duplicate
    EXPECT_THROW(parse("dims 1\n0 1 0\n2 1 0\n"), FormatError);           // out of range
    EXPECT_THROW(parse("dims 1\n0 1 0\n1 1\n"), FormatError);             // missing imaginary part
    EXPECT_THROW(parse("dims 1\n0 1 0\n1 1 0 9\n"), FormatError);         // trailing field
    EXPECT_EQ(parse("# header\ndims 1\n1 2 3\n0 1 0\n").size(), 2u);
}

TEST(Io, RecordsCsvRoundTrip)
{
    experiments::ExperimentRecord r;
    r.scenario = "nsr-sweep";
    r.seed = 123456789012345ULL;
    r.s = 20;
    r.n = {10, 10};
    r.l = {5, 5};
    r.nsr = 0.15;
    r.dyn_range = 5;
    r.family = "random";
    r.err_rl = 0.1 + 0.2;
    r.method = "fourier";
    r.metric = 1.0 / 3.0;
    std::stringstream ss;
    write_records_csv(ss, {r, r}, nlohmann::json{{"seed", 0}});
    const std::string text = ss.str();
    EXPECT_EQ(text.rfind("# musicnd", 0), 0u);
    EXPECT_NE(text.find("\nscenario,seed,s,D,N1,N2,L1,L2,q_rl,nsr,dyn_range,family,err_rl,err_over_q,wall_ms,method,metric\n"),
              std::string::npos);
    const auto back = read_records_csv(ss);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].seed, r.seed);
    EXPECT_EQ(back[0].n, r.n);
    EXPECT_EQ(back[0].err_rl, r.err_rl);
    EXPECT_EQ(back[0].metric, r.metric);
    EXPECT_TRUE(std::isnan(back[0].q_rl));
    EXPECT_EQ(back[0].method, "fourier");
}

TEST(Io, RecordsCsvRejectsBadHeader)
{
    std::istringstream in("a,b,c\n");
    EXPECT_THROW(read_records_csv(in), FormatError);
}

TEST(Io, NumberFormatting)
{
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(std::strtod(format_number(0.1 + 0.2).c_str(), nullptr), 0.1 + 0.2);
    EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Io, ProvenanceWrapper)
{
    const auto j = with_provenance(nlohmann::json{{"x", 1}}, nlohmann::json{{"seed", 4}});
    EXPECT_EQ(j["version"], kVersion);
    EXPECT_EQ(j["config"]["seed"], 4);
    EXPECT_EQ(j["result"]["x"], 1);
}

TEST(Io, OutputNamesStayInsideDirectory)
{
    TempDir tmp;
    EXPECT_THROW(output_file(tmp.str(), "../escape.json"), std::invalid_argument);
    EXPECT_THROW(output_file(tmp.str(), ".."), std::invalid_argument);
    EXPECT_EQ(output_file(tmp.str("nested"), "a.json"), tmp.path() / "nested" / "a.json");
    EXPECT_TRUE(fs::is_directory(tmp.path() / "nested"));
}

TEST(Commands, EstimateSyntheticModel)
{
    TempDir tmp;
    RunConfig c;
    c.s = 3;
    c.out = tmp.str("o");
    std::ostringstream log;
    EXPECT_EQ(cmd_estimate(c, log), kExitOk);
    const auto j = nlohmann::json::parse(slurp(tmp.path() / "o" / "estimate.json"));
    EXPECT_EQ(j["version"], kVersion);
    const auto& res = j["result"];
    ASSERT_EQ(res["frequencies"].size(), 3u);
    for (double r : res["residuals"]) EXPECT_LT(r, 1e-8);
    EXPECT_LT(res["err_rl"].get<double>(), 1e-4);
    EXPECT_EQ(res["amplitudes"].size(), 3u);
    EXPECT_FALSE(res["deficient"].get<bool>());
}

TEST(Commands, EstimateFromFile)
{
    TempDir tmp;
    const SamplingGrid grid({8, 8});
    const auto model = random_model(2, grid, 2.0, 1.0, 5);
    {
        std::ofstream f(tmp.path() / "y.txt");
        write_measurements(f, synthesize(model, grid));
    }
    RunConfig c;
    c.s = 2;
    c.input = tmp.str("y.txt");
    c.out = tmp.str();
    std::ostringstream log;
    EXPECT_EQ(cmd_estimate(c, log), kExitOk);
    const auto j = nlohmann::json::parse(slurp(tmp.path() / "estimate.json"));
    EXPECT_EQ(j["config"]["n"], (std::vector<int>{8, 8}));
    EXPECT_FALSE(j["result"].contains("truth"));
    std::vector<TorusPoint> est;
    for (const auto& p : j["result"]["frequencies"]) est.emplace_back(p.get<std::vector<double>>());
    EXPECT_LT(hausdorff_error(model.support, FrequencySupport(est)), 1e-6);
}

TEST(Commands, VerifyLemma4AtHugeNoiseIsInapplicable)
{
    TempDir tmp;
    RunConfig c;
    c.target = "lemma4";
    c.trials = 3;
    c.nsr = {100.0};
    c.out = tmp.str();
    std::ostringstream log;
    EXPECT_EQ(cmd_verify(c, log), kExitOk);
    const auto j = nlohmann::json::parse(slurp(tmp.path() / "verify-lemma4.json"));
    EXPECT_EQ(j["result"][0]["cases"], 0);
    EXPECT_EQ(j["result"][0]["inapplicable"], 3);
}

TEST(Binary, EstimateIsReproducible)
{
    TempDir tmp;
    ASSERT_EQ(run_cli("estimate --s 3 --nsr 0.05 --seed 9 --out a", tmp.path()), 0);
    ASSERT_EQ(run_cli("estimate --s 3 --nsr 0.05 --seed 9 --out b", tmp.path()), 0);
    const auto a = nlohmann::json::parse(slurp(tmp.path() / "a" / "estimate.json"));
    const auto b = nlohmann::json::parse(slurp(tmp.path() / "b" / "estimate.json"));
    EXPECT_EQ(a["result"], b["result"]);
}

TEST(Binary, UsageErrorsExitTwo)
{
    TempDir tmp;
    EXPECT_EQ(run_cli("estimate", tmp.path()), 2);
    EXPECT_EQ(run_cli("verify nonsense", tmp.path()), 2);
    EXPECT_EQ(run_cli("estimate --s 3 --bogus 1", tmp.path()), 2);
    EXPECT_EQ(run_cli("estimate --s 3 --input missing.txt", tmp.path()), 2);
    EXPECT_EQ(run_cli("--version", tmp.path()), 0);
}

TEST(Binary, ConfigFileAndFlagOverride)
{
    TempDir tmp;
    {
        std::ofstream f(tmp.path() / "run.cfg");
        f << "s = 2\nseed = 4\nout = fromfile\n";
    }
    ASSERT_EQ(run_cli("estimate --config run.cfg --seed 5", tmp.path()), 0);
    const auto j = nlohmann::json::parse(slurp(tmp.path() / "fromfile" / "estimate.json"));
    EXPECT_EQ(j["config"]["s"], 2);
    EXPECT_EQ(j["config"]["seed"], 5);
}

TEST(Binary, ExperimentSmokeRunIsByteIdentical)
{
    TempDir tmp;
    ASSERT_EQ(run_cli("experiment noiseless --trials 2 --out r", tmp.path()), 0);
    const auto first = slurp(tmp.path() / "r" / "noiseless.csv");
    const auto first_summary = slurp(tmp.path() / "r" / "noiseless.summary.json");
    ASSERT_EQ(run_cli("experiment noiseless --trials 2 --out r --jobs 2", tmp.path()), 0);
    const auto second = slurp(tmp.path() / "r" / "noiseless.csv");
    // the jobs setting is recorded in the config line; the rows must match byte for byte
    const auto rows = [](const std::string& s) { return s.substr(s.find("\nscenario")); };
    EXPECT_EQ(rows(first), rows(second));
    ASSERT_EQ(run_cli("experiment noiseless --trials 2 --out r", tmp.path()), 0);
    EXPECT_EQ(slurp(tmp.path() / "r" / "noiseless.csv"), first);
    EXPECT_EQ(slurp(tmp.path() / "r" / "noiseless.summary.json"), first_summary);
    EXPECT_EQ(listing(tmp.path()), (std::set<std::string>{"cli.log", "r", "r/noiseless.csv", "r/noiseless.summary.json"}));
}

TEST(Binary, VerifyExitCodes)
{
    // a pencil too small for exact recovery is a usage error, not a failed check
    TempDir tmp;
    EXPECT_EQ(run_cli("verify thm3 --s 8 --n 10,10 --l 5,5 --trials 1", tmp.path()), 2);
    EXPECT_EQ(run_cli("verify thm5 --trials 20", tmp.path()), 0);
    EXPECT_TRUE(fs::exists(tmp.path() / "verify-thm5.json"));
}
