#include "sehurdle/cli.hpp"
#include "sehurdle/model_json.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace sehurdle;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("sehurdle_cli_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        std::ofstream f(dir_ / "fixture.csv");
        write_series_csv(f, training_fixture(1));
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(std::vector<std::string> args) {
        args.insert(args.begin(), "sehurdle");
        std::vector<const char*> argv;
        for (const auto& a : args) {
            argv.push_back(a.c_str());
        }
        out_.str("");
        err_.str("");
        return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const std::string& p) {
        std::ifstream f(p);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

} // namespace

TEST_F(CliTest, FitBl1) {
    ASSERT_EQ(run({"fit", "--model", "BL1", "--input", path("fixture.csv"), "--output", path("bl1.json")}), 0)
        << err_.str();
    const auto summary = Json::parse(out_.str());
    EXPECT_NEAR(summary.at("beta0").get<double>(), -2.752, 1e-3);
    EXPECT_NEAR(summary.at("aic").get<double>(), 1187.77, 0.01);
    const auto doc = model_document_from_json(Json::parse(slurp(path("bl1.json"))));
    ASSERT_TRUE(doc.hurdle_params);
    EXPECT_NEAR(doc.hurdle_params->baseline.beta0, -2.752, 1e-3);
}

TEST_F(CliTest, FitCz) {
    ASSERT_EQ(run({"fit", "--model", "Cz", "--input", path("fixture.csv"), "--output", path("cz.json")}), 0)
        << err_.str();
    EXPECT_NEAR(Json::parse(out_.str()).at("s").get<double>(), 2.86, 0.005);
}

TEST_F(CliTest, UnknownModelIsUsageError) {
    EXPECT_EQ(run({"fit", "--model", "SE9", "--input", path("fixture.csv"), "--output", path("x.json")}), 1);
    EXPECT_NE(err_.str().find("SE9"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("x.json")));
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}), 1);
    EXPECT_EQ(run({"fit", "--model", "BL1"}), 1);
    EXPECT_EQ(run({"simulate", "--model", path("nothing.json"), "--days", "10", "--seed", "1"}), 1);
    EXPECT_EQ(run({"fit", "--model", "BL1", "--input", path("missing.csv")}), 1);
    EXPECT_EQ(run({"diagnose", "--model", "BL1", "--input", path("fixture.csv")}), 1); // --seed is required
}

TEST_F(CliTest, DegenerateFitIsNumericalFailure) {
    {
        std::ofstream f(path("empty.csv"));
        write_series_csv(f, DailySeries(training_fixture(1).start_date(), std::vector<int>(30, 0)));
    }
    EXPECT_EQ(run({"fit", "--model", "BL1", "--input", path("empty.csv"), "--output", path("e.json")}), 2);
}

TEST_F(CliTest, SimulateIsDeterministic) {
    auto m = se1_reference_model();
    {
        std::ofstream f(path("se1.json"));
        f << to_json(m).dump(2);
    }
    const std::vector<std::string> base{"simulate", "--model", path("se1.json"), "--days", "500", "--seed", "17"};
    auto a = base;
    a.insert(a.end(), {"--output", path("a.csv")});
    auto b = base;
    b.insert(b.end(), {"--output", path("b.csv")});
    ASSERT_EQ(run(a), 0) << err_.str();
    ASSERT_EQ(run(b), 0) << err_.str();
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_NE(slurp(path("a.csv")).find("seed=17"), std::string::npos);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
    ::setenv("SEHURDLE_OUT_DIR", dir_.c_str(), 1);
    const int code = run({"fit", "--model", "BL1", "--input", path("fixture.csv")});
    ::unsetenv("SEHURDLE_OUT_DIR");
    ASSERT_EQ(code, 0) << err_.str();
    EXPECT_TRUE(fs::exists(dir_ / "model.json"));
}

TEST_F(CliTest, DiagnoseWritesCurve) {
    ASSERT_EQ(run({"diagnose", "--model", "BL1", "--input", path("fixture.csv"), "--seed", "3", "--sims", "20",
                   "--max-lag", "30", "--output", path("k.csv")}),
              0)
        << err_.str();
    const auto text = slurp(path("k.csv"));
    EXPECT_NE(text.find("lag,khat_minus_t,lo,hi"), std::string::npos);
    long lines = 0;
    for (char c : text) {
        lines += c == '\n' ? 1 : 0;
    }
    EXPECT_GE(lines, 31);
}

TEST_F(CliTest, ForecastWritesCsvAndSummary) {
    ASSERT_EQ(run({"forecast", "--input", path("fixture.csv"), "--split", "2000-06-01", "--seed", "1", "--model",
                   "BL2", "--refit-every", "200", "--output", path("f.csv")}),
              0)
        << err_.str();
    const auto summary = Json::parse(slurp(path("f.json")));
    EXPECT_TRUE(summary.contains("G"));
    EXPECT_TRUE(summary.contains("G_count"));
    EXPECT_NE(slurp(path("f.csv")).find("date,p_hat,pi_hat,s_t,E_t,Y_t,g_contrib,gc_contrib"), std::string::npos);
}

TEST(CliHelpers, ConfigDigest) {
    // FNV-1a reference values.
    EXPECT_EQ(cli::config_digest(""), "cbf29ce484222325");
    EXPECT_EQ(cli::config_digest("a"), "af63dc4c8601ec8c");
}

TEST(CliHelpers, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, -2.752273, 1e-300, 12345.678}) {
        EXPECT_EQ(std::stod(cli::format_double(v)), v);
    }
    EXPECT_EQ(cli::format_double(0.5), "0.5");
}

TEST(CliHelpers, WriteAtomically) {
    const auto p = fs::temp_directory_path() / ("sehurdle_atomic_" + std::to_string(::getpid()) + ".txt");
    cli::write_atomically(p, "one");
    cli::write_atomically(p, "two");
    std::ifstream f(p);
    std::string s;
    f >> s;
    EXPECT_EQ(s, "two");
    fs::remove(p);
}
