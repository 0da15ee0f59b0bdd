#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "epd/cli.hpp"
#include "epd/errors.hpp"

using namespace epd;
using namespace epd::cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_config(const RunConfig& c) {
    std::ostringstream out, err;
    const int code = run(c, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

RunConfig example_one() {
    RunConfig c;
    c.command = Command::Solve;
    c.target = "radial-series";
    c.params.mu = 0.5;
    c.params.nu = 2.0;
    c.a = {0.0};
    c.b = {0.0, 1.0};
    c.grid = "t=0.1:0.9:0.1;x=1";
    return c;
}

}  // namespace

TEST(Literals, DataFunctions) {
    EXPECT_TRUE(parse_data("zero").is_zero());
    EXPECT_DOUBLE_EQ(parse_data("poly:1,2,3")(2.0), 17.0);
    EXPECT_DOUBLE_EQ(parse_data("gauss:2,1,0.5")(1.0), 2.0);
    EXPECT_NEAR(parse_data("gauss:2,1,0.5")(1.5), 2.0 * std::exp(-1.0), 1e-15);
    EXPECT_EQ(parse_data(" bump:1,0.5 ").describe(), "bump:1,0.5");
    EXPECT_EQ(parse_data("bump:1,0.5")(2.0), 0.0);
}

TEST(Literals, BadDataFunctions) {
    EXPECT_THROW(parse_data("poly:"), DomainError);
    EXPECT_THROW(parse_data("gauss:1,2"), DomainError);
    EXPECT_THROW(parse_data("bump:1,x"), DomainError);
    EXPECT_THROW(parse_data("sine:1"), DomainError);
    EXPECT_THROW(parse_data("x^2"), DomainError);
}

TEST(Literals, Grid) {
    const auto g = parse_grid("t=0.1:0.9:0.1;x=1");
    EXPECT_EQ(g.t.values().size(), 9u);
    ASSERT_EQ(g.x.values().size(), 1u);
    EXPECT_EQ(g.x.values()[0], 1.0);
    EXPECT_EQ(parse_grid(" x = 0.5:2:0.5 ; t=0.2 ").x.values().size(), 4u);
    EXPECT_THROW(parse_grid("t=0.1:0.9:0.1"), DomainError);
    EXPECT_THROW(parse_grid("t=0.1:0.9;x=1"), DomainError);
    EXPECT_THROW(parse_grid("t=0.9:0.1:0.1;x=1"), DomainError);
    EXPECT_THROW(parse_grid("t=a;x=1"), DomainError);
    EXPECT_THROW(parse_grid("t=1;y=1"), DomainError);
}

TEST(Literals, Lists) {
    EXPECT_EQ(parse_list("0, 1,-2.5"), (std::vector<double>{0.0, 1.0, -2.5}));
    EXPECT_TRUE(parse_list("").empty());
    EXPECT_THROW(parse_list("1,,2"), DomainError);
}

TEST(Config, RoundTrip) {
    RunConfig c = example_one();
    c.f = "gauss:1,0,1";
    c.quad.scheme = QuadScheme::GaussKronrod;
    c.quad.rel_tol = 1e-7;
    c.args["t"] = 0.25;
    c.threads = 3;
    c.format = "json";
    const RunConfig back = RunConfig::from_json(c.to_json());
    EXPECT_EQ(back, c);
    EXPECT_EQ(RunConfig::parse(c.to_json().dump(2)), c);
    EXPECT_EQ(back.params.nu, 2.0);
    EXPECT_EQ(back.b, (std::vector<double>{0.0, 1.0}));
    EXPECT_EQ(back.quad.scheme, QuadScheme::GaussKronrod);
}

TEST(Config, UnknownKeysAreRejected) {
    try {
        RunConfig::parse(R"({"command": "eval", "colour": 1})");
        FAIL() << "accepted an unknown key";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("'colour'"), std::string::npos);
    }
    try {
        RunConfig::parse(R"({"params": {"mu": 0.3, "lambda": 1}})");
        FAIL() << "accepted an unknown nested key";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("params.lambda"), std::string::npos);
    }
}

TEST(Config, ErrorsCarryContext) {
    try {
        RunConfig::parse("{\n  \"command\": \"solve\",\n  \"target\": ,\n}");
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    try {
        RunConfig::parse(R"({"params": {"mu": "half"}})");
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("params.mu"), std::string::npos) << e.what();
    }
    EXPECT_THROW(RunConfig::parse(R"({"command": "plot"})"), DomainError);
    EXPECT_THROW(RunConfig::parse(R"({"format": "xml"})"), DomainError);
}

TEST(Emit, EmptyAndSingleSample) {
    EXPECT_EQ(samples_to_csv({}), "t,x,value,phase_re,phase_im,est_error,method,region\n");
    solver::SolutionSample s;
    s.t = 0.1;
    s.x = {1.0};
    s.value = 1.0 / 3.0;
    s.region = "t<x";
    const auto rows = csv_rows(samples_to_csv({s}));
    ASSERT_EQ(rows.size(), 2u);
    ASSERT_EQ(rows[1].size(), 8u);
    EXPECT_EQ(rows[1][0], "0.10000000000000001");
    EXPECT_EQ(rows[1][2], "0.33333333333333331");
    EXPECT_EQ(rows[1][6], "RadialQuad");
    EXPECT_EQ(rows[1][7], "t<x");
    EXPECT_EQ(format_double(NAN), "nan");
}

TEST(Run, EvalBinomialCase) {
    RunConfig c;
    c.command = Command::Eval;
    c.target = "2f1";
    c.args = {{"a", -0.5}, {"b", 1.5}, {"c", 1.5}, {"z", 0.36}};
    const auto r = run_config(c);
    EXPECT_EQ(r.code, kOk);
    EXPECT_EQ(r.out, "0.8\n");
    c.format = "json";
    const auto j = nlohmann::json::parse(run_config(c).out);
    EXPECT_NEAR(j.at("value").get<double>(), 0.8, 1e-12);
}

TEST(Run, EvalErrors) {
    RunConfig c;
    c.command = Command::Eval;
    c.target = "2f1";
    c.args = {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}};
    EXPECT_EQ(run_config(c).code, kDomainError);  // missing z
    c.args["z"] = 2.0;
    EXPECT_EQ(run_config(c).code, kDomainError);  // branch cut
    c.args = {{"a", 5000.0}, {"b", 5000.0}, {"c", 1.0}, {"z", 0.5}};
    const auto r = run_config(c);
    EXPECT_EQ(r.code, kConvergenceError);
    EXPECT_NE(r.err.find("did not converge"), std::string::npos);
    c.target = "zeta";
    EXPECT_EQ(run_config(c).code, kDomainError);
}

TEST(Run, Kernel) {
    RunConfig c;
    c.command = Command::Kernel;
    c.target = "k";
    c.params.mu = 0.3;
    c.params.nu = 0.7;
    c.args = {{"t", 0.5}, {"x", 1.0}, {"xp", 1.2}};
    c.format = "json";
    const auto r = run_config(c);
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("region"), "Shell");
    EXPECT_DOUBLE_EQ(j.at("profile").get<double>(), kernels::k_kernel(c.params, 0.5, 1.0, 1.2).profile);
}

TEST(Run, SolveExampleOne) {
    const auto r = run_config(example_one());
    ASSERT_EQ(r.code, kOk) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 10u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = std::stod(rows[i][0]);
        EXPECT_NEAR(std::stod(rows[i][2]), t * std::sqrt(1.0 - t * t), 1e-12);
        EXPECT_EQ(rows[i][6], "RadialSeries");
    }
}

TEST(Run, SolveBadInput) {
    auto c = example_one();
    c.grid = "t=0.1:0.9:0.1";
    EXPECT_EQ(run_config(c).code, kDomainError);
    c = example_one();
    c.target = "radial";
    c.f = "gauss:1";
    EXPECT_EQ(run_config(c).code, kDomainError);
    c = example_one();
    c.params.mu = 0.7;
    c.target = "radial";
    EXPECT_EQ(run_config(c).code, kDomainError);
}

TEST(Run, DeterministicFileOutputWithSidecar) {
    const auto dir = std::filesystem::temp_directory_path() / "epd_cli_test";
    std::filesystem::create_directories(dir);
    auto c = example_one();
    c.output = (dir / "a.csv").string();
    ASSERT_EQ(run_config(c).code, kOk);
    c.output = (dir / "b.csv").string();
    ASSERT_EQ(run_config(c).code, kOk);
    EXPECT_EQ(slurp((dir / "a.csv").string()), slurp((dir / "b.csv").string()));
    const auto meta = nlohmann::json::parse(slurp((dir / "a.csv.meta.json").string()));
    EXPECT_EQ(RunConfig::from_json(meta.at("config")).grid, c.grid);
    EXPECT_TRUE(meta.contains("created"));
    c.output = (dir / "missing" / "c.csv").string();
    EXPECT_EQ(run_config(c).code, kDomainError);
    std::filesystem::remove_all(dir);
}

TEST(Run, VerifyExamplesPasses) {
    RunConfig c;
    c.command = Command::Verify;
    c.target = "examples";
    const auto r = run_config(c);
    EXPECT_EQ(r.code, kOk);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("pass"), true);
    EXPECT_EQ(j.at("reports").size(), 1u);
}

TEST(Run, VerifyFailureIsReported) {
    // The radial-front sign check fails: the inner front carries +sin(pi alpha).
    RunConfig c;
    c.command = Command::Verify;
    c.target = "wave-limits";
    const auto r = run_config(c);
    EXPECT_EQ(r.code, kVerificationFailed);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("pass"), false);
    bool found = false;
    for (const auto& rep : j.at("reports"))
        for (const auto& n : rep.at("notes"))
            if (n.get<std::string>().rfind("FAIL: ", 0) == 0) found = true;
    EXPECT_TRUE(found);
    c.target = "everything";
    EXPECT_EQ(run_config(c).code, kDomainError);
}

TEST(Run, PropositionSuiteIncludesNegativeControls) {
    const auto reps = run_suite("proposition");
    ASSERT_EQ(reps.size(), 6u);
    for (const auto& r : reps) EXPECT_TRUE(r.pass) << r.to_text();
}

TEST(Main, FlagsBuildTheSameConfig) {
    const char* argv[] = {"epd", "--print-config", "solve", "radial-series", "--mu", "0.5", "--nu", "2",
                          "--a",  "0",              "--b",   "0,1",          "--grid", "t=0.1:0.9:0.1;x=1"};
    testing::internal::CaptureStdout();
    const int code = cli::main(static_cast<int>(std::size(argv)), const_cast<char**>(argv));
    const std::string out = testing::internal::GetCapturedStdout();
    ASSERT_EQ(code, kOk);
    EXPECT_EQ(RunConfig::parse(out), example_one());
}

TEST(Main, BadFlags) {
    const char* argv[] = {"epd", "solve", "radial", "--mu", "half", "--grid", "t=1;x=2"};
    testing::internal::CaptureStderr();
    testing::internal::CaptureStdout();
    const int code = cli::main(static_cast<int>(std::size(argv)), const_cast<char**>(argv));
    testing::internal::GetCapturedStdout();
    testing::internal::GetCapturedStderr();
    EXPECT_EQ(code, kDomainError);
}
