#include "seqlep/cli_app.hpp"
#include "seqlep/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace seqlep {
namespace {

namespace fs = std::filesystem;

class TempDir {
public:
    explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("seqlep_test_" + name)) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    return lines;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "experiment.cfg";
    std::ofstream(p) << "out_dir = " << dir.string() << "\n" << body;
    return p;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
    args.insert(args.begin(), "seqlep");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) {
        *out_text = out.str();
    }
    if (err_text) {
        *err_text = err.str();
    }
    return code;
}

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

TEST(ParseConfig, DefaultsAreInheritedAndOverridden) {
    const ExperimentConfig c = parse(
        "# global settings\n"
        "replications = 250\n"
        "grid.beta_lo = 0.5   # trailing comment\n"
        "seed = 17\n"
        "\n"
        "[scenario first]\n"
        "signal.beta = 0.9\n"
        "n_list = 100, 200\n"
        "[scenario second]\n"
        "signal.kind = constant\n"
        "signal.c = 0.25\n"
        "grid.lambda = 2.5\n");
    ASSERT_EQ(c.scenarios.size(), 2u);
    const auto& a = c.scenarios[0];
    const auto& b = c.scenarios[1];
    EXPECT_EQ(a.id, "first");
    EXPECT_EQ(a.replications, 250u);
    EXPECT_EQ(a.seed, 17u);
    EXPECT_EQ(a.grid.beta_lo, 0.5);
    EXPECT_EQ(a.signal.beta, 0.9);
    EXPECT_EQ(a.n_list, (std::vector<std::size_t>{100, 200}));
    EXPECT_FALSE(a.grid.lambda.has_value());
    EXPECT_EQ(b.signal.kind, SignalSpec::Kind::constant);
    EXPECT_EQ(b.signal.c, 0.25);
    EXPECT_EQ(b.signal.beta, 0.7);
    EXPECT_EQ(b.n_list, (std::vector<std::size_t>{100, 1000, 5000, 10000}));
    EXPECT_EQ(*b.grid.lambda, 2.5);
    EXPECT_EQ(b.grid.effective_lambda(), 2.5);
}

TEST(ParseConfig, DefaultLambdaKeyword) {
    const ExperimentConfig c = parse("grid.lambda = 3\n[scenario s]\ngrid.lambda = default\n");
    EXPECT_FALSE(c.scenarios[0].grid.lambda.has_value());
    EXPECT_DOUBLE_EQ(c.scenarios[0].grid.effective_lambda(), default_lambda(1.0, 0.6));
}

TEST(ParseConfig, ErrorsCarrySourceAndLine) {
    auto message = [](const std::string& text) {
        try {
            (void)parse(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_NE(message("seed = 1\nbogus.key = 3\n").find("test.cfg:2:"), std::string::npos);
    EXPECT_NE(message("seed = 1\nbogus.key = 3\n").find("bogus.key"), std::string::npos);
    EXPECT_NE(message("[scenario a]\nreplications = many\n").find("test.cfg:2:"), std::string::npos);
    EXPECT_NE(message("just words\n").find("test.cfg:1:"), std::string::npos);
    EXPECT_NE(message("[scenario a\n").find("test.cfg:1:"), std::string::npos);
    EXPECT_NE(message("[block a]\n").find("test.cfg:1:"), std::string::npos);
    EXPECT_NE(message("[scenario a]\n[scenario a]\n").find("test.cfg:2:"), std::string::npos);
    EXPECT_NE(message("signal.kind = wavelet\n").find("signal.kind"), std::string::npos);
    EXPECT_THROW((void)load_config("/nonexistent/dir/x.cfg"), ConfigError);
}

TEST(Validate, NamesTheOffendingField) {
    auto field = [](const std::string& text) {
        try {
            validate(parse(text));
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string("valid");
    };
    EXPECT_EQ(field("[scenario a]\n"), "valid");
    EXPECT_EQ(field("[scenario a]\nsignal.beta = 1.5\n"), "a.signal.beta");
    EXPECT_EQ(field("[scenario a]\nsignal.z0 = 1.0\n"), "a.signal.z0");
    EXPECT_EQ(field("[scenario a]\nn_list = 100, 2\n"), "a.n_list");
    EXPECT_EQ(field("[scenario a]\ngrid.beta_lo = 0.9\n"), "a.grid.beta_lo");
    EXPECT_EQ(field("[scenario a]\ngrid.K = 0\n"), "a.grid.K");
    EXPECT_EQ(field("[scenario a]\ntail.z_list = 1.5\n"), "a.tail.z_list");
    EXPECT_EQ(field("[scenario a]\nsignal.kind = constant\nsignal.c = 1\n"), "a.signal.c");
    // Defaults are only checked through the scenarios that inherit them.
    EXPECT_EQ(field("signal.beta = 2\n"), "valid");
}

TEST(RunCli, UsageAndConfigErrors) {
    TempDir dir("usage");
    std::string err;
    EXPECT_EQ(run({}, nullptr, &err), kExitConfigError);
    EXPECT_EQ(run({"--config", (dir.path() / "missing.cfg").string()}, nullptr, &err), kExitConfigError);
    EXPECT_NE(err.find("missing.cfg"), std::string::npos);

    const fs::path bad_key = write_config(dir.path(), "[scenario a]\nnonsense = 1\n");
    EXPECT_EQ(run({"--config", bad_key.string()}, nullptr, &err), kExitConfigError);
    EXPECT_NE(err.find(":3:"), std::string::npos);

    const fs::path ok = write_config(dir.path(), "[scenario a]\nreplications = 5\nn_list = 50\n");
    EXPECT_EQ(run({"--config", ok.string(), "--suite", "bogus"}), kExitConfigError);
    EXPECT_EQ(run({"--config", ok.string(), "--suite", "grid", "--trace"}), kExitConfigError);
    EXPECT_EQ(run({"--config", ok.string(), "--workers", "0"}), kExitConfigError);
}

TEST(RunCli, ValidationErrorsExitThree) {
    TempDir dir("validation");
    std::string err;
    const fs::path cfg = write_config(dir.path(), "[scenario a]\nsignal.beta = 1.4\n");
    EXPECT_EQ(run({"--config", cfg.string()}, nullptr, &err), kExitValidationError);
    EXPECT_NE(err.find("a.signal.beta"), std::string::npos);
}

TEST(RunCli, EmptyScenarioListWritesHeaders) {
    TempDir dir("empty");
    const fs::path cfg = write_config(dir.path(), "replications = 10\n");
    ASSERT_EQ(run({"--config", cfg.string()}), kExitSuccess);
    const auto lines = read_lines(dir.path() / "risk.csv");
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0], "scenario_id,n,M,beta,z0,lambda,R_n,stderr,rate_N,normalized,khat_mode");
    EXPECT_EQ(read_lines(dir.path() / "risk_khat.csv").size(), 1u);
}

TEST(RunCli, RiskCsvRowsAndOverrides) {
    TempDir dir("risk");
    const fs::path cfg = write_config(dir.path(), "n_list = 100, 300\nreplications = 40\n[scenario b07]\n");
    std::string log;
    ASSERT_EQ(run({"--config", cfg.string(), "--replications", "30", "--seed", "5", "--workers", "2"}, &log),
              kExitSuccess);
    EXPECT_NE(log.find("lambda"), std::string::npos);
    const auto lines = read_lines(dir.path() / "risk.csv");
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[1].rfind("b07,100,30,", 0), 0u);
    EXPECT_EQ(lines[2].rfind("b07,300,30,", 0), 0u);
}

TEST(RunCli, RiskOutputIsReproducibleAcrossWorkers) {
    TempDir dir("repro");
    const fs::path cfg =
        write_config(dir.path(), "n_list = 100, 400\nreplications = 60\nseed = 3\n[scenario a]\n[scenario b]\n"
                                 "signal.beta = 1\ngrid.beta_lo = 0.99\ngrid.beta_hi = 1\n");
    ASSERT_EQ(run({"--config", cfg.string(), "--workers", "1"}), kExitSuccess);
    const std::string first = read_file(dir.path() / "risk.csv");
    const std::string first_khat = read_file(dir.path() / "risk_khat.csv");
    for (const char* workers : {"1", "3", "8"}) {
        ASSERT_EQ(run({"--config", cfg.string(), "--workers", workers}), kExitSuccess);
        EXPECT_EQ(read_file(dir.path() / "risk.csv"), first) << workers;
        EXPECT_EQ(read_file(dir.path() / "risk_khat.csv"), first_khat) << workers;
    }
}

TEST(RunCli, GridSuiteWritesOneRowPerBandwidth) {
    TempDir dir("grid");
    const fs::path cfg = write_config(dir.path(), "[scenario g]\nn_list = 100\n");
    ASSERT_EQ(run({"--config", cfg.string(), "--suite", "grid", "--strict"}), kExitSuccess);
    const auto lines = read_lines(dir.path() / "grid_g_n100.csv");
    ASSERT_EQ(lines.size(), 6u);
    EXPECT_EQ(lines[0], "k,beta_k,h_k,N_k,lambda,threshold_k");
    EXPECT_EQ(lines[1].rfind("0,0.59999999999999998,", 0), 0u);
}

TEST(RunCli, TraceWritesPerBandwidthRowsAndSelection) {
    TempDir dir("trace");
    const fs::path cfg = write_config(dir.path(), "[scenario t]\nseed = 4\n");
    std::string log;
    ASSERT_EQ(run({"--config", cfg.string(), "--trace", "--n", "100"}, &log), kExitSuccess);
    const auto trace = read_lines(dir.path() / "trace_t.csv");
    // Header, five grid rows, then the two-line selection table.
    ASSERT_EQ(trace.size(), 8u);
    EXPECT_EQ(trace[6], "k_hat,value,lambda");
    EXPECT_EQ(read_lines(dir.path() / "sequential_t.csv").size(), 6u);
    EXPECT_EQ(read_lines(dir.path() / "path_t.csv").size(), 102u);
    EXPECT_NE(log.find("k_hat"), std::string::npos);
}

TEST(RunCli, StrictModeReportsFailedChecks) {
    TempDir dir("strict");
    // A bandwidth of 2 puts the threshold far beyond the path energy: almost nothing triggers.
    const fs::path cfg =
        write_config(dir.path(), "[scenario u]\nreplications = 200\ntail.n = 200\ntail.h = 2\n");
    std::string log;
    EXPECT_EQ(run({"--config", cfg.string(), "--suite", "tail"}, &log), kExitSuccess);
    EXPECT_NE(log.find("under-powered"), std::string::npos);
    EXPECT_EQ(run({"--config", cfg.string(), "--suite", "tail", "--strict"}), kExitCheckFailure);
    EXPECT_TRUE(fs::exists(dir.path() / "tail_u.csv"));
}

TEST(RunCli, MomentsAndStoppingSuitesProduceFiles) {
    TempDir dir("suites");
    const fs::path cfg = write_config(dir.path(),
                                      "[scenario m]\nreplications = 300\nmoments.n = 40\n"
                                      "stopping.n_list = 50, 100\nstopping.h_list = 0.1\n");
    ASSERT_EQ(run({"--config", cfg.string(), "--suite", "moments"}), kExitSuccess);
    EXPECT_EQ(read_lines(dir.path() / "moments_m.csv").size(), 81u);
    ASSERT_EQ(run({"--config", cfg.string(), "--suite", "stopping"}), kExitSuccess);
    // Two rules (fixed 0.1 and the rate bandwidth for beta = 0.7) times two sample sizes.
    EXPECT_EQ(read_lines(dir.path() / "stopping_m.csv").size(), 5u);
}

}  // namespace
}  // namespace seqlep
