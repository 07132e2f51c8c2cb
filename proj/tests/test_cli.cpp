#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracground/cli.hpp"
#include "fracground/config.hpp"

using namespace fracground;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fracground_test_" + name);
    fs::remove_all(p);
    return p;
}

struct RunOutcome {
    int code;
    std::string out, err;
};

RunOutcome run(const std::string& command, const RunConfig& rc, const fs::path& dir, unsigned jobs = 1) {
    std::ostringstream out, err;
    cli::Options opt;
    opt.out_dir = dir.string();
    opt.jobs = jobs;
    opt.out = &out;
    opt.err = &err;
    const int code = cli::run(command, rc, opt);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

RunConfig small(const std::string& extra = "") {
    return parse_run_config("L = 40\nM = 512\n" + extra);
}

}  // namespace

TEST(Config, DefaultsMatchBenchmark) {
    const RunConfig rc = parse_run_config("");
    EXPECT_EQ(rc.dim, 1);
    EXPECT_DOUBLE_EQ(rc.L, 160.0);
    EXPECT_EQ(rc.M, 8192);
    EXPECT_DOUBLE_EQ(rc.s, 0.5);
    EXPECT_DOUBLE_EQ(rc.p, 2.0);
}

TEST(Config, ParsesTypedValues) {
    const RunConfig rc = parse_run_config(
        "# comment\n"
        "dim = 2   # trailing\n"
        "potential.kind = \"well\"\n"
        "potential.params = [2, 1, 0.5]\n"
        "positive_mode = true\n"
        "verify.checks = [\"gn\", \"cutoff\"]\n"
        "seed = 42\n");
    EXPECT_EQ(rc.dim, 2);
    EXPECT_EQ(rc.potential_kind, "well");
    EXPECT_EQ(rc.potential_params, (std::vector<double>{2, 1, 0.5}));
    EXPECT_TRUE(rc.positive_mode);
    EXPECT_EQ(rc.verify_checks, (std::vector<std::string>{"gn", "cutoff"}));
    EXPECT_EQ(rc.seed, 42u);
}

TEST(Config, ErrorsNameTheLine) {
    try {
        parse_run_config("L = 10\nM = 64\nL = 20\n");
        FAIL() << "duplicate key accepted";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    EXPECT_THROW(parse_run_config("L 10\n"), ConfigError);
    EXPECT_THROW(parse_run_config("M = 64.5\n"), ConfigError);
    EXPECT_THROW(parse_run_config("L = \"wide\"\n"), ConfigError);
    EXPECT_THROW(parse_run_config("potential.params = [1, \n"), ConfigError);
}

TEST(Config, UnknownKeyRejected) {
    try {
        parse_run_config("solver.tolerance = 1e-8\n");
        FAIL() << "unknown key accepted";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("solver.tolerance"), std::string::npos);
    }
}

TEST(Config, ResolvedRoundTrip) {
    RunConfig rc = parse_run_config("L = 33.3\npotential.kind = \"bump\"\npotential.params = [1, 0.5, 2]\nsweep.shifts = [0, 0.1]\n");
    const RunConfig back = parse_run_config(write_resolved(rc));
    EXPECT_EQ(write_resolved(back), write_resolved(rc));
    EXPECT_DOUBLE_EQ(back.L, 33.3);
    EXPECT_EQ(back.sweep_shifts, rc.sweep_shifts);
}

TEST(Cli, UnknownCommandIsError) {
    const auto r = run("launch", small(), scratch("unknown"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("unknown command"), std::string::npos);
}

TEST(Cli, V1ViolationExitsWithWitness) {
    const auto r = run("solve", small("potential.params = [-1]\n"), scratch("v1"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("(V1)"), std::string::npos);
    EXPECT_NE(r.err.find("V0 = -1"), std::string::npos);
}

TEST(Cli, SolveWritesArtifacts) {
    const fs::path dir = scratch("solve");
    const auto r = run("solve", small(), dir);
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_TRUE(fs::exists(dir / "report.json"));
    EXPECT_TRUE(fs::exists(dir / "resolved.config"));
    EXPECT_TRUE(fs::exists(dir / "fields" / "ground_state.csv"));
    EXPECT_TRUE(fs::exists(dir / "diag" / "convergence.csv"));
    const json j = json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(j["command"], "solve");
    for (const auto& c : j["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
    const Field u = read_field_csv((dir / "fields" / "ground_state.csv").string());
    EXPECT_EQ(u.size(), 512u);
}

TEST(Cli, SweepPotentialReportsMonotoneLevels) {
    const fs::path dir = scratch("sweep");
    const auto r = run("sweep-potential", small("sweep.shifts = [0, 1]\n"), dir, 2);
    EXPECT_EQ(r.code, 0) << r.out;
    const json j = json::parse(slurp(dir / "report.json"));
    const auto levels = j["results"]["sweep_potential"]["levels"].get<std::vector<double>>();
    ASSERT_EQ(levels.size(), 2u);
    EXPECT_LT(levels[0], levels[1]);
    bool found = false;
    for (const auto& c : j["checks"])
        if (c["name"] == "sweep.monotone") found = c["pass"].get<bool>();
    EXPECT_TRUE(found);
}

TEST(Cli, RunsAreReproducible) {
    const RunConfig rc = small("level.starts = 3\n");
    const fs::path a = scratch("rep_a"), b = scratch("rep_b");
    ASSERT_EQ(run("solve", rc, a, 1).code, 0);
    ASSERT_EQ(run("solve", rc, b, 3).code, 0);
    EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
    EXPECT_EQ(slurp(a / "fields" / "ground_state.csv"), slurp(b / "fields" / "ground_state.csv"));
}

TEST(Cli, ResolvedConfigReproducesRun) {
    const fs::path a = scratch("res_a"), b = scratch("res_b");
    ASSERT_EQ(run("solve", small("seed = 9\n"), a).code, 0);
    const RunConfig again = load_run_config((a / "resolved.config").string());
    ASSERT_EQ(run("solve", again, b).code, 0);
    EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
}

TEST(Cli, VerifyLoadsFieldFromDisk) {
    const fs::path a = scratch("vf_a"), b = scratch("vf_b");
    ASSERT_EQ(run("solve", small(), a).code, 0);
    const auto r = run("verify", small("verify.field = \"" + (a / "fields" / "ground_state.csv").string() +
                                      "\"\nverify.checks = [\"level\", \"cutoff\"]\n"),
                       b);
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    const json j = json::parse(slurp(b / "report.json"));
    EXPECT_EQ(j["checks"].size(), 2u);
}

TEST(Cli, VerifyRejectsUnknownCheck) {
    const auto r = run("verify", small("verify.checks = [\"spectral_gap\"]\n"), scratch("vbad"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("spectral_gap"), std::string::npos);
}

TEST(Cli, EvolveWritesDiagnostics) {
    const fs::path dir = scratch("evolve");
    const auto r = run("evolve", small("evolve.dt = 0.001\nevolve.steps = 200\nevolve.diag_every = 10\nevolve.snapshot_every = 100\n"), dir);
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    const std::string diag = slurp(dir / "diag" / "evolve.csv");
    EXPECT_EQ(diag.rfind("t,mass,energy\n", 0), 0u);
    EXPECT_TRUE(fs::exists(dir / "fields" / "snapshot_100.csv"));
    EXPECT_TRUE(fs::exists(dir / "fields" / "snapshot_200.csv"));
}
