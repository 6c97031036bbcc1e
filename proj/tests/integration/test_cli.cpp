#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("eulerlab_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

Result run(const std::string& args) {
    const auto out = scratch_dir() / "stdout.txt";
    const auto err = scratch_dir() / "stderr.txt";
    const std::string cmd = std::string(EULERLAB_CLI) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::size_t lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST(Cli, Figure1QuickModePassesAndWritesFiles) {
    const auto csv = scratch_dir() / "quick.csv";
    const auto svg = scratch_dir() / "quick.svg";
    const auto r = run("figure1 --quick --out " + csv.string() + " --svg " + svg.string());
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    const auto text = slurp(csv);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "N,h,weak_error,weak_stderr,strong_error,strong_stderr,bound_thm5,order0_ref");
    EXPECT_EQ(lines(text), 11u);
    EXPECT_NE(slurp(svg).find("</svg>"), std::string::npos);
    EXPECT_NE(r.out.find("PASS lower bound N=1024"), std::string::npos) << r.out;
}

TEST(Cli, Figure1CsvIndependentOfThreadsAndSvg) {
    const std::string base = "figure1 --k-max 5 --samples 2100 --seed 3";
    const auto a = run(base + " --threads 1");
    const auto b = run(base + " --threads 3 --svg " + (scratch_dir() / "t.svg").string());
    ASSERT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(lines(a.out), 6u);
}

TEST(Cli, ConfigFileWithCommandLinePrecedence) {
    const auto cfg = scratch_dir() / "run.ini";
    {
        std::ofstream f(cfg);
        f << "# test config\nsamples = 1500\nk-max = 4\nseed = 5\n";
    }
    const auto from_file = run("figure1 --config " + cfg.string());
    const auto explicit_flags = run("figure1 --samples 1500 --k-max 4 --seed 5");
    EXPECT_EQ(lines(from_file.out), 5u);
    EXPECT_EQ(from_file.out, explicit_flags.out);
    const auto overridden = run("figure1 --config " + cfg.string() + " --k-max 3");
    EXPECT_EQ(lines(overridden.out), 4u);
    // The --quick preset must not override values the file sets.
    const auto quick = run("figure1 --quick --config " + cfg.string());
    EXPECT_EQ(quick.out, explicit_flags.out);
}

TEST(Cli, BoundsCheckDefaultRunPasses) {
    const auto r = run("bounds-check");
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    for (const char* suite : {"lemma53", "lemma32", "lemma52", "lemma33"})
        EXPECT_NE(r.out.find(suite), std::string::npos) << suite;
}

TEST(Cli, BoundsCheckDetectsPerturbedConstant) {
    const auto r = run("bounds-check --perturb-constant 1e-3 --cases 50 --lemma33-samples 10000");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL lemma53"), std::string::npos) << r.out;
}

TEST(Cli, BoundsCheckRejectsStepOutsideRange) {
    const auto r = run("bounds-check --step-size 0.25");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("domain error"), std::string::npos) << r.err;
    EXPECT_EQ(run("bounds-check --step-size 0.125").code, 0);
}

TEST(Cli, HolderProbeSmoothAndRough) {
    const auto smooth = run("probe --type holder --x 0,0,0.5 --direction 1,0,0 --samples 2000 "
                            "--expect smooth");
    EXPECT_EQ(smooth.code, 0) << smooth.out << smooth.err;
    EXPECT_EQ(smooth.out.substr(0, smooth.out.find('\n')),
              "delta,increment,stderr,increment_over_sqrt_delta");
    const auto rough = run("probe --type holder --deltas 1e-2,1e-3,1e-4,1e-5 --samples 20000 "
                           "--expect rough");
    EXPECT_EQ(rough.code, 0) << rough.out << rough.err;
    EXPECT_EQ(lines(rough.out), 5u);
}

TEST(Cli, LipschitzProbeRatiosGrow) {
    const auto r = run("probe --type lipschitz --h-list 0.1,0.01,0.001,0.0001 --samples 2000");
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_EQ(lines(r.out), 5u);
}

TEST(Cli, ProbeRequiresType) { EXPECT_NE(run("probe").code, 0); }

TEST(Cli, FixturesAreDeterministicAndMatchCommittedFile) {
    const auto a = run("fixtures");
    const auto b = run("fixtures");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, slurp(fs::path(EULERLAB_FIXTURE_DIR) / "constants.txt"));
    const auto file = scratch_dir() / "constants.txt";
    EXPECT_EQ(run("fixtures --out " + file.string()).code, 0);
    EXPECT_EQ(slurp(file), a.out);
}

TEST(Cli, SimulateDumpsTrajectory) {
    const auto r = run("simulate --model ex3 --level 4");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,x1,x2,x3,x4");
    EXPECT_EQ(lines(r.out), 18u);
    const auto blow = run("simulate --model bsp1 --level 2 --T 1 --x0 100,100 --scheme plain");
    EXPECT_EQ(blow.code, 0);
    EXPECT_NE(blow.err.find("blow-up threshold"), std::string::npos);
    EXPECT_LT(lines(blow.out), 6u);
}

TEST(Cli, ErrorsAndExitCodes) {
    EXPECT_NE(run("").code, 0);
    EXPECT_NE(run("figure1 --model nope").code, 0);
    EXPECT_EQ(run("figure1 --k-min 5 --k-max 3 --samples 10").code, 2);
    const auto io = run("figure1 --k-max 2 --samples 10 --out /nonexistent/dir/x.csv");
    EXPECT_EQ(io.code, 2);
    EXPECT_NE(io.err.find("/nonexistent/dir/x.csv"), std::string::npos);
    EXPECT_EQ(run("simulate --model ex2b --x0 1,2").code, 2);
}
