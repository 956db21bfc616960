// Runs the built command-line tool and checks exit codes, output and
// determinism.

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int status = -1;
    std::string out;
};

CliResult run(const std::string& args) {
    const std::string cmd = std::string(CYCLECERT_CLI_PATH) + " " + args + " 2>&1";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cyclecert-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST(Classify, RepellerAtThresholdWithV10) {
    const CliResult r = run("classify --m 3/5 --k 1 --s 2");
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "classification: repeller")) << r.out;
    EXPECT_TRUE(contains(r.out, "V10: 32/1625")) << r.out;
}

TEST(Classify, DecimalLiteralIsExact) {
    const CliResult dec = run("classify --m 0.6"), frac = run("classify --m 3/5");
    EXPECT_EQ(dec.status, 0);
    EXPECT_EQ(dec.out, frac.out);
}

TEST(Classify, AttractorBelowThreshold) {
    const CliResult r = run("classify --m 1/2");
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(contains(r.out, "classification: attractor")) << r.out;
}

TEST(Usage, MissingSubcommandIs64) { EXPECT_EQ(run("").status, 64); }
TEST(Usage, UnknownFlagIs64) { EXPECT_EQ(run("classify --m 1 --bogus 3").status, 64); }
TEST(Usage, BadRationalIs64) {
    const CliResult r = run("classify --m 1/0");
    EXPECT_EQ(r.status, 64) << r.out;
}
TEST(Usage, IrrationalFourthRootAsksForN) {
    const CliResult r = run("certify --prop uniq --m 0.57");
    EXPECT_EQ(r.status, 64);
    EXPECT_TRUE(contains(r.out, "--n")) << r.out;
}
TEST(Usage, SimpleConstructionOutsideItsRangeIs64) { EXPECT_EQ(run("certify --prop nc --interval 0,1/2").status, 64); }

TEST(Certify, SimpleConstructionText) {
    const CliResult r = run("certify --prop nc --m 1/5");
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "verdict: certified"));
}

TEST(Certify, OutsideTheConstructionRangeNamesTheRange) {
    const CliResult r = run("certify --prop nc --m 1/2");
    EXPECT_EQ(r.status, 64) << r.out;
    EXPECT_TRUE(contains(r.out, "(0, 3/10]")) << r.out;
}

TEST(Certify, JsonAndReportFile) {
    const fs::path file = scratch("uniq.json");
    const CliResult r = run("certify --prop uniq --n 7/8 --format json --report-file " + file.string());
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "\"verdict\": true"));
    EXPECT_EQ(slurp(file), r.out);
}

TEST(Config, FileValuesApplyAndFlagsWin) {
    const fs::path cfg = scratch("classify.ini");
    {
        std::ofstream out(cfg);
        out << "[classify]\nm=1/2\n";
    }
    const CliResult from_file = run("--config " + cfg.string() + " classify");
    EXPECT_EQ(from_file.status, 0) << from_file.out;
    EXPECT_TRUE(contains(from_file.out, "classification: attractor")) << from_file.out;
    const CliResult overridden = run("--config " + cfg.string() + " classify --m 1");
    EXPECT_TRUE(contains(overridden.out, "classification: repeller")) << overridden.out;
}

TEST(Gentrig, PeriodAndEnergy) {
    const CliResult r = run("gentrig --p 1 --q 2 --theta 0 1.5");
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(contains(r.out, "period: 7.416298709205487")) << r.out;
    EXPECT_TRUE(contains(r.out, "theta = 0: Cs = 1, Sn = 0")) << r.out;
}

TEST(Polycycle, InvariantOnlyAtZeroAndOne) {
    EXPECT_TRUE(contains(run("polycycle-example --m 0").out, "invariant: yes"));
    EXPECT_TRUE(contains(run("polycycle-example --m 1").out, "invariant: yes"));
    EXPECT_TRUE(contains(run("polycycle-example --m 1/2").out, "invariant: no"));
}

TEST(Cycle, UnstableCycleAt057) {
    const CliResult r = run("cycle --m 0.57 --abel");
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "cycle: found"));
    EXPECT_TRUE(contains(r.out, "(unstable)"));
    EXPECT_TRUE(contains(r.out, "winding number: 1"));
}

TEST(Cycle, NoneAt055) {
    const CliResult r = run("cycle --m 0.55");
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(contains(r.out, "cycle: none found"));
}

TEST(Bifurcate, OneSignChangeAndEndpointSigns) {
    const CliResult r = run("bifurcate --bracket 0.547,0.6 --tol 1e-6");
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "sign changes: 1"));
    EXPECT_TRUE(contains(r.out, "delta(547/1000) = 0.00957"));
    EXPECT_TRUE(contains(r.out, "delta(3/5) = -0.0277"));
}

TEST(Bifurcate, NoSignChangeIsNumericFailure) { EXPECT_EQ(run("bifurcate --bracket 0.57,0.58").status, 3); }

TEST(Basin, OvalFileAndContainmentLog) {
    const fs::path csv = scratch("basin.csv");
    const CliResult r = run("basin --m 0.57 --out " + csv.string());
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "oval strictly inside the cycle: yes"));
    EXPECT_TRUE(contains(r.out, "(flow enters)"));
    const std::string body = slurp(csv);
    EXPECT_EQ(body.rfind("t,x,y,orbit-id\n", 0), 0u);
    EXPECT_TRUE(contains(body, ",basin-oval\n"));
}

TEST(Basin, OutsideItsRangeIs64) { EXPECT_EQ(run("basin --m 0.7 --out /dev/null").status, 64); }

TEST(Portrait, CsvIsByteIdenticalAcrossRuns) {
    const fs::path a = scratch("a.csv"), b = scratch("b.csv");
    ASSERT_EQ(run("portrait --m 0.57 --out " + a.string()).status, 0);
    ASSERT_EQ(run("portrait --m 0.57 --out " + b.string()).status, 0);
    const std::string body = slurp(a);
    EXPECT_EQ(body, slurp(b));
    for (const char* id : {",orbit-0\n", ",separatrix-stable-p+\n", ",nullcline-x\n", ",nullcline-y\n", ",cycle\n", ",basin-oval\n"})
        EXPECT_TRUE(contains(body, id)) << id;
}

TEST(Portrait, SvgHasOnePathPerPolyline) {
    const fs::path svg = scratch("p.svg");
    ASSERT_EQ(run("portrait --m 0.57 --out " + svg.string()).status, 0);
    const std::string body = slurp(svg);
    EXPECT_EQ(body.rfind("<svg", 0), 0u);
    EXPECT_TRUE(contains(body, "id=\"cycle\""));
    EXPECT_TRUE(contains(body, "</svg>"));
}

TEST(Report, EveryRowCitesAnExistingFile) {
    const fs::path dir = scratch("report");
    const CliResult r = run("report --out-dir " + dir.string());
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "defaults: shooting eps = 1e-6"));
    std::istringstream lines(slurp(dir / "report.txt"));
    int rows = 0;
    for (std::string line; std::getline(lines, line);) {
        const auto bar = line.rfind(" | ");
        if (bar == std::string::npos) continue;
        ++rows;
        std::istringstream files(line.substr(bar + 3));
        int cited = 0;
        for (std::string f; files >> f; ++cited) EXPECT_TRUE(fs::exists(dir / f)) << f;
        EXPECT_GT(cited, 0) << line;
    }
    EXPECT_EQ(rows, 9);
}

TEST(Report, DeterministicAcrossRuns) {
    const fs::path a = scratch("ra"), b = scratch("rb");
    ASSERT_EQ(run("report --out-dir " + a.string()).status, 0);
    ASSERT_EQ(run("report --out-dir " + b.string()).status, 0);
    EXPECT_EQ(slurp(a / "report.txt"), slurp(b / "report.txt"));
    EXPECT_EQ(slurp(a / "uniq-at-n-7_8.json"), slurp(b / "uniq-at-n-7_8.json"));
}
