#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "pbc/csv.hpp"
#include "pbc/evaluation.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string output;  // stdout and stderr
};

Run pbc_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + PBC_CLI_PATH + std::string(" ") + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string bench(const std::string& name) { return std::string(PBC_BENCHMARK_DIR) + "/" + name + ".ini"; }

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("pbc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string at(const std::string& f) const { return (dir / f).string(); }

    // Two horizontal segments five units apart, labeled.
    std::string two_segments_csv() const {
        std::ostringstream s;
        s << "x1,x2,label\n";
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 30; ++i) s << 0.1 * i << ',' << 5 * k << ',' << k << '\n';
        spit(dir / "segments.csv", s.str());
        return at("segments.csv");
    }

    fs::path dir;
};

}  // namespace

TEST_F(Cli, GenerateShippedSpec) {
    const auto r = pbc_cli("generate --spec " + bench("two_spheres") + " --out " + at("a.csv") + " --n-points 300");
    ASSERT_EQ(r.code, 0) << r.output;
    std::ifstream in(at("a.csv"));
    const auto c = pbc::csv::read_points(in);
    EXPECT_EQ(c.size(), 300u);
    EXPECT_EQ(c.dim(), 3u);
    EXPECT_TRUE(c.has_labels());
    EXPECT_TRUE(c.has_ambiguous());
    EXPECT_EQ(slurp(at("a.csv")).substr(0, 25), "x1,x2,x3,label,ambiguous\n");
}

TEST_F(Cli, GenerateIsByteDeterministic) {
    for (const auto* f : {"a.csv", "b.csv"})
        ASSERT_EQ(pbc_cli("generate --spec " + bench("rose_and_circle") + " --out " + at(f) + " --noise 0.01").code, 0);
    EXPECT_EQ(slurp(at("a.csv")), slurp(at("b.csv")));
    ASSERT_EQ(pbc_cli("generate --spec " + bench("rose_and_circle") + " --out " + at("c.csv") + " --seed 5").code, 0);
    EXPECT_NE(slurp(at("a.csv")), slurp(at("c.csv")));
}

TEST_F(Cli, GenerateEchoReproduces) {
    ASSERT_EQ(pbc_cli("generate --spec " + bench("five_segments") + " --out " + at("a.csv") + " --seed 9 --echo " + at("e.ini")).code, 0);
    ASSERT_EQ(pbc_cli("generate --spec " + at("e.ini") + " --out " + at("b.csv")).code, 0);
    EXPECT_EQ(slurp(at("a.csv")), slurp(at("b.csv")));
}

TEST_F(Cli, WeightsMustSumToOne) {
    spit(dir / "bad.ini", "[dataset]\nname = two_spheres\nweights = 0.5, 0.6\n");
    const auto r = pbc_cli("generate --spec " + at("bad.ini") + " --out " + at("x.csv"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find("weights"), std::string::npos) << r.output;
}

TEST_F(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(pbc_cli("").code, 2);
    EXPECT_EQ(pbc_cli("generate").code, 2);
    EXPECT_EQ(pbc_cli("frobnicate").code, 2);
    EXPECT_EQ(pbc_cli("--help").code, 0);
}

TEST_F(Cli, ClusterTwoSegments) {
    const auto in = two_segments_csv();
    const auto r = pbc_cli("cluster --in " + in + " --out-dir " + at("out") + " --q 5 --k 2 --m 4 --angle 80 --svg");
    ASSERT_EQ(r.code, 0) << r.output;
    std::ifstream lf(at("out/labels.csv"));
    const auto labels = pbc::csv::read_labels(lf);
    std::ifstream pf(in);
    const auto truth = pbc::csv::read_points(pf);
    EXPECT_DOUBLE_EQ(pbc::misclustering_rate(labels, truth.labels).accuracy, 1.0);
    const auto meta = nlohmann::json::parse(slurp(at("out/metadata.json")));
    EXPECT_DOUBLE_EQ(meta["accuracy"].get<double>(), 1.0);
    EXPECT_EQ(meta["config"]["q"], "5");
    EXPECT_EQ(meta["landmarks"].size(), 4u);
    EXPECT_TRUE(fs::exists(at("out/clusters.svg")));
    EXPECT_TRUE(fs::exists(at("out/features.csv")));
}

TEST_F(Cli, ClusterEchoRoundTrip) {
    const auto in = two_segments_csv();
    ASSERT_EQ(pbc_cli("cluster --in " + in + " --out-dir " + at("a") + " --q 4 --k 2 --m 5 --curvature 2.5 --seed 77").code, 0);
    ASSERT_EQ(pbc_cli("cluster --in " + in + " --out-dir " + at("b") + " --config " + at("a/config.ini")).code, 0);
    EXPECT_EQ(slurp(at("a/config.ini")), slurp(at("b/config.ini")));
    EXPECT_EQ(slurp(at("a/labels.csv")), slurp(at("b/labels.csv")));
    EXPECT_EQ(slurp(at("a/features.csv")), slurp(at("b/features.csv")));
}

TEST_F(Cli, SeedFromEnvironmentAndFlagPrecedence) {
    const auto in = two_segments_csv();
    ASSERT_EQ(pbc_cli("cluster --in " + in + " --out-dir " + at("a") + " --q 4 --k 2 --m 3", "MANIFOLD_PBC_SEED=31").code, 0);
    EXPECT_NE(slurp(at("a/config.ini")).find("seed = 31"), std::string::npos);
    ASSERT_EQ(pbc_cli("cluster --in " + in + " --out-dir " + at("b") + " --q 4 --k 2 --m 3 --seed 8", "MANIFOLD_PBC_SEED=31").code, 0);
    EXPECT_NE(slurp(at("b/config.ini")).find("seed = 8"), std::string::npos);
}

TEST_F(Cli, ClusterThreePlanesBenchmark) {
    ASSERT_EQ(pbc_cli("generate --spec " + bench("three_planes") + " --out " + at("tp.csv")).code, 0);
    const auto r = pbc_cli("cluster --in " + at("tp.csv") + " --out-dir " + at("out") + " --config " + bench("three_planes"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto meta = nlohmann::json::parse(slurp(at("out/metadata.json")));
    EXPECT_GE(meta["accuracy"].get<double>(), 0.95);
    EXPECT_GT(meta["n_excluded_ambiguous"].get<int>(), 0);
}

TEST_F(Cli, MalformedCsvReportsLine) {
    spit(dir / "bad.csv", "x1,x2\n0,0\n1,1\n2,oops\n");
    const auto r = pbc_cli("cluster --in " + at("bad.csv") + " --out-dir " + at("out") + " --q 1 --k 1 --m 1");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.output.find(":4"), std::string::npos) << r.output;
}

TEST_F(Cli, RuntimeFailureIsStageTagged) {
    spit(dir / "dup.csv", "x1\n0\n1\n1\n2\n");
    const auto r = pbc_cli("cluster --in " + at("dup.csv") + " --out-dir " + at("out") + " --q 1 --k 1 --m 1");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.output.find("[build_graph]"), std::string::npos) << r.output;
    EXPECT_EQ(pbc_cli("cluster --in " + at("dup.csv") + " --out-dir " + at("out") + " --q 1 --k 1 --m 1 --dedupe").code, 0);
}

TEST_F(Cli, Pca) {
    std::ostringstream s;
    s << "x1,x2,x3\n";
    for (int i = 0; i < 20; ++i) s << i << ',' << 2 * i << ',' << -i << '\n';
    spit(dir / "line.csv", s.str());
    const auto r = pbc_cli("pca --in " + at("line.csv") + " --out " + at("p.csv") + " --components 1 --svg " + at("p.svg"));
    ASSERT_EQ(r.code, 0) << r.output;
    std::ifstream in(at("p.csv"));
    const auto p = pbc::csv::read_points(in);
    EXPECT_EQ(p.dim(), 1u);
    EXPECT_EQ(p.size(), 20u);
    EXPECT_NEAR(std::abs(p[19][0] - p[0][0]), 19 * std::sqrt(6.0), 1e-9);
    EXPECT_EQ(pbc_cli("pca --in " + at("line.csv") + " --out " + at("q.csv") + " --components 4").code, 2);
}

TEST_F(Cli, TuneStartsAtFiftyDegrees) {
    const auto in = two_segments_csv();
    const auto r = pbc_cli("tune --in " + in + " --out " + at("t.csv") + " --q 4 --k 2 --m 4 --fraction 0.2 --echo " + at("t.ini"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto trace = slurp(at("t.csv"));
    EXPECT_EQ(trace.substr(0, trace.find('\n', trace.find('\n') + 1)), "step,theta_deg,error\n0,50,0");
    EXPECT_NE(slurp(at("t.ini")).find("[cluster]"), std::string::npos);
}

TEST_F(Cli, SweepSingleLevel) {
    spit(dir / "s.ini", "[dataset]\nname = two_spirals\nn_points = 300\n[cluster]\nq = 10\nk = 2\nm = 10\nangle = 30\n");
    const auto r = pbc_cli("sweep --spec " + at("s.ini") + " --out " + at("s.csv") + " --levels 0 --repeats 2");
    ASSERT_EQ(r.code, 0) << r.output;
    const auto text = slurp(at("s.csv"));
    std::istringstream in(text);
    std::string header, row, extra;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "tau,mean_accuracy,std,n_runs");
    EXPECT_EQ(row.substr(0, 2), "0,");
    EXPECT_FALSE(std::getline(in, extra) && !extra.empty());
}

TEST_F(Cli, HistBucketsSumToReachable) {
    const auto in = two_segments_csv();
    const auto r = pbc_cli("hist --in " + in + " --out " + at("h.csv") + " --q 3 --buckets 9 --landmark 4");
    ASSERT_EQ(r.code, 0) << r.output;
    std::istringstream h(slurp(at("h.csv")));
    std::string line;
    std::getline(h, line);
    EXPECT_EQ(line, "bucket_lo,bucket_hi,count,component");
    long long total = 0;
    int rows = 0;
    while (std::getline(h, line)) {
        const auto f = pbc::csv::split_record(line, "h");
        total += std::stoll(f[2]);
        ++rows;
    }
    EXPECT_EQ(rows, 18);  // two label groups
    EXPECT_EQ(total, 30);  // the other segment is unreachable
    EXPECT_NE(r.output.find("30 vertices reachable"), std::string::npos) << r.output;
}

TEST_F(Cli, Eval) {
    const auto in = two_segments_csv();
    std::ostringstream s;
    s << "point_index,label\n";
    for (int i = 0; i < 60; ++i) s << i << ',' << (i < 30 ? 1 : 0) << '\n';
    spit(dir / "l.csv", s.str());
    const auto r = pbc_cli("eval --labels " + at("l.csv") + " --truth " + in + " --out " + at("e.json"));
    ASSERT_EQ(r.code, 0) << r.output;
    const auto j = nlohmann::json::parse(slurp(at("e.json")));
    EXPECT_DOUBLE_EQ(j["accuracy"].get<double>(), 1.0);
}
