#include <gtest/gtest.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "phav/csv_io.hpp"
#include "phav/fock_numerics.hpp"

namespace phav {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override { dir = testing::scratch_dir("cli"); }
    void TearDown() override { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    fs::path dir;
};

TEST_F(CliTest, SampleThenReconstructBrightState) {
    // At 1e5 pulses the TV to Poisson(13.8) scatters around 0.03 from seed to seed.
    const auto q = path("q.csv");
    const auto p = path("p.csv");
    ASSERT_EQ(call({"sample", "--alpha-sq", "13.8", "--n", "100000", "--seed", "7", "--out", q}).code, 0);
    const auto r = call({"reconstruct", "--in", q, "--bin", "0.1", "--nmax", "150", "--iters", "100", "--out", p});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(p + ".meta.json"));
    EXPECT_LE(total_variation(read_fock(p), poisson_distribution(13.8, 150)), 0.03);
}

TEST_F(CliTest, MetadataRecordsSeedAndRng) {
    const auto q = path("q.csv");
    ASSERT_EQ(call({"sample", "--alpha-sq", "2.9", "--n", "1000", "--seed", "5", "--out", q}).code, 0);
    const auto meta = nlohmann::json::parse(std::ifstream(q + ".meta.json"));
    EXPECT_EQ(meta.at("seed").get<std::uint64_t>(), 5u);
    EXPECT_TRUE(meta.contains("rng"));
    EXPECT_TRUE(meta.contains("version"));

    // No seed given: one is generated and announced.
    const auto r = call({"sample", "--alpha-sq", "2.9", "--n", "1000", "--out", path("q2.csv")});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("seed"), std::string::npos);
}

TEST_F(CliTest, MissingInputIsValidationError) {
    const auto out = path("p.csv");
    const auto r = call({"reconstruct", "--in", path("missing.csv"), "--out", out});
    EXPECT_EQ(r.code, cli::kInvalidInput);
    EXPECT_NE(r.err.find("missing.csv"), std::string::npos);
    EXPECT_FALSE(fs::exists(out));
    EXPECT_FALSE(fs::exists(out + ".meta.json"));
    const auto bare = call({"reconstruct", "--in", path("missing.csv")});
    EXPECT_EQ(bare.code, cli::kInvalidInput) << bare.err;
    EXPECT_TRUE(fs::is_empty(dir));
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(call({}).code, cli::kUsage);
    EXPECT_EQ(call({"frobnicate"}).code, cli::kUsage);
    EXPECT_EQ(call({"sample", "--alpha-sq", "abc", "--out", path("x.csv")}).code, cli::kUsage);
    EXPECT_EQ(call({"sample", "--alpha-sq", "-1", "--out", path("x.csv")}).code, cli::kUsage);
}

TEST_F(CliTest, BadDataIsExitTwo) {
    std::ofstream(path("h.csv")) << "bin_center,density\n0.05,-1\n0.15,3\n";
    const auto r = call({"reconstruct", "--hist", path("h.csv"), "--out", path("p.csv")});
    EXPECT_EQ(r.code, cli::kInvalidInput);
    EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, HelpDocumentsUnits) {
    const auto top = call({"--help"});
    EXPECT_EQ(top.code, 0);
    for (const char* unit : {"quadrature units", "photons/pulse", "ps", "THz", "meV"})
        EXPECT_NE(top.out.find(unit), std::string::npos) << unit;
    for (const char* sub : {"sample", "reconstruct", "stats", "raman-trace", "fft", "fit-noise", "phase-compare", "wigner",
                            "sweep", "pipeline"}) {
        const auto h = call({sub, "--help"});
        EXPECT_EQ(h.code, 0) << sub;
        EXPECT_NE(h.out.find("Units"), std::string::npos) << sub;
    }
}

TEST_F(CliTest, StatsOccupationAndTemperature) {
    const auto r = call({"stats", "--energy-mev", "16.5", "--temperature-k", "300"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at("occupation").get<double>(), 1.12, 0.01);
    EXPECT_NE(r.out.find("0.7"), std::string::npos);
    const auto t = nlohmann::json::parse(call({"stats", "--energy-mev", "16.5", "--occupation", "4"}).out);
    EXPECT_NEAR(t.at("effective_temperature_k").get<double>(), 858.0, 1.0);
}

TEST_F(CliTest, RamanTraceFftAndSweep) {
    const auto tr = path("t.csv");
    ASSERT_EQ(call({"raman-trace", "--state", "squeezed", "--zeta", "-0.2", "--step", "0.01", "--out", tr}).code, 0);
    const auto f = call({"fft", "--in", tr, "--column", "excess", "--out", path("s.csv")});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_NEAR(nlohmann::json::parse(f.out).at("dominant_frequency_thz").get<double>(), 8.0, 0.2);

    const auto sw = call({"sweep", "--axis", "phonon_amplitude", "--grid", "2,3,4,5,6", "--state", "thermal", "--n-th", "1",
                          "--out", path("sw.csv")});
    ASSERT_EQ(sw.code, 0) << sw.err;
    EXPECT_EQ(read_csv(path("sw.csv"), schema::kSweep).rows(), 5u);
    EXPECT_EQ(call({"sweep", "--axis", "phonon_amplitude", "--grid", "3,2", "--out", path("sw2.csv")}).code, cli::kUsage);
}

TEST_F(CliTest, WignerFitNoiseAndPhaseCompare) {
    ASSERT_EQ(call({"wigner", "--min", "-3", "--max", "3", "--grid-step", "0.5", "--out", path("w.csv")}).code, 0);
    EXPECT_EQ(read_csv(path("w.csv"), schema::kWigner).rows(), 13u * 13u);

    std::ofstream(path("n.csv")) << "mean,variance\n1,1.603\n2,2.712\n4,4.948\n8,9.492\n";
    const auto fit = call({"fit-noise", "--in", path("n.csv")});
    ASSERT_EQ(fit.code, 0) << fit.err;
    EXPECT_NEAR(nlohmann::json::parse(fit.out).at("p2").get<double>(), 0.003, 1e-9);
    std::ofstream(path("n2.csv")) << "mean,variance\n1,1\n1,1.1\n";
    EXPECT_EQ(call({"fit-noise", "--in", path("n2.csv")}).code, cli::kInvalidInput);

    const auto pc = call({"phase-compare", "--strategy", "finite", "--k", "2", "--n", "20000", "--seed", "3"});
    ASSERT_EQ(pc.code, 0) << pc.err;
    const auto j = nlohmann::json::parse(pc.out);
    EXPECT_GT(j.at("ks_distance").get<double>(), j.at("ks_null_scale").get<double>());
}

TEST_F(CliTest, PipelineConfigGivesFourTerahertz) {
    const auto out = path("run");
    const auto r = call({"pipeline", "--config", std::string(PHAV_SOURCE_DIR) + "/configs/fig4d.toml", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* f : {"trace.csv", "reference_trace.csv", "report.json", "fft.csv", "meta.json", "hist_40.csv", "fock_40.csv"})
        EXPECT_TRUE(fs::exists(fs::path(out) / f)) << f;
    const auto spec = read_csv(fs::path(out) / "fft.csv", schema::kSpectrum);
    const auto& freq = spec.columns[0];
    const auto& mag = spec.columns[1];
    std::size_t best = 1;
    for (std::size_t i = 1; i < mag.size(); ++i)
        if (mag[i] > mag[best]) best = i;
    EXPECT_NEAR(freq[best], 4.0, 0.2);
}

}  // namespace
}  // namespace phav
