#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "ilcconv/cli.hpp"
#include "ilcconv/error.hpp"
#include "ilcconv/io.hpp"

using namespace ilcconv;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ilcconv::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ilcconv_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  }
  fs::path dir_;
};

}  // namespace

TEST(Io, NumberFormatting) {
  EXPECT_EQ(io::format_number(0.5), "0.5");
  EXPECT_EQ(io::format_number(0.1), "0.1");
  EXPECT_EQ(io::format_number(-2.0), "-2");
  for (double x : {1.0 / 3.0, 1e-300, 123456.789, -0.0}) EXPECT_EQ(io::parse_number(io::format_number(x)), x);
  EXPECT_THROW((void)io::parse_number("1.2.3"), InvalidArgument);
}

TEST(Io, CsvRoundTrip) {
  std::vector<PointReport> reps(2);
  reps[0].point = {0.25, -0.125};
  reps[0].sup_t = 1.0 / 3.0;
  reps[0].mc_z = Tri::True;
  reps[0].ac_iter = Tri::Marginal;
  reps[0].flags = {"slow-converging", "transient"};
  reps[1].point = {0.75, 0.5};
  reps[1].rho = 0.9;
  reps[1].mc_sigma = Tri::False;
  reps[1].flags = {"error:lifted:bad, worse"};
  std::stringstream ss;
  io::write_sweep_csv(ss, reps);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), io::kSweepHeader);
  const auto back = io::read_sweep_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].sup_t, reps[0].sup_t);
  EXPECT_FALSE(back[0].sigma_sq);
  EXPECT_EQ(back[0].ac_iter, Tri::Marginal);
  EXPECT_EQ(back[0].flags, reps[0].flags);
  EXPECT_EQ(back[1].rho, 0.9);
  EXPECT_EQ(back[1].mc_sigma, Tri::False);
  EXPECT_EQ(back[1].flags[0], "error:lifted:bad  worse");
  std::stringstream again;
  io::write_sweep_csv(again, back);
  std::stringstream first;
  io::write_sweep_csv(first, io::read_sweep_csv(again));
  EXPECT_EQ(again.str(), first.str());
}

TEST(Io, CsvRejectsBadInput) {
  std::stringstream wrong("A,B\n");
  EXPECT_THROW((void)io::read_sweep_csv(wrong), InvalidArgument);
  std::stringstream short_row(std::string(io::kSweepHeader) + "\n0.1,0.2,\n");
  EXPECT_THROW((void)io::read_sweep_csv(short_row), InvalidArgument);
  std::stringstream bad_tri(std::string(io::kSweepHeader) + "\n0.1,0.2,,,,x,,,,,,,\n");
  EXPECT_THROW((void)io::read_sweep_csv(bad_tri), InvalidArgument);
}

TEST(Io, HeatmapLayoutAndPalette) {
  std::vector<PointReport> reps;
  for (int ia = 0; ia < 3; ++ia)
    for (int ib = 0; ib < 2; ++ib) {
      PointReport p;
      p.point = {0.2 + 0.2 * ia, -0.5 + ib};
      p.mc_z = ia == 0 ? Tri::True : (ia == 1 ? Tri::Marginal : Tri::False);
      p.sup_t = ia * 0.5;
      reps.push_back(p);
    }
  const io::Image img = io::render_heatmap(reps, io::HeatField::McZ, 2);
  EXPECT_EQ(img.width, 6);
  EXPECT_EQ(img.height, 4);
  auto px = [&](int x, int y) {
    const auto at = img.rgb.begin() + static_cast<std::ptrdiff_t>((static_cast<std::size_t>(y) * img.width + x) * 3);
    return std::vector<std::uint8_t>(at, at + 3);
  };
  EXPECT_NE(px(0, 0), px(2, 0));
  EXPECT_NE(px(2, 0), px(4, 0));
  const io::Image gray = io::render_heatmap(reps, io::HeatField::SupT, 1);
  EXPECT_EQ(gray.rgb[0], 0);
  EXPECT_EQ(gray.rgb[3 * 2], 255);
  std::ostringstream ppm;
  io::write_ppm(ppm, img);
  EXPECT_EQ(ppm.str().substr(0, 11), "P6\n6 4\n255\n");
  EXPECT_EQ(ppm.str().size(), 11u + 6 * 4 * 3);
  EXPECT_NE(io::heatmap_legend(reps, io::HeatField::McZ).find("marginal band"), std::string::npos);
  const auto fields = io::populated_fields(reps);
  EXPECT_EQ(fields.size(), 2u);
}

TEST(Io, Sha256KnownVector) {
  EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, PointByAbAndByPlant) {
  const CliResult a = invoke({"point", "--A", "0.5", "--B", "0", "--learning", "l1", "--v", "1"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("sup|T| = 0.5 "), std::string::npos);
  EXPECT_NE(a.out.find("sigma_max^2 = 0.25 "), std::string::npos);
  EXPECT_NE(a.out.find("rho = 0.5 "), std::string::npos);
  EXPECT_NE(a.out.find("mc yes, ac yes"), std::string::npos);
  const CliResult b = invoke({"point", "--U", "0.6931471805599453", "--Kp", "1"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("sup|T| = 0.5 "), std::string::npos);
}

TEST(Cli, PointSymmetricThreeTermFailsEverything) {
  const CliResult r = invoke({"point", "--A", "0.5", "--B", "0", "--learning", "l3sym", "--v", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mc_z: no"), std::string::npos);
  EXPECT_NE(r.out.find("mc_sigma: no"), std::string::npos);
  EXPECT_NE(r.out.find("mc no"), std::string::npos);
  EXPECT_NE(r.out.find("analytic mc: no"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({"point", "--A", "0.5", "--B", "0", "--U", "1", "--Kp", "1"}).code, 2);
  EXPECT_EQ(invoke({"point", "--A", "0.5"}).code, 2);
  EXPECT_EQ(invoke({"point", "--A", "0.5", "--B", "0", "--learning", "bogus"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--methods", "", "--out", "x.csv"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--grid", "0:1:5,-0.5:0.5:5", "--out", "x.csv"}).code, 2);
  EXPECT_EQ(invoke({"plant", "--U", "0", "--Kp", "1"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  const CliResult r = invoke({"boundaries", "--learning", "l3sym"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no closed-form region"), std::string::npos);
}

TEST(Cli, PlantClassification) {
  const CliResult osc = invoke({"plant", "--U", "0.6931", "--Kp", "2", "--steps", "40"});
  ASSERT_EQ(osc.code, 0);
  EXPECT_NE(osc.out.find("stable, oscillatory"), std::string::npos);
  EXPECT_NE(osc.out.find("damped-oscillation"), std::string::npos);
  EXPECT_NE(invoke({"plant", "--U", "0.6931", "--Kp", "4"}).out.find(": unstable"), std::string::npos);
  EXPECT_NE(invoke({"plant", "--U", "0.6931", "--Kp", "0.5"}).out.find("stable, monotone"), std::string::npos);
}

TEST_F(TempDir, SweepWritesCsvImagesAndManifestLast) {
  const CliResult r = invoke({"sweep", "--learning", "l1", "--grid", "0.1:0.9:5,-0.8:0.8:5", "--N", "16", "--iters", "50",
                     "--out", path("s.csv"), "--image", path("img")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto man = nlohmann::json::parse(slurp(path("s.csv.manifest.json")));
  EXPECT_EQ(man["command"], "sweep");
  EXPECT_EQ(man["seed"], 20161117u);
  EXPECT_EQ(man["config"]["grid"], "0.1:0.9:5,-0.8:0.8:5");
  bool saw_csv = false;
  for (const auto& o : man["outputs"]) {
    EXPECT_EQ(o["sha256"], io::sha256_file(o["path"].get<std::string>()));
    if (o["path"] == path("s.csv")) saw_csv = true;
  }
  EXPECT_TRUE(saw_csv);
  EXPECT_TRUE(fs::exists(path("img_mc_z.ppm")));
  EXPECT_TRUE(fs::exists(path("img_sup_T.txt")));
}

TEST_F(TempDir, ConfigFileAndFlagOverride) {
  {
    std::ofstream f(path("c.json"));
    f << R"({"learning": "l2back", "v": 2, "grid": "0.1:0.9:3,-0.5:0.5:3", "methods": "zsup", "out": "ignored.csv"})";
  }
  const CliResult r = invoke({"sweep", "--config", path("c.json"), "--out", path("s.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto man = nlohmann::json::parse(slurp(path("s.csv.manifest.json")));
  EXPECT_EQ(man["config"]["learning"], "l2back");
  EXPECT_EQ(man["config"]["v"], 2.0);
  EXPECT_EQ(man["config"]["out"], path("s.csv"));
  EXPECT_FALSE(fs::exists("ignored.csv"));
}

TEST_F(TempDir, ReproducibleChecksumsAcrossWorkers) {
  const std::vector<std::string> base{"sweep", "--learning", "l2ahead", "--grid", "0.1:0.9:6,-0.8:0.8:6",
                                      "--N", "24", "--iters", "100", "--image"};
  auto a = base;
  a.insert(a.end(), {path("a"), "--out", path("a.csv"), "--workers", "1"});
  auto b = base;
  b.insert(b.end(), {path("b"), "--out", path("b.csv"), "--workers", "3"});
  ASSERT_EQ(invoke(a).code, 0);
  ASSERT_EQ(invoke(b).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a_rho.ppm")), slurp(path("b_rho.ppm")));
}

TEST_F(TempDir, BoundariesFromSweepCsv) {
  ASSERT_EQ(invoke({"sweep", "--learning", "l2ahead", "--grid", "0.3:0.9:7,0.2:0.95:16", "--methods", "rho,zsup",
                 "--N", "64", "--out", path("s.csv")})
                .code,
            0);
  const CliResult r = invoke({"boundaries", "--learning", "l2ahead", "--in", path("s.csv"), "--out", path("b.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(path("b.csv"));
  EXPECT_EQ(text.substr(0, text.find('\n')), "source,label,segment,A,B");
  EXPECT_NE(text.find("analytic,ac_upper,0,"), std::string::npos);
  EXPECT_NE(text.find("rho,level1,0,"), std::string::npos);
}

TEST(Cli, BoundariesAnalyticOnly) {
  const CliResult r = invoke({"boundaries", "--learning", "l1", "--grid", "0.25:0.75:3,-0.5:0.5:3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("analytic,mc_upper,0,0.25,0.875"), std::string::npos);
  EXPECT_NE(r.out.find("analytic,mc_lower,0,0.75,-0.625"), std::string::npos);
}

TEST(Cli, CompareRunsAudit) {
  const CliResult r = invoke({"compare", "--learning", "l3back", "--grid", "0.05:0.95:9,-0.9:0.9:9", "--N", "24"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("printed-bounds audit: l3back"), std::string::npos);
}
