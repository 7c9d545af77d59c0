#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "lcs/image_io.hpp"
#include "lcs/mask.hpp"
#include "support.hpp"

using namespace lcs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lcs_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }
  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  static std::string bytes(const fs::path& f) {
    std::ifstream is(f, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
  }
  static json load(const fs::path& f) { return json::parse(bytes(f)); }
  void write(const std::string& name, const json& j) const { std::ofstream(dir_ / name) << j.dump(); }

  // phantom, one unit coil, a mask, and noiseless k-space at 32x32
  void small_inputs(const std::string& R = "1") {
    ASSERT_EQ(call({"phantom", "--size", "32x32", "--out", p("x.img")}), 0) << err_.str();
    ASSERT_EQ(call({"coils", "--size", "32x32", "--coils", "1", "--uniform", "--out", p("s.maps")}), 0) << err_.str();
    ASSERT_EQ(call({"mask", "--kind", "equispaced-vertical", "--size", "32x32", "--R", R, "--acs", "4", "--out",
                    p("m.mask")}),
              0)
        << err_.str();
    ASSERT_EQ(call({"acquire", "--image", p("x.img"), "--coils", p("s.maps"), "--mask", p("m.mask"), "--sigma", "0",
                    "--out", p("k.ksp")}),
              0)
        << err_.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(Cli, MaskWritesSidecar) {
  ASSERT_EQ(call({"mask", "--kind", "equispaced-vertical", "--size", "64x64", "--R", "3", "--acs", "8", "--seed", "1",
                  "--out", p("m.mask")}),
            0)
      << err_.str();
  const SamplingMask m = read_mask(p("m.mask"));
  EXPECT_EQ(m.height, 64u);
  const json sc = load(p("m.mask.json"));
  EXPECT_NEAR(sc["acceleration"].get<double>(), 3.0, 0.2);
  EXPECT_DOUBLE_EQ(sc["acceleration"].get<double>(), m.acceleration());
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(call({"mask", "--kind", "equispaced-vertical", "--size", "64x64", "--out", p("m.mask")}), 1);
  EXPECT_FALSE(fs::exists(p("m.mask")));
  EXPECT_EQ(call({}), 1);
  EXPECT_EQ(call({"frobnicate"}), 1);
  EXPECT_EQ(call({"--help"}), 0);
  EXPECT_EQ(call({"mask", "--help"}), 0);
  EXPECT_NE(out_.str().find("--kind"), std::string::npos);
  EXPECT_EQ(call({"phantom", "--size", "64by64", "--out", p("x.img")}), 1);
  EXPECT_EQ(call({"phantom", "--size", "8x8", "--out", p("missing/x.img")}), 1);
  EXPECT_EQ(call({"mask", "--kind", "equispaced-vertical", "--size", "16x16", "--R", "8", "--acs", "4", "--out",
                  p("m.mask")}),
            1);
}

TEST_F(Cli, SameSeedSameBytes) {
  for (int i = 0; i < 2; ++i) {
    const std::string tag = std::to_string(i);
    ASSERT_EQ(call({"phantom", "--size", "24x20", "--phase", "0.5", "--seed", "3", "--out", p("x" + tag + ".img")}), 0);
    ASSERT_EQ(call({"coils", "--size", "24x20", "--coils", "4", "--seed", "9", "--out", p("s" + tag + ".maps")}), 0);
    ASSERT_EQ(call({"mask", "--kind", "poisson-2d", "--size", "24x20", "--R", "3", "--acs", "4", "--seed", "5", "--out",
                    p("m" + tag + ".mask")}),
              0);
    ASSERT_EQ(call({"acquire", "--image", p("x" + tag + ".img"), "--coils", p("s" + tag + ".maps"), "--mask",
                    p("m" + tag + ".mask"), "--seed", "2", "--out", p("k" + tag + ".ksp")}),
              0)
        << err_.str();
  }
  for (const char* f : {"x", "s", "m", "k"}) {
    for (const char* ext : {".img", ".maps", ".mask", ".ksp"}) {
      const fs::path a = p(std::string(f) + "0" + ext), b = p(std::string(f) + "1" + ext);
      if (fs::exists(a)) {
        EXPECT_EQ(bytes(a), bytes(b)) << a;
      }
    }
  }
  ASSERT_EQ(call({"mask", "--kind", "poisson-2d", "--size", "24x20", "--R", "3", "--acs", "4", "--seed", "6", "--out",
                  p("m2.mask")}),
            0);
  EXPECT_NE(bytes(p("m0.mask")), bytes(p("m2.mask")));
}

TEST_F(Cli, MvueFullMaskRecoversPhantom) {
  small_inputs();
  ASSERT_EQ(call({"reconstruct", "--method", "mvue", "--kspace", p("k.ksp"), "--coils", p("s.maps"), "--mask",
                  p("m.mask"), "--out", p("r.img")}),
            0)
      << err_.str();
  EXPECT_LE(test::rel_diff(io::read_image(p("r.img")), io::read_image(p("x.img"))), 1e-6);
  EXPECT_TRUE(load(p("r.img.json"))["converged"].get<bool>());
  EXPECT_TRUE(fs::exists(p("r.img.timings.json")));
}

TEST_F(Cli, ReconstructMethods) {
  small_inputs("2");
  for (const char* m : {"zero-fill", "l1-wavelet"}) {
    ASSERT_EQ(call({"reconstruct", "--method", m, "--kspace", p("k.ksp"), "--coils", p("s.maps"), "--mask",
                    p("m.mask"), "--out", p(std::string(m) + ".img")}),
              0)
        << err_.str();
    EXPECT_TRUE(fs::exists(p(std::string(m) + ".img")));
  }
  EXPECT_DOUBLE_EQ(load(p("l1-wavelet.img.json"))["lambda"].get<double>(), 0.01);
  EXPECT_EQ(call({"reconstruct", "--method", "tv", "--kspace", p("k.ksp"), "--coils", p("s.maps"), "--mask",
                  p("m.mask"), "--out", p("t.img")}),
            1);
  ASSERT_EQ(call({"mask", "--kind", "equispaced-vertical", "--size", "16x16", "--R", "1", "--out", p("small.mask")}), 0);
  EXPECT_EQ(call({"reconstruct", "--method", "mvue", "--kspace", p("k.ksp"), "--coils", p("s.maps"), "--mask",
                  p("small.mask"), "--out", p("t.img")}),
            1);
  EXPECT_FALSE(fs::exists(p("t.img")));
}

TEST_F(Cli, LangevinSingleChain) {
  small_inputs("2");
  write("prior.json", {{"type", "gmm"},
                       {"components", json::array({{{"weight", 1.0},
                                                    {"mean", {{"phantom", "shepp-logan"}}},
                                                    {"variance", 0.01}}})}});
  write("schedule.json", {{"beta_begin", 1.0}, {"beta_end", 0.05}, {"levels", 5}, {"steps_per_level", 2},
                          {"eta0", 1e-3}});
  ASSERT_EQ(call({"reconstruct", "--method", "langevin", "--kspace", p("k.ksp"), "--coils", p("s.maps"), "--mask",
                  p("m.mask"), "--prior", p("prior.json"), "--schedule", p("schedule.json"), "--chains", "1",
                  "--sigma", "0.05", "--out", p("l.img")}),
            0)
      << err_.str();
  EXPECT_TRUE(fs::exists(p("l.img")));
  EXPECT_TRUE(fs::exists(p("l.std.img")));
  EXPECT_TRUE(fs::exists(p("l.draw0.img")));
  EXPECT_FALSE(fs::exists(p("l.draw1.img")));
  EXPECT_EQ(io::read_image(p("l.img")), io::read_image(p("l.draw0.img")));
  const json sc = load(p("l.img.json"));
  EXPECT_EQ(sc["chains"].get<int>(), 1);
  // langevin without a prior is a configuration error
  EXPECT_EQ(call({"reconstruct", "--method", "langevin", "--kspace", p("k.ksp"), "--coils", p("s.maps"), "--mask",
                  p("m.mask"), "--out", p("l2.img")}),
            1);
}

TEST_F(Cli, DivergingChainExitsTwo) {
  small_inputs();
  write("prior.json", {{"type", "gmm"},
                       {"components", json::array({{{"weight", 1.0}, {"mean", {{"fill", 0.0}}}, {"variance", 1.0}}})}});
  write("schedule.json", {{"beta_begin", 1.0}, {"beta_end", 0.5}, {"levels", 3}, {"steps_per_level", 50},
                          {"eta0", 50.0}});
  EXPECT_EQ(call({"reconstruct", "--method", "langevin", "--kspace", p("k.ksp"), "--coils", p("s.maps"), "--mask",
                  p("m.mask"), "--prior", p("prior.json"), "--schedule", p("schedule.json"), "--chains", "2",
                  "--sigma", "0.01", "--out", p("l.img")}),
            2);
}

TEST_F(Cli, MetricsIdentical) {
  ASSERT_EQ(call({"phantom", "--size", "32x32", "--out", p("x.img")}), 0);
  ASSERT_EQ(call({"metrics", "--ref", p("x.img"), "--rec", p("x.img")}), 0) << err_.str();
  const json j = json::parse(out_.str());
  EXPECT_EQ(j["ssim"].get<double>(), 1.0);
  EXPECT_TRUE(j["psnr_infinite"].get<bool>());
  EXPECT_DOUBLE_EQ(j["mask_threshold"].get<double>(), 0.05);
}

TEST_F(Cli, MetricsBatch) {
  ASSERT_EQ(call({"phantom", "--size", "32x32", "--out", p("x.img")}), 0);
  fs::create_directories(dir_ / "recs");
  Engine rng(1);
  const ComplexImage x = io::read_image(p("x.img"));
  for (int i = 0; i < 3; ++i) {
    ComplexImage y = x;
    std::normal_distribution<double> g(0.0, 0.02 * (i + 1));
    for (auto& v : y.values()) v += cplx(g(rng), 0.0);
    io::write_image(y, dir_ / "recs" / ("slice" + std::to_string(i) + ".img"));
  }
  ASSERT_EQ(call({"metrics", "--ref", p("x.img"), "--rec", p("recs"), "--csv", p("m.csv"), "--out", p("m.json")}), 0)
      << err_.str();
  const json j = load(p("m.json"));
  ASSERT_EQ(j["images"].size(), 3u);
  EXPECT_EQ(j["psnr"]["n"].get<int>(), 3);
  EXPECT_LT(j["psnr"]["lower"].get<double>(), j["psnr"]["upper"].get<double>());
  std::istringstream csv(bytes(p("m.csv")));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 4);
}

TEST_F(Cli, ValidateTheoryDefaultPasses) {
  const std::string spec = std::string(LCS_SOURCE_DIR) + "/configs/theory_default.json";
  ASSERT_EQ(call({"validate-theory", "--spec", spec, "--out", p("t.json")}), 0) << err_.str();
  const json r = load(p("t.json"));
  EXPECT_TRUE(r["holds"].get<bool>());
}

TEST_F(Cli, ValidateTheoryErrors) {
  const std::string spec = std::string(LCS_SOURCE_DIR) + "/configs/theory_default.json";
  EXPECT_EQ(call({"validate-theory", "--spec", spec, "--trials", "0"}), 1);
  { std::ofstream(p("bad.json")) << "{ \"theorem2\": [ 1, 2"; }
  EXPECT_EQ(call({"validate-theory", "--spec", p("bad.json")}), 1);
  write("empty.json", json::object());
  EXPECT_EQ(call({"validate-theory", "--spec", p("empty.json")}), 1);
  write("wrong.json", {{"theorem2", {{"trials", 10}, {"cases", "none"}}}});
  EXPECT_EQ(call({"validate-theory", "--spec", p("wrong.json")}), 1);
}

TEST_F(Cli, ValidateTheoryFailureExitsThree) {
  // one measurement and a tiny radius cannot meet the recovery target
  write("fail.json", {{"seed", 1},
                      {"theorem1",
                       {{"trials", 200},
                        {"mu", {{"random", {{"atoms", 6}, {"dim", 10}, {"scale", 1.0}}}}},
                        {"nu", {{"same", true}}},
                        {"delta", 0.0},
                        {"eps", 0.05},
                        {"sigma", 0.05},
                        {"m_grid", {1}},
                        {"c_grid", {0.01}},
                        {"slack", 0.05}}}});
  EXPECT_EQ(call({"validate-theory", "--spec", p("fail.json"), "--out", p("f.json")}), 3);
  EXPECT_FALSE(load(p("f.json"))["holds"].get<bool>());
}

TEST_F(Cli, RenderConstantAndZero) {
  io::write_image(ComplexImage(6, 5, cplx{0.3, 0.4}), p("c.img"));
  ASSERT_EQ(call({"render", "--image", p("c.img"), "--out", p("c.pgm")}), 0) << err_.str();
  const std::string pgm = bytes(p("c.pgm"));
  const std::string header = "P5\n5 6\n255\n";
  ASSERT_EQ(pgm.substr(0, header.size()), header);
  const std::string pix = pgm.substr(header.size());
  ASSERT_EQ(pix.size(), 30u);
  for (char c : pix) EXPECT_EQ(c, pix[0]);
  io::write_image(ComplexImage(6, 5), p("z.img"));
  EXPECT_EQ(call({"render", "--image", p("z.img"), "--out", p("z.pgm")}), 2);
  EXPECT_FALSE(fs::exists(p("z.pgm")));
}
