#include "temp_dir.hpp"

#include "sttd/commands.hpp"
#include "sttd/error.hpp"
#include "sttd/image_io.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

using namespace sttd;
using sttd::testing::TempDir;
namespace fs = std::filesystem;

namespace {

constexpr const char* kScene = R"(height = 32
width = 32
frames = 7
seed = 4
noise_sigma_8bit = 5
background = gradient
background.level = 0.2
background.gradient_col = 0.2
target = row=12 col=14 vcol=0.5 amplitude=0.5
)";

int run(const std::string& args) {
  const std::string cmd = std::string(STTD_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void make_scene(const TempDir& dir) {
  write_text(dir / "scene.txt", kScene);
  cli::cmd_synth(dir / "scene.txt", dir / "frames");
}

}  // namespace

TEST(Cli, FrameFileNames) {
  EXPECT_EQ(cli::frame_file("target", 7), "target_0007.pgm");
  EXPECT_EQ(cli::frame_file("mask", 12345), "mask_12345.pgm");
}

TEST(Cli, ExitCodeMapping) {
  EXPECT_EQ(cli::exit_code_for(IoError("x")), cli::kIoError);
  EXPECT_EQ(cli::exit_code_for(InvalidArgument("x")), cli::kIoError);
  EXPECT_EQ(cli::exit_code_for(SequenceTooShort("x")), cli::kPrecondition);
  EXPECT_EQ(cli::exit_code_for(Infeasible("x")), cli::kPrecondition);
  EXPECT_EQ(cli::exit_code_for(DimensionMismatch("x")), cli::kPrecondition);
}

TEST(Cli, SynthDetectEvalRocRank) {
  TempDir dir;
  make_scene(dir);
  EXPECT_EQ(list_frames(dir / "frames").size(), 7u);
  ASSERT_TRUE(fs::exists(dir / "frames" / "truth.csv"));

  RunConfig cfg;
  cfg.input = (dir / "frames").string();
  cfg.output = (dir / "out").string();
  cfg.geometry = {8, 3, 3};
  cli::cmd_detect(cfg);
  for (std::size_t f = 0; f < 7; ++f) {
    for (const char* stem : {"target", "background", "mask"}) {
      EXPECT_TRUE(fs::exists(dir / "out" / cli::frame_file(stem, f))) << stem << f;
    }
  }
  const auto run_json = nlohmann::json::parse(read_text(dir / "out" / "run.json"));
  EXPECT_EQ(run_json["frames"], 7);
  EXPECT_EQ(run_json["groups"].size(), 3u);
  EXPECT_FALSE(run_json.contains("seconds"));
  EXPECT_TRUE(fs::exists(dir / "out" / "timing.json"));
  const std::string comps = read_text(dir / "out" / "components.csv");
  EXPECT_EQ(comps.substr(0, comps.find('\n')), "frame,component,row,col,pixels,peak");

  cli::cmd_eval(dir / "out", dir / "frames" / "truth.csv", cfg);
  const auto metrics = nlohmann::json::parse(read_text(dir / "out" / "metrics.json"));
  EXPECT_EQ(metrics["detection"]["pd"], 1.0);
  EXPECT_TRUE(fs::exists(dir / "out" / "metrics.csv"));

  cli::cmd_roc(dir / "out", dir / "frames" / "truth.csv", 11, cfg);
  const std::string roc = read_text(dir / "out" / "roc.csv");
  EXPECT_EQ(std::count(roc.begin(), roc.end(), '\n'), 12);

  cli::cmd_rank(dir / "frames", dir / "rank", 3);
  const std::string mode3 = read_text(dir / "rank" / "rank_mode3.csv");
  EXPECT_EQ(mode3.substr(0, mode3.find('\n')), "index,singular_value");
  EXPECT_EQ(std::count(mode3.begin(), mode3.end(), '\n'), 4);
}

TEST(Cli, SynthSeedOverride) {
  TempDir dir;
  write_text(dir / "scene.txt", std::string(kScene) + "background = cloud\n");
  cli::cmd_synth(dir / "scene.txt", dir / "a", 1);
  cli::cmd_synth(dir / "scene.txt", dir / "b", 2);
  EXPECT_NE(read_text(dir / "a" / "frame_0000.pgm"), read_text(dir / "b" / "frame_0000.pgm"));
}

TEST(CliBinary, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("detect --input " + (dir / "missing").string() + " --output " + (dir / "o").string()), 2);
  EXPECT_EQ(run("detect --input x --output y --H notanumber"), 2);
  EXPECT_EQ(run("frobnicate"), 2);

  // Two frames cannot fill a group of three.
  fs::create_directories(dir / "two");
  for (int f = 0; f < 2; ++f) write_pgm(dir / "two" / ("f" + std::to_string(f) + ".pgm"), quantize(Image::Constant(8, 8, 0.5), 8));
  EXPECT_EQ(run("detect --input " + (dir / "two").string() + " --output " + (dir / "o").string()), 3);

  write_text(dir / "hard.txt", "height = 32\nwidth = 32\nframes = 3\nnoise_sigma = 0.3\nbackground = cloud\n"
                               "target = row=16 col=16 scr=80\n");
  EXPECT_EQ(run("synth --spec " + (dir / "hard.txt").string() + " --output " + (dir / "h").string()), 3);
}

TEST(CliBinary, FlagsOverrideConfigFile) {
  TempDir dir;
  make_scene(dir);
  write_text(dir / "run.cfg", "max-iter = 1\nk = 2\n");
  const std::string base = "detect --input " + (dir / "frames").string() + " --config " + (dir / "run.cfg").string();
  ASSERT_EQ(run(base + " --output " + (dir / "o1").string()), 0);
  ASSERT_EQ(run(base + " --max-iter 7 --output " + (dir / "o2").string()), 0);
  const auto a = nlohmann::json::parse(read_text(dir / "o1" / "run.json"));
  const auto b = nlohmann::json::parse(read_text(dir / "o2" / "run.json"));
  EXPECT_EQ(a["groups"][0]["iterations"], 1);
  EXPECT_EQ(b["config"]["max_iter"], 7);
  EXPECT_EQ(b["config"]["k"], 2.0);
}
