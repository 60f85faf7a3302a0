#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cloiseg/cli.hpp"
#include "cloiseg/cloud_io.hpp"
#include "cloiseg/evaluation.hpp"
#include "cloiseg/report.hpp"
#include "cloiseg/segmentation.hpp"
#include "cloiseg/synth.hpp"

using namespace cloiseg;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cloiseg");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cloiseg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, HelpForEverySubcommand) {
  for (const char* cmd : {"synth", "boundary", "segment", "eval", "sweep", "stats", "subsample"}) {
    const auto r = run({cmd, "--help"});
    EXPECT_EQ(r.code, cli::kExitOk) << cmd;
    EXPECT_NE(r.out.find("--threads"), std::string::npos) << cmd;
  }
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"segment"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"segment", "x.pts", "-e", "-1"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"segment", "x.pts", "-m", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"synth", "--profile", "nope"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"synth"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"eval", "a", "b", "-t", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--mode", "mu", "--grid", "20,10", "x"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--mode", "bias", "x"}).code, cli::kExitUsage);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  EXPECT_EQ(run({"segment", path("missing.pts")}).code, cli::kExitData);
  std::ofstream(path("bad.pts")) << "cloi-pts v1 n=1\n0 0 zero 3 0\n";
  const auto r = run({"segment", path("bad.pts")});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("never.pts")));
  EXPECT_EQ(run({"segment", path("bad.pts"), path("never.pts")}).code, cli::kExitData);
  EXPECT_FALSE(fs::exists(path("never.pts")));
}

TEST_F(CliTest, OutputsMatchTheLibrary) {
  const auto spec = synth::make_benchmark_suite("sparse", 3)[1].spec;
  const auto cloud = synth::generate_scene(spec);
  std::ostringstream expect_cloud;
  write_pts(expect_cloud, cloud);

  const auto synth_run = run({"synth", "--profile", "sparse", "--seed", "3", "--scene", "1"});
  ASSERT_EQ(synth_run.code, 0) << synth_run.err;
  EXPECT_EQ(synth_run.out, expect_cloud.str());
  std::ofstream(path("scene.pts"), std::ios::binary) << synth_run.out;

  SegmentationParams p;
  p.epsilon = 0.03;
  p.mu = 15;
  const auto labeling = segment(cloud, p);
  std::ostringstream expect_seg;
  write_pts(expect_seg, cloud.with_predictions(labeling.assignment), {true, false});
  const auto seg = run({"segment", path("scene.pts"), path("pred.pts"), "-e", "0.03", "-m", "15"});
  ASSERT_EQ(seg.code, 0) << seg.err;
  EXPECT_EQ(slurp(path("pred.pts")), expect_seg.str());

  std::ostringstream expect_eval;
  write_eval_csv(expect_eval, score(labeling, ground_truth_labeling(cloud)));
  const auto ev = run({"eval", path("pred.pts"), path("scene.pts")});
  ASSERT_EQ(ev.code, 0) << ev.err;
  EXPECT_EQ(ev.out, expect_eval.str());
}

TEST_F(CliTest, SpecRoundTripThroughFiles) {
  ASSERT_EQ(run({"synth", "--profile", "close", "--out", path("a.pts"), "--emit-spec",
                 path("a.json"), "--manifest", path("m.json")})
                .code,
            0);
  ASSERT_EQ(run({"synth", "--spec", path("a.json"), "--out", path("b.pts")}).code, 0);
  EXPECT_EQ(slurp(path("a.pts")), slurp(path("b.pts")));
  EXPECT_NE(slurp(path("m.json")).find("expect_merging"), std::string::npos);
}

TEST_F(CliTest, ThreadCountDoesNotChangeOutput) {
  ASSERT_EQ(run({"synth", "--profile", "refinery-like", "--out", path("s.pts")}).code, 0);
  std::string first;
  for (const char* threads : {"1", "2", "5"}) {
    const auto r = run({"segment", path("s.pts"), "--with-boundary", "--threads", threads});
    ASSERT_EQ(r.code, 0);
    if (first.empty()) first = r.out;
    EXPECT_EQ(r.out, first) << threads;
  }
  setenv("CLOI_SEG_THREADS", "3", 1);
  EXPECT_EQ(run({"segment", path("s.pts"), "--with-boundary"}).out, first);
  setenv("CLOI_SEG_THREADS", "many", 1);
  EXPECT_EQ(run({"segment", path("s.pts")}).code, cli::kExitUsage);
  unsetenv("CLOI_SEG_THREADS");
}

TEST_F(CliTest, OtherSubcommandsProduceCsvAndClouds) {
  ASSERT_EQ(run({"synth", "--profile", "gapped", "--out", path("g.pts")}).code, 0);

  const auto stats = run({"stats", path("g.pts")});
  ASSERT_EQ(stats.code, 0);
  EXPECT_EQ(stats.out.rfind("class,instances,points\n", 0), 0u);
  EXPECT_NE(stats.out.find("\ntotal,10,"), std::string::npos);

  const auto bstats = run({"stats", path("g.pts"), "-b", "0.04"});
  EXPECT_EQ(bstats.out.rfind("radius,boundary,interior,ratio\n0.04,", 0), 0u);

  const auto radius = run({"sweep", "--mode", "radius", path("g.pts")});
  ASSERT_EQ(radius.code, 0) << radius.err;
  EXPECT_NE(radius.err.find("selected epsilon"), std::string::npos);
  EXPECT_EQ(std::count(radius.out.begin(), radius.out.end(), '\n'), 8);

  const auto mu = run({"sweep", "--mode", "mu", "--grid", "10,20", path("g.pts")});
  ASSERT_EQ(mu.code, 0) << mu.err;
  EXPECT_EQ(std::count(mu.out.begin(), mu.out.end(), '\n'), 3);

  const auto eps = run({"sweep", "--mode", "epsilon", path("g.pts"), "-b", "0.04"});
  ASSERT_EQ(eps.code, 0) << eps.err;

  const auto bias = run({"sweep", "--mode", "bias", path("g.pts"), path("g.pts")});
  ASSERT_EQ(bias.code, 0) << bias.err;
  EXPECT_NE(bias.out.find("\nstd,0,0\n"), std::string::npos) << bias.out;

  const auto b = run({"boundary", path("g.pts"), "-r", "0.05", "--gt-instances"});
  ASSERT_EQ(b.code, 0);
  const auto second_line = b.out.substr(b.out.find('\n') + 1);
  EXPECT_EQ(std::count(second_line.begin(), second_line.begin() + second_line.find('\n'), ' '), 6);

  const auto sub = run({"subsample", path("g.pts"), "-k", "500", "--seed", "9"});
  ASSERT_EQ(sub.code, 0);
  std::istringstream in(sub.out);
  EXPECT_EQ(read_pts(in).size(), 500u);
  EXPECT_EQ(run({"subsample", path("g.pts"), "-k", "100000000"}).code, cli::kExitData);
}
