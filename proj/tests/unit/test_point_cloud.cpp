#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cloiseg/cloud_io.hpp"
#include "cloiseg/point_cloud.hpp"
#include "cloiseg/synth.hpp"

using namespace cloiseg;

namespace {

LabeledPointCloud parse(const std::string& text) {
  std::istringstream in(text);
  return read_pts(in);
}

std::string write(const LabeledPointCloud& c, PtsColumns cols = {}) {
  std::ostringstream out;
  write_pts(out, c, cols);
  return out.str();
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cloiseg_test_" + name);
}

}  // namespace

TEST(ClassLabels, CodesAndNames) {
  EXPECT_EQ(class_code(ClassLabel::other), 0);
  EXPECT_EQ(class_code(ClassLabel::angle), 1);
  EXPECT_EQ(class_code(ClassLabel::channel), 2);
  EXPECT_EQ(class_code(ClassLabel::cylinder), 3);
  EXPECT_EQ(class_code(ClassLabel::elbow), 4);
  EXPECT_EQ(class_code(ClassLabel::ibeam), 5);
  EXPECT_EQ(class_code(ClassLabel::flange), 6);
  EXPECT_EQ(class_code(ClassLabel::valve), 7);
  for (auto c : kAllClasses) EXPECT_EQ(class_from_name(class_name(c)), c);
  EXPECT_FALSE(class_from_code(8).has_value());
  EXPECT_FALSE(class_from_code(-1).has_value());
}

TEST(PointCloud, CanonicalizesIdsByFirstAppearance) {
  const auto c = parse("cloi-pts v1 n=4\n0 0 0 3 9\n1 0 0 3 4\n2 0 0 3 9\n3 0 0 5 2\n");
  EXPECT_EQ(c.gt_instances(), (std::vector<InstanceId>{0, 1, 0, 2}));
}

TEST(PointCloud, RejectsMixedClassInstance) {
  std::vector<PointRecord> recs{{{0, 0, 0}, ClassLabel::cylinder, 0, false, std::nullopt},
                                {{1, 0, 0}, ClassLabel::elbow, 0, false, std::nullopt}};
  EXPECT_THROW(LabeledPointCloud{recs}, std::invalid_argument);
}

TEST(PointCloud, RejectsPartialIds) {
  std::vector<PointRecord> recs{{{0, 0, 0}, ClassLabel::cylinder, 0, false, std::nullopt},
                                {{1, 0, 0}, ClassLabel::cylinder, std::nullopt, false, std::nullopt}};
  EXPECT_THROW(LabeledPointCloud{recs}, std::invalid_argument);
}

TEST(PointCloud, WithPredictionsRoundTripsNoise) {
  const auto c = parse("cloi-pts v1 n=3\n0 0 0 3 0\n1 0 0 3 0\n2 0 0 3 0\n");
  const std::vector<InstanceId> pred{kNoise, 5, 5};
  const auto p = c.with_predictions(pred);
  EXPECT_EQ(p.pred_instances(), (std::vector<InstanceId>{kNoise, 0, 0}));
  const auto text = write(p, {true, false});
  EXPECT_NE(text.find("0 0 0 3 0 -1\n"), std::string::npos);
  EXPECT_EQ(parse(text), p);
}

TEST(CloudIo, ThreeLinesKeepOrder) {
  const auto c = parse("cloi-pts v1 n=3\n0.5 1 2 3 0\n-1 0 0 1 1\n7 8 9 0 2\n");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].position.x, 0.5);
  EXPECT_EQ(c[1].label, ClassLabel::angle);
  EXPECT_EQ(c[2].position.z, 9.0);
  EXPECT_FALSE(c.has_predictions());
}

TEST(CloudIo, HeaderOnlyIsEmptyCloud) {
  const auto c = parse("cloi-pts v1 n=0\n");
  EXPECT_EQ(c.size(), 0u);
  EXPECT_EQ(write(c), "cloi-pts v1 n=0\n");
}

TEST(CloudIo, ErrorsNameTheLine) {
  EXPECT_EQ(error_line("cloi-pts v1 n=1\n0 0 nan 3 1\n"), 2u);
  EXPECT_EQ(error_line("cloi-pts v1 n=2\n0 0 0 3 1\n0 0 inf 3 1\n"), 3u);
  EXPECT_EQ(error_line("cloi-pts v1 n=1\n0 0 0 8 1\n"), 2u);
  EXPECT_EQ(error_line("cloi-pts v1 n=1\n0 0 0 3\n"), 2u);
  EXPECT_EQ(error_line("cloi-pts v1 n=1\n0 0 x 3 1\n"), 2u);
  EXPECT_EQ(error_line("cloi-pts v1 n=2\n0 0 0 3 1\n0 0 0 4 1\n"), 3u);
  EXPECT_EQ(error_line("cloi-pts v1 n=2\n0 0 0 3 1\n"), 2u);
  EXPECT_EQ(error_line("not-a-header\n"), 1u);
  EXPECT_EQ(error_line("cloi-pts v1 n=2\n0 0 0 3 1 -1\n0 0 0 3 1\n"), 3u);
}

TEST(CloudIo, ErrorMessageMentionsLine) {
  try {
    parse("cloi-pts v1 n=1\n0 0 nan 3 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(CloudIo, RoundTripIsBitExact) {
  for (const auto& profile : synth::benchmark_profiles()) {
    const auto scene = synth::make_benchmark_suite(profile, 3).front();
    const auto cloud = synth::generate_scene(scene.spec);
    EXPECT_EQ(parse(write(cloud)), cloud) << profile;
  }
  std::vector<PointRecord> recs{
      {{0.1, 1e-300, -3.0000000000000004}, ClassLabel::valve, 0, false, std::nullopt},
      {{5e-324, 1.7976931348623157e308, 0.3}, ClassLabel::valve, 0, false, std::nullopt}};
  const LabeledPointCloud c(recs);
  EXPECT_EQ(parse(write(c)), c);
}

TEST(CloudIo, PredictionsAddSixthColumnAndBoundarySeventh) {
  const auto c = parse("cloi-pts v1 n=2\n0 0 0 3 0\n1 0 0 3 0\n");
  const std::vector<InstanceId> pred{0, kNoise};
  const auto p = c.with_predictions(pred);
  EXPECT_EQ(write(p, {true, false}), "cloi-pts v1 n=2\n0 0 0 3 0 0\n1 0 0 3 0 -1\n");
  const std::vector<std::uint8_t> flags{1, 0};
  EXPECT_EQ(write(p.with_boundary_flags(flags), {true, true}),
            "cloi-pts v1 n=2\n0 0 0 3 0 0 1\n1 0 0 3 0 -1 0\n");
}

TEST(CloudIo, SaveAndLoadFile) {
  const auto c = parse("cloi-pts v1 n=2\n0 0 0 3 0\n1 0 0 3 0\n");
  const auto path = temp_path("save.pts");
  save_pts(c, path, false);
  EXPECT_EQ(load_pts(path), c);
  std::filesystem::remove(path);
  EXPECT_THROW(save_pts(c, "/nonexistent-dir/x.pts", false), IoError);
  EXPECT_THROW(load_pts("/nonexistent-dir/x.pts"), IoError);
}

TEST(CloudIo, AsciiPly) {
  const std::string ply =
      "ply\nformat ascii 1.0\ncomment test\nelement vertex 3\nproperty float x\n"
      "property float y\nproperty float z\nproperty uchar red\nproperty int class\n"
      "property int instance\nend_header\n0 0 0 255 3 7\n1 0 0 0 3 7\n2 0 0 0 5 1\n";
  std::istringstream in(ply);
  const auto c = read_ply_ascii(in);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[2].label, ClassLabel::ibeam);
  EXPECT_EQ(c.gt_instances(), (std::vector<InstanceId>{0, 0, 1}));

  std::istringstream missing("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n"
                             "property float y\nproperty float z\nend_header\n0 0 0\n");
  EXPECT_THROW(read_ply_ascii(missing), ParseError);
}

TEST(ClassHistogram, CountsPerClass) {
  std::vector<PointRecord> recs;
  for (int i = 0; i < 1000; ++i) {
    recs.push_back({{static_cast<double>(i), 0, 0}, ClassLabel::cylinder, i < 500 ? 0 : 1, false,
                    std::nullopt});
  }
  const auto h = class_histogram(LabeledPointCloud(recs));
  EXPECT_EQ(h[class_index(ClassLabel::cylinder)], (ClassCounts{2, 1000}));
  std::size_t total = 0;
  for (const auto& c : h) total += c.points;
  EXPECT_EQ(total, 1000u);

  const auto empty = class_histogram(LabeledPointCloud{});
  for (const auto& c : empty) EXPECT_EQ(c, (ClassCounts{0, 0}));
}

TEST(ClassHistogram, SumsMatchOnSyntheticScene) {
  const auto cloud = synth::generate_scene(synth::make_benchmark_suite("refinery-like", 1)[0].spec);
  const auto h = class_histogram(cloud);
  std::size_t points = 0, instances = 0;
  for (const auto& c : h) {
    points += c.points;
    instances += c.instances;
  }
  EXPECT_EQ(points, cloud.size());
  const auto ids = cloud.gt_instances();
  EXPECT_EQ(instances, static_cast<std::size_t>(*std::max_element(ids.begin(), ids.end()) + 1));
}
