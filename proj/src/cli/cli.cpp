#include "cloiseg/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "CLI11.hpp"
#include "cloiseg/boundary.hpp"
#include "cloiseg/cloud_io.hpp"
#include "cloiseg/evaluation.hpp"
#include "cloiseg/report.hpp"
#include "cloiseg/segmentation.hpp"
#include "cloiseg/subsample.hpp"
#include "cloiseg/sweep.hpp"
#include "cloiseg/synth.hpp"

namespace cloiseg::cli {

namespace {

constexpr const char* kThreadsEnv = "CLOI_SEG_THREADS";

// Bad parameters, detected before any file is touched.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::size_t> threads;
  bool verbose = false;
};

struct SynthArgs {
  std::string profile;
  std::string spec_path;
  std::optional<std::uint64_t> seed;
  std::size_t scene = 0;
  std::string out = "-";
  std::string manifest_path;
  std::string emit_spec_path;
  std::size_t tile_x = 1;
  std::size_t tile_y = 1;
  double tile_pitch = 10.0;
};

struct BoundaryArgs {
  std::string in, out = "-";
  double radius = 0.04;
  bool gt_instances = false;
};

struct SegmentArgs {
  std::string in, out = "-";
  double epsilon = 0.04;
  std::size_t mu = 20;
  std::optional<double> boundary_radius;
  bool with_boundary = false;
};

struct EvalArgs {
  std::string pred, gt, out = "-";
  std::vector<double> thresholds{kDefaultThresholds.begin(), kDefaultThresholds.end()};
};

struct SweepArgs {
  std::string mode;
  std::string grid;
  std::vector<std::string> inputs;
  std::vector<double> thresholds{kDefaultThresholds.begin(), kDefaultThresholds.end()};
  double threshold = 0.5;
  double epsilon = 0.04;
  std::size_t mu = 20;
  std::optional<double> boundary_radius;
  std::string out = "-";
};

struct StatsArgs {
  std::string in;
  std::optional<double> boundary_radius;
  std::string out = "-";
};

struct SubsampleArgs {
  std::string in, out = "-";
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

std::size_t resolve_cli_threads(const Common& common) {
  if (common.threads) return *common.threads;
  if (const char* env = std::getenv(kThreadsEnv); env != nullptr && *env != '\0') {
    std::size_t value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw UsageError(std::string(kThreadsEnv) + " must be a non-negative integer");
    }
    return value;
  }
  return 0;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    T v{};
    const auto* first = item.data();
    const auto* last = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (item.empty() || ec != std::errc() || ptr != last) {
      throw UsageError(std::string("bad ") + what + " value '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw UsageError(std::string(what) + " list is empty");
  return values;
}

void check_thresholds(const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw UsageError("no thresholds");
  for (double t : thresholds) {
    if (!(t > 0.0 && t <= 1.0)) throw UsageError("thresholds must be in (0, 1]");
  }
}

SegmentationParams make_params(double epsilon, std::size_t mu, std::optional<double> rb) {
  SegmentationParams p;
  p.epsilon = epsilon;
  p.mu = mu;
  p.boundary_radius = rb;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

// Writes to a file, or to `out` for "-". The text is built first so a failed
// run leaves no partial file.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string pts_text(const LabeledPointCloud& cloud, PtsColumns columns) {
  std::ostringstream ss;
  write_pts(ss, cloud, columns);
  return ss.str();
}

class Logger {
 public:
  Logger(std::ostream& err, bool verbose) : err_(err), verbose_(verbose) {}
  template <class... Args>
  void operator()(const Args&... args) const {
    if (!verbose_) return;
    ((err_ << args), ...);
    err_ << '\n';
  }

 private:
  std::ostream& err_;
  bool verbose_;
};

int run_synth(const SynthArgs& a, const Common& common, std::ostream& out, std::ostream& err) {
  const Logger log(err, common.verbose);
  if (a.profile.empty() == a.spec_path.empty()) {
    throw UsageError("synth needs exactly one of --profile or --spec");
  }
  if (!a.profile.empty()) {
    const auto& known = synth::benchmark_profiles();
    if (std::find(known.begin(), known.end(), a.profile) == known.end()) {
      throw UsageError("unknown profile '" + a.profile + "'");
    }
  }
  if (a.tile_x == 0 || a.tile_y == 0 || !(a.tile_pitch > 0.0)) {
    throw UsageError("tiling needs positive counts and pitch");
  }

  synth::SceneSpec spec;
  std::optional<synth::SceneManifest> manifest;
  if (!a.profile.empty()) {
    auto suite = synth::make_benchmark_suite(a.profile, a.seed.value_or(0));
    if (a.scene >= suite.size()) {
      throw UsageError("profile '" + a.profile + "' has " + std::to_string(suite.size()) +
                       " scenes");
    }
    spec = suite[a.scene].spec;
    manifest = suite[a.scene].manifest;
  } else {
    spec = synth::scene_from_json(read_text(a.spec_path));
    if (a.seed) spec.seed = *a.seed;
  }
  if (a.tile_x * a.tile_y > 1) spec = synth::tile_scene(spec, a.tile_x, a.tile_y, a.tile_pitch);

  const auto cloud = synth::generate_scene(spec);
  log("synth: ", cloud.size(), " points, ", spec.shapes.size(), " shapes");
  emit(a.out, out, pts_text(cloud, {}));
  if (!a.manifest_path.empty()) {
    if (!manifest) throw UsageError("--manifest needs --profile");
    emit(a.manifest_path, out, synth::manifest_to_json(*manifest));
  }
  if (!a.emit_spec_path.empty()) emit(a.emit_spec_path, out, synth::scene_to_json(spec));
  return kExitOk;
}

int run_boundary(const BoundaryArgs& a, const Common& common, std::ostream& out,
                 std::ostream& err) {
  const Logger log(err, common.verbose);
  const BoundaryParams params{a.radius};
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto threads = resolve_cli_threads(common);
  const auto cloud = load_cloud(a.in);
  const RadiusIndex index(cloud.positions());
  const auto flags = a.gt_instances ? detect_gt_instance_boundaries(cloud, index, params, threads)
                                    : detect_class_boundaries(cloud, index, params, threads);
  const auto stats = boundary_stats(flags);
  log("boundary: ", stats.boundary, " boundary, ", stats.interior, " interior");
  emit(a.out, out, pts_text(cloud.with_boundary_flags(flags), {true, true}));
  return kExitOk;
}

int run_segment(const SegmentArgs& a, const Common& common, std::ostream& out,
                std::ostream& err) {
  const Logger log(err, common.verbose);
  const auto params = make_params(a.epsilon, a.mu, a.boundary_radius);
  const auto threads = resolve_cli_threads(common);
  const auto cloud = load_cloud(a.in);
  const RadiusIndex index(cloud.positions());
  const auto trace = segment_unfiltered(cloud, index, params, threads);
  const auto labeling = apply_min_size(trace, cloud.labels(), params.mu);
  log("segment: ", labeling.instance_count(), " instances from ", cloud.size(), " points");
  auto result = cloud.with_predictions(labeling.assignment);
  if (a.with_boundary) result = result.with_boundary_flags(trace.boundary);
  emit(a.out, out, pts_text(result, {true, a.with_boundary}));
  return kExitOk;
}

int run_eval(const EvalArgs& a, const Common&, std::ostream& out, std::ostream&) {
  check_thresholds(a.thresholds);
  const auto pred_cloud = load_cloud(a.pred);
  const auto gt_cloud = load_cloud(a.gt);
  if (pred_cloud.size() != gt_cloud.size()) {
    throw std::invalid_argument("prediction and ground-truth files differ in point count");
  }
  if (!pred_cloud.has_predictions()) {
    throw std::invalid_argument("'" + a.pred + "' has no prediction column");
  }
  if (!gt_cloud.has_ground_truth() && gt_cloud.size() > 0) {
    throw std::invalid_argument("'" + a.gt + "' has no ground-truth instances");
  }
  if (pred_cloud.labels() != gt_cloud.labels()) {
    throw std::invalid_argument("class labels differ between the two files");
  }
  const auto report =
      score(predicted_labeling(pred_cloud), ground_truth_labeling(gt_cloud), a.thresholds);
  std::ostringstream ss;
  write_eval_csv(ss, report);
  emit(a.out, out, ss.str());
  return kExitOk;
}

int run_sweep(const SweepArgs& a, const Common& common, std::ostream& out, std::ostream& err) {
  const Logger log(err, common.verbose);
  const auto params = make_params(a.epsilon, a.mu, a.boundary_radius);
  check_thresholds(a.thresholds);
  check_thresholds({a.threshold});
  SweepSpec spec;
  spec.thresholds = a.thresholds;
  if (a.mode == "mu") {
    if (!a.grid.empty()) spec.mus = parse_list<std::size_t>(a.grid, "mu");
  } else if (a.mode == "epsilon" || a.mode == "radius") {
    if (!a.grid.empty()) spec.epsilons = parse_list<double>(a.grid, "epsilon");
  } else if (a.mode != "bias") {
    throw UsageError("unknown sweep mode '" + a.mode + "'");
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.mode == "bias" ? a.inputs.size() < 2 : a.inputs.size() != 1) {
    throw UsageError(a.mode == "bias" ? "bias mode needs at least two input clouds"
                                      : "sweep needs exactly one input cloud");
  }
  const auto threads = resolve_cli_threads(common);

  std::ostringstream ss;
  if (a.mode == "bias") {
    std::vector<LabeledPointCloud> clouds;
    for (const auto& path : a.inputs) clouds.push_back(load_cloud(path));
    std::vector<NamedCloud> named;
    for (std::size_t i = 0; i < clouds.size(); ++i) {
      named.push_back({std::filesystem::path(a.inputs[i]).stem().string(), &clouds[i]});
    }
    write_bias_csv(ss, facility_bias_report(named, params, a.threshold, threads));
  } else {
    const auto cloud = load_cloud(a.inputs.front());
    if (a.mode == "mu") {
      write_mu_csv(ss, sweep_mu(cloud, params, spec.mus, a.threshold, threads));
    } else if (a.mode == "epsilon") {
      write_epsilon_csv(ss, sweep_epsilon(cloud, params, spec.epsilons, spec.thresholds, threads));
    } else {
      const auto rows = sweep_radius_per_object(cloud, spec.epsilons, spec.thresholds, threads);
      write_radius_csv(ss, rows, spec.thresholds);
      const double rule_t = 0.5;
      if (std::find(spec.thresholds.begin(), spec.thresholds.end(), rule_t) !=
          spec.thresholds.end()) {
        const auto chosen = select_radius(rows, spec.thresholds, rule_t, 0.9);
        err << "selected epsilon (mRec_ins >= 0.9 at IoU 0.5): "
            << (chosen ? format_number(*chosen) : std::string("none")) << '\n';
      }
    }
  }
  log("sweep: mode ", a.mode, " done");
  emit(a.out, out, ss.str());
  return kExitOk;
}

int run_stats(const StatsArgs& a, const Common& common, std::ostream& out, std::ostream&) {
  if (a.boundary_radius) {
    try {
      BoundaryParams{*a.boundary_radius}.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const auto threads = resolve_cli_threads(common);
  const auto cloud = load_cloud(a.in);
  std::ostringstream ss;
  if (a.boundary_radius) {
    const RadiusIndex index(cloud.positions());
    const auto flags =
        detect_class_boundaries(cloud, index, BoundaryParams{*a.boundary_radius}, threads);
    const auto s = boundary_stats(flags);
    ss << "radius,boundary,interior,ratio\n"
       << format_number(*a.boundary_radius) << ',' << s.boundary << ',' << s.interior << ','
       << format_number(s.ratio) << '\n';
  } else {
    write_stats_csv(ss, class_histogram(cloud));
  }
  emit(a.out, out, ss.str());
  return kExitOk;
}

int run_subsample(const SubsampleArgs& a, const Common& common, std::ostream& out,
                  std::ostream& err) {
  const Logger log(err, common.verbose);
  if (a.count == 0) throw UsageError("--count must be at least 1");
  const auto cloud = load_cloud(a.in);
  if (a.count > cloud.size()) {
    throw std::invalid_argument("--count exceeds the " + std::to_string(cloud.size()) +
                                " points in the cloud");
  }
  const auto sampled = farthest_point_subsample(cloud, a.count, a.seed);
  log("subsample: ", cloud.size(), " -> ", sampled.size(), " points");
  emit(a.out, out, pts_text(sampled, {sampled.has_predictions(), false}));
  return kExitOk;
}

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--threads", common.threads,
                  "Worker threads (0 = all cores; default: $CLOI_SEG_THREADS, else all cores)");
  cmd->add_flag("-v,--verbose", common.verbose, "Log progress to stderr");
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Instance segmentation of class-labeled point clouds.\n"
      "All lengths are in meters (4 cm = 0.04).",
      "cloiseg"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  Common common;
  SynthArgs synth_args;
  BoundaryArgs boundary_args;
  SegmentArgs segment_args;
  EvalArgs eval_args;
  SweepArgs sweep_args;
  StatsArgs stats_args;
  SubsampleArgs subsample_args;

  auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic scene");
  synth_cmd->add_option("--profile", synth_args.profile, "Benchmark profile name")
      ->check(CLI::IsMember(synth::benchmark_profiles()));
  synth_cmd->add_option("--spec", synth_args.spec_path, "Scene description (JSON)");
  synth_cmd->add_option("--seed", synth_args.seed, "Random seed (default 0)");
  synth_cmd->add_option("--scene", synth_args.scene, "Scene index within the profile")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth_args.out, "Output CLOI-PTS path ('-' = stdout)")
      ->capture_default_str();
  synth_cmd->add_option("--manifest", synth_args.manifest_path,
                        "Write the profile's expectation manifest (JSON)");
  synth_cmd->add_option("--emit-spec", synth_args.emit_spec_path,
                        "Write the scene description (JSON)");
  synth_cmd->add_option("--tile-x", synth_args.tile_x, "Copies along x")->capture_default_str();
  synth_cmd->add_option("--tile-y", synth_args.tile_y, "Copies along y")->capture_default_str();
  synth_cmd->add_option("--tile-pitch", synth_args.tile_pitch, "Copy spacing (m)")
      ->capture_default_str();
  add_common(synth_cmd, common);

  auto* boundary_cmd =
      app.add_subcommand("boundary", "Flag class-boundary points (appends the flag column)");
  boundary_cmd->add_option("input", boundary_args.in, "Input cloud (.pts or .ply)")->required();
  boundary_cmd->add_option("output", boundary_args.out, "Output CLOI-PTS ('-' = stdout)")
      ->capture_default_str();
  boundary_cmd->add_option("-r,--radius", boundary_args.radius, "Boundary radius (m)")
      ->capture_default_str();
  boundary_cmd->add_flag("--gt-instances", boundary_args.gt_instances,
                         "Use ground-truth instance ids instead of classes");
  add_common(boundary_cmd, common);

  auto* segment_cmd = app.add_subcommand("segment", "Segment a class-labeled cloud into instances");
  segment_cmd->add_option("input", segment_args.in, "Input cloud (.pts or .ply)")->required();
  segment_cmd->add_option("output", segment_args.out, "Output CLOI-PTS ('-' = stdout)")
      ->capture_default_str();
  segment_cmd->add_option("-e,--epsilon", segment_args.epsilon, "Link radius (m)")
      ->capture_default_str();
  segment_cmd->add_option("-m,--mu", segment_args.mu, "Minimum instance size (points)")
      ->capture_default_str();
  segment_cmd->add_option("-b,--boundary-radius", segment_args.boundary_radius,
                          "Class-boundary radius (m; default = epsilon)");
  segment_cmd->add_flag("--with-boundary", segment_args.with_boundary,
                        "Also write the boundary flag column");
  add_common(segment_cmd, common);

  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against ground truth (CSV)");
  eval_cmd->add_option("pred", eval_args.pred, "Cloud with predictions")->required();
  eval_cmd->add_option("gt", eval_args.gt, "Cloud with ground truth")->required();
  eval_cmd->add_option("-t,--thresholds", eval_args.thresholds, "IoU thresholds")
      ->delimiter(',')
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_args.out, "Output CSV ('-' = stdout)")->capture_default_str();
  add_common(eval_cmd, common);

  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweeps (CSV)");
  sweep_cmd->add_option("--mode", sweep_args.mode, "mu | epsilon | radius | bias")
      ->required()
      ->check(CLI::IsMember({"mu", "epsilon", "radius", "bias"}));
  sweep_cmd->add_option("inputs", sweep_args.inputs, "Input cloud(s)")->required();
  sweep_cmd->add_option("--grid", sweep_args.grid,
                        "Comma list: mu values (mu mode) or epsilons in m "
                        "(default 10,20,50,100,150,200 / 0.01..0.07)");
  sweep_cmd->add_option("-t,--thresholds", sweep_args.thresholds,
                        "IoU thresholds (epsilon and radius modes)")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--threshold", sweep_args.threshold, "IoU threshold (mu and bias modes)")
      ->capture_default_str();
  sweep_cmd->add_option("-e,--epsilon", sweep_args.epsilon, "Link radius (m) when fixed")
      ->capture_default_str();
  sweep_cmd->add_option("-m,--mu", sweep_args.mu, "Minimum instance size when fixed")
      ->capture_default_str();
  sweep_cmd->add_option("-b,--boundary-radius", sweep_args.boundary_radius,
                        "Hold the boundary radius fixed (m; default follows epsilon)");
  sweep_cmd->add_option("--out", sweep_args.out, "Output CSV ('-' = stdout)")
      ->capture_default_str();
  add_common(sweep_cmd, common);

  auto* stats_cmd = app.add_subcommand("stats", "Per-class instance and point counts (CSV)");
  stats_cmd->add_option("input", stats_args.in, "Input cloud")->required();
  stats_cmd->add_option("-b,--boundary-radius", stats_args.boundary_radius,
                        "Report class-boundary counts at this radius (m) instead");
  stats_cmd->add_option("--out", stats_args.out, "Output CSV ('-' = stdout)")
      ->capture_default_str();
  add_common(stats_cmd, common);

  auto* subsample_cmd =
      app.add_subcommand("subsample", "Farthest-point subsampling to a fixed point count");
  subsample_cmd->add_option("input", subsample_args.in, "Input cloud")->required();
  subsample_cmd->add_option("output", subsample_args.out, "Output CLOI-PTS ('-' = stdout)")
      ->capture_default_str();
  subsample_cmd->add_option("-k,--count", subsample_args.count, "Points to keep")->required();
  subsample_cmd->add_option("--seed", subsample_args.seed, "Seed for the first point")
      ->capture_default_str();
  add_common(subsample_cmd, common);

  std::vector<std::string> argv_storage(args.begin(), args.end());
  if (argv_storage.empty()) argv_storage.emplace_back("cloiseg");
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth_args, common, out, err);
    if (boundary_cmd->parsed()) return run_boundary(boundary_args, common, out, err);
    if (segment_cmd->parsed()) return run_segment(segment_args, common, out, err);
    if (eval_cmd->parsed()) return run_eval(eval_args, common, out, err);
    if (sweep_cmd->parsed()) return run_sweep(sweep_args, common, out, err);
    if (stats_cmd->parsed()) return run_stats(stats_args, common, out, err);
    if (subsample_cmd->parsed()) return run_subsample(subsample_args, common, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace cloiseg::cli
