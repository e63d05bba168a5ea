#include "sttd/commands.hpp"

#include "sttd/error.hpp"
#include "sttd/image_io.hpp"
#include "sttd/parallel.hpp"
#include "sttd/pipeline.hpp"
#include "sttd/synth.hpp"
#include "sttd/tensor.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdio>

namespace sttd::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
}

ordered_json config_json(const RunConfig& cfg) {
  const SolverParams& p = cfg.solver;
  ordered_json j;
  j["L"] = p.L;
  j["H"] = p.H;
  j["lambda_tv"] = p.lambda_tv;
  j["lambda3"] = p.lambda3;
  j["delta"] = p.delta;
  j["eps"] = p.eps;
  j["mu0"] = p.mu0;
  j["mu_max"] = p.mu_max;
  j["rho"] = p.rho;
  j["zeta"] = p.zeta;
  j["max_iter"] = p.max_iter;
  j["svt_rule"] = to_string(p.svt_rule);
  j["surrogate"] = to_string(p.surrogate);
  j["tv_mode"] = to_string(p.tv_mode);
  j["k"] = cfg.segmentation.k;
  j["vmin"] = cfg.segmentation.vmin;
  j["d"] = cfg.geometry.d;
  j["a"] = cfg.geometry.a;
  j["b"] = cfg.geometry.b;
  j["match_radius"] = cfg.match_radius;
  j["fa_count"] = cfg.fa_count == FaCount::Pixels ? "pixels" : "components";
  j["seed"] = cfg.seed;
  return j;
}

std::vector<Image> read_frames(const fs::path& dir, const std::string& stem, std::size_t count) {
  std::vector<Image> out;
  out.reserve(count);
  for (std::size_t f = 0; f < count; ++f) out.push_back(read_image(dir / frame_file(stem, f)));
  return out;
}

std::size_t count_frames(const fs::path& dir, const std::string& stem) {
  std::size_t n = 0;
  while (fs::exists(dir / frame_file(stem, n))) ++n;
  if (n == 0) throw IoError("no " + stem + "_NNNN.pgm files in '" + dir.string() + "'");
  return n;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SequenceTooShort*>(&e) || dynamic_cast<const Infeasible*>(&e) ||
      dynamic_cast<const DimensionMismatch*>(&e)) {
    return kPrecondition;
  }
  return kIoError;
}

std::string frame_file(const std::string& stem, std::size_t frame) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%04zu.pgm", frame);
  return stem + buf;
}

void cmd_detect(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.input.empty() || cfg.output.empty()) throw InvalidArgument("detect needs an input and an output directory");
  const auto started = std::chrono::steady_clock::now();
  const FrameSequence seq = read_sequence(cfg.input);
  (void)plan_groups(seq.size(), cfg.solver.L);  // fail before creating any output
  ensure_dir(cfg.output);
  set_thread_count(resolve_thread_count(cfg.threads));

  const DetectionResult result = detect(seq, cfg.solver, cfg.segmentation);
  const fs::path out(cfg.output);

  std::string components = "frame,component,row,col,pixels,peak\n";
  for (std::size_t f = 0; f < seq.size(); ++f) {
    write_pgm(out / frame_file("target", f), quantize(result.images.target[f], 16));
    write_pgm(out / frame_file("background", f), quantize(result.images.background[f], 16));
    write_mask_pgm(out / frame_file("mask", f), result.frames[f].mask);
    const auto& comps = result.frames[f].components;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      components += std::to_string(f) + "," + std::to_string(c) + "," + format_fixed(comps[c].row) + "," +
                    format_fixed(comps[c].col) + "," + std::to_string(comps[c].pixels) + "," +
                    format_fixed(comps[c].peak) + "\n";
    }
  }
  write_text(out / "components.csv", components);

  ordered_json run;
  run["input"] = cfg.input;
  run["frames"] = seq.size();
  run["height"] = seq.rows();
  run["width"] = seq.cols();
  run["bit_depth"] = seq.bit_depth;
  run["config"] = config_json(cfg);
  ordered_json groups = ordered_json::array();
  for (const GroupDiagnostics& g : result.groups) {
    groups.push_back({{"start", g.start},
                      {"length", g.length},
                      {"iterations", g.iterations},
                      {"residual", g.residual},
                      {"converged", g.converged}});
  }
  run["groups"] = groups;
  write_text(out / "run.json", run.dump(2) + "\n");

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  ordered_json timing;
  timing["wall_seconds"] = seconds;
  timing["threads"] = thread_count();
  write_text(out / "timing.json", timing.dump(2) + "\n");
}

void cmd_synth(const fs::path& spec_file, const fs::path& output, std::optional<std::uint64_t> seed) {
  SceneSpec spec = load_scene_spec(spec_file.string());
  if (seed) spec.seed = *seed;
  const SyntheticScene scene = generate(spec);
  ensure_dir(output);
  for (std::size_t f = 0; f < scene.sequence.size(); ++f) {
    write_pgm(output / frame_file("frame", f), quantize(scene.sequence.frames[f], 16));
  }
  write_text(output / "truth.csv", truth_to_csv(scene.truth));
}

void cmd_eval(const fs::path& results, const fs::path& truth_file, const RunConfig& cfg,
              const std::optional<fs::path>& input) {
  cfg.validate();
  fs::path input_dir;
  if (input) {
    input_dir = *input;
  } else {
    const ordered_json run = ordered_json::parse(read_text(results / "run.json"), nullptr, false);
    if (run.is_discarded() || !run.contains("input") || !run["input"].is_string()) {
      throw IoError("'" + (results / "run.json").string() + "' has no input directory; pass --input");
    }
    input_dir = run["input"].get<std::string>();
  }
  const FrameSequence inputs = read_sequence(input_dir);
  const std::size_t n = count_frames(results, "target");
  if (n != inputs.size()) {
    throw IoError("results hold " + std::to_string(n) + " frames but the input has " +
                  std::to_string(inputs.size()));
  }
  const std::vector<Image> outputs = read_frames(results, "target", n);
  std::vector<Mask> masks;
  for (std::size_t f = 0; f < n; ++f) {
    const fs::path p = results / frame_file("mask", f);
    masks.push_back(fs::exists(p) ? read_mask(p) : Mask::Zero(outputs[f].rows(), outputs[f].cols()));
  }
  const TargetTruth truth = read_truth_csv(truth_file, n);
  truth.validate(inputs.rows(), inputs.cols());

  EvaluationOptions opts;
  opts.geometry = cfg.geometry;
  opts.match_radius = cfg.match_radius;
  opts.fa_count = cfg.fa_count;
  opts.roc_points = cfg.roc_points;
  const MetricsReport report = evaluate(inputs.frames, outputs, masks, truth, opts);
  write_text(results / "metrics.json", to_json(report));
  write_text(results / "metrics.csv", to_csv(report.targets));
}

void cmd_roc(const fs::path& results, const fs::path& truth_file, int n_points, const RunConfig& cfg) {
  if (n_points < 2) throw InvalidArgument("roc needs at least 2 points");
  const std::size_t n = count_frames(results, "target");
  const std::vector<Image> outputs = read_frames(results, "target", n);
  const TargetTruth truth = read_truth_csv(truth_file, n);
  truth.validate(outputs.front().rows(), outputs.front().cols());
  write_text(results / "roc.csv", roc_to_csv(roc(outputs, truth, n_points, cfg.match_radius, cfg.fa_count)));
}

void cmd_rank(const fs::path& input, const fs::path& output, int L) {
  const FrameSequence seq = read_sequence(input);
  (void)plan_groups(seq.size(), L);
  const Tensor3 t = stack_frames(seq, 0, std::size_t(L));
  ensure_dir(output);
  for (int mode = 1; mode <= 3; ++mode) {
    const Eigen::MatrixXd m = unfold(t, mode);
    const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
    std::string csv = "index,singular_value\n";
    for (Eigen::Index i = 0; i < s.size(); ++i) csv += std::to_string(i) + "," + format_fixed(s(i)) + "\n";
    write_text(output / ("rank_mode" + std::to_string(mode) + ".csv"), csv);
  }
}

}  // namespace sttd::cli
