#pragma once

#include "sttd/image.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace sttd {

/// Ground-truth target: centroid plus its a x b extent.
struct Target {
  double row = 0.0;
  double col = 0.0;
  long a = 1;
  long b = 1;
};

/// Per-frame target lists, indexed by frame.
struct TargetTruth {
  std::vector<std::vector<Target>> frames;

  [[nodiscard]] std::size_t target_count() const;
  /// Throws InvalidArgument if a centroid lies outside height x width or a box is empty.
  void validate(Eigen::Index height, Eigen::Index width) const;
};

/// Local-window geometry: an a x b target core inside an (a+2d) x (b+2d)
/// neighbourhood. Windows are clipped at the image border.
struct WindowGeometry {
  long d = 40;
  long a = 9;
  long b = 9;
};

enum class MetricStatus {
  Ok,
  DegenerateBackground,  ///< neighbourhood standard deviation is zero
  DivisionByZero,        ///< any other zero denominator
};

/// A metric value that may be a +inf sentinel. `clipped` is set when the
/// neighbourhood window was cut by the image border.
struct Measurement {
  double value = 0.0;
  MetricStatus status = MetricStatus::Ok;
  bool clipped = false;

  [[nodiscard]] bool ok() const { return status == MetricStatus::Ok; }
};

/// Statistics of the target core and the surrounding ring.
struct RegionStats {
  double target_mean = 0.0;
  double target_max = 0.0;
  double ring_mean = 0.0;
  double ring_std = 0.0;  ///< population standard deviation
  double ring_max = 0.0;
  std::size_t target_pixels = 0;
  std::size_t ring_pixels = 0;
  bool clipped = false;
};

[[nodiscard]] RegionStats region_stats(const Image& img, const Target& t, const WindowGeometry& g);

/// |mu_t - mu_b| / sigma_b
[[nodiscard]] Measurement scr(const Image& img, const Target& t, const WindowGeometry& g);
/// |mu_t - mu_b|
[[nodiscard]] Measurement con(const Image& img, const Target& t, const WindowGeometry& g);
/// P_T / P_B: target maximum over neighbourhood maximum.
[[nodiscard]] Measurement lsnr(const Image& img, const Target& t, const WindowGeometry& g);

// Gains compare the processed image against the input at the same target.
[[nodiscard]] Measurement scrg(const Image& in, const Image& out, const Target& t,
                               const WindowGeometry& g);
[[nodiscard]] Measurement lsnrg(const Image& in, const Image& out, const Target& t,
                                const WindowGeometry& g);
[[nodiscard]] Measurement bsf(const Image& in, const Image& out, const Target& t,
                              const WindowGeometry& g);
[[nodiscard]] Measurement cg(const Image& in, const Image& out, const Target& t,
                             const WindowGeometry& g);

/// How false alarms are counted in pd_fa.
enum class FaCount {
  Pixels,      ///< mask pixels of unmatched components over all image pixels
  Components,  ///< unmatched components over all image pixels
};

struct PdFa {
  double pd = 0.0;
  double fa = 0.0;
  std::size_t true_detections = 0;
  std::size_t targets = 0;
  std::size_t false_pixels = 0;
  std::size_t false_components = 0;
  std::size_t total_pixels = 0;
};

/// Which components of one frame matched which targets (-1 = unmatched).
struct FrameMatch {
  std::vector<int> component_target;
  std::vector<int> target_component;
};

/// Greedy nearest-first one-to-one matching of component centroids to
/// target centroids within `radius`. Ties resolve by component, then target index.
[[nodiscard]] FrameMatch match_components(const std::vector<Component>& comps,
                                          const std::vector<Target>& targets, double radius);

/// Probability of detection and false-alarm rate over a whole sequence.
/// With no targets at all pd is reported as 1.
[[nodiscard]] PdFa pd_fa(const std::vector<Mask>& masks, const TargetTruth& truth,
                         double match_radius, FaCount fa_count = FaCount::Pixels);

struct RocPoint {
  double threshold = 0.0;
  double fa = 0.0;
  double pd = 0.0;
};

/// Sweeps n_points thresholds i / (n_points - 1) over max-normalized target
/// images (mask = normalized > threshold). Points come back sorted by fa
/// ascending (then pd), with pd replaced by its running maximum.
[[nodiscard]] std::vector<RocPoint> roc(const std::vector<Image>& target_images,
                                        const TargetTruth& truth, int n_points,
                                        double match_radius, FaCount fa_count = FaCount::Pixels);

/// Trapezoidal area under a sorted ROC staircase on fa in [0, 1]; the last
/// pd is carried out to fa = 1.
[[nodiscard]] double roc_auc(const std::vector<RocPoint>& points);

/// One row per frame per target.
struct TargetMetrics {
  std::size_t frame = 0;
  std::size_t target = 0;
  double row = 0.0;
  double col = 0.0;
  Measurement lsnrg, bsf, scrg, cg;
};

struct MetricsReport {
  std::vector<TargetMetrics> targets;
  double average_cg = 0.0;  ///< mean per-frame CG over finite values
  PdFa detection;           ///< at the masks supplied to evaluate()
  std::vector<RocPoint> roc;
};

/// Computes every per-target gain for input/output frame pairs.
[[nodiscard]] std::vector<TargetMetrics> target_metrics(const std::vector<Image>& inputs,
                                                        const std::vector<Image>& outputs,
                                                        const TargetTruth& truth,
                                                        const WindowGeometry& g);

struct EvaluationOptions {
  WindowGeometry geometry;
  double match_radius = 4.0;
  FaCount fa_count = FaCount::Pixels;
  int roc_points = 0;  ///< 0 skips the ROC sweep
};

/// Full report: per-target gains of outputs against inputs, Pd/Fa of the
/// supplied masks, and optionally a ROC sweep over the outputs.
[[nodiscard]] MetricsReport evaluate(const std::vector<Image>& inputs,
                                     const std::vector<Image>& outputs,
                                     const std::vector<Mask>& masks, const TargetTruth& truth,
                                     const EvaluationOptions& options);

[[nodiscard]] std::string to_json(const MetricsReport& report);
/// Header: frame,target,row,col,lsnrg,bsf,scrg,cg,clipped
[[nodiscard]] std::string to_csv(const std::vector<TargetMetrics>& rows);
/// Header: threshold,fa,pd
[[nodiscard]] std::string roc_to_csv(const std::vector<RocPoint>& points);

/// Fixed six-decimal formatting used in every CSV ("inf" for +inf).
[[nodiscard]] std::string format_fixed(double v);

}  // namespace sttd
